"""Spider-nest identities: phase-gadget products proportional to the identity.

All coefficients come from closed forms; :func:`verify_identity` is the exact
brute-force check that each generated polynomial really is constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .phasepoly import ParitySet, PhasePolynomial, _bits, _fwht, _mask

__all__ = [
    "MAX_VERIFY_SUPPORT",
    "SpiderNestIdentity",
    "composite_t_count_formula",
    "gen_composite",
    "gen_nest",
    "gen_subset_parity_identity",
    "nest_coefficients",
    "t_count_formula",
    "verify_identity",
]

MAX_VERIFY_SUPPORT = 20


@dataclass(frozen=True)
class SpiderNestIdentity:
    """A polynomial that denotes the identity up to global phase.

    ``descriptor`` records how it was built, e.g. ``("nest", (0, 1, 2, 3))`` or
    ``("stomp5", (1, 0, 1, 0, 0, 0))``.
    """

    poly: PhasePolynomial
    support: ParitySet
    descriptor: tuple = field(default=())

    def inverse(self) -> "SpiderNestIdentity":
        return SpiderNestIdentity(-self.poly, self.support, ("inverse", self.descriptor))

    def t_count(self) -> int:
        return self.poly.t_count()


def _as_mask(s) -> int:
    if isinstance(s, ParitySet):
        return s.mask
    if isinstance(s, int):
        return s
    return _mask(s)


def nest_coefficients(n: int) -> dict[int, int]:
    """Gadget size -> coefficient of N_S for |S| = n (sizes 1, 2, 3 and n)."""
    if n < 4:
        raise ValueError("spider nests need at least 4 wires")
    return {1: ((n - 2) * (n - 3) // 2) % 8, 2: (-(n - 3)) % 8, 3: 1, n: 7}


def _identity(terms: dict[int, int], width: int | None, descriptor) -> SpiderNestIdentity:
    support = 0
    for m in terms:
        support |= m
    width = support.bit_length() if width is None else width
    poly = PhasePolynomial(width, terms)
    return SpiderNestIdentity(poly, ParitySet(poly.support() or support), descriptor)


def gen_nest(S, width: int | None = None) -> SpiderNestIdentity:
    """The spider nest N_S on the wires of ``S`` (|S| >= 4)."""
    wires = _bits(_as_mask(S))
    n = len(wires)
    coeff = nest_coefficients(n)
    terms: dict[int, int] = {}
    for k in (1, 2, 3):
        if coeff[k]:
            for sub in combinations(wires, k):
                terms[_mask(sub)] = coeff[k]
    terms[_mask(wires)] = coeff[n]
    return _identity(terms, width, ("nest", tuple(wires)))


def gen_subset_parity_identity(V, k: int = 3, width: int | None = None) -> SpiderNestIdentity:
    """Product over all nonempty S in V of D_{S,k}^{(-1)^|S|}; trivial once |V| > k.

    In Z8 the factor D_{S,k} has coefficient 2^(3-k), so even subsets carry
    +2^(3-k) and odd subsets its negation.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    wires = _bits(_as_mask(V))
    if len(wires) <= k:
        raise ValueError(f"need |V| > k, got |V|={len(wires)}, k={k}")
    unit = 1 << (3 - k)
    terms = {}
    for r in range(1, len(wires) + 1):
        c = unit if r % 2 == 0 else -unit % 8
        for sub in combinations(wires, r):
            terms[_mask(sub)] = c
    return _identity(terms, width, ("subset", tuple(wires), k))


def gen_composite(S, r: int, width: int | None = None) -> SpiderNestIdentity:
    """N_S fused with the inverse of N_{S minus r}; most 3-gadgets cancel."""
    mask = _as_mask(S)
    if not mask >> r & 1:
        raise ValueError(f"wire {r} not in S")
    if bin(mask).count("1") < 5:
        raise ValueError("composite identities need |S| >= 5")
    big = gen_nest(mask, width)
    small = gen_nest(mask & ~(1 << r), big.poly.width)
    poly = big.poly - small.poly
    return SpiderNestIdentity(poly, ParitySet(mask), ("composite", tuple(_bits(mask)), r))


def t_count_formula(n: int) -> int:
    """Odd coefficients of N_S among its 1-, 2- and 3-gadgets (the n-gadget is not counted)."""
    if n < 4:
        raise ValueError("defined for n >= 4")
    r = n % 4
    if r == 0:
        return n * (n * n + 5) // 6
    if r == 1:
        return n * (n * n - 3 * n + 8) // 6
    if r == 2:
        return n * (n * n - 1) // 6
    return n * (n * n - 3 * n + 2) // 6


def composite_t_count_formula(n: int) -> int:
    """T-count of N_S * N_{S-r}^{-1} for |S| = n."""
    if n < 5:
        raise ValueError("defined for n >= 5")
    delta = 1 if n % 4 in (0, 1) else 0
    if n % 2 == 0:
        return n * n - n + 2 + delta
    return n * n - 3 * n + 4 + delta


def verify_identity(ident: SpiderNestIdentity | PhasePolynomial) -> bool:
    """Exact check that the polynomial's phase is the same for every basis state.

    Only wires in the support matter, so the check runs over 2^|support| states
    using an integer Walsh transform: value(z) = (sum_S c_S - W(z)) / 2.

    Raises:
        ValueError: if the support exceeds MAX_VERIFY_SUPPORT wires.
    """
    poly = ident.poly if isinstance(ident, SpiderNestIdentity) else ident
    wires = _bits(poly.support())
    m = len(wires)
    if m > MAX_VERIFY_SUPPORT:
        raise ValueError(f"support of {m} wires exceeds {MAX_VERIFY_SUPPORT}")
    if m == 0:
        return True
    local = {w: i for i, w in enumerate(wires)}
    table = np.zeros(1 << m, dtype=np.int64)
    for mask, c in poly.items():
        table[sum(1 << local[w] for w in _bits(mask))] = c
    w = _fwht(table)
    values = ((int(table.sum()) - w) // 2) % 8
    return bool(np.all(values == values[0]))
