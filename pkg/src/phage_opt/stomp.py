"""Greedy phase-gadget elimination with spider-nest identity families.

A tactic family is a list of identities on the local wires ``0..k-1`` of a
k-subset. Fusing an identity J (or its inverse) into a polynomial p changes
the T-count by ``|J_odd| - 2 |J_odd & p_odd|``: only the parity of each
coefficient matters. Every candidate in a family is scored at once with numpy
over the 2^k local parity sets, and only the winner is actually fused.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Callable, Sequence

import numpy as np

from .phasepoly import ParitySet, PhasePolynomial, _mask
from .spidernest import SpiderNestIdentity, gen_nest

__all__ = [
    "STOMP4",
    "STOMP5",
    "STOMP5_58",
    "StrategyStats",
    "TacticFamily",
    "TacticOutcome",
    "density",
    "density3",
    "phage_apply",
    "run_strategy",
    "stomp4",
    "stomp5",
    "stomp5_family",
]


@dataclass
class TacticFamily:
    """Identities generated on a k-subset.

    ``generator`` maps a tuple of k wires to identities supported on them. It
    must commute with relabeling wires, because it is evaluated once on
    ``(0, .., k-1)`` and the result is reused for every subset.
    """

    name: str
    size: int
    generator: Callable[[tuple[int, ...]], list[SpiderNestIdentity]]

    @cached_property
    def members(self) -> list[SpiderNestIdentity]:
        return list(self.generator(tuple(range(self.size))))

    @cached_property
    def patterns(self) -> np.ndarray:
        """(members, 2^k) integer coefficient table indexed by local parity mask."""
        table = np.zeros((len(self.members), 1 << self.size), dtype=np.int64)
        for i, ident in enumerate(self.members):
            for m, c in ident.poly.items():
                table[i, m] = c
        return table

    @cached_property
    def _odd(self) -> np.ndarray:
        return (self.patterns & 1).astype(np.int64)

    def __len__(self):
        return len(self.members)

    def generate(self, S: Sequence[int]) -> list[SpiderNestIdentity]:
        return list(self.generator(tuple(S)))


@dataclass
class TacticOutcome:
    applied: bool
    t_before: int
    t_after: int
    subset: tuple[int, ...] = ()
    identity: tuple | None = None
    inverse: bool = False


def _local_masks(S: Sequence[int]) -> list[int]:
    """Global parity mask for every local mask over the ordered subset S."""
    k = len(S)
    out = [0] * (1 << k)
    for local in range(1, 1 << k):
        low = local & -local
        out[local] = out[local ^ low] | (1 << S[low.bit_length() - 1])
    return out


def phage_apply(p: PhasePolynomial, family: TacticFamily, S: Sequence[int]
                ) -> tuple[PhasePolynomial, TacticOutcome]:
    """One greedy PHAGE step on subset ``S``.

    Candidates are J^-1 then J for each member in order. Identities need
    more than half of their odd terms matched in ``p`` to lower the T-count,
    so anything below half is never a candidate. The best strict improvement
    wins; ties keep the first candidate.
    """
    S = tuple(S)
    if len(S) != family.size:
        raise ValueError(f"family {family.name} acts on {family.size} wires, got {len(S)}")
    if max(S) >= p.width:
        raise ValueError("subset outside the polynomial's width")
    t0 = p.t_count()
    masks = _local_masks(S)
    raw = p._terms
    local = np.fromiter((raw.get(m, 0) for m in masks), dtype=np.int64, count=len(masks))
    p_odd = local & 1
    odd = family._odd
    size = odd.sum(axis=1)
    hits = odd @ p_odd
    delta = size - 2 * hits
    best = int(np.argmin(delta)) if len(delta) else -1
    if best < 0 or delta[best] >= 0:
        return p, TacticOutcome(False, t0, t0, S)
    # the inverse cancels matched coefficients outright, so it is preferred on ties
    ident = family.members[best]
    terms = dict(raw)
    for m, c in ident.poly.items():
        g = masks[m]
        v = (terms.get(g, 0) - c) % 8
        if v:
            terms[g] = v
        else:
            terms.pop(g, None)
    out = PhasePolynomial._raw(p.width, terms)
    t1 = out.t_count()
    assert t1 == t0 + int(delta[best])
    return out, TacticOutcome(True, t0, t1, S, ident.descriptor, True)


def _nest_family(S: tuple[int, ...]) -> list[SpiderNestIdentity]:
    return [gen_nest(S)]


def stomp5_family(S: tuple[int, ...], variant: str = "63") -> list[SpiderNestIdentity]:
    """Products N_S^p0 N_{S_1}^p1 .. N_{S_5}^p5 over nonzero exponent vectors.

    ``variant="58"`` drops the five single N_{S_j} factors, which STOMP 4
    already covers.
    """
    S = tuple(S)
    if len(S) != 5:
        raise ValueError("STOMP 5 acts on 5-subsets")
    width = max(S) + 1
    full = gen_nest(S, width).poly
    subs = [gen_nest([w for w in S if w != S[j]], width).poly for j in range(5)]
    out = []
    for ps in product((0, 1), repeat=6):
        if not any(ps):
            continue
        if variant == "58" and ps[0] == 0 and sum(ps) == 1:
            continue
        poly = PhasePolynomial(width)
        if ps[0]:
            poly = poly + full
        for j in range(5):
            if ps[j + 1]:
                poly = poly + subs[j]
        out.append(SpiderNestIdentity(poly, ParitySet(_mask(S)), ("stomp5", ps)))
    return out


STOMP4 = TacticFamily("stomp4", 4, _nest_family)
STOMP5 = TacticFamily("stomp5", 5, stomp5_family)
STOMP5_58 = TacticFamily("stomp5-58", 5, lambda S: stomp5_family(S, "58"))


def stomp4(p: PhasePolynomial, S: Sequence[int]) -> tuple[PhasePolynomial, TacticOutcome]:
    return phage_apply(p, STOMP4, S)


def stomp5(p: PhasePolynomial, S: Sequence[int], family: str = "63"
           ) -> tuple[PhasePolynomial, TacticOutcome]:
    return phage_apply(p, STOMP5_58 if family == "58" else STOMP5, S)


@dataclass
class StrategyStats:
    """Per-pass bookkeeping of :func:`run_strategy`."""

    passes: list[dict] = field(default_factory=list)
    trajectory: list[int] = field(default_factory=list)
    accepted: list[TacticOutcome] = field(default_factory=list)
    order_trial: int = 0

    def to_dict(self) -> dict:
        return {"passes": self.passes, "t_count_trajectory": self.trajectory,
                "order_trial": self.order_trial}


def _sweep(p, family, k, stats, record):
    examined = accepted = 0
    for S in combinations(range(p.width), k):
        examined += 1
        p, out = phage_apply(p, family, S)
        if out.applied:
            accepted += 1
            stats.trajectory.append(out.t_after)
            if record:
                stats.accepted.append(out)
    return p, examined, accepted


def _wire_order(width: int, trial: int) -> list[int]:
    if trial == 0:
        return list(range(width))
    if trial == 1:
        return list(reversed(range(width)))
    order = list(range(width))
    random.Random(trial).shuffle(order)
    return order


def _run_once(p, passes, fam5, skip_stomp5, until_fixpoint, record):
    stats = StrategyStats(trajectory=[p.t_count()])
    for i in range(passes):
        start = p.t_count()
        row = {"pass": i + 1, "t_before": start}
        t = time.perf_counter()
        p, ex4, ac4 = _sweep(p, STOMP4, 4, stats, record)
        row.update(stomp4_subsets=ex4, stomp4_accepted=ac4, t_after_stomp4=p.t_count())
        if not skip_stomp5:
            p, ex5, ac5 = _sweep(p, fam5, 5, stats, record)
            row.update(stomp5_subsets=ex5, stomp5_accepted=ac5)
        row.update(t_after=p.t_count(), seconds=round(time.perf_counter() - t, 3))
        stats.passes.append(row)
        if until_fixpoint and p.t_count() == start:
            break
    return p, stats


def run_strategy(p: PhasePolynomial, passes: int = 1, family: str = "63",
                 skip_stomp5: bool = False, until_fixpoint: bool = False,
                 record: bool = False, order_trials: int = 1
                 ) -> tuple[PhasePolynomial, StrategyStats]:
    """STOMP 4 over every 4-subset, then STOMP 5 over every 5-subset, per pass.

    Subsets are visited in lexicographic order of wire indices. With
    ``until_fixpoint`` passes repeat (up to ``passes``) only while a pass still
    improves the T-count; otherwise exactly ``passes`` passes run.

    ``order_trials > 1`` reruns the whole strategy under other wire orders
    (reversed, then seeded shuffles) and keeps the lowest T-count, earliest
    trial on ties. Recorded subsets are always in the caller's labels.
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    if order_trials < 1:
        raise ValueError("order_trials must be >= 1")
    fam5 = STOMP5_58 if family == "58" else STOMP5
    best = None
    for trial in range(order_trials):
        order = _wire_order(p.width, trial)
        inv = [0] * p.width
        for new, old in enumerate(order):
            inv[old] = new
        q, stats = _run_once(p.relabel(inv, p.width), passes, fam5, skip_stomp5,
                             until_fixpoint, record)
        q = q.relabel(order, p.width)
        for out in stats.accepted:
            out.subset = tuple(sorted(order[w] for w in out.subset))
        stats.order_trial = trial
        if best is None or q.t_count() < best[0].t_count():
            best = (q, stats)
    return best


def _density(p: PhasePolynomial, q: int, kmax: int | None) -> Fraction:
    if not 0 <= q < p.width:
        raise ValueError(f"wire {q} outside width {p.width}")
    d = Fraction(0)
    for m, c in p.items():
        if c % 2 and m >> q & 1:
            k = bin(m).count("1")
            if kmax is None or k <= kmax:
                d += Fraction(1, k)
    return d


def density(p: PhasePolynomial, q: int) -> Fraction:
    """Sum over odd-coefficient gadgets through wire q of 1/(gadget size)."""
    return _density(p, q, None)


def density3(p: PhasePolynomial, q: int) -> Fraction:
    """:func:`density` restricted to gadgets on at most 3 wires."""
    return _density(p, q, 3)
