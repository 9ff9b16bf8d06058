"""Phase polynomials over Z8 built from parity-phase gadgets.

A term ``(S, c)`` is the gadget that puts a relative phase of ``c * pi/4`` on
every basis state with odd parity over the wire set ``S``. Parity sets are
stored as integer bitmasks (bit ``i`` is wire ``i``), which keeps arbitrary
widths cheap. Global phases are dropped everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .circuit import Circuit, Gate

__all__ = [
    "ParitySet",
    "PhaseFunction",
    "PhaseGadget",
    "PhasePolynomial",
    "conjugate_cnot",
    "conjugate_x",
    "decompose_cs",
    "decompose_ccz",
    "eval_on_basis",
    "extract_polynomial",
    "fuse_insert",
    "parity_gadget",
    "resynthesize",
    "t_count",
    "walsh_coefficients",
]


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _mask(wires: Iterable[int]) -> int:
    m = 0
    for w in wires:
        if w < 0:
            raise ValueError("negative wire index")
        bit = 1 << w
        if m & bit:
            raise ValueError(f"repeated wire {w}")
        m |= bit
    return m


@dataclass(frozen=True, order=True)
class ParitySet:
    """Nonempty set of wires, held as a bitmask."""

    mask: int

    def __post_init__(self):
        if self.mask <= 0:
            raise ValueError("parity set must be nonempty")

    @classmethod
    def of(cls, *wires: int) -> "ParitySet":
        if len(wires) == 1 and not isinstance(wires[0], int):
            wires = tuple(wires[0])
        return cls(_mask(wires))

    @property
    def wires(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, wire: int) -> bool:
        return bool(self.mask >> wire & 1)

    def __iter__(self):
        return iter(self.wires)

    def incidence(self, width: int) -> np.ndarray:
        """0/1 incidence vector of length ``width``."""
        return np.array([(self.mask >> i) & 1 for i in range(width)], dtype=np.uint8)

    def __repr__(self):
        return "{" + ",".join(map(str, self.wires)) + "}"


@dataclass(frozen=True)
class PhaseGadget:
    parity: ParitySet
    coeff: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", self.coeff % 8)


def parity_gadget(wires: Iterable[int], k: int, inverse: bool = False) -> PhaseGadget | None:
    """The gadget for exp(-i pi/2^k Z_S) (or its inverse) in Z8 units.

    Returns ``None`` for k <= 0, which is a global phase.
    """
    if k > 3:
        raise ValueError("only k <= 3 fits in Z8")
    if k <= 0:
        return None
    c = 2 ** (3 - k)
    return PhaseGadget(ParitySet.of(tuple(wires)), -c if inverse else c)


class PhasePolynomial:
    """Canonical map from parity sets to nonzero Z8 coefficients.

    Treat instances as values; the operations below return new objects.
    """

    __slots__ = ("width", "_terms")

    def __init__(self, width: int, terms: Mapping | Iterable = ()):
        if width < 0:
            raise ValueError("width must be >= 0")
        self.width = width
        self._terms: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            self._add(_key_to_mask(key), c)

    # internal mutation, only used while building a fresh value
    def _add(self, mask: int, c: int) -> None:
        if mask <= 0:
            if mask == 0:
                return  # empty parity: global phase
            raise ValueError("negative mask")
        if mask >> self.width:
            raise ValueError(f"parity set {_bits(mask)} exceeds width {self.width}")
        v = (self._terms.get(mask, 0) + c) % 8
        if v:
            self._terms[mask] = v
        else:
            self._terms.pop(mask, None)

    @classmethod
    def _raw(cls, width: int, terms: dict[int, int]) -> "PhasePolynomial":
        p = cls.__new__(cls)
        p.width = width
        p._terms = terms
        return p

    @property
    def terms(self) -> dict[int, int]:
        """Mapping bitmask -> coefficient (a copy)."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def gadgets(self) -> list[PhaseGadget]:
        return [PhaseGadget(ParitySet(m), c) for m, c in sorted(self._terms.items())]

    def coeff(self, wires) -> int:
        m = wires.mask if isinstance(wires, ParitySet) else _key_to_mask(wires)
        return self._terms.get(m, 0)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, PhasePolynomial):
            return NotImplemented
        return self.width == other.width and self._terms == other._terms

    def __hash__(self):
        return hash((self.width, frozenset(self._terms.items())))

    def __repr__(self):
        body = ", ".join(f"{{{','.join(map(str, _bits(m)))}}}:{c}"
                         for m, c in sorted(self._terms.items(), key=lambda t: _bits(t[0])))
        return f"PhasePolynomial(width={self.width}, {{{body}}})"

    def t_count(self) -> int:
        return sum(c & 1 for c in self._terms.values())

    def __neg__(self) -> "PhasePolynomial":
        return PhasePolynomial._raw(self.width, {m: (-c) % 8 for m, c in self._terms.items()})

    def __add__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        """Fusion of two commuting gadget circuits."""
        if not isinstance(other, PhasePolynomial):
            return NotImplemented
        out = PhasePolynomial(max(self.width, other.width), self._terms)
        for m, c in other._terms.items():
            out._add(m, c)
        return out

    def __sub__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        return self + (-other)

    def widen(self, width: int) -> "PhasePolynomial":
        if width < self.width and any(m >> width for m in self._terms):
            raise ValueError("terms do not fit the requested width")
        return PhasePolynomial._raw(width, dict(self._terms))

    def relabel(self, mapping: Mapping[int, int] | list[int], width: int | None = None
                ) -> "PhasePolynomial":
        """Rename wires: wire ``i`` becomes ``mapping[i]``."""
        width = self.width if width is None else width
        out = PhasePolynomial(width)
        for m, c in self._terms.items():
            out._add(_mask(mapping[i] for i in _bits(m)), c)
        return out

    def support(self) -> int:
        s = 0
        for m in self._terms:
            s |= m
        return s

    # -- text form: one ``<coeff> <wire indices...>`` line per term --
    def to_text(self, header: bool = True) -> str:
        lines = [f"# width {self.width}"] if header else []
        for m, c in sorted(self._terms.items(), key=lambda t: _bits(t[0])):
            lines.append(f"{c} " + " ".join(map(str, _bits(m))))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, width: int | None = None) -> "PhasePolynomial":
        terms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if width is None and len(parts) == 2 and parts[0] == "width":
                    width = int(parts[1])
                continue
            toks = line.split()
            if len(toks) < 2:
                raise ValueError(f"line {lineno}: expected '<coeff> <wires...>'")
            terms.append((_mask(int(t) for t in toks[1:]), int(toks[0])))
        if width is None:
            width = max((m.bit_length() for m, _ in terms), default=0)
        return cls(width, terms)


def _key_to_mask(key) -> int:
    if isinstance(key, ParitySet):
        return key.mask
    if isinstance(key, (int, np.integer)):
        return int(key)
    return _mask(key)


# --- operations ---------------------------------------------------------------

def fuse_insert(p: PhasePolynomial, g: PhaseGadget) -> PhasePolynomial:
    """Fuse one gadget into ``p``: coefficients on equal parity sets add mod 8."""
    if g.parity.mask >> p.width:
        raise ValueError(f"gadget on {g.parity} does not fit width {p.width}")
    out = PhasePolynomial._raw(p.width, p.terms)
    out._add(g.parity.mask, g.coeff)
    return out


def t_count(p: PhasePolynomial) -> int:
    return p.t_count()


def conjugate_x(p: PhasePolynomial, q: int) -> PhasePolynomial:
    """X_q D X_q: every gadget containing q is inverted."""
    if not 0 <= q < p.width:
        raise ValueError("wire out of range")
    bit = 1 << q
    return PhasePolynomial._raw(
        p.width, {m: ((-c) % 8 if m & bit else c) for m, c in p.items()})


def conjugate_cnot(p: PhasePolynomial, h: int, j: int) -> PhasePolynomial:
    """CNOT_{h,j} D CNOT_{h,j}: gadgets containing the target j pick up h."""
    if h == j:
        raise ValueError("control and target must differ")
    if not (0 <= h < p.width and 0 <= j < p.width):
        raise ValueError("wire out of range")
    hb, jb = 1 << h, 1 << j
    out = PhasePolynomial(p.width)
    for m, c in p.items():
        out._add(m ^ hb if m & jb else m, c)
    return out


def decompose_cs(h: int, j: int, width: int | None = None) -> PhasePolynomial:
    if h == j:
        raise ValueError("CS needs two distinct wires")
    width = max(h, j) + 1 if width is None else width
    return PhasePolynomial(width, {(h,): 1, (j,): 1, (h, j): 7})


def decompose_ccz(g: int, h: int, j: int, width: int | None = None) -> PhasePolynomial:
    if len({g, h, j}) != 3:
        raise ValueError("CCZ needs three distinct wires")
    width = max(g, h, j) + 1 if width is None else width
    return PhasePolynomial(width, {
        (g,): 1, (h,): 1, (j,): 1,
        (g, h): 7, (g, j): 7, (h, j): 7,
        (g, h, j): 1,
    })


def eval_on_basis(p: PhasePolynomial, z) -> int:
    """Relative phase exponent (units of pi/4) picked up by basis state ``z``.

    ``z`` is a 0/1 sequence indexed by wire, or an int bitmask.
    """
    if isinstance(z, (int, np.integer)):
        zm = int(z)
    else:
        if len(z) != p.width:
            raise ValueError(f"basis state has {len(z)} bits, expected {p.width}")
        zm = _mask(i for i, b in enumerate(z) if int(b))
    total = 0
    for m, c in p.items():
        if bin(m & zm).count("1") & 1:
            total += c
    return total % 8


def _all_parities(width: int, masks: Iterable[int]) -> np.ndarray:
    """Parity of each mask against every basis index (index bit i = wire i)."""
    idx = np.arange(1 << width, dtype=np.int64)
    rows = []
    for m in masks:
        par = np.zeros_like(idx)
        while m:
            low = m & -m
            par ^= (idx & low) != 0
            m ^= low
        rows.append(par)
    return np.array(rows, dtype=np.int64).reshape(-1, 1 << width)


class PhaseFunction:
    """Integer phase exponents (units of pi/4) for each basis state of ``width`` wires.

    Entry ``values[z]`` belongs to the basis state whose bit ``i`` is wire ``i``.
    """

    def __init__(self, width: int, values):
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (1 << width,):
            raise ValueError(f"expected {1 << width} values, got {values.shape}")
        self.width = width
        self.values = values

    @classmethod
    def of_polynomial(cls, p: PhasePolynomial, reduce: bool = True) -> "PhaseFunction":
        """Evaluate ``p`` on all basis states.

        With ``reduce=False`` the integer sum is kept unreduced, which is the exact
        lift the Walsh transform inverts term by term.
        """
        masks = list(p.terms)
        coeffs = np.array([p.terms[m] for m in masks], dtype=np.int64)
        vals = coeffs @ _all_parities(p.width, masks) if masks else np.zeros(1 << p.width, np.int64)
        return cls(p.width, vals % 8 if reduce else vals)

    @classmethod
    def from_callable(cls, width: int, f) -> "PhaseFunction":
        vals = [f(tuple((z >> i) & 1 for i in range(width))) for z in range(1 << width)]
        return cls(width, vals)

    def reduced(self) -> np.ndarray:
        return self.values % 8

    def is_constant(self) -> bool:
        r = self.reduced()
        return bool(np.all(r == r[0]))


def _fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform over exact integers."""
    v = v.copy()
    h = 1
    n = len(v)
    while h < n:
        v = v.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        b = v[:, 1, :]
        v = np.stack([a + b, a - b], axis=1).reshape(n)
        h *= 2
    return v


def _moebius_mod8(v: np.ndarray) -> np.ndarray:
    """Monomial (AND-basis) coefficients of a Z8-valued function."""
    v = v.copy() % 8
    n = len(v)
    h = 1
    while h < n:
        v = v.reshape(-1, 2, h)
        v[:, 1, :] = (v[:, 1, :] - v[:, 0, :]) % 8
        v = v.reshape(n)
        h *= 2
    return v


def walsh_coefficients(f: PhaseFunction) -> tuple[PhasePolynomial, int]:
    """Expand a phase function into parity gadgets.

    Uses the Walsh sum ``c_S = -sum_z (-1)^{z.S} theta_z / 2^(m-1)``. When the
    stored values are not already a lift on which that division is exact (e.g.
    they were reduced mod 8), the canonical lift is taken from the monomial
    expansion, whose degree-d coefficients must be multiples of 2^(d-1) for the
    function to come from a Z8 phase polynomial.

    Returns:
        (polynomial, constant) where ``constant`` is the global phase exponent.

    Raises:
        ValueError: if the function is not generated by pi/4 parity gadgets.
    """
    m = f.width
    vals = f.values.astype(np.int64)
    if m == 0:
        return PhasePolynomial(0), int(vals[0] % 8)
    w = _fwht(vals)
    div = 1 << (m - 1)
    if not np.all(w[1:] % div == 0):
        vals = _canonical_lift(f)
        w = _fwht(vals)
    coeffs = (-(w // div)) % 8
    poly = PhasePolynomial._raw(m, {int(s): int(c) for s, c in enumerate(coeffs) if s and c})
    # constant: theta(0) minus the polynomial's value at z = 0, which is 0
    return poly, int(vals[0] % 8)


def _canonical_lift(f: PhaseFunction) -> np.ndarray:
    m = f.width
    b = _moebius_mod8(f.values)
    idx = np.arange(1 << m)
    deg = np.array([bin(i).count("1") for i in idx])
    lifted = np.zeros_like(b)
    for d in range(m + 1):
        sel = deg == d
        if d == 0:
            lifted[sel] = b[sel]
            continue
        step = 1 << (d - 1)
        if d >= 4:
            step = 8
        if np.any(b[sel] % step):
            raise ValueError("phase function is not a Z8 phase polynomial")
        # symmetric representative keeps small polynomials small
        r = b[sel] % 8
        lifted[sel] = np.where(r > 4, r - 8, r)
    # evaluate the integer monomial expansion: F(z) = sum_{T subset z} b_T
    out = lifted.copy()
    h = 1
    n = 1 << m
    while h < n:
        out = out.reshape(-1, 2, h)
        out[:, 1, :] = out[:, 1, :] + out[:, 0, :]
        out = out.reshape(n)
        h *= 2
    return out


# --- CNOT + phase circuits ------------------------------------------------------

_PHASE_GATES = {"T": 1, "S": 2, "Z": 4, "Sdg": 6, "Tdg": 7}
_COEFF_GATES = {1: ["T"], 2: ["S"], 3: ["S", "T"], 4: ["Z"], 5: ["Z", "T"], 6: ["Sdg"], 7: ["Tdg"]}


def resynthesize(p: PhasePolynomial, names: list[str] | None = None) -> Circuit:
    """CNOT + phase circuit whose phase polynomial is ``p``.

    Each term gets a CNOT ladder onto its highest wire, the phase gates for its
    coefficient there, and the mirrored ladder.
    """
    names = names or [f"q{i}" for i in range(p.width)]
    c = Circuit(names)
    for m, coeff in sorted(p.items(), key=lambda t: _bits(t[0])):
        ws = _bits(m)
        top = ws[-1]
        ladder = [Gate("CNOT", (w, top)) for w in ws[:-1]]
        c.gates.extend(ladder)
        c.gates.extend(Gate(k, (top,)) for k in _COEFF_GATES[coeff])
        c.gates.extend(reversed(ladder))
    return c


def extract_polynomial(c: Circuit) -> tuple[PhasePolynomial, list[int], list[int]]:
    """Phase polynomial of a circuit over {X, CNOT, SWAP, Z, S, T, CZ, CCZ} (+ daggers).

    Returns:
        (poly, rows, consts): the circuit maps |z> to
        exp(i pi/4 poly(z)) |A z + b>, where wire ``w`` ends holding the parity
        ``rows[w]`` (bitmask over inputs) xor ``consts[w]``.
    """
    rows = [1 << i for i in range(c.width)]
    consts = [0] * c.width
    poly = PhasePolynomial(c.width)
    for g in c.gates:
        k, ws = g.kind, g.wires
        if k == "X":
            consts[ws[0]] ^= 1
        elif k == "CNOT":
            rows[ws[1]] ^= rows[ws[0]]
            consts[ws[1]] ^= consts[ws[0]]
        elif k == "SWAP":
            a, b = ws
            rows[a], rows[b] = rows[b], rows[a]
            consts[a], consts[b] = consts[b], consts[a]
        elif k in _PHASE_GATES or k in ("CZ", "CCZ"):
            add_diagonal(poly, k, [(rows[w], consts[w]) for w in ws])
        else:
            raise ValueError(f"gate {g} is not CNOT/X/phase")
    return poly, rows, consts


def add_diagonal(poly: PhasePolynomial, kind: str, affine: list[tuple[int, int]]) -> None:
    """Fuse a diagonal gate acting on affine parities ``(row, const)`` into ``poly`` in place."""
    if kind in _PHASE_GATES:
        terms = [((0,), _PHASE_GATES[kind])]
    elif kind == "CZ":
        # pi*x*y = pi/4 (2x + 2y - 2(x^y))
        terms = [((0,), 2), ((1,), 2), ((0, 1), 6)]
    elif kind == "CCZ":
        terms = [((0,), 1), ((1,), 1), ((2,), 1), ((0, 1), 7), ((0, 2), 7), ((1, 2), 7),
                 ((0, 1, 2), 1)]
    else:
        raise ValueError(f"{kind} is not diagonal")
    for picks, c in terms:
        row = const = 0
        for i in picks:
            row ^= affine[i][0]
            const ^= affine[i][1]
        # c * (l xor 1) = c - c*l
        poly._add(row, -c if const else c)


def subsets(wires, sizes) -> Iterable[tuple[int, ...]]:
    for k in sizes:
        yield from combinations(wires, k)
