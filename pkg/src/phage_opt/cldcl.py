"""Reduction of a Clifford+T circuit to Cl-D-Cl form.

The form is: Hadamards on the original wires, |+> ancilla preparations, one
commuting body of parity-phase gadgets, a Clifford exit layer, and X-basis
measurements post-selected on |+>. Every Hadamard that cannot be hoisted to
either end is replaced by a gadget (fresh |+> ancilla, CZ, X measurement)
so the body becomes diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .circuit import Circuit, Gate, expand_multi_controls
from .phasepoly import PhasePolynomial, add_diagonal

__all__ = [
    "BodyState",
    "ClDClForm",
    "MeasurementEvent",
    "canonicalize",
    "diagonalize",
    "gadgetize_hadamard",
    "normalize_gates",
    "split_stages",
    "synthesize_affine",
    "to_cldcl",
]

_SELF_INVERSE = {"H", "X", "Z", "CZ", "SWAP", "CNOT"}
_SYMMETRIC = {"CZ", "SWAP"}
_VIA_H = {"X": "Z", "CNOT": "CZ", "CCNOT": "CCZ"}


@dataclass
class MeasurementEvent:
    """X-basis measurement of ``wire``; ``corrections`` apply on outcome |->."""

    wire: int
    label: str
    corrections: list[Gate] = field(default_factory=list)
    basis: str = "X"


@dataclass
class ClDClForm:
    wire_names: list[str]
    n_original: int
    initial: list[Gate]
    preps: list[int]
    body: PhasePolynomial
    final: list[Gate]
    measurements: list[MeasurementEvent]
    wire_map: list[int]

    @property
    def width(self) -> int:
        return len(self.wire_names)

    @property
    def extra_qubits(self) -> int:
        return len(self.preps)

    def t_count(self) -> int:
        return self.body.t_count()

    def with_body(self, body: PhasePolynomial) -> "ClDClForm":
        return ClDClForm(list(self.wire_names), self.n_original, list(self.initial),
                         list(self.preps), body.widen(self.width), list(self.final),
                         list(self.measurements), list(self.wire_map))

    def to_json(self) -> str:
        def gates(gs):
            return [[g.kind, list(g.wires)] for g in gs]
        doc = {
            "width": self.width,
            "wires": self.wire_names,
            "n_original": self.n_original,
            "initial": gates(self.initial),
            "preps": self.preps,
            "body": [[c, list(_wires(m))] for m, c in
                     sorted(self.body.items(), key=lambda t: _wires(t[0]))],
            "measurements": [{"wire": m.wire, "label": m.label, "basis": m.basis,
                              "corrections": gates(m.corrections)} for m in self.measurements],
            "final": gates(self.final),
            "wire_map": self.wire_map,
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ClDClForm":
        doc = json.loads(text)

        def gates(gs):
            return [Gate(k, tuple(w)) for k, w in gs]
        body = PhasePolynomial(doc["width"], [(tuple(ws), c) for c, ws in doc["body"]])
        meas = [MeasurementEvent(m["wire"], m["label"], gates(m["corrections"]), m["basis"])
                for m in doc["measurements"]]
        return cls(doc["wires"], doc["n_original"], gates(doc["initial"]), doc["preps"], body,
                   gates(doc["final"]), meas, doc["wire_map"])


def _wires(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


# --- steps 1-4: gate normalisation ---------------------------------------------

def _expand_reversible(gates: list[Gate]) -> list[Gate]:
    """X -> H Z H, CNOT -> H CZ H, CCNOT -> H CCZ H (H on the target)."""
    out = []
    for g in gates:
        if g.kind in _VIA_H:
            t = g.wires[-1]
            out += [Gate("H", (t,)), Gate(_VIA_H[g.kind], g.wires), Gate("H", (t,))]
        elif g.kind == "MCNOT":
            raise ValueError("expand multiply-controlled NOTs before normalising")
        else:
            out.append(g)
    return out


def _same(g: Gate, h: Gate) -> bool:
    if g.kind != h.kind:
        return False
    if g.kind in _SYMMETRIC:
        return set(g.wires) == set(h.wires)
    return g.wires == h.wires


def _cancel_pairs(gates: list[Gate]) -> tuple[list[Gate], bool]:
    """Remove adjacent equal self-inverse gates (nothing between them on their wires)."""
    gates = list(gates)
    changed = False
    i = 0
    while i < len(gates):
        g = gates[i]
        if g.kind in _SELF_INVERSE:
            ws = set(g.wires)
            j = next((j for j in range(i + 1, len(gates)) if not ws.isdisjoint(gates[j].wires)),
                     None)
            if j is not None and _same(g, gates[j]):
                del gates[j], gates[i]
                changed = True
                i = 0
                continue
        i += 1
    return gates, changed


def _conjugate_by_h(g: Gate, w: int) -> tuple[Gate | None, int] | None:
    """H_w g H_w as a gate from our set, plus the wire H continues on.

    Returns None when H cannot pass ``g``.
    """
    k = g.kind
    if k == "X":
        return Gate("Z", g.wires), w
    if k == "Z":
        return Gate("X", g.wires), w
    if k == "CZ":
        other = g.wires[0] if g.wires[1] == w else g.wires[1]
        return Gate("CNOT", (other, w)), w
    if k == "CNOT" and g.wires[1] == w:
        return Gate("CZ", g.wires), w
    if k == "SWAP":
        other = g.wires[0] if g.wires[1] == w else g.wires[1]
        return g, other
    return None


def _try_move(gates: list[Gate], i: int, direction: int) -> list[Gate] | None:
    """Move the H at ``gates[i]`` to the circuit end or onto a partner H.

    Gates it passes are rewritten. Returns the new list, or None if blocked.
    """
    w = gates[i].wires[0]
    rewritten: dict[int, Gate] = {}
    j = i + direction
    while 0 <= j < len(gates):
        g = gates[j]
        if w in g.wires:
            if g.kind == "H":
                out = [rewritten.get(k, x) for k, x in enumerate(gates) if k not in (i, j)]
                return out
            res = _conjugate_by_h(g, w)
            if res is None:
                return None
            rewritten[j], w = res
        j += direction
    out = [rewritten.get(k, x) for k, x in enumerate(gates) if k != i]
    h = Gate("H", (w,))
    return [h] + out if direction < 0 else out + [h]


def _first_on_wire(gates: list[Gate], i: int, direction: int) -> bool:
    w = gates[i].wires[0]
    j = i + direction
    while 0 <= j < len(gates):
        if w in gates[j].wires:
            return False
        j += direction
    return True


def normalize_gates(c: Circuit) -> Circuit:
    """Expand X/CNOT/CCNOT through H, cancel pairs and commute Hadamards outward to a fixpoint.

    Each Hadamard not already at an end of its wire is moved in one piece,
    trying the nearer circuit end first, past X, Z, CZ, CNOT targets and SWAPs.
    A move succeeds only if it reaches the end of the circuit or a partner H.
    """
    gates = _expand_reversible(c.gates)
    gates, _ = _cancel_pairs(gates)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(gates):
            g = gates[i]
            if g.kind != "H" or _first_on_wire(gates, i, -1) or _first_on_wire(gates, i, +1):
                i += 1
                continue
            order = (-1, 1) if i <= len(gates) - 1 - i else (1, -1)
            for d in order:
                moved = _try_move(gates, i, d)
                if moved is not None:
                    gates = moved
                    changed = True
                    break
            else:
                i += 1
        gates, cancelled = _cancel_pairs(gates)
        changed = changed or cancelled
    return Circuit(list(c.wires), gates, list(c.inputs), list(c.outputs))


def split_stages(c: Circuit) -> tuple[list[Gate], list[Gate], list[Gate]]:
    """(initial Hadamards, main body, final Hadamards) of a normalised circuit."""
    initial, body, final = [], [], []
    for i, g in enumerate(c.gates):
        if g.kind == "H" and _first_on_wire(c.gates, i, -1):
            initial.append(g)
        elif g.kind == "H" and _first_on_wire(c.gates, i, +1):
            final.append(g)
        else:
            body.append(g)
    return initial, body, final


# --- steps 5-7: gadgetisation and diagonalisation ------------------------------

class BodyState:
    """Phase polynomial plus the affine frame of every physical wire.

    Physical wire ``w`` currently holds the parity ``rows[w]`` (bitmask over the
    body's input variables) xor ``consts[w]``. Logical wire ``q`` lives on
    physical wire ``phys[q]``.
    """

    def __init__(self, names: list[str]):
        n = len(names)
        self.names = list(names)
        self.n_original = n
        self.rows = [1 << i for i in range(n)]
        self.consts = [0] * n
        self.phys = list(range(n))
        self.poly = PhasePolynomial(n)
        self.preps: list[int] = []
        self.measurements: list[MeasurementEvent] = []

    def _affine(self, q: int) -> tuple[int, int]:
        p = self.phys[q]
        return self.rows[p], self.consts[p]

    def _term(self, row: int, const: int, c: int) -> None:
        self.poly._add(row, -c if const else c)

    def apply(self, g: Gate) -> None:
        k, ws = g.kind, g.wires
        if k == "X":
            self.consts[self.phys[ws[0]]] ^= 1
        elif k == "CNOT":
            pc, pt = self.phys[ws[0]], self.phys[ws[1]]
            self.rows[pt] ^= self.rows[pc]
            self.consts[pt] ^= self.consts[pc]
        elif k == "SWAP":
            a, b = ws
            self.phys[a], self.phys[b] = self.phys[b], self.phys[a]
        elif k == "H":
            gadgetize_hadamard(self, ws[0])
        elif k in ("Z", "S", "Sdg", "T", "Tdg", "CZ", "CCZ"):
            add_diagonal(self.poly, k, [self._affine(q) for q in ws])
        else:
            raise ValueError(f"gate {g} cannot appear in the main body")


def gadgetize_hadamard(state: BodyState, q: int) -> int:
    """Replace an interior H on logical wire ``q`` by a |+> ancilla, CZ and X measurement.

    The logical wire moves to the new ancilla (the gadget's SWAP is a relabeling).
    Returns the ancilla's physical wire.
    """
    a = len(state.names)
    k = len(state.preps)
    name = f"_h{k}"
    while name in state.names:
        name = "_" + name
    state.names.append(name)
    state.rows.append(1 << a)
    state.consts.append(0)
    state.poly.width = a + 1
    state.preps.append(a)
    row, const = state._affine(q)
    old = state.phys[q]
    # CZ between the old wire and the ancilla, Clifford terms 6, 6, 2
    state._term(row, const, 6)
    state._term(1 << a, 0, 6)
    state._term(row | (1 << a), const, 2)
    state.measurements.append(MeasurementEvent(old, f"s{k}", [Gate("X", (a,))]))
    state.phys[q] = a
    return a


def synthesize_affine(rows: list[int], consts: list[int]) -> list[Gate]:
    """CNOT/X circuit mapping |z> to |A z xor b>, row ``w`` of A being ``rows[w]``."""
    n = len(rows)
    a = list(rows)
    ops = []
    for col in range(n):
        bit = 1 << col
        if not a[col] & bit:
            for r in range(col + 1, n):
                if a[r] & bit:
                    a[col] ^= a[r]
                    ops.append((r, col))
                    break
            else:
                raise ValueError("affine map is not invertible")
        for r in range(n):
            if r != col and a[r] & bit:
                a[r] ^= a[col]
                ops.append((col, r))
    gates = [Gate("CNOT", (c, t)) for c, t in reversed(ops)]
    gates += [Gate("X", (w,)) for w in range(n) if consts[w]]
    return gates


def diagonalize(c: Circuit) -> ClDClForm:
    """Turn a normalised circuit into a (not yet canonicalised) Cl-D-Cl form."""
    initial, body, final_h = split_stages(c)
    state = BodyState(c.wires)
    for g in body:
        state.apply(g)
    exit_layer = synthesize_affine(state.rows, state.consts)
    final = exit_layer + [Gate("H", (state.phys[g.wires[0]],)) for g in final_h]
    return ClDClForm(state.names, state.n_original, initial, state.preps, state.poly,
                     final, state.measurements, list(state.phys))


# --- steps 8-9 -------------------------------------------------------------------

def canonicalize(form: ClDClForm) -> ClDClForm:
    """Fuse the body and order correction layers by their control bit.

    Even (Clifford) coefficients stay in the body; they never count as T.
    """
    body = PhasePolynomial(form.width, form.body.terms)
    meas = sorted(form.measurements, key=lambda m: int(m.label[1:]))
    return ClDClForm(list(form.wire_names), form.n_original, list(form.initial), list(form.preps),
                     body, list(form.final), meas, list(form.wire_map))


def to_cldcl(c: Circuit) -> ClDClForm:
    c = expand_multi_controls(c)
    return canonicalize(diagonalize(normalize_gates(c)))
