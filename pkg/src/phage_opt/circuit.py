"""Gate-level circuit IR and the ``.qc`` benchmark dialect.

Circuits are plain value objects: a list of wire names and an ordered list of
gates whose wires are integer indices into that list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "ARITY",
    "CLIFFORD_KINDS",
    "Circuit",
    "Gate",
    "QCSyntaxError",
    "expand_multi_controls",
    "parse_qc",
    "write_qc",
]

# fixed arity per kind; MCNOT is variadic (>= 4 wires)
ARITY = {
    "X": 1, "Z": 1, "S": 1, "Sdg": 1, "T": 1, "Tdg": 1, "H": 1,
    "CNOT": 2, "CZ": 2, "SWAP": 2,
    "CCNOT": 3, "CCZ": 3,
}
CLIFFORD_KINDS = frozenset({"X", "Z", "S", "Sdg", "H", "CNOT", "CZ", "SWAP"})
GATE_KINDS = frozenset(ARITY) | {"MCNOT"}


class QCSyntaxError(ValueError):
    """Malformed ``.qc`` input; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Gate:
    """A gate acting on wire indices. Controls come first, the target last."""

    kind: str
    wires: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "MCNOT":
            if len(self.wires) < 4:
                raise ValueError("MCNOT needs at least 3 controls and a target")
        elif len(self.wires) != ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ARITY[self.kind]} wires, got {len(self.wires)}")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"repeated wire in {self.kind}{self.wires}")
        if min(self.wires) < 0:
            raise ValueError("negative wire index")

    @property
    def is_clifford(self) -> bool:
        return self.kind in CLIFFORD_KINDS

    def __repr__(self):
        return f"{self.kind}{self.wires}"


@dataclass
class Circuit:
    """Ordered gate list over named wires.

    ``inputs``/``outputs`` default to every wire. Wires outside ``inputs`` are
    ancillas that start in |0>.
    """

    wires: list[str]
    gates: list[Gate] = field(default_factory=list)
    inputs: list[int] | None = None
    outputs: list[int] | None = None

    def __post_init__(self):
        self.wires = list(self.wires)
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("duplicate wire names")
        if self.inputs is None:
            self.inputs = list(range(len(self.wires)))
        if self.outputs is None:
            self.outputs = list(range(len(self.wires)))
        self.validate()

    @property
    def width(self) -> int:
        return len(self.wires)

    def validate(self) -> None:
        n = self.width
        for g in self.gates:
            if max(g.wires) >= n:
                raise ValueError(f"gate {g} references a wire outside [0, {n})")
        for w in list(self.inputs) + list(self.outputs):
            if not 0 <= w < n:
                raise ValueError(f"input/output wire {w} outside [0, {n})")

    def index(self, name: str) -> int:
        return self.wires.index(name)

    def add(self, kind: str, *wires) -> "Circuit":
        idx = [w if isinstance(w, int) else self.index(w) for w in wires]
        g = Gate(kind, tuple(idx))
        if max(g.wires) >= self.width:
            raise ValueError(f"gate {g} references a wire outside [0, {self.width})")
        self.gates.append(g)
        return self

    def copy(self) -> "Circuit":
        return Circuit(list(self.wires), list(self.gates), list(self.inputs), list(self.outputs))

    def count(self, *kinds: str) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)

    def t_count(self) -> int:
        """Naive T-count: T/T-dagger gates plus 7 per Toffoli-type gate."""
        n = self.count("T", "Tdg") + 7 * self.count("CCNOT", "CCZ")
        # compute/uncompute ladder of a k-control MCNOT
        n += sum(7 * (2 * (len(g.wires) - 3) + 1) for g in self.gates if g.kind == "MCNOT")
        return n


# --- .qc dialect ------------------------------------------------------------

_ONE_QUBIT = {"H": "H", "X": "X", "S": "S", "S*": "Sdg", "T": "T", "T*": "Tdg"}
_WRITE_NAMES = {"H": "H", "X": "X", "Z": "Z", "S": "S", "Sdg": "S*", "T": "T", "Tdg": "T*",
                "CNOT": "tof", "CCNOT": "tof", "MCNOT": "tof", "CZ": "Z", "CCZ": "Z",
                "SWAP": "swap"}


def _gate_from_tokens(mnemonic: str, args: list[int], lineno: int) -> Gate:
    n = len(args)
    if mnemonic in _ONE_QUBIT:
        kind = _ONE_QUBIT[mnemonic]
        if n != 1:
            raise QCSyntaxError(f"{mnemonic} takes 1 wire, got {n}", lineno)
    elif mnemonic == "Z":
        if not 1 <= n <= 3:
            raise QCSyntaxError(f"Z takes 1 to 3 wires, got {n}", lineno)
        kind = ("Z", "CZ", "CCZ")[n - 1]
    elif mnemonic == "tof":
        if n == 0:
            raise QCSyntaxError("tof needs at least one wire", lineno)
        kind = ("X", "CNOT", "CCNOT")[n - 1] if n <= 3 else "MCNOT"
    elif mnemonic == "cnot":
        if n != 2:
            raise QCSyntaxError(f"cnot takes 2 wires, got {n}", lineno)
        kind = "CNOT"
    elif mnemonic == "swap":
        if n != 2:
            raise QCSyntaxError(f"swap takes 2 wires, got {n}", lineno)
        kind = "SWAP"
    else:
        raise QCSyntaxError(f"unknown gate mnemonic {mnemonic!r}", lineno)
    try:
        return Gate(kind, tuple(args))
    except ValueError as exc:
        raise QCSyntaxError(str(exc), lineno) from None


def parse_qc(text: str) -> Circuit:
    """Parse a ``.qc`` document.

    Raises:
        QCSyntaxError: on unknown mnemonics, undeclared wires, arity
            mismatches or a missing ``.v``/``BEGIN``/``END``.
    """
    wires: list[str] | None = None
    inputs = outputs = None
    gates: list[Gate] = []
    state = "header"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if state == "header":
            head = toks[0]
            if head == ".v":
                if wires is not None:
                    raise QCSyntaxError("duplicate .v declaration", lineno)
                wires = toks[1:]
                if len(set(wires)) != len(wires):
                    raise QCSyntaxError("duplicate wire name in .v", lineno)
            elif head in (".i", ".o"):
                if wires is None:
                    raise QCSyntaxError(f"{head} before .v", lineno)
                missing = [t for t in toks[1:] if t not in wires]
                if missing:
                    raise QCSyntaxError(f"undeclared wire {missing[0]!r}", lineno)
                idx = [wires.index(t) for t in toks[1:]]
                if head == ".i":
                    inputs = idx
                else:
                    outputs = idx
            elif head == "BEGIN":
                if wires is None:
                    raise QCSyntaxError("BEGIN before .v", lineno)
                state = "body"
            else:
                raise QCSyntaxError(f"unexpected header line {line!r}", lineno)
        elif state == "body":
            if toks[0] == "END":
                state = "done"
                continue
            args = []
            for t in toks[1:]:
                if t not in wires:
                    raise QCSyntaxError(f"undeclared wire {t!r}", lineno)
                args.append(wires.index(t))
            gates.append(_gate_from_tokens(toks[0], args, lineno))
        else:
            raise QCSyntaxError(f"content after END: {line!r}", lineno)
    if wires is None:
        raise QCSyntaxError("missing .v declaration")
    if state != "done":
        raise QCSyntaxError("missing BEGIN/END block")
    return Circuit(wires, gates, inputs, outputs)


def write_qc(c: Circuit, comments: list[str] | None = None) -> str:
    """Serialise a circuit. ``comments`` are emitted as ``#`` lines before BEGIN."""
    lines = [".v " + " ".join(c.wires)]
    lines.append(".i " + " ".join(c.wires[i] for i in c.inputs))
    lines.append(".o " + " ".join(c.wires[i] for i in c.outputs))
    for note in comments or []:
        lines.append("# " + note)
    lines.append("")
    lines.append("BEGIN")
    for g in c.gates:
        lines.append(_WRITE_NAMES[g.kind] + " " + " ".join(c.wires[w] for w in g.wires))
    lines.append("END")
    return "\n".join(lines) + "\n"


def expand_multi_controls(c: Circuit) -> Circuit:
    """Rewrite every MCNOT into a compute/apply/uncompute Toffoli ladder.

    A k-control MCNOT uses k-2 fresh ancillas named ``_anc<i>``, appended after
    the existing wires and reused between MCNOTs (they are returned to |0>).
    """
    if not any(g.kind == "MCNOT" for g in c.gates):
        return c.copy()
    need = max(len(g.wires) - 3 for g in c.gates if g.kind == "MCNOT")
    wires = list(c.wires)
    anc = []
    k = 0
    while len(anc) < need:
        name = f"_anc{k}"
        k += 1
        if name in wires:
            continue
        anc.append(len(wires))
        wires.append(name)
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind != "MCNOT":
            gates.append(g)
            continue
        *ctrl, tgt = g.wires
        ladder = [Gate("CCNOT", (ctrl[0], ctrl[1], anc[0]))]
        for i in range(2, len(ctrl) - 1):
            ladder.append(Gate("CCNOT", (ctrl[i], anc[i - 2], anc[i - 1])))
        gates.extend(ladder)
        gates.append(Gate("CCNOT", (ctrl[-1], anc[len(ctrl) - 3], tgt)))
        gates.extend(reversed(ladder))
    return Circuit(wires, gates, list(c.inputs), list(c.outputs))
