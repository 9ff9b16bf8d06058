"""Brute-force oracles: dense simulation and comparison up to global phase.

States are numpy tensors with one axis of size 2 per wire (axis ``i`` is wire
``i``) plus a trailing batch axis, so a whole unitary is simulated at once by
pushing every basis column through the gates.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate
from .cldcl import ClDClForm
from .phasepoly import PhasePolynomial

__all__ = [
    "DEFAULT_CAP",
    "SimulationTooLarge",
    "apply_gate",
    "diagonal_phases",
    "equal_up_to_global_phase",
    "max_deviation",
    "simulate_cldcl_postselected",
    "simulate_postselected",
    "simulate_unitary",
]

DEFAULT_CAP = 14
_S2 = 1 / np.sqrt(2)
_ONE_QUBIT = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _S2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
}


class SimulationTooLarge(ValueError):
    pass


def _index(n_axes: int, fixed: dict[int, int]):
    idx = [slice(None)] * n_axes
    for ax, v in fixed.items():
        idx[ax] = v
    return tuple(idx)


def apply_gate(state: np.ndarray, g: Gate) -> np.ndarray:
    """Apply ``g`` to a tensor of shape (2,)*n + (batch,). Returns a new array."""
    nax = state.ndim
    k = g.kind
    if k in _ONE_QUBIT:
        (w,) = g.wires
        out = np.tensordot(_ONE_QUBIT[k], state, axes=([1], [w]))
        return np.moveaxis(out, 0, w)
    out = state.copy()
    if k in ("CNOT", "CCNOT", "MCNOT"):
        *ctrl, t = g.wires
        on = {c: 1 for c in ctrl}
        a = _index(nax, {**on, t: 0})
        b = _index(nax, {**on, t: 1})
        out[a], out[b] = state[b], state[a]
    elif k in ("CZ", "CCZ"):
        out[_index(nax, {w: 1 for w in g.wires})] *= -1
    elif k == "SWAP":
        a, b = g.wires
        out = np.swapaxes(state, a, b).copy()
    else:
        raise ValueError(f"cannot simulate {g}")
    return out


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise SimulationTooLarge(f"{n} wires exceeds the simulation cap of {cap}")


def simulate_unitary(c: Circuit, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Dense 2^n x 2^n unitary. Row/column index bit order: wire 0 is most significant."""
    n = c.width
    _check_cap(n, cap)
    dim = 1 << n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        state = apply_gate(state, g)
    return state.reshape(dim, dim)


def diagonal_phases(p: PhasePolynomial, width: int | None = None) -> np.ndarray:
    """exp(i pi/4 p(z)) on the tensor grid of ``width`` wires (axis i = wire i)."""
    width = p.width if width is None else width
    grids = np.indices((2,) * width, dtype=np.int64) if width else np.zeros((0,), np.int64)
    expo = np.zeros((2,) * width, dtype=np.int64)
    for m, c in p.items():
        par = np.zeros((2,) * width, dtype=np.int64)
        for i in range(width):
            if m >> i & 1:
                par ^= grids[i]
        expo += c * par
    return np.exp(1j * np.pi / 4 * (expo % 8))


_PLUS = np.array([1, 1], dtype=complex) * _S2


def simulate_postselected(c: Circuit, prepared: dict[int, np.ndarray], projected: dict[int, np.ndarray],
                          cap: int = DEFAULT_CAP, diagonal: tuple[int, PhasePolynomial] | None = None,
                          out_order: list[int] | None = None) -> np.ndarray:
    """Linear map on the unprepared wires: prepare some wires, run, project others.

    Args:
        c: circuit on all wires.
        prepared: wire -> single-qubit input state for wires not taken as input.
        projected: wire -> single-qubit bra vector applied at the end.
        diagonal: optional ``(gate_index, poly)``; the polynomial's phases are
            applied just before ``c.gates[gate_index]``.
        out_order: output wires (remaining after projection), in order.
    """
    n = c.width
    _check_cap(n, cap)
    ins = [w for w in range(n) if w not in prepared]
    outs = out_order if out_order is not None else [w for w in range(n) if w not in projected]
    dim_in = 1 << len(ins)
    phases = diagonal_phases(diagonal[1], n)[..., None] if diagonal is not None else None
    diag_at = diagonal[0] if diagonal is not None else None
    remaining = [w for w in range(n) if w not in projected]
    perm = [remaining.index(w) for w in outs] + [len(remaining)]
    # batch over input columns so the working tensor stays around 2^22 entries
    step = max(1, (1 << 22) >> n)
    blocks = []
    for lo in range(0, dim_in, step):
        hi = min(dim_in, lo + step)
        state = np.zeros((dim_in, hi - lo), dtype=complex)
        state[np.arange(lo, hi), np.arange(hi - lo)] = 1
        state = state.reshape((2,) * len(ins) + (hi - lo,))
        for w in sorted(prepared):
            state = np.expand_dims(state, w)
            vec = prepared[w].reshape((1,) * w + (2,) + (1,) * (state.ndim - w - 1))
            state = state * vec
        for gi, g in enumerate(c.gates + [None]):
            if gi == diag_at:
                state = state * phases
            if g is not None:
                state = apply_gate(state, g)
        for w in sorted(projected, reverse=True):
            state = np.tensordot(projected[w].conj(), state, axes=([0], [w]))
        blocks.append(np.transpose(state, perm).reshape(1 << len(outs), hi - lo))
    return np.concatenate(blocks, axis=1)


def simulate_cldcl_postselected(f: ClDClForm, cap: int = DEFAULT_CAP, rescale: bool = True
                                ) -> np.ndarray:
    """Post-selected action of a Cl-D-Cl form on the original wires.

    Ancillas start in |+>, measured wires are projected on <+|. With ``rescale``
    the result is divided by its leading singular value.

    Raises:
        SimulationTooLarge: above ``cap`` wires.
        ArithmeticError: if post-selection annihilates the state.
    """
    names = list(f.wire_names)
    circ = Circuit(names, list(f.initial) + list(f.final))
    prepared = {w: _PLUS for w in f.preps}
    projected = {m.wire: _PLUS for m in f.measurements}
    m = simulate_postselected(circ, prepared, projected, cap,
                              diagonal=(len(f.initial), f.body), out_order=f.wire_map)
    if not rescale:
        return m
    s = np.linalg.norm(m, 2)
    if s < 1e-12:
        raise ArithmeticError("post-selection annihilated the state")
    return m / s


def max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest max-entry distance between ``a`` and ``e^{i phi} b``, phi fixed by b's largest entry."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < 1e-15:
        return float(np.max(np.abs(a)))
    phase = a[k] / b[k]
    if abs(phase) < 1e-15:
        return float(np.max(np.abs(a - b)))
    phase /= abs(phase)
    return float(np.max(np.abs(a - phase * b)))


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return max_deviation(a, b) <= tol
