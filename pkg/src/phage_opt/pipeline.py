"""End-to-end reduction: Cl-D-Cl form, STOMP strategy, optional post-pass, verification."""

from __future__ import annotations

import shlex
import subprocess
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .circuit import Circuit, Gate, expand_multi_controls, write_qc
from .cldcl import ClDClForm, to_cldcl
from .phasepoly import PhasePolynomial, resynthesize
from .spidernest import MAX_VERIFY_SUPPORT, verify_identity
from .stomp import run_strategy
from .verify import (
    DEFAULT_CAP,
    max_deviation,
    simulate_cldcl_postselected,
    simulate_postselected,
    simulate_unitary,
)

__all__ = [
    "PipelineOptions",
    "PostPassError",
    "REPORT_SCHEMA_VERSION",
    "RunReport",
    "emit_circuit",
    "emit_qc",
    "run_pipeline",
    "verify_form",
]

REPORT_SCHEMA_VERSION = 1
_ZERO = np.array([1, 0], dtype=complex)


class PostPassError(RuntimeError):
    pass


@dataclass
class PipelineOptions:
    passes: int = 1
    until_fixpoint: bool = False
    family: str = "63"
    skip_stomp5: bool = False
    order_trials: int = 1
    post_pass: str | None = None
    verify: bool = False
    max_sim_wires: int = DEFAULT_CAP


@dataclass
class RunReport:
    circuit_name: str
    wire_count: int
    extra_qubits: int = 0
    total_wires: int = 0
    t_count_initial: int = 0
    t_after_fusion: int = 0
    t_after_stomp: int = 0
    t_after_post_pass: int | None = None
    wall_times: dict = field(default_factory=dict)
    stomp: dict = field(default_factory=dict)
    verification: dict | None = None
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def t_final(self) -> int:
        return self.t_after_stomp if self.t_after_post_pass is None else self.t_after_post_pass


def _post_pass(cmd: str, p: PhasePolynomial) -> PhasePolynomial:
    """Pipe ``p`` as text through an external command and parse its stdout."""
    try:
        res = subprocess.run(shlex.split(cmd), input=p.to_text(), capture_output=True,
                             text=True, check=False)
    except OSError as exc:
        raise PostPassError(f"cannot run post-pass {cmd!r}: {exc}") from exc
    if res.returncode != 0:
        raise PostPassError(f"post-pass exited with {res.returncode}: {res.stderr.strip()}")
    try:
        out = PhasePolynomial.from_text(res.stdout, p.width)
    except ValueError as exc:
        raise PostPassError(f"unreadable post-pass output: {exc}") from exc
    if out.width != p.width:
        raise PostPassError("post-pass changed the polynomial width")
    diff = out - p
    if bin(diff.support()).count("1") <= MAX_VERIFY_SUPPORT and not verify_identity(diff):
        raise PostPassError("post-pass output is not equivalent to its input")
    return out


def run_pipeline(c: Circuit, options: PipelineOptions | None = None, name: str = "circuit"
                 ) -> tuple[ClDClForm, RunReport]:
    """Reduce ``c``: Cl-D-Cl form with fused body, then STOMP 4/5, then the post-pass hook.

    Raises:
        PostPassError: if the external post-pass fails or returns a
            non-equivalent polynomial.
    """
    opts = options or PipelineOptions()
    report = RunReport(name, c.width, t_count_initial=c.t_count())
    t = time.perf_counter()
    form = to_cldcl(c)
    report.wall_times["cldcl"] = time.perf_counter() - t
    report.extra_qubits = form.extra_qubits
    report.total_wires = form.width
    report.t_after_fusion = form.t_count()

    t = time.perf_counter()
    body, stats = run_strategy(form.body, passes=opts.passes, family=opts.family,
                               skip_stomp5=opts.skip_stomp5, until_fixpoint=opts.until_fixpoint,
                               order_trials=opts.order_trials)
    report.wall_times["stomp"] = time.perf_counter() - t
    report.stomp = stats.to_dict()
    report.t_after_stomp = body.t_count()

    if opts.post_pass:
        t = time.perf_counter()
        post = _post_pass(opts.post_pass, body)
        report.wall_times["post_pass"] = time.perf_counter() - t
        # keep the post-pass result only if it does not make things worse
        if post.t_count() <= body.t_count():
            body = post
        report.t_after_post_pass = body.t_count()

    form = form.with_body(body)
    if opts.verify:
        t = time.perf_counter()
        report.verification = verify_form(c, form, opts.max_sim_wires)
        report.wall_times["verify"] = time.perf_counter() - t
    return form, report


def verify_form(c: Circuit, form: ClDClForm, cap: int = DEFAULT_CAP) -> dict:
    """Compare the form and its emitted circuit against a dense simulation of ``c``."""
    if form.width > cap:
        return {"status": "SKIPPED", "reason": f"{form.width} wires exceeds cap {cap}"}
    ref = simulate_unitary(expand_multi_controls(c), cap)
    dev_form = max_deviation(ref, simulate_cldcl_postselected(form, cap))
    emitted = emit_circuit(form)
    m = simulate_postselected(emitted, {w: _ZERO for w in form.preps},
                              {ev.wire: _ZERO for ev in form.measurements}, cap,
                              out_order=list(form.wire_map))
    dev_emit = max_deviation(ref, m / np.linalg.norm(m, 2))
    dev = max(dev_form, dev_emit)
    return {"status": "PASS" if dev <= 1e-9 else "FAIL", "max_deviation": dev,
            "form_deviation": dev_form, "emitted_deviation": dev_emit}


def emit_circuit(form: ClDClForm) -> Circuit:
    """Gate circuit for the post-selected branch of ``form``.

    Ancillas start in |0> and get an H; measured wires end with an H so that
    post-selecting |+> becomes post-selecting |0>.
    """
    names = list(form.wire_names)
    gates: list[Gate] = list(form.initial)
    gates += [Gate("H", (w,)) for w in form.preps]
    gates += resynthesize(form.body, names).gates
    gates += list(form.final)
    gates += [Gate("H", (ev.wire,)) for ev in form.measurements]
    inputs = [w for w in range(form.width) if w not in set(form.preps)]
    return Circuit(names, gates, inputs, list(form.wire_map))


def emit_qc(form: ClDClForm) -> str:
    """``.qc`` text of :func:`emit_circuit`, with measurements as structured comments."""
    c = emit_circuit(form)
    notes = [f"t-count {form.t_count()}, extra qubits {form.extra_qubits}"]
    for w in form.preps:
        notes.append(f"prep {form.wire_names[w]} |0>")
    for ev in form.measurements:
        corr = " ".join(f"{g.kind}({','.join(form.wire_names[i] for i in g.wires)})"
                        for g in ev.corrections)
        notes.append(f"measure {form.wire_names[ev.wire]} -> {ev.label} "
                     f"postselect 0; if 1: {corr or 'none'}")
    return write_qc(c, notes)
