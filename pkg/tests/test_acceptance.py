"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[acceptance N] PASS|FAIL ...`` line; the lines are
collected and repeated in the terminal summary by ``conftest.py``.
"""

import json
import random
import time
from importlib import resources

import numpy as np

from phage_opt.benchmarks import all_benchmarks
from phage_opt.cldcl import to_cldcl
from phage_opt.phasepoly import (
    PhaseFunction,
    PhasePolynomial,
    conjugate_cnot,
    conjugate_x,
    extract_polynomial,
    resynthesize,
    walsh_coefficients,
)
from phage_opt.pipeline import PipelineOptions, run_pipeline
from phage_opt.spidernest import (
    composite_t_count_formula,
    gen_composite,
    gen_nest,
    t_count_formula,
    verify_identity,
)
from phage_opt.stomp import run_strategy
from phage_opt.verify import equal_up_to_global_phase, simulate_cldcl_postselected, simulate_unitary

from conftest import random_circuit

RESULTS: list[str] = []

EXPECTED = json.loads((resources.files("phage_opt") / "data" / "expected_counts.json").read_text())
PINNED = [n for n, row in EXPECTED["benchmarks"].items() if row.get("pinned")]


def report(n, ok, detail):
    line = f"[acceptance {n}] {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _random_poly(rng, max_width=8):
    w = rng.randint(1, max_width)
    return PhasePolynomial(w, [(rng.randrange(1, 1 << w), rng.randrange(8))
                               for _ in range(rng.randint(0, 24))])


def test_1_identity_verification():
    t = time.perf_counter()
    bad = [("nest", n) for n in range(4, 9) if not verify_identity(gen_nest(range(n)))]
    bad += [("composite", n, r) for n in range(5, 9) for r in range(n)
            if not verify_identity(gen_composite(range(n), r))]
    dt = time.perf_counter() - t
    report(1, not bad and dt < 10, f"nests n=4..8, composites n=5..8 all r ({dt:.2f}s) {bad or ''}")


def test_2_formula_cross_checks():
    mism = []
    for n in range(4, 13):
        N = gen_nest(range(n)).poly
        small = sum(1 for m, c in N.items() if c % 2 and bin(m).count("1") <= 3)
        if small != t_count_formula(n):
            mism.append(("nest", n, small, t_count_formula(n)))
    for n in range(5, 11):
        got = gen_composite(range(n), 0).t_count()
        if got != composite_t_count_formula(n):
            mism.append(("composite", n, got, composite_t_count_formula(n)))
    anchors = ([t_count_formula(n) for n in (4, 5, 6, 7, 8)] == [14, 15, 35, 35, 92]
               and [composite_t_count_formula(n) for n in (5, 6)] == [15, 32])
    report(2, not mism and anchors, f"formulas vs generators n=4..12 / 5..10 {mism or ''}")


def test_3_oracle_equivalence():
    rng = random.Random(20240611)
    t = time.perf_counter()
    failures = []
    for i in range(200):
        c = random_circuit(rng, max_wires=6, max_gates=30)
        ref = simulate_unitary(c)
        form = to_cldcl(c)
        before = simulate_cldcl_postselected(form, cap=20)
        body, _ = run_strategy(form.body)
        after = simulate_cldcl_postselected(form.with_body(body), cap=20)
        if not (equal_up_to_global_phase(ref, before, 1e-9)
                and equal_up_to_global_phase(ref, after, 1e-9)):
            failures.append(i)
    dt = time.perf_counter() - t
    report(3, not failures and dt < 120,
           f"200 random circuits, form and post-STOMP form match ({dt:.1f}s) {failures or ''}")


def test_4_algebra_properties():
    rng = random.Random(4)
    t = time.perf_counter()
    errors = 0
    for _ in range(500):
        p = _random_poly(rng)
        if walsh_coefficients(PhaseFunction.of_polynomial(p, reduce=False))[0] != p:
            errors += 1
        q, rows, consts = extract_polynomial(resynthesize(p))
        if q != p or rows != [1 << i for i in range(p.width)] or any(consts):
            errors += 1
        if p.width >= 2:
            h, j = rng.sample(range(p.width), 2)
            if conjugate_cnot(conjugate_cnot(p, h, j), h, j) != p:
                errors += 1
            if conjugate_x(conjugate_x(p, h), h) != p:
                errors += 1
            # conjugations act on the denoted function as a change of variables
            f = PhaseFunction.of_polynomial(p).values
            g = PhaseFunction.of_polynomial(conjugate_cnot(p, h, j)).values
            idx = np.arange(1 << p.width)
            src = idx ^ (((idx >> h) & 1) << j)
            if len(set(((g - f[src]) % 8).tolist())) != 1:
                errors += 1
        if (p + (-p)) != PhasePolynomial(p.width):
            errors += 1
    dt = time.perf_counter() - t
    report(4, errors == 0 and dt < 60,
           f"500 walsh/resynthesis/conjugation round-trips ({dt:.1f}s), {errors} errors")


FUSION = {"mod5_4": (0, 8), "barenco_tof_3": (3, 16), "nc_tof_3": (2, 15),
          "vbe_adder_3": (4, 24), "gf2^4_mult": (0, 68)}


def test_5_fusion_column():
    bench = all_benchmarks()
    got = {}
    for name in FUSION:
        f = to_cldcl(bench[name])
        got[name] = (f.extra_qubits, f.t_count())
    bad = {k: v for k, v in got.items() if v != FUSION[k]}
    report(5, not bad, "extra qubits / fusion " +
           ", ".join(f"{k} {a}/{b}" for k, (a, b) in got.items()) + (f" mismatch {bad}" if bad else ""))


STOMP = {"mod5_4": 7, "barenco_tof_3": 13, "nc_tof_3": 13, "vbe_adder_3": 20, "gf2^4_mult": 61}


def test_6_stomp_column():
    bench = all_benchmarks()
    opts = PipelineOptions(**EXPECTED["options"])
    got = {name: run_pipeline(bench[name], opts, name)[1].t_after_stomp for name in STOMP}
    within = all(got[k] <= v + 1 for k, v in STOMP.items())
    reached = sum(got[k] <= v for k, v in STOMP.items())
    assert set(STOMP) == set(PINNED)
    report(6, within and reached >= 4,
           "STOMP " + ", ".join(f"{k} {got[k]} (target {v})" for k, v in STOMP.items())
           + f"; {reached}/5 at or below")


def test_7_larger_benchmarks_report_only():
    bench = all_benchmarks()
    lines, slow = [], []
    for name, row in EXPECTED["benchmarks"].items():
        if row.get("pinned"):
            continue
        t = time.perf_counter()
        _, rep = run_pipeline(bench[name], PipelineOptions(), name)
        dt = time.perf_counter() - t
        if dt > 30 * 60:
            slow.append(name)
        lines.append(f"{name} {rep.extra_qubits}/{rep.t_after_fusion}/{rep.t_after_stomp} "
                     f"(expected {row['extra_qubits']}/{row['fusion']}/{row['stomp']}, {dt:.1f}s)")
    # counts are logged for drift tracking only; the time bound is the hard part
    try:
        report(7, not slow, f"{len(lines)} report-only rows logged, slow: {slow or 'none'}")
    finally:
        for ln in lines:
            RESULTS.append("    " + ln)
            print("   ", ln)


def test_8_monotonicity():
    bad = []
    for name, c in all_benchmarks().items():
        form = to_cldcl(c)
        body, stats = run_strategy(form.body, record=True)
        last = form.t_count()
        for out in stats.accepted:
            if not (out.t_before == last and out.t_after < out.t_before):
                bad.append(name)
            last = out.t_after
        traj = stats.trajectory
        if not (c.t_count() >= form.t_count() == traj[0] >= traj[-1] == body.t_count()):
            bad.append(name)
        if any(b > a for a, b in zip(traj, traj[1:])):
            bad.append(name)
    report(8, not bad, f"T-count non-increasing across stages and rewrites on "
                       f"{len(all_benchmarks())} corpus circuits {sorted(set(bad)) or ''}")
