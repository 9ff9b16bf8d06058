"""
Benchmark T-counts
==================

Runs the bundled reversible benchmarks through the pipeline and compares
extra qubits, T-count after fusion and after the spider-nest search with the
expected values shipped in ``expected_counts.json``.

    python demos/03_benchmark_counts.py          # pinned rows only
    python demos/03_benchmark_counts.py --all    # every row, about a minute
"""

import json
import sys
import time
from importlib import resources

from phage_opt.benchmarks import all_benchmarks
from phage_opt.pipeline import PipelineOptions, run_pipeline

expected = json.loads((resources.files("phage_opt") / "data" / "expected_counts.json").read_text())
options = PipelineOptions(**expected["options"])
run_all = "--all" in sys.argv
circuits = all_benchmarks()

print(f"{'name':16s} {'wires':>5s} {'naive T':>8s} {'extra':>6s} {'fusion':>7s} "
      f"{'search':>7s}   expected")
for name, row in expected["benchmarks"].items():
    if not (run_all or row.get("pinned")):
        continue
    # the order exploration is only worth its time on the small pinned rows
    opts = options if row.get("pinned") else PipelineOptions()
    t = time.perf_counter()
    _, rep = run_pipeline(circuits[name], opts, name)
    dt = time.perf_counter() - t
    print(f"{name:16s} {rep.wire_count:5d} {rep.t_count_initial:8d} {rep.extra_qubits:6d} "
          f"{rep.t_after_fusion:7d} {rep.t_after_stomp:7d}   "
          f"{row['extra_qubits']}/{row['fusion']}/{row['stomp']}  ({dt:.1f}s)")
