"""
Moving Hadamards out of the way
===============================

A T gate on either side of an H cannot be fused with the other. Replacing
the interior H by an ancilla prepared in |+>, a CZ-like phase gadget and an
X-basis measurement pushes every non-Clifford phase into one diagonal body.
Post-selecting the |+> outcome gives back the original circuit exactly.
"""

import numpy as np

from phage_opt import parse_qc, to_cldcl
from phage_opt.pipeline import emit_qc, run_pipeline, PipelineOptions
from phage_opt.verify import simulate_cldcl_postselected, simulate_unitary, max_deviation

source = """\
.v a b
BEGIN
T a
cnot a b
H a
T a
T b
cnot b a
T* a
END
"""
circ = parse_qc(source)
print("input:", len(circ.gates), "gates, T-count", circ.t_count())

##############################################################################
# Converting to a Clifford / diagonal / Clifford form introduces one ancilla
# for the H that cannot be pushed to either end.

form = to_cldcl(circ)
print("wires", form.width, "extra qubits", form.extra_qubits)
print("body:")
print(form.body.to_text())
for ev in form.measurements:
    print("measurement on", form.wire_names[ev.wire], "corrections", ev.corrections)

##############################################################################
# The post-selected branch equals the original unitary up to a global phase.

u = simulate_unitary(circ)
m = simulate_cldcl_postselected(form, rescale=False)
print("success amplitude norm", np.linalg.norm(m, 2), "(expected 2^-1/2 per ancilla)")
print("deviation after rescaling", max_deviation(u, m / np.linalg.norm(m, 2)))

##############################################################################
# The full pipeline also runs the spider-nest search and can check itself.

form, report = run_pipeline(circ, PipelineOptions(verify=True), name="demo")
print("\nfusion T-count", report.t_after_fusion, "after search", report.t_after_stomp,
      "verification", report.verification["status"])
print("\nemitted circuit:\n")
print(emit_qc(form))
