"""
Phase gadgets and spider nests
==============================

A diagonal circuit over {CNOT, T, S, Z, CCZ} is a phase polynomial: a map
from parities (subsets of wires) to integers mod 8, one unit being a pi/4
rotation. This walk-through builds a few of them, fuses gadgets, and looks
at spider nests, the polynomials that denote the identity.
"""

from phage_opt.phasepoly import (
    ParitySet,
    PhaseFunction,
    PhasePolynomial,
    decompose_ccz,
    resynthesize,
    walsh_coefficients,
)
from phage_opt.spidernest import (
    composite_t_count_formula,
    gen_composite,
    gen_nest,
    t_count_formula,
    verify_identity,
)

##############################################################################
# A CCZ on wires 0, 1, 2 is seven T-gadgets: three singles, three pairs with
# coefficient 7 (a T-dagger) and the triple.

ccz = decompose_ccz(0, 1, 2)
print("CCZ as a phase polynomial:")
print(ccz.to_text())
print("T-count:", ccz.t_count())

##############################################################################
# Gadgets on the same parity fuse by adding coefficients. Two CCZs sharing
# the pair (0, 1) have pair coefficients 7 + 7 = 14 = 6 mod 8, which is a
# Clifford (even) phase, so those two T gates vanish.

other = decompose_ccz(0, 1, 3)
fused = ccz.widen(4) + other
print("\nTwo CCZs, naive T-count", ccz.t_count() + other.t_count(),
      "fused T-count", fused.t_count())

##############################################################################
# The polynomial is recovered from its phase function with a Walsh transform,
# which is how the library checks two polynomials mean the same diagonal.

f = PhaseFunction.of_polynomial(fused, reduce=False)
back, const = walsh_coefficients(f)
print("Walsh round trip exact:", back == fused, "global phase", const)

##############################################################################
# Resynthesis turns the polynomial back into CNOT + phase gates, one T per
# odd coefficient.

circ = resynthesize(fused)
print("resynthesised gates:", len(circ.gates), "with", circ.count("T", "Tdg"), "T gates")

##############################################################################
# Spider nests
# ------------
# For n >= 4 wires the nest N_S has every single, pair and triple gadget plus
# the full-set gadget, with coefficients chosen so the total phase is constant.

for n in range(4, 9):
    N = gen_nest(range(n))
    print(f"n={n}: {len(N.poly):3d} terms, T-count {N.t_count():3d}, "
          f"small-gadget formula {t_count_formula(n):3d}, identity {verify_identity(N)}")

##############################################################################
# Multiplying N_S by the inverse of the nest on one fewer wire cancels all
# triples outside the shared part and leaves a cheaper identity.

for n in range(5, 9):
    C = gen_composite(range(n), n - 1)
    print(f"composite n={n}: T-count {C.t_count()} (formula {composite_t_count_formula(n)})")

##############################################################################
# Any identity can be added to a body without changing what it computes. If
# it shares more than half of its odd terms with the body, the T-count drops.

N = gen_nest(range(4)).poly
odd = [m for m, c in sorted(N.items()) if c % 2 and len(ParitySet(m)) <= 3]
body = PhasePolynomial(4, {m: (-N.coeff(m)) % 8 for m in odd[:9]})
print("\nbody with 9 of the nest's 14 small gadgets inverted: T-count", body.t_count())
print("after adding the nest: T-count", (body + N).t_count())
