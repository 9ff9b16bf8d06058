import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phage_opt.phasepoly import ParitySet, PhaseFunction, PhasePolynomial
from phage_opt.spidernest import (
    SpiderNestIdentity,
    composite_t_count_formula,
    gen_composite,
    gen_nest,
    gen_subset_parity_identity,
    nest_coefficients,
    t_count_formula,
    verify_identity,
)


def _coeff_of_size(ident, k):
    vals = {c for m, c in ident.poly.items() if bin(m).count("1") == k}
    assert len(vals) <= 1
    return vals.pop() if vals else 0


@pytest.mark.parametrize("n, singles, pairs", [(4, 1, 7), (5, 3, 6), (6, 6, 5)])
def test_nest_coefficients(n, singles, pairs):
    N = gen_nest(range(n))
    assert _coeff_of_size(N, 1) == singles
    assert _coeff_of_size(N, 2) == pairs
    assert _coeff_of_size(N, 3) == 1
    assert _coeff_of_size(N, n) == 7
    assert N.support == ParitySet.of(*range(n))
    for k in range(4, n):
        assert _coeff_of_size(N, k) == 0


def test_nest_coefficient_closed_forms():
    for n in range(4, 20):
        c = nest_coefficients(n)
        assert c[1] == ((n - 2) * (n - 3) // 2) % 8
        assert (c[2] + n - 3) % 8 == 0


def test_nest_precondition():
    with pytest.raises(ValueError):
        gen_nest(range(3))


def _constant_by_brute_force(poly: PhasePolynomial) -> bool:
    vals = set()
    for z in itertools.product((0, 1), repeat=poly.width):
        e = 0
        for m, c in poly.items():
            e += c * (sum(z[i] for i in range(poly.width) if m >> i & 1) % 2)
        vals.add(e % 8)
    return len(vals) == 1


@pytest.mark.parametrize("n", range(4, 9))
def test_nest_is_identity(n):
    N = gen_nest(range(n))
    assert verify_identity(N)
    if n <= 6:
        assert _constant_by_brute_force(N.poly)


def test_verify_identity_rejects():
    assert not verify_identity(PhasePolynomial(2, {(1,): 1}))
    N = gen_nest(range(5)).poly
    for m in N.terms:
        bumped = N.terms
        bumped[m] = (bumped[m] + 1) % 8
        assert not verify_identity(PhasePolynomial(5, bumped))


def test_verify_identity_budget():
    big = PhasePolynomial(21, {tuple(range(21)): 1})
    with pytest.raises(ValueError):
        verify_identity(big)


def test_verify_identity_agrees_with_walsh_oracle():
    rng = random.Random(7)
    for _ in range(50):
        w = rng.randint(1, 6)
        p = PhasePolynomial(w, [(rng.randrange(1, 1 << w), rng.randrange(8)) for _ in range(8)])
        assert verify_identity(p) == PhaseFunction.of_polynomial(p).is_constant()


def test_subset_identity():
    ident = gen_subset_parity_identity(ParitySet.of(0, 1, 2, 3), 3)
    assert len(ident.poly) == 15 and verify_identity(ident)
    # same terms as N_S on four wires, with every coefficient negated
    assert ident.poly == -gen_nest(range(4)).poly
    with pytest.raises(ValueError):
        gen_subset_parity_identity(ParitySet.of(0, 1, 2), 3)
    for k in (1, 2, 3):
        for n in range(k + 1, 7):
            assert verify_identity(gen_subset_parity_identity(range(n), k))
    # at |V| = k the product is not trivial
    p = PhasePolynomial(3, {m: (1 if bin(m).count("1") % 2 == 0 else 7) for m in range(1, 8)})
    assert not verify_identity(p)


@pytest.mark.parametrize("n", range(5, 9))
def test_composite_identities(n):
    S = list(range(n))
    for r in S:
        C = gen_composite(S, r)
        assert verify_identity(C)
        assert C.t_count() == composite_t_count_formula(n)


def test_composite_examples_and_errors():
    assert gen_composite(range(5), 0).t_count() == 15
    assert gen_composite(range(6), 2).t_count() == 32
    with pytest.raises(ValueError):
        gen_composite(range(4), 0)
    with pytest.raises(ValueError):
        gen_composite([0, 1, 2, 3, 4], 7)


def test_t_count_formula_values():
    assert [t_count_formula(n) for n in (4, 5, 6, 7, 8)] == [14, 15, 35, 35, 92]
    with pytest.raises(ValueError):
        t_count_formula(3)


def test_t_count_formula_counts_small_gadgets():
    for n in range(4, 13):
        N = gen_nest(range(n))
        small = sum(1 for m, c in N.poly.items() if c % 2 and bin(m).count("1") <= 3)
        assert small == t_count_formula(n)
        # the n-gadget always adds one more T
        assert N.t_count() == t_count_formula(n) + 1


def test_composite_formula_values():
    assert [composite_t_count_formula(n) for n in (5, 6, 8)] == [15, 32, 59]
    for n in range(5, 11):
        assert gen_composite(range(n), n - 1).t_count() == composite_t_count_formula(n)
    with pytest.raises(ValueError):
        composite_t_count_formula(4)


def test_nest_inverse_cancels():
    for n in range(4, 9):
        N = gen_nest(range(n))
        assert len(N.poly + N.inverse().poly) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=4, max_size=7, unique=True))
def test_nest_depends_only_on_size(wires):
    N = gen_nest(wires)
    ref = gen_nest(range(len(wires)))
    mapping = {i: w for i, w in enumerate(sorted(wires))}
    assert ref.poly.relabel(mapping, N.poly.width) == N.poly
    assert verify_identity(N)


def test_identity_dataclass():
    N = gen_nest([1, 3, 4, 6])
    assert isinstance(N, SpiderNestIdentity)
    assert N.descriptor == ("nest", (1, 3, 4, 6))
    assert np.isclose(N.t_count(), 15)
