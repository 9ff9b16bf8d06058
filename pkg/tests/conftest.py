import sys
import random

import numpy as np
import pytest
from hypothesis import strategies as st

from phage_opt.circuit import ARITY, Circuit, Gate
from phage_opt.phasepoly import PhasePolynomial

GATE_KINDS = sorted(ARITY)


def random_circuit(rng: random.Random, max_wires=6, max_gates=30, kinds=GATE_KINDS) -> Circuit:
    n = rng.randint(1, max_wires)
    c = Circuit([f"q{i}" for i in range(n)])
    usable = [k for k in kinds if ARITY[k] <= n]
    for _ in range(rng.randint(0, max_gates)):
        k = rng.choice(usable)
        c.gates.append(Gate(k, tuple(rng.sample(range(n), ARITY[k]))))
    return c


@st.composite
def polynomials(draw, min_width=1, max_width=8, max_terms=24):
    width = draw(st.integers(min_width, max_width))
    masks = st.integers(1, (1 << width) - 1)
    terms = draw(st.lists(st.tuples(masks, st.integers(0, 7)), max_size=max_terms))
    return PhasePolynomial(width, terms)


@st.composite
def circuits(draw, max_wires=6, max_gates=30):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_circuit(random.Random(seed), max_wires, max_gates)


def diag_matrix(p: PhasePolynomial, width=None) -> np.ndarray:
    """Dense diagonal exp(i pi/4 p(z)) with wire 0 as the most significant bit."""
    width = p.width if width is None else width
    d = np.empty(1 << width, dtype=complex)
    for idx in range(1 << width):
        z = [(idx >> (width - 1 - i)) & 1 for i in range(width)]
        e = 0
        for m, c in p.items():
            e += c * (sum(z[i] for i in range(width) if m >> i & 1) % 2)
        d[idx] = np.exp(1j * np.pi / 4 * e)
    return np.diag(d)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
