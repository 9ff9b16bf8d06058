"""T-count reduction of Clifford+T circuits via phase gadgets and spider-nest identities."""

from .circuit import Circuit, Gate, QCSyntaxError, expand_multi_controls, parse_qc, write_qc
from .cldcl import ClDClForm, MeasurementEvent, to_cldcl
from .phasepoly import (
    ParitySet,
    PhaseFunction,
    PhaseGadget,
    PhasePolynomial,
    resynthesize,
    walsh_coefficients,
)

__version__ = "0.1.0"
