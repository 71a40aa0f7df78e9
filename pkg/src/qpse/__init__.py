"""
qpse: phase-space entropy of quantum states sampled on uniform grids.

Position and spatial-frequency differential entropies, spin-entropy,
invariance checks (translations, boosts, dilations, CPT, Lorentz measure)
and split-step entropy dynamics, in natural units (hbar = m = 1).
"""

from .entropy import EntropyReport, continuous_entropy, joint_entropy_two_particle
from .errors import NumericalGuard, QpseError, ValidationError
from .grid import GridSpec, WaveFunction

__all__ = [
    "EntropyReport",
    "GridSpec",
    "NumericalGuard",
    "QpseError",
    "ValidationError",
    "WaveFunction",
    "continuous_entropy",
    "joint_entropy_two_particle",
]

__version__ = "0.1.0"
