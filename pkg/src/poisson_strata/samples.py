"""Ready-made parameter sets used by the sample configs, docs, and tests.

The quantum family keeps every scalar a power of two, so the parameter group
has rank one and the weight-1 character on the prime 2 transports it to the
Poisson family exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra_an import PoissonParams
from .algebra_kn import QuantumParams


def poisson_sample() -> PoissonParams:
    """A small generic Poisson instance (not a character image)."""
    return PoissonParams.make(2, [[0, 1], [-1, 0]], [2, 3], [5, 7])


_QUANTUM_P = {1: (2,), 2: (2, 8), 3: (2, 8, 2)}
_QUANTUM_Q = {1: (4,), 2: (4, 32), 3: (4, 32, 16)}
_QUANTUM_GAMMA = {
    1: [[1]],
    2: [[1, 2], [Fraction(1, 2), 1]],
    3: [[1, 2, 4], [Fraction(1, 2), 1, 2], [Fraction(1, 4), Fraction(1, 2), 1]],
}


def quantum_sample(n: int = 2) -> QuantumParams:
    if n not in _QUANTUM_P:
        raise ValueError("sample family is defined for n in {1, 2, 3}")
    return QuantumParams.make(n, _QUANTUM_GAMMA[n], _QUANTUM_P[n], _QUANTUM_Q[n])


def sample_weights() -> dict[int, Fraction]:
    return {2: Fraction(1)}


def quantum_sample_image(n: int = 2) -> PoissonParams:
    """The Poisson parameters induced from the quantum sample by the
    weight-1 character on the prime 2 (exponents of 2, read off directly)."""
    from .correspondence import group_character

    return group_character(quantum_sample(n), sample_weights()).induced
