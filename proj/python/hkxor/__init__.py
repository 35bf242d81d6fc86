"""Spectral refutation and SoS witnesses for Hamiltonian k-XOR."""

from ._hkxor import (
    Instance,
    boundary_expansion_check,
    certify,
    classical_max,
    generate,
    lambda_max,
    max_entropy_build,
    parse,
    threshold_size,
)

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "boundary_expansion_check",
    "certify",
    "classical_max",
    "generate",
    "lambda_max",
    "max_entropy_build",
    "parse",
    "threshold_size",
]
