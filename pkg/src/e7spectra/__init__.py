"""Spectra of almost simple groups with socle E7(q): closed forms and a brute-force check."""

__version__ = "0.1.0"

from .errors import DomainError, StructuralError
from .spectrum import CosetSpec, QSpec, SpectrumSet, closure_equal, mu, n_p, nu, nu_1, nu_coset, nu_delta, order_exists

__all__ = [
    "CosetSpec",
    "DomainError",
    "QSpec",
    "SpectrumSet",
    "StructuralError",
    "__version__",
    "closure_equal",
    "mu",
    "n_p",
    "nu",
    "nu_1",
    "nu_coset",
    "nu_delta",
    "order_exists",
]
