"""Local and global zeta factors of quadratic-phase characters.

The package computes the multiplicative transfer factor that a character of
the form x -> psi(a x^2 / 2 + b x) produces under the Mellin transform, over
p-adic fields, the reals, the complexes, and product spaces, together with
the global object assembled from them.  Submodules:

  specfun      gamma, zeta, Kummer 1F1, Dirichlet characters
  padic_core   p-adic numbers, additive characters, unit averages
  padic_zeta   closed-form local factors at finite places
  arch_zeta    closed-form factors at real and complex places
  oracle       brute-force numerical transforms for cross-checking
  zero_engine  root finding, winding counts, zero certification
  global_zeta  assembly of the completed global factor
  acceptance   end-to-end acceptance battery
  cli          command-line front end
"""

__version__ = "0.1.0"

from .errors import (
    BoundaryZeroError,
    ConvergenceError,
    DegenerateError,
    DomainError,
    NonIntegerWindingError,
    PoleError,
    PrecisionWarning,
    QuadratureError,
    SupportEscapeError,
    UncertifiedError,
    WeakMellinError,
)

__all__ = [
    "WeakMellinError",
    "PoleError",
    "DomainError",
    "DegenerateError",
    "SupportEscapeError",
    "QuadratureError",
    "BoundaryZeroError",
    "NonIntegerWindingError",
    "ConvergenceError",
    "UncertifiedError",
    "PrecisionWarning",
    "__version__",
]
