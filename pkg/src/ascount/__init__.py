"""ascount: exact counting of wildly ramified elementary-abelian extensions.

The package counts C_p^r-extensions of the local field F_q((t)) and of the
rational function field F_q(t) by discriminant, in exact arithmetic, and
cross-validates every closed-form count against brute-force enumeration of
Artin-Schreier representatives.  On top of the counts it reproduces the
Dirichlet-series structure: rationality of the local series, pole locations,
and the leading asymptotic constants.
"""

from .errors import InvariantViolation
from .fields import Divisor, Place, PrimeContext, make_context

__all__ = [
    "Divisor",
    "InvariantViolation",
    "Place",
    "PrimeContext",
    "make_context",
]

__version__ = "0.1.0"
