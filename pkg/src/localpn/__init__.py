"""Exact computations for the genus-zero mirror data of local P^n.

Exact scalars (rationals and cyclotomic numbers), truncated power series,
the restricted I-function with its Picard-Fuchs operator, the asymptotic
expansion e^{mu/z} sum R_k z^k, L-coordinate differential systems,
admissibility of level-n operators and closed-form recovery by exact
linear fitting.
"""

from .model import LambdaConfig
from .series import DegeneracyError, NonIntegrableError, QSeries, QZSeries

__version__ = "0.1.0"

__all__ = ["LambdaConfig", "QSeries", "QZSeries", "DegeneracyError", "NonIntegrableError"]
