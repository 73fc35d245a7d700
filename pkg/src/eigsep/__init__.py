"""Spectral separability of two-qubit and qubit-qutrit states: exact
separability functions, absolute-separability bounds and Monte-Carlo
measures on the eigenvalue simplex."""

from .criteria import CriterionSpec
from .measures import Estimate, MeasureSpec, RegionSpec

__version__ = "0.1.0"

__all__ = ["CriterionSpec", "Estimate", "MeasureSpec", "RegionSpec", "__version__"]
