"""Verification toolkit for translation-invariant systems on R^d.

Exact rational arithmetic where the input allows it; float mode with explicit
tolerances otherwise.
"""

__version__ = "0.1.0"

from .conditions import ConditionReport, GTISystem, Verdict  # noqa: E402
from .lattice import CoCompactSubgroup, PointLattice, annihilator, count_in_translate, covolume, make_subgroup  # noqa: E402
from .spectral import Classification, classify_expanding  # noqa: E402

__all__ = [
    "ConditionReport",
    "GTISystem",
    "Verdict",
    "CoCompactSubgroup",
    "PointLattice",
    "annihilator",
    "count_in_translate",
    "covolume",
    "make_subgroup",
    "Classification",
    "classify_expanding",
]
