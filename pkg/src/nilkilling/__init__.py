"""Exact Killing and parallel forms on metric Lie algebras."""

from .exterior import ExteriorForm, format_form, wedge, contract
from .liealg import MetricLieAlgebra, validate, two_step_data, levi_civita
from .killing import killing_space, parallel_space, two_step_killing_space, dimension_table

__version__ = "0.1.0"

__all__ = [
    "ExteriorForm",
    "MetricLieAlgebra",
    "contract",
    "dimension_table",
    "format_form",
    "killing_space",
    "levi_civita",
    "parallel_space",
    "two_step_data",
    "two_step_killing_space",
    "validate",
    "wedge",
]
