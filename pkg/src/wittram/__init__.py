"""Truncated de Rham-Witt complexes of F_q((pi)) with their filtrations.

The package computes exactly with Witt vectors over truncated Laurent series,
canonical forms of W_m Omega^q_K, the log filtration, Cartier theory and the
Brylinski-Kato spaces T^(m,q)_n, and ships verifiers that return
machine-checkable reports.
"""

from .canonical import (CanonicalForm, cartier, format_form, from_canonical, op_d, op_F, op_R, op_V,
                        parse_form, to_canonical)
from .errors import CapError, NotInDomain, ParamsMismatch, PrecisionError, WindowOverflow, WittramError
from .fields import SeriesRing, TruncSeries, format_series, get_field, parse_series
from .filtration import FALSIFIED, INCONCLUSIVE, VERIFIED, VerifierReport
from .kato import AswClass, asw_conductor, asw_conductor_oracle, kato_level, t_space
from .multivar import MultiForm, SncdRing
from .witt import WittVector, teichmuller

__version__ = "0.1.0"

__all__ = [
    "AswClass", "CanonicalForm", "CapError", "FALSIFIED", "INCONCLUSIVE", "MultiForm", "NotInDomain",
    "ParamsMismatch", "PrecisionError", "SeriesRing", "SncdRing", "TruncSeries", "VERIFIED",
    "VerifierReport", "WindowOverflow", "WittVector", "WittramError", "asw_conductor",
    "asw_conductor_oracle", "cartier", "format_form", "format_series", "from_canonical", "get_field",
    "kato_level", "op_F", "op_R", "op_V", "op_d", "parse_form", "parse_series", "t_space",
    "teichmuller", "to_canonical",
]
