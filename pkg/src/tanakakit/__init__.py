"""Exact symbolic toolkit for polynomial distributions.

Symbol algebras and their Tanaka prolongations are computed over the
rationals; the finite-type tests and symmetry checks build on them.
"""

__version__ = "0.1.0"

from .errors import (ChartMismatchError, ConsistencyError, InputError, NonRegularPointError,  # noqa: E402
                     NotBracketGeneratingError, ParseError, PropertyViolation, SizeGuardError,
                     TanakaError)
from .fieldalg import Polynomial, PointQ, VectorField, apply, evaluate, lie_bracket  # noqa: E402
from .flag import (cauchy_characteristic_space, derived_flag, flag_at,  # noqa: E402
                   is_bracket_generating, regularity_probe)
from .gnla import check_fundamental, free_gnla, free_total_dim, gnla_at, heisenberg, witt_dim  # noqa: E402
from .prolong import bracket_prolonged, prolong_step, tanaka_prolongation  # noqa: E402
from .fintype import (char_variety, finiteness_report, h0, symmetry_bound_free,  # noqa: E402
                      theorem2_finite)
from .symcheck import closure, filtration_degree, graded_symbol, is_symmetry, psi  # noqa: E402
from .modelio import emit_report, parse_model, print_model  # noqa: E402
from .config import Config  # noqa: E402

__all__ = [
    "ChartMismatchError", "ConsistencyError", "InputError", "NonRegularPointError",
    "NotBracketGeneratingError", "ParseError", "PropertyViolation", "SizeGuardError", "TanakaError",
    "Polynomial", "PointQ", "VectorField", "apply", "evaluate", "lie_bracket",
    "cauchy_characteristic_space", "derived_flag", "flag_at", "is_bracket_generating", "regularity_probe",
    "check_fundamental", "free_gnla", "free_total_dim", "gnla_at", "heisenberg", "witt_dim",
    "bracket_prolonged", "prolong_step", "tanaka_prolongation",
    "char_variety", "finiteness_report", "h0", "symmetry_bound_free", "theorem2_finite",
    "closure", "filtration_degree", "graded_symbol", "is_symmetry", "psi",
    "emit_report", "parse_model", "print_model", "Config",
]
