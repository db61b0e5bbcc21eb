from .terms import *  # noqa: F401,F403
from .terms import Chan, Polarity, Plus, Minus, chan
from .ops import (
    NonContractive, free_names, free_pvars, free_data_vars, labels_of,
    subst_pvar, subst_type, subst_value, subterms, unfold, is_contractive,
    is_closed,
)
from .conventions import Violation, ViolationKind, check_conventions, simple_for
from .parser import (
    ParseError, parse_env, parse_expr, parse_process, parse_type, parse_value, parse_values,
)
from .printer import show_env, show_expr, show_process, show_type, show_value
