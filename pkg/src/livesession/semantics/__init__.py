from .evaluation import DEFAULT_VALUES, eval_expr, get_prims, shopping_prims
from .labels import BraL, RecvL, SelL, SendL, Tau, TauSel, TAU, sel_of_label, sel_of_trace
from .transitions import EXECUTED, Move, Stepper, node_at, occurrences, step
from .explore import ExploreConfig, ExploreResult, Explorer, Trace, explore
