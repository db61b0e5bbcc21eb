from .approx import GenEntry, M_of, PrimEntry, approx_A, freeze_env, gamma_plus, std_of
from .env import (
    DAt, DTau, DTauSel, EnvStep, balanced, completed, env_key, env_step,
    matching_steps, pending_update, sim,
)
from .errors import CheckResult, LivenessTypeError, SessionTypeError, TypingFailure, Unsupported
from .liveness import LiveChecker, check_live, synth_invariant, validates
from .standard import check_std
