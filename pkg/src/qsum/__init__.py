"""Exact state-vector simulation of the adaptive multi-query quantum SUM algorithm."""
from .algorithm import (
    AlgorithmParams,
    ClassicalRead,
    CoreBlock,
    ExecutionPlan,
    GuessBlock,
    Oracle,
    RunReport,
    classical_read,
    initial_state,
    plan,
    run_core,
    run_sum,
    trace_small,
)
from .analysis import (
    a_state,
    central_mass,
    figure1_curves,
    lemma3_prob,
    lemma4_check,
    success_probability,
    vandam_identify_prob,
    vandam_sum_bound,
)
from .core import (
    JointState,
    OutcomeDistribution,
    fourier_state,
    measure_second_register,
    phase_equal,
)
from .operators import FunctionTable, UnitaryOp, fourier_op, j_op, k_op, oracle_op, shift_op
from .verify import GridSpec, check_suite, enumerate_oracles, exhaustive_success

__version__ = "0.1.0"
