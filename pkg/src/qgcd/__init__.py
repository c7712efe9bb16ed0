"""Phase-estimation GCD: simulator, circuits and classical post-processing."""

from .numerics import (
    DomainError,
    ProblemInstance,
    RangeError,
    Rational,
    cf_convergents,
    lcm,
    precompute_multiples,
    reduce_fraction,
    stein_gcd,
)
from .circuit import Circuit, build_qpe_circuit, emit_text, parse_text, resource_report
from .qpe import (
    RunRecord,
    choose_t,
    eigenstate,
    exact_distribution,
    protocol_a,
    protocol_b,
    recover_fraction,
    run_kitaev_qpe,
    run_statevector_qpe,
    statevector_distribution,
)
from .statevector import ResourceError, StateVector, init_state

__version__ = "0.1.0"
