"""Stochastic gradient search for maximal Bell violations."""

from ._core import (
    Oracle,
    Scenario,
    bell_value,
    chsh_mbv_from_state,
    cvt_run,
    local_bound,
    make_preset,
    matched_shots_per_setting,
    quantum_maximum,
    run_experiment,
    run_sga,
    theta_dim,
)

__all__ = [
    "Oracle",
    "Scenario",
    "bell_value",
    "chsh_mbv_from_state",
    "cvt_run",
    "local_bound",
    "make_preset",
    "matched_shots_per_setting",
    "quantum_maximum",
    "run_experiment",
    "run_sga",
    "theta_dim",
]
