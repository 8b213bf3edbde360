"""Swap schedules, full circuits and end-to-end runs."""

from .build import build_full_circuit, run_antisymmetrization, swap_gates
from .counting import n_perm_binomial, n_perm_sum
from .schedule import (
    COMPILE_MODES,
    VARIANTS,
    BranchReport,
    SwapOp,
    SwapSchedule,
    band_order,
    canonical_matching,
    corrupt_schedule,
    default_control_budget,
    generate_reference_schedule,
    generate_schedule,
    generate_shared_schedule,
    greedy_matching,
    pattern_string,
    patterns,
    schedule_is_valid,
    validate_schedule,
)

__all__ = [
    "COMPILE_MODES",
    "VARIANTS",
    "BranchReport",
    "SwapOp",
    "SwapSchedule",
    "band_order",
    "build_full_circuit",
    "canonical_matching",
    "corrupt_schedule",
    "default_control_budget",
    "generate_reference_schedule",
    "generate_schedule",
    "generate_shared_schedule",
    "greedy_matching",
    "n_perm_binomial",
    "n_perm_sum",
    "pattern_string",
    "patterns",
    "run_antisymmetrization",
    "schedule_is_valid",
    "swap_gates",
    "validate_schedule",
]
