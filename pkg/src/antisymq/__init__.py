"""Antisymmetrization of target + projectile fermion states with Dicke-state ancillae."""

from .antisym import (
    build_full_circuit,
    generate_reference_schedule,
    generate_shared_schedule,
    run_antisymmetrization,
    validate_schedule,
)
from .layout import AntisymConfig, ConfigError, build_layout
from .oracle import SubsystemState, oracle_antisymmetrize

__version__ = "0.1.0"

__all__ = [
    "AntisymConfig",
    "ConfigError",
    "SubsystemState",
    "build_full_circuit",
    "build_layout",
    "generate_reference_schedule",
    "generate_shared_schedule",
    "oracle_antisymmetrize",
    "run_antisymmetrization",
    "validate_schedule",
]
