"""Gate-list IR, resource metrics, QASM emission and rewrite passes."""

from .ir import (
    CLOSED,
    KINDS,
    OPEN,
    Circuit,
    Gate,
    apply_gate,
    block_swap,
    cnot,
    h,
    mcx,
    ry,
    simulate,
    x,
    z,
)
from .metrics import ResourceReport, depth, layers, metrics
from .passes import DickeConstraint, parallelize, peephole_collapse
from .qasm import emit_qasm

__all__ = [
    "CLOSED",
    "KINDS",
    "OPEN",
    "Circuit",
    "DickeConstraint",
    "Gate",
    "ResourceReport",
    "apply_gate",
    "block_swap",
    "cnot",
    "depth",
    "emit_qasm",
    "h",
    "layers",
    "mcx",
    "metrics",
    "parallelize",
    "peephole_collapse",
    "ry",
    "simulate",
    "x",
    "z",
]
