"""OpenQASM 3.0 emission (no parsing, no basis decomposition)."""

from __future__ import annotations

from .ir import CLOSED, Circuit, Gate

_NAMES = {"X": "x", "MCX": "x", "Z": "z", "H": "h", "Ry": "ry"}


def _modifiers(g: Gate) -> str:
    return "".join("ctrl @ " if pol == CLOSED else "negctrl @ " for _, pol in g.controls)


def _operands(g: Gate, targets) -> str:
    return ", ".join(f"q[{q}]" for q in (*g.control_qubits, *targets))


def _gate_lines(g: Gate) -> list[str]:
    mods = _modifiers(g)
    if g.kind == "BlockSwap":
        a, b = g.blocks
        return [f"{mods}swap {_operands(g, (qa, qb))};" for qa, qb in zip(a, b)]
    name = _NAMES[g.kind]
    if g.kind == "Ry":
        name = f"ry({g.angle!r})"
    return [f"{mods}{name} {_operands(g, g.targets)};"]


def emit_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";']
    if c.qubit_names is not None:
        for i, name in enumerate(c.qubit_names):
            lines.append(f"// q[{i}] = {name}")
    lines.append(f"qubit[{c.num_qubits}] q;")
    for g in c.gates:
        if g.label:
            lines.append(f"// {g.label}")
        lines.extend(_gate_lines(g))
    return "\n".join(lines) + "\n"
