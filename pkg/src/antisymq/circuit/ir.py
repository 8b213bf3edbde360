"""Immutable gate-list IR shared by every circuit generator."""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .. import qstate
from ..qstate import StateVector

KINDS = ("X", "Z", "H", "Ry", "MCX", "BlockSwap")
CLOSED, OPEN = 1, 0
_POL_NAMES = {CLOSED: "closed", OPEN: "open"}
_POL_VALUES = {"closed": CLOSED, "open": OPEN}


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()
    width: int = 1
    angle: float | None = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(
            self, "controls", tuple((int(q), int(p)) for q, p in self.controls)
        )
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        for _, pol in self.controls:
            if pol not in (OPEN, CLOSED):
                raise ValueError(f"bad control polarity {pol}")
        if self.kind == "BlockSwap":
            if self.width < 1 or len(self.targets) != 2 * self.width:
                raise ValueError("BlockSwap needs 2*width targets")
        elif len(self.targets) != 1 or self.width != 1:
            raise ValueError(f"{self.kind} takes exactly one target")
        if self.kind == "X" and self.controls:
            raise ValueError("controlled X must be expressed as MCX")
        if self.kind == "MCX" and not self.controls:
            raise ValueError("MCX needs at least one control")
        if self.kind == "Ry":
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("Ry needs a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise ValueError(f"gate touches a qubit twice: {qs}")

    @property
    def control_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.control_qubits + self.targets

    @property
    def blocks(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if self.kind != "BlockSwap":
            raise AttributeError("only BlockSwap gates have blocks")
        return self.targets[: self.width], self.targets[self.width :]

    @property
    def stage(self) -> str:
        return self.label.split(":", 1)[0] if self.label else ""

    def relabel(self, label: str) -> Gate:
        return Gate(self.kind, self.targets, self.controls, self.width, self.angle, label)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "controls": [{"q": q, "pol": _POL_NAMES[p]} for q, p in self.controls],
            "targets": list(self.targets),
            "width": self.width,
            "label": self.label,
        }
        if self.angle is not None:
            d["angle"] = self.angle
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Gate:
        return cls(
            kind=d["kind"],
            targets=tuple(d["targets"]),
            controls=tuple((c["q"], _POL_VALUES[c["pol"]]) for c in d.get("controls", [])),
            width=d.get("width", 1),
            angle=d.get("angle"),
            label=d.get("label", ""),
        )


def x(q: int, label: str = "") -> Gate:
    return Gate("X", (q,), label=label)


def z(q: int, controls: Iterable = (), label: str = "") -> Gate:
    return Gate("Z", (q,), tuple(controls), label=label)


def h(q: int, controls: Iterable = (), label: str = "") -> Gate:
    return Gate("H", (q,), tuple(controls), label=label)


def ry(theta: float, q: int, controls: Iterable = (), label: str = "") -> Gate:
    return Gate("Ry", (q,), tuple(controls), angle=float(theta), label=label)


def mcx(controls: Iterable, target: int, label: str = "") -> Gate:
    return Gate("MCX", (target,), tuple(controls), label=label)


def cnot(control: int, target: int, label: str = "") -> Gate:
    return mcx([(control, CLOSED)], target, label)


def block_swap(
    block_a: Sequence[int], block_b: Sequence[int], controls: Iterable = (), label: str = ""
) -> Gate:
    if len(block_a) != len(block_b):
        raise ValueError("BlockSwap blocks must have equal width")
    return Gate(
        "BlockSwap", tuple(block_a) + tuple(block_b), tuple(controls), len(block_a), label=label
    )


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()
    qubit_names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.qubit_names is not None:
            names = tuple(self.qubit_names)
            if len(names) != self.num_qubits:
                raise ValueError("qubit_names length must equal num_qubits")
            object.__setattr__(self, "qubit_names", names)
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate {g} uses qubit {q} outside register")

    def __len__(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.num_qubits, tuple(gates), self.qubit_names)

    def then(self, other: Circuit) -> Circuit:
        """Concatenate; the wider register and its names win."""
        wide = self if self.num_qubits >= other.num_qubits else other
        return Circuit(wide.num_qubits, self.gates + other.gates, wide.qubit_names)

    def widened(self, extra_names: Sequence[str]) -> Circuit:
        names = None
        if self.qubit_names is not None:
            names = self.qubit_names + tuple(extra_names)
        return Circuit(self.num_qubits + len(extra_names), self.gates, names)

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "qubit_names": list(self.qubit_names) if self.qubit_names is not None else None,
            "gates": [g.to_dict() for g in self.gates],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> Circuit:
        names = d.get("qubit_names")
        return cls(
            d["num_qubits"],
            tuple(Gate.from_dict(g) for g in d["gates"]),
            tuple(names) if names is not None else None,
        )

    @classmethod
    def from_json(cls, text: str) -> Circuit:
        return cls.from_dict(json.loads(text))


def apply_gate(state: StateVector, g: Gate) -> StateVector:
    if g.kind in ("X", "MCX"):
        return qstate.apply_x(state, g.targets[0], g.controls)
    if g.kind == "Z":
        return qstate.apply_z(state, g.targets[0], g.controls)
    if g.kind == "H":
        return qstate.apply_h(state, g.targets[0], g.controls)
    if g.kind == "Ry":
        return qstate.apply_ry(state, g.angle, g.targets[0], g.controls)
    a, b = g.blocks
    return qstate.apply_cswap_block(state, g.controls, a, b)


def simulate(circuit: Circuit, state: StateVector | None = None) -> StateVector:
    """Run the circuit in place on ``state`` (default |0...0>) and return it."""
    if state is None:
        state = StateVector(circuit.num_qubits)
    if state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits, circuit needs {circuit.num_qubits}"
        )
    for g in circuit.gates:
        apply_gate(state, g)
    return state
