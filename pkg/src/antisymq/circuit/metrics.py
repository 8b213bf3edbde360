"""Resource accounting for IR circuits.

Cost model (CNOT-equivalents):
  * uncontrolled width-w BlockSwap: 3w CNOTs
  * controlled width-w BlockSwap with c controls: 2w CNOTs plus w NOTs with
    c+1 controls, tallied in ``multicontrol_histogram``
  * singly-controlled X or Z: 1 CNOT; singly-controlled Ry or H: 2 CNOTs
  * anything with c >= 2 controls goes to the histogram, never decomposed
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import asdict, dataclass, field

from .ir import Circuit, Gate

_ANCILLA_NAME = re.compile(r"^[aw]\d+$")


@dataclass(frozen=True)
class ResourceReport:
    gate_count_by_kind: dict[str, int] = field(default_factory=dict)
    multicontrol_histogram: dict[int, int] = field(default_factory=dict)
    swap_count: int = 0
    ancilla_count: int = 0
    depth: int = 0
    cnot_equivalent: int = 0
    stage_gate_counts: dict[str, int] = field(default_factory=dict)

    @property
    def total_gates(self) -> int:
        return sum(self.gate_count_by_kind.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["multicontrol_histogram"] = {
            str(k): v for k, v in sorted(self.multicontrol_histogram.items())
        }
        d["gate_count_by_kind"] = dict(sorted(self.gate_count_by_kind.items()))
        d["stage_gate_counts"] = dict(sorted(self.stage_gate_counts.items()))
        return d


def depth(gates) -> int:
    """Greedy earliest-layer depth; gates sharing any qubit never share a layer."""
    last: dict[int, int] = {}
    best = 0
    for g in gates:
        layer = 1 + max((last.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            last[q] = layer
        best = max(best, layer)
    return best


def layers(gates) -> list[int]:
    """Layer index (1-based) assigned to each gate by the greedy schedule."""
    last: dict[int, int] = {}
    out = []
    for g in gates:
        layer = 1 + max((last.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            last[q] = layer
        out.append(layer)
    return out


def _cost(g: Gate, hist: Counter) -> int:
    c = len(g.controls)
    if g.kind == "BlockSwap":
        if c == 0:
            return 3 * g.width
        hist[c + 1] += g.width
        return 2 * g.width
    if c == 0:
        return 0
    if c >= 2:
        hist[c] += 2 if g.kind in ("Ry", "H") else 1
        return 0
    return 2 if g.kind in ("Ry", "H") else 1


def metrics(c: Circuit) -> ResourceReport:
    kinds: Counter = Counter()
    stages: Counter = Counter()
    hist: Counter = Counter()
    cnots = 0
    for g in c.gates:
        kinds[g.kind] += 1
        if g.stage:
            stages[g.stage] += 1
        cnots += _cost(g, hist)
    ancillae = 0
    if c.qubit_names is not None:
        ancillae = sum(1 for name in c.qubit_names if _ANCILLA_NAME.match(name))
    return ResourceReport(
        gate_count_by_kind=dict(kinds),
        multicontrol_histogram=dict(hist),
        swap_count=kinds.get("BlockSwap", 0),
        ancilla_count=ancillae,
        depth=depth(c.gates),
        cnot_equivalent=cnots,
        stage_gate_counts=dict(stages),
    )
