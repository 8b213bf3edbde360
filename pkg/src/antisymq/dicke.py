"""Dicke states D^m_k: direct amplitudes and a deterministic gate preparation.

The gate version is the split-and-cyclic-shift cascade: start from
|0^(m-k) 1^k> (ones on the highest k qubits) and apply SCS blocks built from
CNOTs and (doubly) controlled Ry rotations.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .circuit.ir import CLOSED, Circuit, Gate, cnot, ry, x
from .qstate import StateVector


@dataclass(frozen=True)
class DickeSpec:
    m: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.m:
            raise ValueError(f"Dicke spec needs 1 <= k <= m, got m={self.m}, k={self.k}")


def weight_k_indices(m: int, k: int) -> np.ndarray:
    return np.array(
        sorted(sum(1 << q for q in ones) for ones in combinations(range(m), k)), dtype=np.int64
    )


def dicke_amplitudes(spec: DickeSpec) -> StateVector:
    amps = np.zeros(1 << spec.m, dtype=np.complex128)
    amps[weight_k_indices(spec.m, spec.k)] = 1.0 / math.sqrt(math.comb(spec.m, spec.k))
    return StateVector(spec.m, amps)


def _scs(qubits: Sequence[int], high: int, low: int, label: str) -> list[Gate]:
    # qubits[i - 1] is the i-th qubit in the 1-based numbering of the cascade
    def q(i: int) -> int:
        return qubits[i - 1]

    gates: list[Gate] = []
    for index in range(high, high - low, -1):
        theta = 2.0 * math.acos(math.sqrt((high - index + 1) / high))
        if index == high:
            gates.append(cnot(q(high - 1), q(high), label))
            gates.append(ry(theta, q(high - 1), [(q(high), CLOSED)], label))
            gates.append(cnot(q(high - 1), q(high), label))
        else:
            gates.append(cnot(q(index - 1), q(high), label))
            gates.append(ry(theta, q(index - 1), [(q(high), CLOSED), (q(index), CLOSED)], label))
            gates.append(cnot(q(index - 1), q(high), label))
    return gates


def dicke_gates(spec: DickeSpec, qubits: Sequence[int], label: str = "dicke") -> list[Gate]:
    """Gates preparing D^m_k on ``qubits`` (lowest first) from |0...0>."""
    if len(qubits) != spec.m:
        raise ValueError(f"need {spec.m} qubits, got {len(qubits)}")
    m, k = spec.m, spec.k
    gates = [x(q, label) for q in qubits[m - k :]]
    if k == m:
        return gates
    for high in range(m, k, -1):
        gates += _scs(qubits, high, k, label)
    for high in range(k, 1, -1):
        gates += _scs(qubits, high, high - 1, label)
    return gates


def dicke_circuit(spec: DickeSpec) -> Circuit:
    names = tuple(f"a{i}" for i in range(1, spec.m + 1))
    return Circuit(spec.m, tuple(dicke_gates(spec, list(range(spec.m)))), names)
