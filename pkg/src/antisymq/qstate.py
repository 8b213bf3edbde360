"""Dense statevector engine.

Amplitude index bit ``b`` holds the basis value of qubit ``b`` (qubit 0 is the
least significant bit).  Gates act in place on a ``(2,) * n`` tensor view of
the amplitude buffer; every supported gate is a permutation, a sign flip or a
2x2 rotation restricted to the subspace selected by its controls, so each
kernel touches only the controlled slice.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence

import numpy as np

DEFAULT_MAX_QUBITS = 26
MAX_QUBITS_ENV = "ANTISYMQ_MAX_QUBITS"

# A control is (qubit, required bit value): 1 = closed (filled dot), 0 = open.
Control = tuple[int, int]


class CapacityError(ValueError):
    """Requested register exceeds the configured qubit capacity."""


def max_qubits() -> int:
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None or raw == "":
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{MAX_QUBITS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{MAX_QUBITS_ENV} must be positive, got {value}")
    return value


def check_capacity(num_qubits: int) -> None:
    limit = max_qubits()
    if num_qubits > limit:
        raise CapacityError(
            f"{num_qubits} qubits exceeds capacity {limit} "
            f"(set {MAX_QUBITS_ENV} to raise it)"
        )


class StateVector:
    """Owned complex128 amplitude buffer of length ``2**num_qubits``."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits: int, amps: np.ndarray | None = None):
        if num_qubits < 0:
            raise ValueError("num_qubits must be non-negative")
        check_capacity(num_qubits)
        size = 1 << num_qubits
        if amps is None:
            amps = np.zeros(size, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.ascontiguousarray(amps, dtype=np.complex128).reshape(-1)
            if amps.shape[0] != size:
                raise ValueError(
                    f"amplitude array has length {amps.shape[0]}, expected {size}"
                )
        self.num_qubits = num_qubits
        self.amps = amps

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> StateVector:
        check_capacity(num_qubits)
        if not 0 <= index < (1 << num_qubits):
            raise ValueError(f"basis index {index} out of range")
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_bits(cls, bits: str) -> StateVector:
        """Basis state from a ket label written most significant qubit first."""
        return cls.basis(len(bits), int(bits, 2) if bits else 0)

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amps.copy())

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.num_qubits) if self.num_qubits else self.amps

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def _check_qubits(state: StateVector, qubits: Iterable[int]) -> list[int]:
    qs = list(qubits)
    for q in qs:
        if not isinstance(q, (int, np.integer)) or not 0 <= q < state.num_qubits:
            raise IndexError(f"qubit {q} out of range for {state.num_qubits}-qubit state")
    if len(set(qs)) != len(qs):
        raise ValueError(f"overlapping qubits in gate: {qs}")
    return qs


def _normalize_controls(controls: Iterable) -> list[Control]:
    out = []
    for c in controls:
        q, pol = c
        pol = int(pol)
        if pol not in (0, 1):
            raise ValueError(f"control polarity must be 0 or 1, got {pol}")
        out.append((int(q), pol))
    return out


def _index(n: int, fixed: dict[int, int]) -> tuple:
    # tensor axis of qubit q is n - 1 - q
    idx: list = [slice(None)] * n
    for q, v in fixed.items():
        idx[n - 1 - q] = v
    return tuple(idx)


def _prepare(state: StateVector, controls, targets: Sequence[int]):
    ctrl = _normalize_controls(controls)
    _check_qubits(state, [q for q, _ in ctrl] + list(targets))
    return dict(ctrl), state.tensor()


def apply_x(state: StateVector, q: int, controls: Iterable = ()) -> StateVector:
    fixed, view = _prepare(state, controls, [q])
    i0 = _index(state.num_qubits, {**fixed, q: 0})
    i1 = _index(state.num_qubits, {**fixed, q: 1})
    tmp = view[i0].copy()
    view[i0] = view[i1]
    view[i1] = tmp
    return state


def apply_mcx(state: StateVector, controls: Iterable, target: int) -> StateVector:
    return apply_x(state, target, controls)


def apply_z(state: StateVector, q: int, controls: Iterable = ()) -> StateVector:
    fixed, view = _prepare(state, controls, [q])
    view[_index(state.num_qubits, {**fixed, q: 1})] *= -1
    return state


def apply_h(state: StateVector, q: int, controls: Iterable = ()) -> StateVector:
    fixed, view = _prepare(state, controls, [q])
    i0 = _index(state.num_qubits, {**fixed, q: 0})
    i1 = _index(state.num_qubits, {**fixed, q: 1})
    a0 = view[i0].copy()
    a1 = view[i1].copy()
    r = 1.0 / np.sqrt(2.0)
    view[i0] = (a0 + a1) * r
    view[i1] = (a0 - a1) * r
    return state


def apply_ry(state: StateVector, theta: float, q: int, controls: Iterable = ()) -> StateVector:
    fixed, view = _prepare(state, controls, [q])
    i0 = _index(state.num_qubits, {**fixed, q: 0})
    i1 = _index(state.num_qubits, {**fixed, q: 1})
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    a0 = view[i0].copy()
    a1 = view[i1].copy()
    view[i0] = c * a0 - s * a1
    view[i1] = s * a0 + c * a1
    return state


def apply_cswap_block(
    state: StateVector,
    controls: Iterable,
    block_a: Sequence[int],
    block_b: Sequence[int],
) -> StateVector:
    """Exchange two equal-width qubit blocks rank by rank where controls hold."""
    block_a, block_b = list(block_a), list(block_b)
    if len(block_a) != len(block_b):
        raise ValueError(f"block widths differ: {len(block_a)} vs {len(block_b)}")
    fixed, view = _prepare(state, controls, block_a + block_b)
    n = state.num_qubits
    for qa, qb in zip(block_a, block_b):
        i01 = _index(n, {**fixed, qa: 0, qb: 1})
        i10 = _index(n, {**fixed, qa: 1, qb: 0})
        tmp = view[i01].copy()
        view[i01] = view[i10]
        view[i10] = tmp
    return state


def apply_swap(state: StateVector, q1: int, q2: int) -> StateVector:
    return apply_cswap_block(state, (), [q1], [q2])


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"size mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def ancilla_ground_weight(state: StateVector, ancillae: Iterable[int]) -> float:
    """Probability that every listed qubit reads 0."""
    qs = _check_qubits(state, ancillae)
    if not qs:
        return state.norm_squared()
    sub = state.tensor()[_index(state.num_qubits, {q: 0 for q in qs})]
    return float(np.vdot(sub, sub).real)


def embed(state: StateVector, num_qubits: int) -> StateVector:
    """Extend with fresh |0> qubits placed above the existing ones."""
    if num_qubits < state.num_qubits:
        raise ValueError("cannot embed into a smaller register")
    check_capacity(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[: state.amps.shape[0]] = state.amps
    return StateVector(num_qubits, amps)


def kron(*states: StateVector) -> StateVector:
    """Tensor product with the first argument on the lowest qubits."""
    total = sum(s.num_qubits for s in states)
    check_capacity(total)
    amps = np.ones(1, dtype=np.complex128)
    for s in states:
        amps = np.kron(s.amps, amps)
    return StateVector(total, amps)


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    amps /= np.linalg.norm(amps)
    return StateVector(num_qubits, amps)
