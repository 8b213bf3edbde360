"""Register layout: particle slots, side qubits, Dicke ancillae, work ancillae.

Slots are numbered from 1.  Slots 1..N_T belong to the target and
N_T+1..N_T+N_p to the projectile.  Each slot is a contiguous block of ``n``
qubits whose highest qubit is the side qubit (0 = target side, 1 =
projectile side); the lower ``n - 1`` qubits hold the orbital index in binary.
Dicke ancilla a_i follows all slot blocks and is paired with slot i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import StateVector, check_capacity

TARGET_SIDE, PROJECTILE_SIDE = 0, 1


class ConfigError(ValueError):
    """Invalid antisymmetrization configuration."""


@dataclass(frozen=True)
class AntisymConfig:
    n_target: int
    n_projectile: int
    qubits_per_particle: int = 2
    extra_work_ancillae: int = 0

    def __post_init__(self):
        nt, np_, n = self.n_target, self.n_projectile, self.qubits_per_particle
        if nt < 1 or np_ < 1:
            raise ConfigError("particle counts must be at least 1")
        if np_ > nt:
            raise ConfigError(f"need N_p <= N_T, got N_T={nt}, N_p={np_}")
        if n < 2:
            raise ConfigError("qubits_per_particle must be >= 2 (one side qubit plus orbitals)")
        if 2 ** (n - 1) < nt:
            raise ConfigError(
                f"{n - 1} orbital qubits hold {2 ** (n - 1)} orbitals, fewer than N_T={nt}"
            )
        if self.extra_work_ancillae < 0:
            raise ConfigError("extra_work_ancillae must be non-negative")

    @property
    def num_slots(self) -> int:
        return self.n_target + self.n_projectile

    @property
    def num_orbitals(self) -> int:
        return 2 ** (self.qubits_per_particle - 1)

    def to_dict(self) -> dict:
        return {
            "n_target": self.n_target,
            "n_projectile": self.n_projectile,
            "qubits_per_particle": self.qubits_per_particle,
            "extra_work_ancillae": self.extra_work_ancillae,
        }


@dataclass(frozen=True)
class Slot:
    index: int
    internal: tuple[int, ...]
    side: int

    @property
    def block(self) -> tuple[int, ...]:
        return self.internal + (self.side,)

    @property
    def base(self) -> int:
        return self.internal[0]


@dataclass(frozen=True)
class Layout:
    config: AntisymConfig
    slots: tuple[Slot, ...]
    dicke_ancillae: tuple[int, ...]
    work_ancillae: tuple[int, ...]
    total_qubits: int

    def slot(self, i: int) -> Slot:
        if not 1 <= i <= len(self.slots):
            raise IndexError(f"slot {i} out of range 1..{len(self.slots)}")
        return self.slots[i - 1]

    def ancilla(self, i: int) -> int:
        return self.dicke_ancillae[i - 1]

    def is_target(self, i: int) -> bool:
        return i <= self.config.n_target

    @property
    def slot_qubits(self) -> int:
        return len(self.slots) * self.config.qubits_per_particle

    @property
    def qubit_names(self) -> tuple[str, ...]:
        names = [""] * self.total_qubits
        for s in self.slots:
            for r, q in enumerate(s.internal):
                names[q] = f"s{s.index}.q{r}"
            names[s.side] = f"s{s.index}.side"
        for i, q in enumerate(self.dicke_ancillae, start=1):
            names[q] = f"a{i}"
        for j, q in enumerate(self.work_ancillae, start=1):
            names[q] = f"w{j}"
        return tuple(names)

    def to_dict(self) -> dict:
        nt = self.config.n_target
        return {
            "config": self.config.to_dict(),
            "total_qubits": self.total_qubits,
            "slots": [
                {
                    "slot": s.index,
                    "role": "target" if s.index <= nt else "projectile",
                    "internal": list(s.internal),
                    "side": s.side,
                }
                for s in self.slots
            ],
            "dicke_ancillae": list(self.dicke_ancillae),
            "work_ancillae": list(self.work_ancillae),
        }


def build_layout(cfg: AntisymConfig, *, enforce_capacity: bool = True) -> Layout:
    n = cfg.qubits_per_particle
    m = cfg.num_slots
    slots = tuple(
        Slot(i + 1, tuple(range(i * n, i * n + n - 1)), i * n + n - 1) for i in range(m)
    )
    dicke = tuple(range(m * n, m * n + m))
    work = tuple(range(m * n + m, m * n + m + cfg.extra_work_ancillae))
    total = m * n + m + cfg.extra_work_ancillae
    if enforce_capacity:
        check_capacity(total)
    return Layout(cfg, slots, dicke, work, total)


def side_convention_check(state: StateVector, layout: Layout, tol: float = 1e-12) -> bool:
    """True iff every populated amplitude has target sides 0 and projectile sides 1."""
    if state.num_qubits < layout.slot_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits, layout needs at least {layout.slot_qubits}"
        )
    idx = np.flatnonzero(np.abs(state.amps) > tol)
    for s in layout.slots:
        want = TARGET_SIDE if layout.is_target(s.index) else PROJECTILE_SIDE
        if np.any(((idx >> s.side) & 1) != want):
            return False
    return True
