"""Classical ground truth for antisymmetrized target+projectile states.

Two independent constructions are provided: a coset sum over the C(N_T+N_p,
N_p) ways of placing the projectile, using the internal antisymmetry of each
subsystem, and a brute-force signed sum over all (N_T+N_p)! orderings of the
orbital list.  Both return states over the slot qubits only (no ancillae).
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .layout import PROJECTILE_SIDE, TARGET_SIDE, AntisymConfig
from .qstate import StateVector, apply_cswap_block, check_capacity


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign by inversion counting."""
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def single_particle_index(orbital: int, side: int, n: int) -> int:
    return orbital | (side << (n - 1))


@dataclass(frozen=True)
class SlaterSpec:
    orbitals: tuple[int, ...]
    side: int

    def __post_init__(self):
        object.__setattr__(self, "orbitals", tuple(int(o) for o in self.orbitals))
        if len(set(self.orbitals)) != len(self.orbitals):
            raise ValueError(f"orbitals must be distinct (Pauli exclusion): {self.orbitals}")
        if any(o < 0 for o in self.orbitals):
            raise ValueError("orbital indices must be non-negative")
        if self.side not in (TARGET_SIDE, PROJECTILE_SIDE):
            raise ValueError(f"side must be 0 or 1, got {self.side}")


@dataclass(frozen=True)
class SubsystemState:
    """Superposition of Slater determinants sharing one side."""

    terms: tuple[tuple[complex, tuple[int, ...]], ...]
    side: int

    def __post_init__(self):
        terms = tuple((complex(c), tuple(int(o) for o in orbs)) for c, orbs in self.terms)
        if not terms:
            raise ValueError("subsystem needs at least one determinant")
        counts = {len(orbs) for _, orbs in terms}
        if len(counts) != 1:
            raise ValueError("all determinants must have the same particle count")
        for _, orbs in terms:
            SlaterSpec(orbs, self.side)
        object.__setattr__(self, "terms", terms)

    @property
    def particle_count(self) -> int:
        return len(self.terms[0][1])

    @property
    def is_determinant(self) -> bool:
        return len(self.terms) == 1

    @classmethod
    def determinant(cls, orbitals: Sequence[int], side: int) -> SubsystemState:
        return cls(((1.0, tuple(orbitals)),), side)

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "terms": [
                {"coeff": [c.real, c.imag], "orbitals": list(orbs)} for c, orbs in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> SubsystemState:
        terms = []
        for t in d["terms"]:
            coeff = t.get("coeff", [1.0, 0.0])
            if isinstance(coeff, (int, float)):
                coeff = [coeff, 0.0]
            terms.append((complex(coeff[0], coeff[1]), tuple(t["orbitals"])))
        return cls(tuple(terms), int(d["side"]))

    @classmethod
    def from_json(cls, text: str) -> SubsystemState:
        return cls.from_dict(json.loads(text))


def slot_blocks(num_slots: int, n: int) -> list[list[int]]:
    return [list(range(s * n, s * n + n)) for s in range(num_slots)]


def slater_state(spec: SlaterSpec, n: int) -> StateVector:
    """(1/sqrt(P!)) sum_pi sgn(pi) |phi_pi(1)> ... |phi_pi(P)>, one n-qubit block per slot."""
    limit = 2 ** (n - 1)
    if any(o >= limit for o in spec.orbitals):
        raise ValueError(f"orbital index >= {limit} does not fit in {n - 1} qubits")
    p = len(spec.orbitals)
    check_capacity(p * n)
    amps = np.zeros(1 << (p * n), dtype=np.complex128)
    values = [single_particle_index(o, spec.side, n) for o in spec.orbitals]
    norm = 1.0 / math.sqrt(math.factorial(p))
    for perm in permutations(range(p)):
        index = sum(values[perm[s]] << (s * n) for s in range(p))
        amps[index] += permutation_sign(perm) * norm
    return StateVector(p * n, amps)


def _raw_vector(sub: SubsystemState, n: int) -> np.ndarray:
    total = None
    for coeff, orbs in sub.terms:
        v = slater_state(SlaterSpec(orbs, sub.side), n).amps * coeff
        total = v if total is None else total + v
    return total


def subsystem_vector(sub: SubsystemState, n: int) -> StateVector:
    total = _raw_vector(sub, n)
    norm = np.linalg.norm(total)
    if norm < 1e-14:
        raise ValueError("subsystem superposition has zero norm")
    return StateVector(sub.particle_count * n, total / norm)


def antisymmetry_residual(state: StateVector, slots: Sequence[Sequence[int]]) -> float:
    """max over slot pairs of || P_ij psi + psi ||; zero for a fermionic state."""
    worst = 0.0
    for i, j in combinations(range(len(slots)), 2):
        swapped = apply_cswap_block(state.copy(), (), slots[i], slots[j])
        worst = max(worst, float(np.linalg.norm(swapped.amps + state.amps)))
    return worst


def _check_sides(target: SubsystemState, projectile: SubsystemState, cfg: AntisymConfig):
    if target.side != TARGET_SIDE or projectile.side != PROJECTILE_SIDE:
        raise ValueError("target must sit on side 0 and projectile on side 1")
    if target.particle_count != cfg.n_target or projectile.particle_count != cfg.n_projectile:
        raise ValueError("subsystem particle counts do not match the configuration")


def _canonical_matching(ones: Sequence[int], nt: int, m: int) -> list[tuple[int, int]]:
    # i-th target slot that receives a projectile <-> i-th projectile slot giving one up
    takers = [s for s in range(nt) if s in ones]
    givers = [s for s in range(nt, m) if s not in ones]
    return list(zip(takers, givers))


def coset_antisymmetrize(
    target_vec: StateVector, projectile_vec: StateVector, cfg: AntisymConfig
) -> StateVector:
    """Coset sum over projectile placements with sign (-1)^(#exchanges)."""
    n = cfg.qubits_per_particle
    m = cfg.num_slots
    check_capacity(m * n)
    product = np.kron(projectile_vec.amps, target_vec.amps)
    blocks = slot_blocks(m, n)
    total = np.zeros_like(product)
    for ones in combinations(range(m), cfg.n_projectile):
        state = StateVector(m * n, product.copy())
        matching = _canonical_matching(ones, cfg.n_target, m)
        for a, b in matching:
            apply_cswap_block(state, (), blocks[a], blocks[b])
        total += (-1) ** len(matching) * state.amps
    total /= math.sqrt(math.comb(m, cfg.n_projectile))
    return StateVector(m * n, total)


def oracle_antisymmetrize(
    target: SubsystemState, projectile: SubsystemState, cfg: AntisymConfig
) -> StateVector:
    """Coset oracle, expanded by linearity over pairs of input determinants."""
    _check_sides(target, projectile, cfg)
    n = cfg.qubits_per_particle
    scale = np.linalg.norm(_raw_vector(target, n)) * np.linalg.norm(_raw_vector(projectile, n))
    if scale < 1e-14:
        raise ValueError("subsystem superposition has zero norm")
    total = np.zeros(1 << (cfg.num_slots * n), dtype=np.complex128)
    for ct, ot in target.terms:
        t = slater_state(SlaterSpec(ot, TARGET_SIDE), n)
        for cp, op in projectile.terms:
            p = slater_state(SlaterSpec(op, PROJECTILE_SIDE), n)
            total += ct * cp * coset_antisymmetrize(t, p, cfg).amps
    out = StateVector(cfg.num_slots * n, total / scale)
    norm = out.norm_squared()
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"coset terms are not orthonormal (norm^2 = {norm})")
    return out


def oracle_full_permutation_check(
    target: SubsystemState, projectile: SubsystemState, cfg: AntisymConfig
) -> StateVector:
    """Brute-force (N_T+N_p)! determinant over the joint orbital list."""
    _check_sides(target, projectile, cfg)
    if not (target.is_determinant and projectile.is_determinant):
        raise ValueError("full-permutation oracle takes single determinants only")
    (ct, ot), (cp, op) = target.terms[0], projectile.terms[0]
    n = cfg.qubits_per_particle
    # same orbital on opposite sides is a different single-particle state
    if any(o >= 2 ** (n - 1) for o in ot + op):
        raise ValueError("orbital index out of range")
    values = [single_particle_index(o, TARGET_SIDE, n) for o in ot] + [
        single_particle_index(o, PROJECTILE_SIDE, n) for o in op
    ]
    p = len(values)
    check_capacity(p * n)
    amps = np.zeros(1 << (p * n), dtype=np.complex128)
    for perm in permutations(range(p)):
        index = sum(values[perm[s]] << (s * n) for s in range(p))
        amps[index] += permutation_sign(perm)
    phase = (ct / abs(ct)) * (cp / abs(cp))
    amps *= phase / math.sqrt(math.factorial(p))
    return StateVector(p * n, amps)


def random_subsystem(
    rng: np.random.Generator, particles: int, side: int, n: int, max_terms: int = 3
) -> SubsystemState:
    """1..max_terms distinct determinants with complex Gaussian coefficients."""
    orbitals = 2 ** (n - 1)
    pool = list(combinations(range(orbitals), particles))
    if not pool:
        raise ValueError(f"{particles} particles do not fit in {orbitals} orbitals")
    count = min(int(rng.integers(1, max_terms + 1)), len(pool))
    chosen = rng.choice(len(pool), size=count, replace=False)
    terms = []
    for idx in sorted(int(i) for i in chosen):
        orbs = list(pool[idx])
        rng.shuffle(orbs)
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, tuple(int(o) for o in orbs)))
    return SubsystemState(tuple(terms), side)
