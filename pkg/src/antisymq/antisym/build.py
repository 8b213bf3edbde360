"""Full antisymmetrization circuit and its statevector run."""

from __future__ import annotations

import numpy as np

from ..circuit import (
    CLOSED,
    Circuit,
    DickeConstraint,
    Gate,
    block_swap,
    cnot,
    mcx,
    parallelize,
    peephole_collapse,
    simulate,
    z,
)
from ..dicke import DickeSpec, dicke_amplitudes, dicke_gates
from ..layout import (
    PROJECTILE_SIDE,
    TARGET_SIDE,
    AntisymConfig,
    Layout,
    build_layout,
)
from ..oracle import (
    SubsystemState,
    antisymmetry_residual,
    coset_antisymmetrize,
    slot_blocks,
    subsystem_vector,
)
from ..qstate import StateVector, ancilla_ground_weight, embed, fidelity, kron
from .schedule import VARIANTS, SwapSchedule, generate_schedule


def swap_gates(schedule: SwapSchedule, layout: Layout, flag: int | None = None) -> list[Gate]:
    """Controlled BlockSwaps for each op; multi-term ops go through ``flag``."""
    gates: list[Gate] = []
    for op in schedule.ops:
        a, b = layout.slot(op.slot_a).block, layout.slot(op.slot_b).block
        label = f"swap:{op.order}"
        controls = [
            [(layout.ancilla(anc), val) for anc, val in term] for term in op.terms
        ]
        if len(controls) == 1:
            gates.append(block_swap(a, b, controls[0], label))
            continue
        if flag is None:
            raise ValueError("multi-term ops need a flag qubit")
        compute = [mcx(c, flag, f"flag:{op.order}") for c in controls]
        gates += compute
        gates.append(block_swap(a, b, [(flag, CLOSED)], label))
        gates += compute[::-1]
    return gates


def build_full_circuit(
    cfg: AntisymConfig,
    variant: str = "shared",
    *,
    use_gate_dicke: bool = False,
    parallel_ancillae: int | None = None,
    collapse: bool = False,
    flag_policy: str = "fresh",
    compile: str | None = None,
    max_controls: int | None = None,
    require_improvement: bool = True,
    schedule: SwapSchedule | None = None,
) -> Circuit:
    """Dicke, swap, phase and uncompute stages on ``build_layout(cfg)``.

    The ``parallel`` variant runs the shared schedule through
    :func:`parallelize` with ``parallel_ancillae`` work qubits (default N_p).
    With ``require_improvement=False`` every run of disjoint swaps is rewritten
    even when that deepens the circuit.
    ``collapse`` merges swap pairs that are exclusive under the Dicke weight
    and is applied before parallelization.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if parallel_ancillae is not None and variant != "parallel":
        raise ValueError("parallel_ancillae only applies to the parallel variant")
    if schedule is None:
        kw = {}
        if variant != "reference":
            kw = {"compile": compile, "max_controls": max_controls}
        schedule = generate_schedule(cfg, variant, **kw)
    elif schedule.config != cfg:
        raise ValueError("schedule was generated for a different configuration")

    layout = build_layout(cfg, enforce_capacity=False)
    names = list(layout.qubit_names)
    num_qubits = layout.total_qubits
    flag = None
    if any(len(op.terms) > 1 for op in schedule.ops):
        flag = num_qubits
        names.append(f"w{len(layout.work_ancillae) + 1}")
        num_qubits += 1

    m, k = cfg.num_slots, cfg.n_projectile
    gates: list[Gate] = []
    if use_gate_dicke:
        gates += dicke_gates(DickeSpec(m, k), layout.dicke_ancillae, label="dicke")
    n_dicke = len(gates)
    gates += swap_gates(schedule, layout, flag)
    tail = [z(layout.ancilla(i), label=f"phase:a{i}") for i in range(1, cfg.n_target + 1)]
    tail += [
        cnot(layout.slot(i).side, layout.ancilla(i), label=f"uncompute:a{i}")
        for i in range(1, m + 1)
    ]
    gates += tail
    # passes never see the Dicke stage, so its gates are not regrouped or reordered
    head = gates[:n_dicke]
    body = Circuit(num_qubits, tuple(gates[n_dicke:]), tuple(names))
    if collapse:
        body = peephole_collapse(
            body, DickeConstraint(layout.dicke_ancillae, k), flag_policy=flag_policy
        )
    if variant == "parallel":
        extra = k if parallel_ancillae is None else parallel_ancillae
        body = parallelize(body, extra, require_improvement=require_improvement)
    return Circuit(body.num_qubits, tuple(head) + body.gates, body.qubit_names)


def _check_subsystem(vec: StateVector, count: int, n: int, side: int, role: str) -> None:
    if vec.num_qubits != count * n:
        raise ValueError(f"{role} state has {vec.num_qubits} qubits, expected {count * n}")
    if abs(vec.norm_squared() - 1.0) > 1e-10:
        raise ValueError(f"{role} state is not normalized")
    idx = np.flatnonzero(np.abs(vec.amps) > 1e-12)
    for s in range(count):
        if np.any(((idx >> (s * n + n - 1)) & 1) != side):
            raise ValueError(f"side_convention_check failed: {role} slot {s + 1} side bit != {side}")
    residual = antisymmetry_residual(vec, slot_blocks(count, n))
    if residual > 1e-10:
        raise ValueError(f"{role} state is not antisymmetric (residual {residual:.3g})")


def _as_vector(state, n: int) -> StateVector:
    if isinstance(state, SubsystemState):
        return subsystem_vector(state, n)
    return state


def run_antisymmetrization(
    target_state,
    projectile_state,
    cfg: AntisymConfig,
    variant: str = "shared",
    *,
    use_gate_dicke: bool = False,
    parallel_ancillae: int | None = None,
    collapse: bool = False,
    flag_policy: str = "fresh",
    compile: str | None = None,
    require_improvement: bool = True,
    circuit: Circuit | None = None,
) -> tuple[StateVector, dict]:
    """Simulate the circuit on |target>|projectile>|Dicke> and report diagnostics.

    States may be :class:`SubsystemState` or raw slot-register vectors.  The
    residual and fidelity are taken on the all-ancillae-zero sector, which is
    not renormalized.
    """
    n = cfg.qubits_per_particle
    targ = _as_vector(target_state, n)
    proj = _as_vector(projectile_state, n)
    _check_subsystem(targ, cfg.n_target, n, TARGET_SIDE, "target")
    _check_subsystem(proj, cfg.n_projectile, n, PROJECTILE_SIDE, "projectile")

    if circuit is None:
        circuit = build_full_circuit(
            cfg,
            variant,
            use_gate_dicke=use_gate_dicke,
            parallel_ancillae=parallel_ancillae,
            collapse=collapse,
            flag_policy=flag_policy,
            compile=compile,
            require_improvement=require_improvement,
        )
    layout = build_layout(cfg, enforce_capacity=False)
    m = cfg.num_slots
    dicke = StateVector(m) if use_gate_dicke else dicke_amplitudes(DickeSpec(m, cfg.n_projectile))
    state = embed(kron(targ, proj, dicke), circuit.num_qubits)
    simulate(circuit, state)

    slot_q = layout.slot_qubits
    ancillae = list(range(slot_q, circuit.num_qubits))
    sector = StateVector(slot_q, state.amps[: 1 << slot_q].copy())
    oracle = coset_antisymmetrize(targ, proj, cfg)
    diagnostics = {
        "fidelity": fidelity(sector, oracle),
        "antisymmetry_residual": antisymmetry_residual(sector, slot_blocks(m, n)),
        "ancilla_ground_weight": ancilla_ground_weight(state, ancillae),
        "norm": float(np.sqrt(state.norm_squared())),
        "num_qubits": circuit.num_qubits,
    }
    return state, diagnostics
