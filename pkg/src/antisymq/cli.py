"""antisymq command line: generate, simulate, verify, estimate.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .antisym import (
    VARIANTS,
    build_full_circuit,
    corrupt_schedule,
    generate_reference_schedule,
    generate_schedule,
    generate_shared_schedule,
    n_perm_binomial,
    n_perm_sum,
    run_antisymmetrization,
    validate_schedule,
)
from .circuit import emit_qasm, metrics
from .layout import AntisymConfig, ConfigError, build_layout
from .oracle import (
    SubsystemState,
    oracle_antisymmetrize,
    oracle_full_permutation_check,
    random_subsystem,
)
from .qstate import CapacityError, StateVector, fidelity, max_qubits

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def min_qubits_per_particle(n_target: int) -> int:
    return max(2, 1 + math.ceil(math.log2(n_target)))


def _config(args) -> AntisymConfig:
    return AntisymConfig(args.nt, args.np, args.n)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _build_kwargs(args) -> dict:
    kw = {
        "use_gate_dicke": args.gate_dicke,
        "collapse": args.collapse,
        "flag_policy": args.flag_policy,
        "compile": args.compile,
    }
    if args.variant != "parallel" and (args.parallel_ancillae is not None or args.force_parallel):
        raise UsageError("--parallel-ancillae and --force-parallel need --variant parallel")
    if args.variant == "parallel":
        kw["parallel_ancillae"] = args.parallel_ancillae
        kw["require_improvement"] = not args.force_parallel
    return kw


def format_report(report) -> str:
    d = report.to_dict()
    hist = ", ".join(f"{k}c:{v}" for k, v in d["multicontrol_histogram"].items()) or "-"
    kinds = ", ".join(f"{k}:{v}" for k, v in d["gate_count_by_kind"].items()) or "-"
    stages = ", ".join(f"{k}:{v}" for k, v in d["stage_gate_counts"].items()) or "-"
    rows = [
        ("swap operations", d["swap_count"]),
        ("ancillae", d["ancilla_count"]),
        ("depth", d["depth"]),
        ("cnot-equivalent", d["cnot_equivalent"]),
        ("gates by kind", kinds),
        ("gates by stage", stages),
        ("multi-control NOTs", hist),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def describe(cfg: AntisymConfig, schedule, circuit) -> str:
    layout = build_layout(cfg, enforce_capacity=False)
    lines = [f"layout: {circuit.num_qubits} qubits"]
    for s in layout.slots:
        role = "target" if layout.is_target(s.index) else "projectile"
        lines.append(
            f"  slot {s.index} ({role}): orbital q{s.internal[0]}..q{s.internal[-1]}, side q{s.side}"
        )
    lines.append(
        f"  Dicke ancillae a1..a{cfg.num_slots}: q{layout.dicke_ancillae[0]}..q{layout.dicke_ancillae[-1]}"
    )
    extra = circuit.qubit_names[layout.total_qubits :]
    if extra:
        lines.append(f"  work ancillae: {', '.join(extra)}")
    lines.append(f"schedule ({schedule.variant}, {schedule.compile}): {schedule.swap_count} ops")
    for op in schedule.ops:
        terms = " | ".join(
            " ".join(f"a{a}={v}" for a, v in term) for term in op.terms
        )
        lines.append(f"  {op.order:>3}: swap slots {op.slot_a}<->{op.slot_b} if {terms}")
    return "\n".join(lines)


def cmd_generate(args) -> int:
    cfg = _config(args)
    kw = _build_kwargs(args)
    if args.variant == "reference":
        schedule = generate_schedule(cfg, "reference")
    else:
        schedule = generate_schedule(cfg, args.variant, compile=args.compile)
    circuit = build_full_circuit(cfg, args.variant, schedule=schedule, **kw)
    report = metrics(circuit)
    print(f"N_T={cfg.n_target} N_p={cfg.n_projectile} n={cfg.qubits_per_particle} variant={args.variant}")
    if args.describe:
        print(describe(cfg, schedule, circuit))
    print(format_report(report))
    if args.qasm:
        _write(args.qasm, emit_qasm(circuit))
    if args.json:
        payload = {
            "config": cfg.to_dict(),
            "variant": args.variant,
            "layout": build_layout(cfg, enforce_capacity=False).to_dict(),
            "schedule": schedule.to_dict(),
            "circuit": circuit.to_dict(),
            "resources": report.to_dict(),
        }
        _write(args.json, _dump(payload))
    return EXIT_OK


def _load_state(text: str | None) -> SubsystemState | None:
    if text is None:
        return None
    raw = text if text.lstrip().startswith("{") else Path(text).read_text()
    try:
        return SubsystemState.from_json(raw)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse subsystem state: {exc}") from exc


@dataclass
class RunReport:
    config: dict
    variant: str
    fidelity: float
    antisymmetry_residual: float
    ancilla_ground_weight: float
    norm: float
    resources: dict
    wall_time_s: float | None
    inputs: dict
    variant_fidelity: dict

    def to_dict(self) -> dict:
        return asdict(self)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(args.seed)
    target = _load_state(args.target) or random_subsystem(rng, cfg.n_target, 0, cfg.qubits_per_particle)
    projectile = _load_state(args.projectile) or random_subsystem(
        rng, cfg.n_projectile, 1, cfg.qubits_per_particle
    )
    kw = _build_kwargs(args)
    start = time.perf_counter()
    circuit = build_full_circuit(cfg, args.variant, **kw)
    state, diag = run_antisymmetrization(
        target, projectile, cfg, args.variant, use_gate_dicke=args.gate_dicke, circuit=circuit
    )
    oracle = oracle_antisymmetrize(target, projectile, cfg)
    slot_q = cfg.num_slots * cfg.qubits_per_particle
    sector = StateVector(slot_q, state.amps[: 1 << slot_q].copy())
    compare = {}
    for other in args.compare or []:
        other_circuit = build_full_circuit(cfg, other, use_gate_dicke=args.gate_dicke)
        other_state, _ = run_antisymmetrization(
            target, projectile, cfg, other, use_gate_dicke=args.gate_dicke, circuit=other_circuit
        )
        other_sector = StateVector(slot_q, other_state.amps[: 1 << slot_q].copy())
        compare[other] = fidelity(sector, other_sector)
    elapsed = time.perf_counter() - start
    report = RunReport(
        config=cfg.to_dict(),
        variant=args.variant,
        fidelity=fidelity(sector, oracle),
        antisymmetry_residual=diag["antisymmetry_residual"],
        ancilla_ground_weight=diag["ancilla_ground_weight"],
        norm=diag["norm"],
        resources=metrics(circuit).to_dict(),
        wall_time_s=round(elapsed, 3) if args.timing else None,
        inputs={"target": target.to_dict(), "projectile": projectile.to_dict(), "seed": args.seed},
        variant_fidelity=compare,
    )
    print(f"N_T={cfg.n_target} N_p={cfg.n_projectile} n={cfg.qubits_per_particle} "
          f"variant={args.variant} qubits={circuit.num_qubits}")
    print(f"fidelity vs oracle     {report.fidelity:.15f}")
    print(f"antisymmetry residual  {report.antisymmetry_residual:.3e}")
    print(f"ancilla ground weight  {report.ancilla_ground_weight:.15f}")
    print(f"norm                   {report.norm:.15f}")
    for other, f in compare.items():
        print(f"fidelity vs {other:<10} {f:.15f}")
    print(f"wall time              {elapsed:.3f} s")
    if args.report:
        _write(args.report, _dump(report.to_dict()))
    return EXIT_OK


# ---- verify ---------------------------------------------------------------


@dataclass
class Check:
    name: str
    cases: int = 0
    failures: list | None = None

    def fail(self, case: dict) -> None:
        if self.failures is None:
            self.failures = []
        self.failures.append(case)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures or [],
        }


def _sweep(max_nt: int, max_np: int):
    for nt in range(1, max_nt + 1):
        for np_ in range(1, min(nt, max_np) + 1):
            yield nt, np_


def check_counting() -> Check:
    c = Check("counting_identity")
    for nt in range(1, 13):
        for np_ in range(1, nt + 1):
            c.cases += 1
            a, b = n_perm_binomial(nt, np_), n_perm_sum(nt, np_)
            if a != b:
                c.fail({"nt": nt, "np": np_, "binomial": a, "sum": b})
    return c


def check_branches(max_nt: int, max_np: int, corrupt: bool) -> Check:
    c = Check("branch_validity")
    for nt, np_ in _sweep(max_nt, max_np):
        cfg = AntisymConfig(nt, np_, min_qubits_per_particle(nt))
        schedules = [generate_reference_schedule(cfg), generate_shared_schedule(cfg)]
        if corrupt:
            schedules = [corrupt_schedule(s) for s in schedules]
        for s in schedules:
            for r in validate_schedule(s):
                c.cases += 1
                if not (r.ok and r.minimal):
                    c.fail({"nt": nt, "np": np_, "variant": s.variant, **r.to_dict()})
    return c


def check_uncompute_structure(max_nt: int, max_np: int) -> Check:
    c = Check("uncompute_structure")
    for nt, np_ in _sweep(max_nt, max_np):
        cfg = AntisymConfig(nt, np_, min_qubits_per_particle(nt))
        for variant in ("reference", "shared"):
            c.cases += 1
            stages = metrics(build_full_circuit(cfg, variant)).stage_gate_counts
            if stages.get("uncompute", 0) != nt + np_ or stages.get("phase", 0) != nt:
                c.fail({"nt": nt, "np": np_, "variant": variant, "stages": stages})
    return c


def check_double_oracle(max_nt: int, max_np: int) -> Check:
    c = Check("double_oracle")
    for nt, np_ in _sweep(max_nt, max_np):
        if nt + np_ > 5:
            continue
        n = min_qubits_per_particle(nt)
        cfg = AntisymConfig(nt, np_, n)
        orbitals = range(cfg.num_orbitals)
        for ot in combinations(orbitals, nt):
            for op in combinations(orbitals, np_):
                c.cases += 1
                t = SubsystemState.determinant(ot, 0)
                p = SubsystemState.determinant(op, 1)
                f = fidelity(oracle_antisymmetrize(t, p, cfg), oracle_full_permutation_check(t, p, cfg))
                if f < 1 - 1e-12:
                    c.fail({"nt": nt, "np": np_, "target": ot, "projectile": op, "fidelity": f})
    return c


END_TO_END_VARIANTS = (
    ("shared", {}),
    ("reference", {}),
    ("parallel", {"require_improvement": False}),
    ("shared", {"collapse": True}),
)


def end_to_end_case(cfg: AntisymConfig, target, projectile, variants=END_TO_END_VARIANTS):
    """Run each variant that fits in memory; returns (first failure or None, per-variant rows)."""
    slot_q = cfg.num_slots * cfg.qubits_per_particle
    rows, sectors = [], []
    for variant, kw in variants:
        circuit = build_full_circuit(cfg, variant, **kw)
        if circuit.num_qubits > max_qubits():
            continue
        state, diag = run_antisymmetrization(target, projectile, cfg, variant, circuit=circuit)
        sectors.append(StateVector(slot_q, state.amps[: 1 << slot_q].copy()))
        rows.append({"variant": variant, **kw, **diag})
    bad = None
    for row in rows:
        if (
            row["fidelity"] < 1 - 1e-10
            or row["antisymmetry_residual"] > 1e-10
            or row["ancilla_ground_weight"] < 1 - 1e-10
            or abs(row["norm"] - 1) > 1e-10
        ):
            bad = bad or row
    for a in range(len(sectors)):
        for b in range(a + 1, len(sectors)):
            f = fidelity(sectors[a], sectors[b])
            if f < 1 - 1e-10:
                bad = bad or {"variants": [rows[a]["variant"], rows[b]["variant"]], "fidelity": f}
    return bad, rows


def check_end_to_end(max_nt, max_np, max_n, trials, seed, heavy) -> Check:
    c = Check("end_to_end")
    cases = []
    for nt, np_ in _sweep(max_nt, max_np):
        for n in range(min_qubits_per_particle(nt), max_n + 1):
            cases.append((nt, np_, n))
    if heavy and (3, 3, 3) not in cases:
        cases.append((3, 3, 3))
    for nt, np_, n in cases:
        cfg = AntisymConfig(nt, np_, n)
        rng = np.random.default_rng([seed, nt, np_, n])
        inputs = [
            (SubsystemState.determinant(range(nt), 0), SubsystemState.determinant(range(np_), 1))
        ]
        for _ in range(trials):
            inputs.append(
                (random_subsystem(rng, nt, 0, n), random_subsystem(rng, np_, 1, n))
            )
        for t, p in inputs:
            c.cases += 1
            try:
                bad, _ = end_to_end_case(cfg, t, p)
            except CapacityError as exc:
                bad = {"error": str(exc)}
            if bad is not None:
                c.fail({"nt": nt, "np": np_, "n": n, "target": t.to_dict(),
                        "projectile": p.to_dict(), "detail": bad})
    return c


def cmd_verify(args) -> int:
    checks = [
        check_counting(),
        check_branches(args.max_nt, args.max_np, args.corrupt),
        check_uncompute_structure(args.max_nt, args.max_np),
        check_double_oracle(args.max_nt, args.max_np),
        check_end_to_end(args.max_nt, args.max_np, args.max_n, args.trials, args.seed, args.heavy),
    ]
    ok = all(ch.passed for ch in checks)
    for ch in checks:
        print(f"{'PASS' if ch.passed else 'FAIL'}  {ch.name:<20} {ch.cases} cases")
    if args.report:
        payload = {
            "bounds": {
                "max_nt": args.max_nt,
                "max_np": args.max_np,
                "max_n": args.max_n,
                "trials": args.trials,
                "seed": args.seed,
                "heavy": args.heavy,
                "corrupt": args.corrupt,
            },
            "passed": ok,
            "checks": [ch.to_dict() for ch in checks],
        }
        _write(args.report, _dump(payload))
    if not ok:
        first = next(ch for ch in checks if not ch.passed)
        print(f"first failure in {first.name}: {json.dumps(first.failures[0], sort_keys=True)}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---- estimate -------------------------------------------------------------


def estimate_rows(max_nt: int, max_np: int, n: int | None, collapse: bool = False) -> list[dict]:
    rows = []
    for nt, np_ in _sweep(max_nt, max_np):
        cfg = AntisymConfig(nt, np_, max(n or 0, min_qubits_per_particle(nt)))
        seq = build_full_circuit(cfg, "shared", collapse=collapse)
        par = build_full_circuit(cfg, "parallel", collapse=collapse)
        rs, rp = metrics(seq), metrics(par)
        rows.append({
            "nt": nt,
            "np": np_,
            "n": cfg.qubits_per_particle,
            "n_perm": n_perm_binomial(nt, np_),
            "swaps": rs.swap_count,
            "slot_pairs": len(generate_shared_schedule(cfg).slot_pairs),
            "ancillae": rs.ancilla_count,
            "cnot_equivalent": rs.cnot_equivalent,
            "depth": rs.depth,
            "depth_parallel": rp.depth,
        })
    return rows


ESTIMATE_COLUMNS = (
    ("nt", "N_T"),
    ("np", "N_p"),
    ("n", "n"),
    ("n_perm", "N_perm"),
    ("swaps", "swaps"),
    ("slot_pairs", "pairs"),
    ("ancillae", "ancillae"),
    ("cnot_equivalent", "CNOT-eq"),
    ("depth", "depth"),
    ("depth_parallel", "depth-par"),
)


def format_table(rows: list[dict]) -> str:
    widths = [
        max(len(title), *(len(str(r[key])) for r in rows)) for key, title in ESTIMATE_COLUMNS
    ]
    head = "  ".join(f"{t:>{w}}" for (_, t), w in zip(ESTIMATE_COLUMNS, widths))
    body = [
        "  ".join(f"{r[k]!s:>{w}}" for (k, _), w in zip(ESTIMATE_COLUMNS, widths)) for r in rows
    ]
    return "\n".join([head] + body)


def cmd_estimate(args) -> int:
    rows = estimate_rows(args.max_nt, args.max_np, args.n, args.collapse)
    print(format_table(rows))
    if args.json:
        _write(args.json, _dump(rows))
    return EXIT_OK


# ---- parser ---------------------------------------------------------------


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nt", type=int, required=True, help="target particles N_T")
    p.add_argument("--np", type=int, required=True, help="projectile particles N_p")
    p.add_argument("--n", type=int, default=2, help="qubits per particle, side qubit included")


def _add_build(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=VARIANTS, default="shared")
    p.add_argument("--collapse", action="store_true", help="merge Dicke-exclusive swap pairs")
    p.add_argument("--flag-policy", choices=("fresh", "reuse"), default="fresh")
    p.add_argument("--gate-dicke", action="store_true", help="prepare the Dicke state with gates")
    p.add_argument("--compile", choices=("terms", "flags"), default=None,
                   help="shared predicate compilation (default: terms up to 8 slots)")
    p.add_argument("--parallel-ancillae", type=int, default=None,
                   help="work qubits for the parallel variant (default N_p)")
    p.add_argument("--force-parallel", action="store_true",
                   help="rewrite every disjoint swap run even if depth grows")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antisymq", description="Target/projectile fermion antisymmetrization circuits."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a circuit and print its resources")
    _add_config(g)
    _add_build(g)
    g.add_argument("--qasm", metavar="PATH", help="write OpenQASM 3.0")
    g.add_argument("--json", metavar="PATH", help="write circuit, layout and schedule JSON")
    g.add_argument("--describe", action="store_true", help="print layout and schedule")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("simulate", help="run one statevector simulation against the oracle")
    _add_config(s)
    _add_build(s)
    s.add_argument("--target", metavar="JSON", help="target state (file path or inline JSON)")
    s.add_argument("--projectile", metavar="JSON", help="projectile state (file path or inline JSON)")
    s.add_argument("--seed", type=int, default=0, help="seed for omitted states")
    s.add_argument("--compare", nargs="*", choices=VARIANTS, help="also run these variants")
    s.add_argument("--report", metavar="PATH", help="write the RunReport JSON")
    s.add_argument("--timing", action="store_true", help="record wall time in the JSON report")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run the property sweep")
    v.add_argument("--max-nt", type=int, default=3)
    v.add_argument("--max-np", type=int, default=2)
    v.add_argument("--max-n", type=int, default=3)
    v.add_argument("--trials", type=int, default=2, help="random inputs per configuration")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--heavy", action="store_true", help="add the (3,3) n=3 run (24 qubits)")
    v.add_argument("--corrupt", action="store_true", help="test hook: flip one predicate bit")
    v.add_argument("--report", metavar="PATH", help="write the per-check JSON report")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("estimate", help="resource table without simulation")
    e.add_argument("--max-nt", type=int, default=12)
    e.add_argument("--max-np", type=int, default=3)
    e.add_argument("--n", type=int, default=None, help="qubits per particle (default: minimal)")
    e.add_argument("--collapse", action="store_true")
    e.add_argument("--json", metavar="PATH")
    e.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CapacityError, UsageError, ValueError, OSError) as exc:
        print(f"antisymq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
