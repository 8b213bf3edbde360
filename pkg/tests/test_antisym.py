import math
from itertools import combinations

import numpy as np
import pytest

from antisymq.antisym import (
    SwapSchedule,
    build_full_circuit,
    corrupt_schedule,
    default_control_budget,
    generate_reference_schedule,
    generate_shared_schedule,
    n_perm_binomial,
    n_perm_sum,
    run_antisymmetrization,
    schedule_is_valid,
    validate_schedule,
)
from antisymq.antisym.schedule import (
    band_order,
    canonical_matching,
    exchange_count,
    identity_pattern,
    parse_pattern,
    pattern_string,
    patterns,
)
from antisymq.circuit import metrics
from antisymq.layout import AntisymConfig
from antisymq.oracle import SubsystemState, random_subsystem


def cfg(nt, np_, n=2):
    return AntisymConfig(nt, np_, n)


class TestCounting:
    def test_examples(self):
        assert n_perm_binomial(3, 2) == n_perm_sum(3, 2) == 10
        assert n_perm_binomial(2, 2) == n_perm_sum(2, 2) == 6
        assert n_perm_binomial(5, 1) == 6

    def test_identity_sweep(self):
        for nt in range(1, 13):
            for np_ in range(1, nt + 1):
                assert n_perm_binomial(nt, np_) == n_perm_sum(nt, np_) == math.comb(nt + np_, np_)

    def test_errors(self):
        with pytest.raises(ValueError):
            n_perm_binomial(0, 1)
        with pytest.raises(ValueError):
            n_perm_sum(1, 2)


class TestPatterns:
    def test_patterns_and_strings(self):
        ps = patterns(4, 2)
        assert ps == [0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]
        assert pattern_string(0b0011, 4) == "1100"
        assert parse_pattern("1100") == 0b0011
        assert identity_pattern(cfg(2, 2)) == 0b1100
        assert exchange_count(0b0101, 2) == 1

    def test_canonical_matching(self):
        assert canonical_matching(0b0011, 2, 4) == [(0, 2), (1, 3)]
        assert canonical_matching(0b1100, 2, 4) == []

    def test_band_order_covers_all_pairs(self):
        order = band_order(4, 2)
        assert sorted(order) == sorted((i, 4 + s) for i in range(4) for s in range(2))
        assert order[:2] == [(0, 4), (1, 5)]


SHARED_COUNTS = [((2, 2), 4), ((3, 3), 9), ((3, 2), 8), ((4, 2), 10), ((1, 1), 1), ((2, 1), 2)]


class TestSchedules:
    @pytest.mark.parametrize("nt_np,count", SHARED_COUNTS)
    def test_shared_swap_counts(self, nt_np, count):
        assert generate_shared_schedule(cfg(*nt_np, 3)).swap_count == count

    def test_4_2_collapses_to_8(self):
        c = build_full_circuit(cfg(4, 2, 3), collapse=True)
        assert metrics(c).swap_count == 8

    def test_reference_counts(self):
        s = generate_reference_schedule(cfg(2, 2))
        # one swap per (pattern, pair) in its canonical matching
        assert s.swap_count == sum(exchange_count(p, 2) for p in patterns(4, 2))
        assert all(len(op.terms) == 1 and len(op.terms[0]) == 4 for op in s.ops)

    def test_2_2_shared_ops(self):
        s = generate_shared_schedule(cfg(2, 2))
        assert [(op.slot_a, op.slot_b) for op in s.ops] == [(1, 3), (2, 4), (2, 3), (1, 4)]
        assert s.slot_pairs == [(1, 3), (1, 4), (2, 3), (2, 4)]
        assert all(len(op.terms) == 1 and len(op.terms[0]) == 2 for op in s.ops)

    def test_control_budget(self):
        assert default_control_budget(cfg(2, 2)) == 2
        assert default_control_budget(cfg(4, 2, 3)) == 3
        assert default_control_budget(cfg(1, 1)) == 1

    def test_flags_mode_for_large_m(self):
        s = generate_shared_schedule(AntisymConfig(6, 3, 4))
        assert s.compile == "flags"
        assert s.swap_count == 18
        assert schedule_is_valid(s)

    def test_all_branches_valid(self):
        for nt in range(1, 7):
            for np_ in range(1, min(nt, 3) + 1):
                c = AntisymConfig(nt, np_, 4)
                for s in (generate_reference_schedule(c), generate_shared_schedule(c)):
                    reports = validate_schedule(s)
                    assert len(reports) == math.comb(nt + np_, np_)
                    assert all(r.ok for r in reports), (nt, np_, s.variant)

    def test_6_2_has_28_patterns(self):
        assert len(validate_schedule(generate_shared_schedule(AntisymConfig(6, 2, 4)))) == 28

    def test_corrupt_schedule_detected(self):
        s = generate_shared_schedule(cfg(2, 2))
        bad = corrupt_schedule(s)
        assert not schedule_is_valid(bad)
        assert any(not r.ok for r in validate_schedule(bad))

    def test_json_round_trip(self):
        s = generate_shared_schedule(cfg(4, 2, 3))
        assert SwapSchedule.from_json(s.to_json()) == s
        d = s.to_dict()
        assert d["ops"][0]["predicate"]["any_of"] == [[[1, 1], [5, 0]]]

    def test_branch_report_dict(self):
        r = validate_schedule(generate_shared_schedule(cfg(1, 1)))[0]
        assert set(r.to_dict()) == {
            "pattern", "fired", "final_projectile_slots", "parity_ok", "occupancy_ok", "minimal"
        }


STRUCT_CONFIGS = [(nt, np_) for nt in range(1, 7) for np_ in range(1, min(nt, 3) + 1)]


@pytest.mark.parametrize("nt,np_", STRUCT_CONFIGS)
def test_uncompute_and_phase_counts(nt, np_):
    c = build_full_circuit(AntisymConfig(nt, np_, 4))
    stages = metrics(c).stage_gate_counts
    assert stages["uncompute"] == nt + np_
    assert stages["phase"] == nt


def test_dicke_stage_is_optional():
    c = cfg(2, 2)
    assert "dicke" not in metrics(build_full_circuit(c)).stage_gate_counts
    assert metrics(build_full_circuit(c, use_gate_dicke=True)).stage_gate_counts["dicke"] > 0


def test_parallel_ancillae_only_for_parallel():
    with pytest.raises(ValueError):
        build_full_circuit(cfg(2, 2), "shared", parallel_ancillae=2)
    with pytest.raises(ValueError):
        build_full_circuit(cfg(2, 2), "bogus")


def test_schedule_for_other_config_rejected():
    with pytest.raises(ValueError):
        build_full_circuit(cfg(2, 2), schedule=generate_shared_schedule(cfg(2, 1)))


def check(diag, tol=1e-10):
    assert diag["fidelity"] >= 1 - tol
    assert diag["antisymmetry_residual"] <= tol
    assert diag["ancilla_ground_weight"] >= 1 - tol
    assert abs(diag["norm"] - 1) <= tol


def test_run_1_1_example():
    c = cfg(1, 1)
    state, diag = run_antisymmetrization(
        SubsystemState.determinant([0], 0), SubsystemState.determinant([1], 1), c
    )
    check(diag)
    assert diag["num_qubits"] == 6
    t, p = 0b00, 0b11
    r2 = 1 / math.sqrt(2)
    assert state.amps[t | p << 2] == pytest.approx(r2)
    assert state.amps[p | t << 2] == pytest.approx(-r2)


@pytest.mark.parametrize("variant", ["reference", "shared", "parallel"])
@pytest.mark.parametrize("nt,np_,n", [(2, 1, 2), (2, 2, 2)])
def test_run_superpositions(rng, variant, nt, np_, n):
    c = AntisymConfig(nt, np_, n)
    t = random_subsystem(rng, nt, 0, n)
    p = random_subsystem(rng, np_, 1, n)
    _, diag = run_antisymmetrization(t, p, c, variant)
    check(diag)


@pytest.mark.parametrize("kw", [
    {"use_gate_dicke": True},
    {"collapse": True},
    {"collapse": True, "flag_policy": "reuse"},
    {"compile": "flags"},
])
def test_run_options(rng, kw):
    c = AntisymConfig(2, 2, 2)
    _, diag = run_antisymmetrization(
        random_subsystem(rng, 2, 0, 2), random_subsystem(rng, 2, 1, 2), c, **kw
    )
    check(diag)


def test_run_rejects_bad_inputs():
    c = cfg(1, 1)
    with pytest.raises(ValueError, match="side_convention_check"):
        run_antisymmetrization(
            SubsystemState.determinant([0], 0), SubsystemState.determinant([1], 0), c
        )
    from antisymq.qstate import StateVector
    with pytest.raises(ValueError):
        run_antisymmetrization(StateVector(3), SubsystemState.determinant([1], 1), c)
    sym = StateVector(4, np.zeros(16))
    sym.amps[0b0001] = sym.amps[0b0100] = 2**-0.5
    with pytest.raises(ValueError, match="antisymmetric"):
        run_antisymmetrization(sym, SubsystemState.determinant([1], 1), AntisymConfig(2, 1, 2))
