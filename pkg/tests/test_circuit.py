import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antisymq.circuit import (
    CLOSED,
    OPEN,
    Circuit,
    DickeConstraint,
    Gate,
    block_swap,
    cnot,
    depth,
    emit_qasm,
    h,
    layers,
    mcx,
    metrics,
    parallelize,
    peephole_collapse,
    ry,
    simulate,
    x,
    z,
)
from antisymq.qstate import StateVector, ancilla_ground_weight, embed, fidelity, kron, random_state


class TestGate:
    def test_validation(self):
        with pytest.raises(ValueError):
            Gate("CZ", (0,))
        with pytest.raises(ValueError):
            Gate("X", (0,), ((1, CLOSED),))
        with pytest.raises(ValueError):
            Gate("MCX", (0,))
        with pytest.raises(ValueError):
            Gate("Ry", (0,))
        with pytest.raises(ValueError):
            Gate("BlockSwap", (0, 1, 2), width=2)
        with pytest.raises(ValueError):
            mcx([(0, CLOSED)], 0)
        with pytest.raises(ValueError):
            block_swap([0, 1], [2])

    def test_blocks_and_stage(self):
        g = block_swap([0, 1], [2, 3], [(4, OPEN)], label="swap:7")
        assert g.blocks == ((0, 1), (2, 3))
        assert g.stage == "swap"
        assert g.qubits == (4, 0, 1, 2, 3)

    def test_circuit_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Circuit(2, (x(2),))


@st.composite
def circuits(draw):
    n = draw(st.integers(3, 6))
    gs = []
    for _ in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(["x", "z", "h", "ry", "mcx", "swap"]))
        qs = draw(st.permutations(range(n)))
        pol = draw(st.integers(0, 1))
        if kind == "x":
            gs.append(x(qs[0]))
        elif kind == "z":
            gs.append(z(qs[0], [(qs[1], pol)]))
        elif kind == "h":
            gs.append(h(qs[0]))
        elif kind == "ry":
            gs.append(ry(draw(st.floats(-3, 3)), qs[0], [(qs[1], pol)], label="dicke"))
        elif kind == "mcx":
            gs.append(mcx([(qs[1], pol), (qs[2], 1 - pol)], qs[0], label="flag:1"))
        else:
            gs.append(block_swap([qs[0]], [qs[1]], [(qs[2], pol)], label="swap:1"))
    names = tuple(f"q{i}" for i in range(n))
    return Circuit(n, tuple(gs), names)


@settings(max_examples=40, deadline=None)
@given(circuits())
def test_json_round_trip(c):
    assert Circuit.from_json(c.to_json()) == c


@settings(max_examples=40, deadline=None)
@given(circuits())
def test_metrics_and_qasm_are_pure(c):
    assert metrics(c) == metrics(Circuit.from_json(c.to_json()))
    assert emit_qasm(c) == emit_qasm(Circuit.from_json(c.to_json()))
    r = metrics(c)
    assert r.total_gates == len(c.gates)
    assert r.swap_count == sum(g.kind == "BlockSwap" for g in c.gates)


class TestMetrics:
    def test_uncontrolled_width3_swap(self):
        r = metrics(Circuit(6, (block_swap([0, 1, 2], [3, 4, 5]),)))
        assert r.cnot_equivalent == 9
        assert r.multicontrol_histogram == {}

    def test_singly_controlled_width1_swap(self):
        r = metrics(Circuit(3, (block_swap([0], [1], [(2, CLOSED)]),)))
        assert r.cnot_equivalent == 2
        assert r.multicontrol_histogram == {2: 1}

    def test_empty(self):
        r = metrics(Circuit(3, ()))
        assert r.depth == 0 and r.cnot_equivalent == 0 and r.total_gates == 0
        assert r.swap_count == 0 and r.multicontrol_histogram == {}

    def test_depth_layers(self):
        gs = [x(0), x(1), cnot(0, 1), x(2)]
        assert layers(gs) == [1, 1, 2, 1]
        assert depth(gs) == 2

    def test_ancilla_count_from_names(self):
        c = Circuit(4, (), ("s1.q0", "s1.side", "a1", "w1"))
        assert metrics(c).ancilla_count == 2


class TestQasm:
    def test_x(self):
        assert "x q[0];" in emit_qasm(Circuit(1, (x(0),)))

    def test_toffoli(self):
        text = emit_qasm(Circuit(3, (mcx([(0, CLOSED), (1, CLOSED)], 2),)))
        assert "ctrl @ ctrl @ x q[0], q[1], q[2];" in text

    def test_open_control(self):
        text = emit_qasm(Circuit(2, (mcx([(0, OPEN)], 1),)))
        assert "negctrl @ x q[0], q[1];" in text

    def test_header_names_and_swap_expansion(self):
        c = Circuit(5, (block_swap([0, 1], [2, 3], [(4, CLOSED)], label="swap:1"),),
                    ("s1.q0", "s1.side", "s2.q0", "s2.side", "a1"))
        lines = emit_qasm(c).splitlines()
        assert lines[:2] == ["OPENQASM 3.0;", 'include "stdgates.inc";']
        assert "// q[4] = a1" in lines
        assert "qubit[5] q;" in lines
        assert lines[-2:] == ["ctrl @ swap q[4], q[0], q[2];", "ctrl @ swap q[4], q[1], q[3];"]

    def test_ry_angle(self):
        assert "ry(0.5) q[0];" in emit_qasm(Circuit(1, (ry(0.5, 0),)))


def dicke_register_states(m, k):
    for ones in combinations(range(m), k):
        yield sum(1 << q for q in ones)


def branchwise_equal(c1: Circuit, c2: Circuit, data_qubits, ancillae, weight, rng):
    """Compare two circuits on |random data> x |ancilla pattern> for every allowed pattern."""
    n_data = len(data_qubits)
    for pattern in dicke_register_states(len(ancillae), weight):
        data = random_state(n_data, rng)
        anc = StateVector.basis(len(ancillae), pattern)
        a = embed(kron(data, anc), c1.num_qubits)
        b = embed(kron(data, anc), c2.num_qubits)
        simulate(c1, a)
        simulate(c2, b)
        extra2 = list(range(c1.num_qubits, c2.num_qubits))
        assert ancilla_ground_weight(b, extra2) >= 1 - 1e-12
        b_sector = StateVector(c1.num_qubits, b.amps[: 1 << c1.num_qubits].copy())
        assert fidelity(a, b_sector) >= 1 - 1e-12


class TestCollapse:
    # data qubits p1 = 0, p2 = 1; ancillae a1, a2, a3 = 2, 3, 4
    def circuit(self):
        return Circuit(5, (
            block_swap([0], [1], [(2, CLOSED), (4, CLOSED)], label="swap:1"),
            block_swap([0], [1], [(3, CLOSED), (4, CLOSED)], label="swap:2"),
        ), ("p1", "p2", "a1", "a2", "a3"))

    def test_flag_merge_shape(self):
        # weight 1 on (a1, a2, a3) forbids a1 = a2 = 1
        out = peephole_collapse(self.circuit(), DickeConstraint((2, 3, 4), 1))
        assert out.num_qubits == 6 and out.qubit_names[-1] == "w1"
        kinds = [g.kind for g in out.gates]
        assert kinds == ["MCX", "BlockSwap", "MCX"]
        compute, swap, uncompute = out.gates
        assert compute == uncompute
        assert set(compute.controls) == {(2, OPEN), (3, OPEN)} and compute.targets == (5,)
        assert set(swap.controls) == {(4, CLOSED), (5, OPEN)}
        assert swap.label == "swap:1+2"

    def test_merged_equals_unmerged_on_every_branch(self, rng):
        c = self.circuit()
        out = peephole_collapse(c, DickeConstraint((2, 3, 4), 1))
        branchwise_equal(c, out, [0, 1], [2, 3, 4], 1, rng)

    def test_not_merged_when_both_can_fire(self):
        c = self.circuit()
        assert peephole_collapse(c, DickeConstraint((2, 3, 4), 3)) is c

    def test_no_pair_unchanged(self):
        c = Circuit(4, (block_swap([0], [1], [(2, CLOSED)]), block_swap([0], [2], [(3, CLOSED)])))
        assert peephole_collapse(c, DickeConstraint((2, 3), 1)) is c

    def test_flag_policy(self):
        with pytest.raises(ValueError):
            peephole_collapse(self.circuit(), DickeConstraint((2, 3, 4), 1), flag_policy="x")

    def test_dicke_constraint(self):
        dc = DickeConstraint((0, 1, 2, 3), 2)
        assert dc.satisfiable([(0, 1), (1, 1)])
        assert not dc.satisfiable([(0, 1), (1, 1), (2, 1)])
        assert not dc.satisfiable([(0, 0), (1, 0), (2, 0)])
        assert not dc.satisfiable([(0, 1), (0, 0)])
        with pytest.raises(ValueError):
            DickeConstraint((0,), 2)


def two_two_swap_region():
    # (2,2) n=1 slots on qubits 0..3, ancillae a1..a4 on 4..7
    a = [4, 5, 6, 7]
    return Circuit(8, (
        block_swap([0], [2], [(a[0], 1), (a[2], 0)], label="swap:1"),
        block_swap([1], [3], [(a[1], 1), (a[3], 0)], label="swap:2"),
        block_swap([1], [2], [(a[0], 0), (a[2], 0)], label="swap:3"),
        block_swap([0], [3], [(a[0], 1), (a[2], 1)], label="swap:4"),
    ), ("s1", "s2", "s3", "s4", "a1", "a2", "a3", "a4"))


class TestParallelize:
    def test_two_two_pairs_share_layers(self):
        out = parallelize(two_two_swap_region(), 2, require_improvement=False)
        swaps = [(g.label, lay) for g, lay in zip(out.gates, layers(out.gates)) if g.kind == "BlockSwap"]
        assert [lbl for lbl, _ in swaps] == ["swap:1", "swap:2", "swap:3", "swap:4"]
        assert swaps[0][1] == swaps[1][1]
        # swaps 3 and 4 are both predicated on (a1, a3); their flag MCXs serialize,
        # so greedy layering puts the swaps one layer apart
        assert swaps[3][1] - swaps[2][1] == 1
        assert all(len(g.controls) == 1 for g in out.gates if g.kind == "BlockSwap")
        assert out.qubit_names[-2:] == ("w1", "w2")

    def test_equivalent_on_branches(self, rng):
        c = two_two_swap_region()
        out = parallelize(c, 2, require_improvement=False)
        branchwise_equal(c, out, [0, 1, 2, 3], [4, 5, 6, 7], 2, rng)

    def test_common_slot_unchanged(self):
        c = Circuit(6, (
            block_swap([0], [1], [(4, 1)]),
            block_swap([0], [2], [(5, 1)]),
            block_swap([0], [3], [(4, 0)]),
        ))
        assert parallelize(c, 2, require_improvement=False) is c

    def test_zero_ancillae(self):
        c = two_two_swap_region()
        assert parallelize(c, 0) is c
        with pytest.raises(ValueError):
            parallelize(c, -1)

    def test_never_deepens_with_guard(self):
        c = two_two_swap_region()
        for k in range(0, 4):
            assert metrics(parallelize(c, k)).depth <= metrics(c).depth


def test_simulate_ghz():
    c = Circuit(3, (h(0), cnot(0, 1), cnot(1, 2)))
    s = simulate(c)
    np.testing.assert_allclose(abs(s.amps[0]) ** 2 + abs(s.amps[7]) ** 2, 1.0)
    assert abs(s.amps[0] - 1 / math.sqrt(2)) < 1e-15
