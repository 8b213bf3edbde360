import numpy as np
import pytest

from antisymq.layout import (
    PROJECTILE_SIDE,
    TARGET_SIDE,
    AntisymConfig,
    ConfigError,
    build_layout,
    side_convention_check,
)
from antisymq.qstate import CapacityError, StateVector


def test_2_2_layout():
    lay = build_layout(AntisymConfig(2, 2, 2))
    assert lay.total_qubits == 12
    assert lay.slot(3).side == 5
    assert lay.slot(3).block == (4, 5)
    assert lay.dicke_ancillae == (8, 9, 10, 11)
    assert lay.ancilla(1) == 8
    assert lay.qubit_names[:2] == ("s1.q0", "s1.side")
    assert lay.qubit_names[8:] == ("a1", "a2", "a3", "a4")


def test_extra_work_ancillae():
    lay = build_layout(AntisymConfig(2, 2, 2, extra_work_ancillae=2))
    assert lay.total_qubits == 14
    assert lay.work_ancillae == (12, 13)
    assert lay.qubit_names[-2:] == ("w1", "w2")


@pytest.mark.parametrize("args", [(1, 2, 2), (0, 0, 2), (2, 1, 1), (3, 1, 2), (2, 2, 2, -1)])
def test_invalid_configs(args):
    with pytest.raises(ConfigError):
        AntisymConfig(*args)


def test_capacity_enforced():
    with pytest.raises(CapacityError):
        build_layout(AntisymConfig(4, 4, 3))
    assert build_layout(AntisymConfig(4, 4, 3), enforce_capacity=False).total_qubits == 32


def test_formula_sweep():
    for nt in range(1, 7):
        for np_ in range(1, min(nt, 3) + 1):
            for n in range(2, 5):
                if 2 ** (n - 1) < nt:
                    continue
                cfg = AntisymConfig(nt, np_, n)
                lay = build_layout(cfg, enforce_capacity=False)
                m = nt + np_
                assert lay.total_qubits == m * n + m
                ids = [q for s in lay.slots for q in s.block] + list(lay.dicke_ancillae)
                assert ids == list(range(lay.total_qubits))
                assert all(s.side == max(s.block) for s in lay.slots)
                assert lay == build_layout(cfg, enforce_capacity=False)


def test_side_convention():
    cfg = AntisymConfig(1, 1, 2)
    lay = build_layout(cfg)
    good = StateVector.basis(lay.total_qubits, (PROJECTILE_SIDE << 3) | (TARGET_SIDE << 1))
    assert side_convention_check(good, lay)
    bad = StateVector.basis(lay.total_qubits, (1 << 1) | (1 << 3))
    assert not side_convention_check(bad, lay)
    mixed = StateVector(lay.total_qubits, np.zeros(1 << lay.total_qubits))
    mixed.amps[1 << 3] = mixed.amps[1 << 1] = 2 ** -0.5
    assert not side_convention_check(mixed, lay)
    with pytest.raises(ValueError):
        side_convention_check(StateVector(2), lay)


def test_to_dict():
    d = build_layout(AntisymConfig(2, 1, 2)).to_dict()
    assert d["slots"][2] == {"slot": 3, "role": "projectile", "internal": [4], "side": 5}
