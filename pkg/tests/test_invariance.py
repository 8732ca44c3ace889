import numpy as np
import pytest

from qcomb import states
from qcomb.evaluate import eval_planned
from qcomb.filter_ir import catalog, permute_qubits
from qcomb.invariance import (
    LocalOperator,
    LocalOperatorError,
    apply_local,
    check_permutation_invariance,
    check_product_vanishing,
    check_sl_invariance,
    product_partitions,
    random_det_one,
    random_local_unitary,
    set_partitions,
)
from qcomb.statevec import make_state, permute_state
from qcomb.states import RandomSource


class TestLocalOperators:
    def test_det_one_by_construction(self):
        for k in range(20):
            op = random_det_one(3, RandomSource(k))
            for m in op.matrices:
                det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
                assert abs(det - 1.0) < 1e-12

    def test_seed_42_reproducible(self):
        a = random_det_one(2, RandomSource(42))
        b = random_det_one(2, RandomSource(42))
        for ma, mb in zip(a.matrices, b.matrices):
            np.testing.assert_array_equal(ma, mb)

    def test_identity_qualifies(self):
        op = LocalOperator((np.eye(2, dtype=complex),) * 2, "det-one")
        assert op.num_qubits == 2

    def test_unitary_sampling(self):
        for k in range(20):
            op = random_local_unitary(2, RandomSource(k))
            for m in op.matrices:
                assert np.max(np.abs(m.conj().T @ m - np.eye(2))) < 1e-12
                det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
                assert abs(det - 1.0) < 1e-12

    def test_kind_enforced(self):
        generic = random_det_one(1, RandomSource(3)).matrices
        with pytest.raises(LocalOperatorError):
            LocalOperator(generic, "unitary")


class TestApplyLocal:
    def test_identity(self):
        s = states.get("bell")
        out = apply_local(LocalOperator((np.eye(2, dtype=complex),) * 2, "det-one"), s)
        np.testing.assert_allclose(out.amplitudes, s.amplitudes)

    def test_sigma_x_on_first_qubit(self):
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        eye = np.eye(2, dtype=complex)
        s = make_state(2, [("00", 1)])
        out = apply_local(LocalOperator((sx, eye), "unitary"), s)
        assert out.amplitudes[0b10] == pytest.approx(1.0)

    def test_generic_det_one_changes_norm(self):
        op = random_det_one(2, RandomSource(8))
        out = apply_local(op, states.get("bell"))
        assert abs(out.norm_sq - 1.0) > 1e-6

    def test_size_mismatch(self):
        op = random_det_one(3, RandomSource(0))
        with pytest.raises(LocalOperatorError):
            apply_local(op, states.get("bell"))


class TestSlInvariance:
    def test_f2_1_bell(self):
        report = check_sl_invariance(catalog().get("F2_1"), states.get("bell"), trials=100, seed=5)
        assert report["pass"] and report["worst_deviation"] < 1e-8

    def test_f4_1_phi5(self):
        report = check_sl_invariance(catalog().get("F4_1"), states.get("phi5"), trials=60, seed=5)
        assert report["pass"]
        assert abs(complex(*report["base_value"]) - 8 / 9) < 1e-9

    def test_f3_1_random_state(self):
        from qcomb.states import random_pure

        s = random_pure(3, RandomSource(17))
        report = check_sl_invariance(catalog().get("F3_1"), s, trials=60, seed=6)
        assert report["pass"]

    def test_workers_do_not_change_report(self):
        f = catalog().get("F3_2")
        s = states.get("ghz3")
        one = check_sl_invariance(f, s, trials=24, seed=9, workers=1)
        many = check_sl_invariance(f, s, trials=24, seed=9, workers=4)
        assert abs(one["worst_deviation"] - many["worst_deviation"]) < 1e-12
        assert one["worst_trial"] == many["worst_trial"]


class TestPartitions:
    def test_set_partition_count_q4(self):
        # Bell number B(4) = 15; dropping the one-block partition leaves 14
        assert len(set_partitions(tuple(range(4)))) == 15
        assert len(product_partitions(4)) == 14

    def test_shapes_for_q4_include_all_patterns(self):
        shapes = {tuple(sorted(len(b) for b in p)) for p in product_partitions(4)}
        assert shapes == {(1, 3), (2, 2), (1, 1, 2), (1, 1, 1, 1)}

    def test_single_qubit_keeps_trivial_partition(self):
        assert product_partitions(1) == [[(0,)]]


class TestProductVanishing:
    def test_f4_1_across_shapes(self):
        report = check_product_vanishing(catalog().get("F4_1"), trials=140, seed=3)
        assert report["pass"]
        assert report["partition_shapes"] == 14

    def test_f2_1_products(self):
        report = check_product_vanishing(catalog().get("F2_1"), trials=40, seed=3)
        assert report["pass"]

    def test_comb1_all_single_qubit_states(self):
        report = check_product_vanishing(catalog().get("comb1"), trials=50, seed=3)
        assert report["pass"]

    def test_workers_do_not_change_report(self):
        f = catalog().get("F4_2")
        one = check_product_vanishing(f, trials=28, seed=11, workers=1)
        many = check_product_vanishing(f, trials=28, seed=11, workers=4)
        assert one["worst_deviation"] == many["worst_deviation"]


class TestPermutationInvariance:
    def test_f3_2_single_value(self):
        from qcomb.states import random_pure

        s = random_pure(3, RandomSource(21))
        report = check_permutation_invariance(catalog().get("F3_2"), s)
        assert report["pass"] is True
        assert len(report["distinct_values"]) == 1

    def test_f2_2_single_value(self):
        from qcomb.states import random_pure

        s = random_pure(2, RandomSource(22))
        report = check_permutation_invariance(catalog().get("F2_2"), s)
        assert report["pass"] is True

    def test_f4_1_diagnostic_only(self):
        from qcomb.states import random_pure

        s = random_pure(4, RandomSource(23))
        report = check_permutation_invariance(catalog().get("F4_1"), s)
        assert report["pass"] is None
        assert len(report["distinct_values"]) >= 1

    def test_filter_vs_state_permutation_identity(self):
        # permuting the filter by p equals permuting the state by p^-1
        from qcomb.states import random_pure

        f = catalog().get("F4_1")
        s = random_pure(4, RandomSource(31))
        perm = (2, 0, 3, 1)
        inverse = tuple(perm.index(j) for j in range(4))
        a = eval_planned(permute_qubits(f, perm), s)
        b = eval_planned(f, permute_state(s, inverse))
        assert abs(a - b) < 1e-12
