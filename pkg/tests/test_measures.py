import math

import numpy as np
import pytest

from qcomb import states
from qcomb.measures import (
    MeasureError,
    cayley_tangle3,
    check_q_equals_r2,
    classify_max_entanglement,
    concurrence_mixed,
    concurrence_pure,
    q_matrix,
    r_matrix,
    tangle3,
)
from qcomb.statevec import DensityMatrix, PureState, hermitian_eig, make_state, to_density
from qcomb.states import RandomSource, random_pure


def random_mixed_2q(seed: int, rank: int = 4) -> DensityMatrix:
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(2, rho)


def werner(p: float) -> DensityMatrix:
    psi = np.zeros(4, dtype=complex)
    psi[1], psi[2] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    rho = p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(4) / 4
    return DensityMatrix(2, rho)


class TestConcurrencePure:
    def test_bell(self):
        rep = concurrence_pure(states.get("bell"))
        assert rep.pure_value == pytest.approx(1.0)
        assert rep.squared_value == pytest.approx(1.0)

    def test_product(self):
        rep = concurrence_pure(make_state(2, [("00", 1)]))
        assert rep.pure_value == 0.0

    def test_matches_2ad_minus_bc(self):
        # symbolic expansion of the two-qubit spin-flip expectation
        for k in range(50):
            s = random_pure(2, RandomSource(k))
            a, b, c, d = s.amplitudes
            expected = 2 * abs(a * d - b * c)
            assert abs(concurrence_pure(s).pure_value - expected) < 1e-12

    def test_wrong_qubit_count(self):
        with pytest.raises(MeasureError):
            concurrence_pure(states.get("ghz3"))


class TestRMatrix:
    def test_pure_bell_spectrum(self):
        w, _ = hermitian_eig(r_matrix(to_density(states.get("bell"))))
        np.testing.assert_allclose(w, [1, 0, 0, 0], atol=1e-12)

    def test_maximally_mixed(self):
        rho = DensityMatrix(2, np.eye(4, dtype=complex) / 4)
        np.testing.assert_allclose(r_matrix(rho), np.eye(4) / 16, atol=1e-13)

    def test_pure_product_spectrum_zero(self):
        rho = to_density(make_state(2, [("01", 1)]))
        w, _ = hermitian_eig(r_matrix(rho))
        np.testing.assert_allclose(w, np.zeros(4), atol=1e-12)


class TestConcurrenceMixed:
    @pytest.mark.parametrize("p", [0.0, 1 / 3, 0.6, 0.9, 1.0])
    def test_werner_formula(self, p):
        assert concurrence_mixed(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-9)

    def test_pure_bell(self):
        assert concurrence_mixed(to_density(states.get("bell"))) == pytest.approx(1.0)

    def test_rank1_matches_pure(self):
        for k in range(20):
            s = random_pure(2, RandomSource(500 + k))
            mixed = concurrence_mixed(to_density(s))
            pure = concurrence_pure(s).pure_value
            assert abs(mixed - pure) < 1e-10


class TestQMatrix:
    def test_proportional_to_r_squared(self):
        cs = []
        for k in range(30):
            rep = check_q_equals_r2(random_mixed_2q(k))
            assert rep["pass"], rep
            cs.append(rep["c"])
        # one state-independent constant
        assert max(cs) - min(cs) < 1e-8
        assert cs[0] == pytest.approx(9.0, abs=1e-9)

    def test_pure_bell_consistent(self):
        rep = check_q_equals_r2(to_density(states.get("bell")))
        assert rep["pass"]
        assert rep["c"] == pytest.approx(9.0, abs=1e-9)

    def test_maximally_mixed_diagonal(self):
        rho = DensityMatrix(2, np.eye(4, dtype=complex) / 4)
        q = q_matrix(rho)
        np.testing.assert_allclose(q, np.eye(4) * (9 / 256), atol=1e-13)
        assert check_q_equals_r2(rho)["c"] == pytest.approx(9.0, abs=1e-9)


class TestTangle3:
    def test_ghz(self):
        rep = tangle3(states.get("ghz3"))
        for v in (rep.via_first_form, rep.via_symmetric_form, rep.via_polynomial):
            assert v == pytest.approx(1.0, abs=1e-12)

    def test_w_state(self):
        rep = tangle3(states.get("w3"))
        for v in (rep.via_first_form, rep.via_symmetric_form, rep.via_polynomial):
            assert v < 1e-12

    def test_product_across_1_23(self):
        s = make_state(3, [("000", 1), ("011", 1)])  # |0> x bell
        rep = tangle3(s)
        assert rep.via_first_form < 1e-12
        assert rep.via_polynomial < 1e-12

    def test_three_way_agreement_random(self):
        for k in range(100):
            s = random_pure(3, RandomSource(900 + k))
            rep = tangle3(s)
            assert abs(rep.via_first_form - rep.via_polynomial) < 1e-9
            assert abs(rep.via_symmetric_form - rep.via_polynomial) < 1e-9

    def test_wrong_qubits(self):
        with pytest.raises(MeasureError):
            tangle3(states.get("bell"))


class TestClassifier:
    def test_phi1_passes_everything(self):
        rep = classify_max_entanglement(states.get("phi1"), name="phi1")
        assert rep.condition_i["pass"]
        assert rep.condition_i_strong["pass"]
        assert rep.condition_ii_p2["pass"]
        assert rep.condition_iii["pass"]
        assert rep.passes_definition

    def test_product_factor_fails_condition_i(self):
        s = make_state(4, [("0000", 1), ("0111", 1)])  # |0> x ghz3
        rep = classify_max_entanglement(s)
        assert not rep.condition_i["pass"]
        assert [0] in rep.condition_i["failures"]

    def test_psi6_first_and_third(self):
        rep = classify_max_entanglement(states.get("psi6"), name="psi6")
        assert rep.condition_i["pass"]
        assert rep.condition_iii["pass"]
        assert rep.condition_ii_p2["not_evaluable_p"] == [3, 4]

    def test_report_schema(self):
        rep = classify_max_entanglement(states.get("bell"), name="bell").as_dict()
        assert set(rep) == {"state", "condition_i", "condition_i_strong", "condition_ii_p2", "condition_iii"}
        assert {"pass", "failures"} <= set(rep["condition_i"])
        assert {"pairs", "pass"} <= set(rep["condition_ii_p2"])

    def test_catalog_maximal_states_have_mixed_single_sites(self):
        from qcomb.statevec import hermitian_spectrum, reduced_density

        for name in ("phi1", "phi4", "phi5", "psi2", "psi4", "psi5", "psi6"):
            s = states.get(name)
            for j in range(s.num_qubits):
                w = hermitian_spectrum(reduced_density(s, (j,)))
                np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-10, err_msg=name)

    def test_unsupported_qubit_count(self):
        with pytest.raises(MeasureError):
            classify_max_entanglement(random_pure(1, RandomSource(0)))


class TestMonotoneSanity:
    def test_local_unitary_with_renormalization(self):
        # modulus is unchanged by local unitaries (norm preserved, so no
        # homogeneity correction is needed)
        from qcomb.evaluate import measure
        from qcomb.filter_ir import catalog
        from qcomb.invariance import apply_local, random_local_unitary

        for fname, sname in [("F2_1", "bell"), ("F3_1", "ghz3"), ("F4_2", "phi1")]:
            f = catalog().get(fname)
            s = states.get(sname)
            base = measure(f, s)
            for k in range(10):
                u = random_local_unitary(f.num_qubits, RandomSource(600 + k))
                transformed = apply_local(u, s).normalized()
                assert abs(measure(f, transformed) - base) < 1e-8
