import numpy as np
import pytest
from numpy.testing import assert_allclose

from weakprobe.errors import DegenerateInputError, NonMUBBasisError
from weakprobe.models import DiracDistribution
from weakprobe.services import qstate, weakcore
from weakprobe.services.qstate import A, D, DA, H, HV, L, RL


@pytest.fixture
def random_states(rng):
    return [qstate.random_density_matrix(rng) for _ in range(100)]


class TestWeakValue:
    def test_horizontal_post_selected_on_diagonal(self):
        assert weakcore.weak_value(H, 0, 0).value == pytest.approx(1.0)
        assert weakcore.weak_value(H, 1, 0).value == pytest.approx(0.0)

    def test_left_circular(self):
        assert weakcore.weak_value(L, 0, 0).value == pytest.approx(0.5 + 0.5j, abs=1e-12)
        assert weakcore.weak_value(L, 1, 0).value == pytest.approx(0.5 - 0.5j, abs=1e-12)

    def test_linear_30_degrees(self):
        psi = qstate.prepare(15.0)
        w = weakcore.weak_value_pure(psi, 0, 0).value
        assert w.real == pytest.approx(np.cos(np.pi / 6) / (np.cos(np.pi / 6) + np.sin(np.pi / 6)), abs=1e-12)
        assert w.imag == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_post_selection_is_divergent(self):
        w = weakcore.weak_value(A, 0, 0)
        assert w.divergent
        assert np.isnan(w.value.real)
        assert w.probability < 1e-12
        assert w.to_dict()['re'] is None

    def test_pure_and_density_forms_agree(self, rng):
        for _ in range(50):
            psi = qstate.random_ket(rng)
            for i in (0, 1):
                for j in (0, 1):
                    expected = weakcore.weak_value(qstate.density_of(psi), i, j).value
                    assert weakcore.weak_value_pure(psi, i, j).value == pytest.approx(expected, abs=1e-12)

    def test_projector_completeness(self, random_states):
        for rho in random_states:
            for j in (0, 1):
                total = weakcore.weak_value(rho, 0, j).value + weakcore.weak_value(rho, 1, j).value
                assert total == pytest.approx(1.0, abs=1e-12)

    def test_other_bases(self):
        w = weakcore.weak_value(D, 0, 0, basis_a=DA, basis_b=RL)
        assert w.value == pytest.approx(1.0, abs=1e-12)


class TestKetReconstruction:
    def test_inverse_at_30_degrees(self):
        rebuilt = weakcore.ket_from_weak_values(0.6340, 0.3660)
        assert_allclose(rebuilt.ket.amps, [np.cos(np.pi / 6), np.sin(np.pi / 6)], atol=1e-4)

    def test_left_circular_from_single_weak_value(self):
        rebuilt = weakcore.ket_from_single_weak_value(0.5 + 0.5j)
        assert abs(rebuilt.ket.overlap(L)) == pytest.approx(1.0, abs=1e-12)
        assert rebuilt.nu == pytest.approx(1.0)
        assert_allclose(rebuilt.amplitudes, [0.5 + 0.5j, 0.5 - 0.5j], atol=1e-12)

    def test_degenerate_input(self):
        with pytest.raises(DegenerateInputError):
            weakcore.ket_from_weak_values(0.0, 0.0)

    def test_recovers_random_states(self, rng):
        for _ in range(20):
            psi = qstate.random_ket(rng)
            if abs(D.overlap(psi)) ** 2 < 1e-3:
                continue
            w = weakcore.weak_value_pure(psi, 0, 0).value
            rebuilt = weakcore.ket_from_single_weak_value(w)
            assert abs(rebuilt.ket.overlap(psi)) == pytest.approx(1.0, abs=1e-10)


class TestDiracDistribution:
    def test_left_circular(self):
        s = weakcore.dirac_from_rho(L).s
        expected = [[(1 + 1j) / 4, (1 - 1j) / 4], [(1 - 1j) / 4, (1 + 1j) / 4]]
        assert_allclose(s, expected, atol=1e-12)

    def test_horizontal(self):
        assert_allclose(weakcore.dirac_from_rho(H).s, [[0.5, 0.5], [0, 0]], atol=1e-12)

    def test_maximally_mixed_is_uniform(self):
        assert_allclose(weakcore.dirac_from_rho(qstate.maximally_mixed()).s, np.full((2, 2), 0.25), atol=1e-12)

    def test_columns_are_probability_times_weak_values(self, rng):
        rho = qstate.random_density_matrix(rng)
        s = weakcore.dirac_from_rho(rho)
        for j in (0, 1):
            p = qstate.projector_expectation(rho.m, DA[j])
            for i in (0, 1):
                assert s.s[i, j] == pytest.approx(p * weakcore.weak_value(rho, i, j).value, abs=1e-12)

    def test_marginals(self, random_states):
        for rho in random_states:
            s = weakcore.dirac_from_rho(rho)
            assert_allclose(s.column_sums, [qstate.projector_expectation(rho.m, k) for k in DA.kets], atol=1e-12)
            assert_allclose(s.row_sums, [qstate.projector_expectation(rho.m, k) for k in HV.kets], atol=1e-12)
            assert s.total == pytest.approx(1.0, abs=1e-12)

    def test_inversion_recovers_state(self, random_states):
        for rho in random_states:
            estimate = weakcore.rho_from_dirac(weakcore.dirac_from_rho(rho))
            assert np.linalg.norm(estimate.m - rho.m) < 1e-12
            assert estimate.hermiticity_deviation < 1e-12

    def test_circular_post_selection_basis(self, rng):
        rho = qstate.random_density_matrix(rng)
        estimate = weakcore.rho_from_dirac(weakcore.dirac_from_rho(rho, HV, RL))
        assert np.linalg.norm(estimate.m - rho.m) < 1e-12

    def test_perturbed_entry_breaks_hermiticity(self):
        s = weakcore.dirac_from_rho(H).s.copy()
        s[0, 0] += 0.01
        estimate = weakcore.rho_from_dirac(DiracDistribution(s, HV, DA))
        assert estimate.hermiticity_deviation == pytest.approx(0.005 * np.sqrt(2), rel=1e-9)

    def test_non_mub_bases_cannot_be_inverted(self):
        with pytest.raises(NonMUBBasisError):
            weakcore.rho_from_dirac(DiracDistribution(np.eye(2) / 2, HV, HV))


class TestMubCheck:
    @pytest.mark.parametrize('a, b', [(HV, DA), (HV, RL), (DA, RL)])
    def test_standard_pairs_are_unbiased(self, a, b):
        assert weakcore.mub_check(a, b)
        assert weakcore.mub_check(b, a)

    def test_basis_with_itself(self):
        assert not weakcore.mub_check(HV, HV)


class TestPureColumnCheck:
    def test_pure_state_column_is_proportional_to_amplitudes(self, rng):
        for _ in range(20):
            psi = qstate.random_ket(rng)
            if abs(D.overlap(psi)) ** 2 < 1e-3:
                continue
            s = weakcore.dirac_from_rho(psi)
            assert weakcore.pure_column_check(s, psi, 0) < 1e-12

    def test_wavefunction_is_twice_a_column_for_left_circular(self):
        s = weakcore.dirac_from_rho(L)
        assert weakcore.column_scale(s, L, 0) == pytest.approx(2.0, abs=1e-12)

    def test_mixed_state_fails(self):
        s = weakcore.dirac_from_rho(qstate.maximally_mixed())
        assert weakcore.pure_column_check(s, qstate.prepare(10.0, 30.0), 0) > 1e-3
