"""
Matrix-product observables against the brute-force chain and closed forms.
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.errors import (
    DegenerateDenominator,
    FanRegionViolation,
    IndexOutOfRange,
    LengthMismatch,
    ParameterOutOfRange,
    QuadratureFailure,
    SizeLimitExceeded,
)
from app.models import AsepParams, AwParams
from app.services import ansatz, oracle
from app.services.awdist import marginal_z
from app.services.params import derive_aw
from app.services.validation import PARAMETER_GRID, check_algebraic_identities


class TestRecurrence:
    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateDenominator) as excinfo:
            ansatz.aw_recurrence_coeffs(0, 1.0, 1.0, 1.0, 1.0, 0.0)
        assert excinfo.value.code == "DEGENERATE_DENOMINATOR"

    def test_chebyshev_limit(self):
        # All parameters zero: 2x U_n = U_{n+1} + U_{n-1}.
        for n in range(1, 5):
            abar, bn, cbar = ansatz.aw_recurrence_coeffs(n, 0.0, 0.0, 0.0, 0.0, 0.0)
            assert (abar, bn, cbar) == pytest.approx((1.0, 0.0, 1.0))

    def test_regular_at_vanishing_a(self):
        _, bn, _ = ansatz.aw_recurrence_coeffs(2, 0.0, 0.3, -0.2, 0.4, 0.5)
        _, near, _ = ansatz.aw_recurrence_coeffs(2, 1e-9, 0.3, -0.2, 0.4, 0.5)
        assert bn == pytest.approx(near, abs=1e-8)


class TestJacobiPair:
    def test_truncation_size(self, tasep_aw):
        with pytest.raises(SizeLimitExceeded):
            ansatz.jacobi_pair(tasep_aw, 1)

    def test_fan_region(self):
        with pytest.raises(FanRegionViolation):
            ansatz.jacobi_pair(AwParams(A=2.0, B=0.0, C=2.0, D=0.0), 4)

    def test_q_commutation(self, general):
        pair = ansatz.jacobi_pair(derive_aw(general), 12)
        x, y = pair.x_matrix(), pair.y_matrix()
        commutator = x @ y - general.q * y @ x
        assert_allclose(commutator[:11, :11], np.eye(11), atol=1e-12)

    def test_algebraic_identities_across_grid(self):
        assert check_algebraic_identities().passed

    def test_bands_are_affine_in_t(self, general):
        pair = ansatz.jacobi_pair(derive_aw(general), 6)
        at = [pair.jacobi_bands(t) for t in (0.5, 1.5, 2.5)]
        for low, mid, high in zip(*at):
            assert_allclose(mid, 0.5 * (low + high), atol=1e-13)

    @pytest.mark.parametrize("asep", [AsepParams(alpha=1.0, beta=1.0), AsepParams(alpha=0.6, beta=0.8, gamma=0.2, delta=0.3, q=0.5)])
    def test_recurrence_polynomials_are_orthogonal(self, asep):
        aw = derive_aw(asep)
        pair = ansatz.jacobi_pair(aw, 10)
        law = marginal_z(aw, 1.0).scaled(1.0 / math.sqrt(1.0 - asep.q))
        z, m = law.points_and_masses()
        r = ansatz.recurrence_polynomials(pair, 1.0, 6, z)
        gram = (r * m) @ r.T
        norms = np.sqrt(np.diag(gram))
        assert_allclose(gram / np.outer(norms, norms), np.eye(7), atol=1e-9)


class TestJointGf:
    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_matches_oracle(self, asep):
        rng = np.random.default_rng(7)
        for N in range(1, 5):
            table = oracle.stationary_table(asep, N)
            for _ in range(3):
                t = rng.uniform(0.1, 3.0, size=N)
                assert ansatz.joint_gf_exact(asep, t) == pytest.approx(oracle.joint_gf(table, t), rel=1e-10)

    def test_normalized(self, general):
        assert ansatz.joint_gf_exact(general, [1.0] * 6) == pytest.approx(1.0)

    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_truncation_is_exact(self, asep):
        t = np.linspace(0.3, 2.5, 7)
        narrow = ansatz.joint_gf_exact(asep, t, M=len(t) + 2)
        wide = ansatz.joint_gf_exact(asep, t, M=len(t) + 10)
        assert wide == pytest.approx(narrow, abs=1e-13)

    def test_empty(self, general):
        with pytest.raises(LengthMismatch):
            ansatz.joint_gf_exact(general, [])

    def test_size_limit(self, tasep, monkeypatch):
        monkeypatch.setenv("ASEP_MAX_ANSATZ_SITES", "5")
        from app.config import get_settings
        get_settings.cache_clear()
        with pytest.raises(SizeLimitExceeded):
            ansatz.partition(tasep, 6)


class TestPartition:
    def test_catalan(self, tasep):
        for N in range(1, 16):
            assert ansatz.partition(tasep, N) == pytest.approx(ansatz.catalan(N + 1), rel=1e-10)

    def test_empty_lattice(self, tasep):
        assert ansatz.log_partition(tasep, 0) == 0.0

    def test_large_n_has_no_overflow(self, tasep):
        value = ansatz.log_partition(tasep, 400)
        expected = math.lgamma(803) - math.lgamma(402) - math.lgamma(403)
        assert value == pytest.approx(expected, rel=1e-10)

    def test_integral_form(self):
        for N in range(0, 8):
            assert ansatz.k_integral(0.8, 1.3, N) == pytest.approx(
                ansatz.partition(AsepParams(alpha=0.8, beta=1.3), N), rel=1e-9
            )


class TestProfile:
    def test_small_tasep(self, tasep):
        assert_allclose(ansatz.profile_exact(tasep, 2), [0.6, 0.4], atol=1e-12)
        assert_allclose(ansatz.profile_exact(tasep, 3), [9 / 14, 0.5, 5 / 14], atol=1e-12)

    def test_catalan_steps(self, tasep):
        for N in range(2, 13):
            profile = ansatz.profile_exact(tasep, N)
            steps = [float(ansatz.catalan_diff(N, j)) for j in range(1, N)]
            assert_allclose(profile[:-1] - profile[1:], steps, atol=1e-12)

    def test_catalan_diff(self):
        assert ansatz.catalan_diff(2, 1) == Fraction(1, 5)
        with pytest.raises(IndexOutOfRange):
            ansatz.catalan_diff(3, 3)

    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_matches_oracle(self, asep):
        table = oracle.stationary_table(asep, 6)
        assert_allclose(ansatz.profile_exact(asep, 6), oracle.occupancy_profile(table), atol=1e-11)

    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_last_site(self, asep):
        assert ansatz.tau_last(asep, 7) == pytest.approx(ansatz.profile_exact(asep, 7)[-1], abs=1e-11)

    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_truncation_is_exact(self, asep):
        N = 9
        assert_allclose(ansatz.profile_exact(asep, N, M=N + 10), ansatz.profile_exact(asep, N, M=N + 2), atol=1e-13)

    def test_low_density_bulk(self, low_density):
        profile = ansatz.profile_exact(low_density, 200)
        assert profile[100] == pytest.approx(0.2, abs=1e-6)


class TestCountPolynomial:
    @pytest.mark.parametrize("asep", PARAMETER_GRID[:6])
    def test_matches_oracle(self, asep):
        table = oracle.stationary_table(asep, 6)
        poly = ansatz.count_gf_poly(asep, 6)
        assert_allclose(poly.probabilities, oracle.count_distribution(table), atol=1e-12)

    def test_evaluation(self, general):
        poly = ansatz.count_gf_poly(general, 8)
        assert poly.log_eval(1.0) == pytest.approx(poly.log_partition)
        assert poly.log_partition == pytest.approx(ansatz.log_partition(general, 8))
        assert math.exp(poly.log_eval(0.5) - poly.log_partition) == pytest.approx(
            ansatz.joint_gf_exact(general, [0.5] * 8)
        )

    def test_catalan_coefficients(self, tasep):
        # Narayana numbers count the TASEP configurations by particle number.
        assert_allclose(ansatz.count_gf_poly(tasep, 3).coefficients, [1, 6, 6, 1], rtol=1e-12)

    def test_rounding_negatives_are_zeroed(self):
        cleaned = ansatz.clean_coefficients(np.array([1.0, -1e-15, 0.5]))
        assert cleaned.tolist() == [1.0, 0.0, 0.5]

    def test_large_negative_coefficient_is_an_error(self):
        with pytest.raises(QuadratureFailure):
            ansatz.clean_coefficients(np.array([1.0, -1e-6, 0.5]))


class TestSchutz:
    @pytest.mark.parametrize("alpha,beta", [(0.6, 0.8), (1.0, 1.0), (1.3, 0.6)])
    def test_profile_steps(self, alpha, beta):
        asep = AsepParams(alpha=alpha, beta=beta)
        for N in range(2, 7):
            profile = ansatz.profile_exact(asep, N)
            for j in range(1, N):
                step = ansatz.schutz_factors(alpha, beta, N, j).difference
                assert step == pytest.approx(profile[j - 1] - profile[j], abs=1e-8)

    def test_left_factor_depends_on_alpha_only(self):
        a = ansatz.schutz_factors(0.8, 0.9, 6, 3)
        b = ansatz.schutz_factors(0.8, 1.4, 6, 3)
        assert a.f_left == pytest.approx(b.f_left)
        assert a.f_right != pytest.approx(b.f_right)

    def test_range(self):
        with pytest.raises(ParameterOutOfRange):
            ansatz.schutz_factors(0.4, 1.0, 4, 2)
        with pytest.raises(IndexOutOfRange):
            ansatz.schutz_factors(1.0, 1.0, 4, 4)
