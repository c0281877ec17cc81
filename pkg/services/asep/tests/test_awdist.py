"""
Askey-Wilson laws, the marginals and transitions of Z_t, and measure hygiene.
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.errors import DomainError, QuadratureFailure, UnsupportedAtomConfiguration
from app.models import AsepParams
from app.services import ansatz, awdist
from app.services.params import derive_aw
from app.services.validation import PARAMETER_GRID, check_measure_hygiene


class TestAskeyWilson:
    def test_semicircle(self):
        nu = awdist.aw_measure(0.0, 0.0, 0.0, 0.0, 0.0)
        assert nu.total_mass == pytest.approx(1.0, abs=1e-12)
        assert nu.density(0.0) == pytest.approx(2.0 / math.pi)
        assert awdist.aw_density(0.0, 0.0, 0.0, 0.0, 0.0, 0.0) == pytest.approx(2.0 / math.pi)

    def test_density_outside(self):
        with pytest.raises(DomainError):
            awdist.aw_density(1.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def test_single_atom_at_q_zero(self):
        atoms = awdist.aw_atoms(0.0, 0.0, 4.0, 0.0, 0.0)
        assert len(atoms) == 1
        assert atoms[0].location == pytest.approx(2.125)
        assert atoms[0].mass == pytest.approx(15.0 / 16.0)

    @pytest.mark.parametrize("q", [0.0, 0.3, 0.6])
    def test_total_mass_with_atoms(self, q):
        nu = awdist.aw_measure(0.2, -0.3, 2.5, 0.1, q)
        assert len(nu.atoms) >= 1
        assert nu.total_mass == pytest.approx(1.0, abs=1e-9)

    def test_two_generators(self):
        nu = awdist.aw_measure(2.0, 0.0, 0.0, -1.5, 0.0)
        assert len(nu.atoms) == 2
        assert nu.total_mass == pytest.approx(1.0, abs=1e-9)

    def test_conflicting_generators(self):
        with pytest.raises(UnsupportedAtomConfiguration):
            awdist.aw_atoms(2.0, 0.0, 1.5, 0.0, 0.0)

    def test_complex_pair(self):
        nu = awdist.aw_measure(0.3 + 0.4j, 0.3 - 0.4j, 0.2, 0.1, 0.5)
        assert nu.total_mass == pytest.approx(1.0, abs=1e-9)


class TestMarginals:
    def test_semicircle_marginal(self, tasep_aw):
        law = awdist.marginal_z(tasep_aw, 2.0)
        assert law.support() == pytest.approx((-2 * math.sqrt(2), 2 * math.sqrt(2)))
        assert law.mean() == pytest.approx(0.0, abs=1e-12)
        assert law.variance() == pytest.approx(2.0, rel=1e-10)

    def test_low_density_atom(self, low_density_aw):
        law = awdist.marginal_z(low_density_aw, 1.0)
        assert [a.location for a in law.atoms] == pytest.approx([4.25])
        assert law.atoms[0].mass == pytest.approx(15.0 / 16.0)
        assert law.support()[1] == pytest.approx(awdist.support_envelope(low_density_aw).upper(1.0))

    def test_atom_leaves_after_c_squared(self, low_density_aw):
        assert awdist.marginal_z(low_density_aw, 20.0).atoms == ()

    def test_time_must_be_positive(self, tasep_aw):
        with pytest.raises(DomainError):
            awdist.marginal_z(tasep_aw, 0.0)

    def test_partition_moment(self, tasep_aw):
        for N in range(1, 10):
            assert awdist.moment_power(tasep_aw, 1.0, N) == pytest.approx(ansatz.catalan(N + 1), rel=1e-10)

    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_partition_moment_across_grid(self, asep):
        aw = derive_aw(asep)
        for N in (1, 4, 9):
            moment = awdist.moment_power(aw, 1.0, N) / (1.0 - asep.q) ** N
            assert moment == pytest.approx(ansatz.partition(asep, N), rel=1e-8)

    def test_rational_kernel_partition(self):
        asep = AsepParams(alpha=0.8, beta=1.3)
        aw = derive_aw(asep)
        for N in range(1, 12):
            assert awdist.derrida_partition(aw, N) == pytest.approx(ansatz.partition(asep, N), rel=1e-8)

    def test_rational_kernel_requires_small_parameters(self, low_density_aw, general):
        with pytest.raises(DomainError):
            awdist.derrida_partition(low_density_aw, 3)
        with pytest.raises(DomainError):
            awdist.derrida_partition(derive_aw(general), 3)


class TestTransitions:
    def test_kernel_pair_roots(self):
        c, d = awdist.kernel_pair(0.7, 0.4, 1.3)
        assert (c + d).real == pytest.approx(0.7 / math.sqrt(1.3))
        assert (c * d).real == pytest.approx(0.4 / 1.3)

    def test_kernel_pair_from_zero(self):
        c, d = awdist.kernel_pair(0.7, 0.0, 1.3)
        assert c.real == pytest.approx(0.7 / math.sqrt(1.3))
        assert d == 0

    @pytest.mark.parametrize("s,t,w", [(0.5, 1.0, 0.3), (0.0, 1.0, 0.8), (1.0, 3.0, -1.5)])
    def test_transition_is_probability(self, general, s, t, w):
        law = awdist.transition_z(derive_aw(general), s, t, w)
        assert law.total_mass == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("fixture", ["tasep_aw", "low_density_aw"])
    def test_chapman_kolmogorov_moments(self, request, fixture):
        # Averaging the transition over the marginal at s reproduces the marginal at t.
        aw = request.getfixturevalue(fixture)
        s, t = 0.5, 1.5
        start = awdist.marginal_z(aw, s)
        target = awdist.marginal_z(aw, t)
        x, m = start.points_and_masses()
        kernels = [awdist.transition_z(aw, s, t, xi) for xi in x]
        for k in range(5):
            mixed = sum(mi * law.moment(k) for law, mi in zip(kernels, m))
            assert mixed == pytest.approx(target.moment(k), rel=1e-7, abs=1e-9)

    def test_ordering(self, tasep_aw):
        with pytest.raises(DomainError):
            awdist.transition_z(tasep_aw, 1.0, 1.0, 0.0)


class TestMixedMeasure:
    def test_point_mass(self):
        delta = awdist.MixedMeasure.point_mass(1.5)
        assert delta.expect(lambda x: x**2) == pytest.approx(2.25)
        assert delta.support() == (1.5, 1.5)

    def test_scaling(self, tasep_aw):
        law = awdist.marginal_z(tasep_aw, 1.0).scaled(3.0, 1.0)
        assert law.mean() == pytest.approx(1.0)
        assert law.variance() == pytest.approx(9.0, rel=1e-10)
        with pytest.raises(DomainError):
            law.scaled(-1.0)

    def test_adaptive_matches_fixed_rule(self, general):
        law = awdist.marginal_z(derive_aw(general), 1.0)
        assert law.expect_adaptive(lambda x: x**4) == pytest.approx(law.moment(4), rel=1e-10)


class TestHygiene:
    @pytest.mark.parametrize("asep", PARAMETER_GRID)
    def test_envelope_and_mass(self, asep):
        aw = derive_aw(asep)
        for t in (0.3, 1.0, 4.0):
            law = awdist.marginal_z(aw, t)
            assert awdist.check_envelope(law, aw, t)
            awdist.check_mass(law)
            points, _ = law.points_and_masses()
            assert np.min(1.0 + t + points) >= -1e-12

    def test_check_mass_rejects(self):
        bad = awdist.MixedMeasure.build(0.0, 0.0, None, [awdist.Atom(location=0.0, mass=0.5)])
        with pytest.raises(QuadratureFailure):
            awdist.check_mass(bad)

    def test_suite_check(self):
        assert check_measure_hygiene().passed

    def test_envelope_at_maximal_current(self, tasep_aw):
        env = awdist.support_envelope(tasep_aw)
        assert_allclose([env.lower(4.0), env.upper(4.0)], [-4.0, 4.0])
