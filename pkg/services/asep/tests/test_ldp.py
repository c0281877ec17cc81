"""
Density large deviations: closed forms, Legendre duality and finite-N data.
"""
import math

import numpy as np
import pytest

from app.errors import DomainError, FanRegionViolation
from app.models import AwParams
from app.services import ldp
from app.services.ansatz import count_gf_poly
from app.services.params import derive_aw
from app.services.validation import PHASE_EXAMPLES, check_rate_shape


@pytest.fixture(params=sorted(PHASE_EXAMPLES))
def phase_case(request):
    asep = PHASE_EXAMPLES[request.param]
    return request.param, asep, derive_aw(asep)


class TestEntropy:
    def test_zero_at_p(self):
        assert ldp.bernoulli_entropy(0.3, 0.3) == pytest.approx(0.0, abs=1e-15)

    def test_endpoints(self):
        assert ldp.bernoulli_entropy(0.0, 0.25) == pytest.approx(-math.log(0.75))
        assert ldp.bernoulli_entropy(1.0, 0.25) == pytest.approx(-math.log(0.25))

    def test_vectorized(self):
        values = ldp.bernoulli_entropy(np.array([0.1, 0.5]), 0.5)
        assert values.shape == (2,)
        assert values[1] == pytest.approx(0.0, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            ldp.bernoulli_entropy(0.5, 1.0)
        with pytest.raises(DomainError):
            ldp.bernoulli_entropy(1.5, 0.5)


class TestCumulant:
    def test_vanishes_at_zero(self, phase_case):
        _, _, aw = phase_case
        assert ldp.Lambda(0.0, aw) == 0.0

    def test_maximal_current_formula(self):
        aw = derive_aw(PHASE_EXAMPLES["MaximalCurrent"])
        lam = 0.7
        assert ldp.Lambda(lam, aw) == pytest.approx(2 * math.log1p(math.exp(lam / 2)) - 2 * math.log(2))

    def test_low_density_branch(self):
        aw = derive_aw(PHASE_EXAMPLES["LowDensity"])
        # Below 2 log C the cumulant is that of Bernoulli(1/(1+C)).
        lam = 1.0
        rho = 1.0 / (1.0 + aw.C)
        assert ldp.Lambda(lam, aw) == pytest.approx(math.log(1 - rho + rho * math.exp(lam)))

    def test_continuous_at_boundary(self):
        aw = derive_aw(PHASE_EXAMPLES["LowDensity"])
        edge = 2 * math.log(aw.C)
        below = ldp.script_L(edge - 1e-9, aw)
        above = ldp.script_L(edge + 1e-9, aw)
        assert below == pytest.approx(above, abs=1e-8)
        ldp.script_L(edge, aw)

    def test_derivative(self, phase_case):
        _, _, aw = phase_case
        h = 1e-6
        for lam in (-2.0, -0.3, 0.4, 3.5):
            numeric = (ldp.script_L(lam + h, aw) - ldp.script_L(lam - h, aw)) / (2 * h)
            assert ldp.script_L_derivative(lam, aw) == pytest.approx(numeric, abs=1e-6)

    def test_slope_at_zero_is_bulk_density(self, phase_case):
        name, asep, aw = phase_case
        expected = {"LowDensity": 0.2, "HighDensity": 0.8, "MaximalCurrent": 0.5}[name]
        assert ldp.script_L_derivative(0.0, aw) == pytest.approx(expected)

    def test_fan_region(self):
        with pytest.raises(FanRegionViolation):
            ldp.script_L(0.0, AwParams(A=2.0, B=0.0, C=2.0, D=0.0))


class TestRate:
    def test_zero_at_bulk_density(self, phase_case):
        _, _, aw = phase_case
        sample = ldp.rate_table(aw, np.linspace(0, 1, 11))
        assert ldp.rate_I(sample.zero_location, aw) == pytest.approx(0.0, abs=1e-12)

    def test_outside_unit_interval(self, phase_case):
        _, _, aw = phase_case
        assert ldp.rate_I(-0.1, aw) == math.inf
        assert ldp.legendre_rate(1.1, aw) == math.inf

    def test_legendre_duality(self, phase_case):
        _, _, aw = phase_case
        for x in np.linspace(0.05, 0.95, 10):
            assert ldp.legendre_rate(x, aw) == pytest.approx(ldp.rate_I(x, aw), abs=1e-6)

    def test_shape(self):
        assert check_rate_shape().passed

    def test_window(self):
        aw = derive_aw(PHASE_EXAMPLES["MaximalCurrent"])
        assert ldp.window_rate(aw, 0.4, 0.6) == 0.0
        assert ldp.window_rate(aw, 0.6, 0.7) == pytest.approx(ldp.rate_I(0.6, aw))


class TestFiniteN:
    def test_empirical_cumulant(self, phase_case):
        _, asep, aw = phase_case
        poly = count_gf_poly(asep, 200)
        for lam in (-2.0, -1.0, 0.5, 1.0):
            assert ldp.empirical_Lambda(asep, 200, lam, poly) == pytest.approx(ldp.Lambda(lam, aw), abs=0.05)

    def test_empirical_window(self, phase_case):
        _, asep, aw = phase_case
        poly = count_gf_poly(asep, 200)
        for a, b in ((0.6, 0.7), (0.1, 0.2)):
            assert ldp.ldp_window(asep, 200, a, b, poly) == pytest.approx(-ldp.window_rate(aw, a, b), abs=0.05)

    def test_empty_window(self, tasep):
        assert ldp.ldp_window(tasep, 10, 0.51, 0.59) == -math.inf

    def test_semi_infinite_restriction(self):
        aw = derive_aw(PHASE_EXAMPLES["LowDensity"])
        assert ldp.semiinf_Lambda(aw, math.e, 0.5) == pytest.approx(ldp.Lambda(0.5, aw))
        with pytest.raises(DomainError):
            ldp.semiinf_Lambda(aw, 1.0, 0.5)
