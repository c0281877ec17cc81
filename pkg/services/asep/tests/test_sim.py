"""
Event-driven simulator: sum tree, determinism, replica merging and
statistical agreement with the exact profile.
"""
import numpy as np
import pytest

from app.models import AsepParams, SimConfig
from app.services.ansatz import count_gf_poly, profile_exact
from app.services.sim import RNG_ALGORITHM, RateTree, merge_results, simulate
from app.services.validation import PHASE_EXAMPLES
from app.tasks import ReplicaPool


class TestRateTree:
    def test_total_and_update(self):
        tree = RateTree([1.0, 2.0, 0.5])
        assert tree.total == pytest.approx(3.5)
        tree.update(1, 0.0)
        assert tree.total == pytest.approx(1.5)
        assert tree.rate(2) == 0.5

    def test_find(self):
        tree = RateTree([1.0, 2.0, 0.0, 0.5])
        assert tree.find(0.5) == 0
        assert tree.find(1.5) == 1
        assert tree.find(3.2) == 3

    def test_never_selects_zero_rate(self):
        tree = RateTree([1.0, 0.0, 0.0])
        assert tree.find(0.999999) == 0


def short_config(**overrides) -> SimConfig:
    values = dict(
        asep=AsepParams(alpha=0.6, beta=0.8, gamma=0.2, delta=0.3, q=0.5),
        n_sites=6,
        total_time=200.0,
        burn_in_time=20.0,
        seed=3,
        batch_count=10,
    )
    values.update(overrides)
    return SimConfig(**values)


class TestSimulate:
    def test_deterministic_given_seed(self):
        first = simulate(short_config())
        second = simulate(short_config())
        assert first == second
        assert first.rng_algorithm == RNG_ALGORITHM

    def test_seed_changes_path(self):
        assert simulate(short_config()).occupancies != simulate(short_config(seed=4)).occupancies

    def test_shapes_and_bounds(self):
        result = simulate(short_config())
        assert len(result.occupancies) == 6
        assert len(result.count_histogram) == 7
        assert sum(result.count_histogram) == pytest.approx(1.0)
        assert all(0.0 <= v <= 1.0 for v in result.occupancies)
        assert result.measured_time == pytest.approx(180.0)
        assert result.event_count > 0

    def test_flux_balance(self):
        result = simulate(short_config(total_time=4000.0, burn_in_time=100.0))
        gap = abs(result.injection_flux - result.extraction_flux)
        assert gap < 5 * np.hypot(result.injection_se, result.extraction_se) + 0.01

    @pytest.mark.slow
    def test_standard_errors_shrink_with_time(self):
        # Doubling the measured time at a fixed batch count divides the batch-means SE by sqrt(2).
        def mean_se(measured: float) -> float:
            configs = [
                short_config(n_sites=5, burn_in_time=100.0, total_time=100.0 + measured, batch_count=20, seed=s)
                for s in range(6)
            ]
            return float(np.mean([simulate(c).occupancy_se for c in configs]))

        ratio = mean_se(2000.0) / mean_se(4000.0)
        assert ratio == pytest.approx(np.sqrt(2.0), abs=0.25)


class TestReplicas:
    def test_merge_single(self):
        result = simulate(short_config())
        assert merge_results([result]).occupancies == pytest.approx(result.occupancies)

    def test_merge_weights(self):
        a = simulate(short_config(seed=1))
        b = simulate(short_config(seed=2))
        merged = merge_results([a, b])
        assert merged.measured_time == pytest.approx(a.measured_time + b.measured_time)
        assert merged.occupancies == pytest.approx(
            [(x + y) / 2 for x, y in zip(a.occupancies, b.occupancies)]
        )
        assert merged.event_count == a.event_count + b.event_count

    def test_merge_rejects_mixed_sizes(self):
        with pytest.raises(ValueError):
            merge_results([simulate(short_config()), simulate(short_config(n_sites=5))])
        with pytest.raises(ValueError):
            merge_results([])

    def test_pool_matches_sequential(self):
        config = short_config()
        pooled = ReplicaPool(workers=1).run(config, [5, 6])
        assert pooled[1] == simulate(config.model_copy(update={"seed": 6}))


@pytest.mark.slow
@pytest.mark.parametrize("phase", sorted(PHASE_EXAMPLES))
def test_agreement_with_exact_profile(phase):
    asep = PHASE_EXAMPLES[phase]
    N = 20
    result = simulate(SimConfig(asep=asep, n_sites=N, total_time=1.5e5, burn_in_time=5e3, seed=11, batch_count=20))
    exact = profile_exact(asep, N)
    z = np.abs(np.array(result.occupancies) - exact) / np.array(result.occupancy_se)
    assert np.max(z) < 4.5
    counts = count_gf_poly(asep, N).probabilities
    assert 0.5 * np.sum(np.abs(np.array(result.count_histogram) - counts)) <= 0.02
