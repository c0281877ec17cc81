"""
Parallel simulation replicas.

Each replica is an independent Gillespie run with its own seed; a single
replica is strictly sequential, so parallelism is across seeds only.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .config import get_settings
from .models import SimConfig, SimResult
from .services.sim import merge_results, simulate

logger = logging.getLogger(__name__)


class ReplicaPool:
    """
    Runs independent replicas of one configuration.

    Uses a process pool sized by ASEP_THREADS; with one worker the replicas
    run in the calling process.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = max(1, workers or get_settings().threads)

    def run(self, config: SimConfig, seeds: Sequence[int]) -> list[SimResult]:
        configs = [config.model_copy(update={"seed": seed}) for seed in seeds]
        if self.workers == 1 or len(configs) == 1:
            return [simulate(c) for c in configs]
        logger.info("running %d replicas on %d workers", len(configs), self.workers)
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(simulate, configs))

    def run_merged(self, config: SimConfig, seeds: Sequence[int]) -> SimResult:
        return merge_results(self.run(config, seeds))
