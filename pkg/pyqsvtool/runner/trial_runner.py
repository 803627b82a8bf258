import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np
from tqdm import tqdm

from pyqsvtool.errors import ValidationError
from pyqsvtool.settings import settings

logger = logging.getLogger(__name__)

T = TypeVar('T')


class TrialRunner:
    '''
    Runs independent Monte Carlo trials, each on its own RNG stream keyed by
    (seed, index), and returns results in trial order whatever the number of
    workers.
    '''

    @staticmethod
    def trial_rng(seed: int, index: int) -> np.random.Generator:
        return np.random.default_rng([int(seed), int(index)])

    @staticmethod
    def run(
        trial: Callable[[int, np.random.Generator], T], count: int, seed: int,
        workers: int | None = None, progress: bool = False, description: str = 'trials'
    ) -> list[T]:
        """
        Calls trial(index, rng) for index = 0 .. count - 1.

        With more than one worker the calls run on a thread pool; numpy
        releases the GIL inside the dense kernels that dominate a trial.
        """
        if count < 1:
            raise ValidationError(f'at least one trial is needed, got {count}')
        workers = settings.workers if workers is None else workers
        if workers < 1:
            raise ValidationError(f'workers must be positive, got {workers}')

        def call(index: int) -> T:
            return trial(index, TrialRunner.trial_rng(seed, index))

        logger.debug('running %d %s on %d worker(s), seed %d', count, description, workers, seed)
        with tqdm(total=count, desc=description, disable=not progress, leave=False) as bar:
            if workers == 1:
                results = []
                for index in range(count):
                    results.append(call(index))
                    bar.update()
                return results
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = []
                for result in pool.map(call, range(count)):
                    results.append(result)
                    bar.update()
                return results
