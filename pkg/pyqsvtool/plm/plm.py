import logging
import math

import numpy as np

from pyqsvtool.errors import ProtocolConstructionError, ValidationError, ZeroGapError
from pyqsvtool.model.report_model import PlmVerdict
from pyqsvtool.model.state_model import DensityOperator, PureState
from pyqsvtool.model.strategy_model import BinaryTest, StrategyOperator
from pyqsvtool.settings import settings

logger = logging.getLogger(__name__)

WEIGHT_SUM_ATOL = 1e-10


class PLM:
    '''
    Pass/fail verification: each copy gets a test drawn from the strategy,
    and one failure rejects the device.
    '''

    @staticmethod
    def build_strategy(
        tests: list[BinaryTest], target: PureState, fixation_atol: float | None = None
    ) -> StrategyOperator:
        """
        Omega = sum_j p_j E_j.

        Every test must fix the target; the first one that does not is named
        in the raised error.
        """
        if not tests:
            raise ValidationError('a strategy needs at least one test')
        total = math.fsum(test.weight for test in tests)
        if abs(total - 1.0) > WEIGHT_SUM_ATOL:
            raise ValidationError(f'test weights sum to {total!r}, not 1')
        for index, test in enumerate(tests):
            if test.projector.shape != (target.dim, target.dim):
                raise ValidationError(f'test {test.label or index} does not act on the target register')
            if not test.fixes(target):
                raise ProtocolConstructionError(f'test {test.label or index} does not fix the target state')

        matrix = sum(test.weight * test.projector for test in tests)
        return StrategyOperator(
            matrix, target, 'plm', tests=list(tests),
            fixation_atol=settings.fixation_atol if fixation_atol is None else fixation_atol
        )

    @staticmethod
    def plm_run(states, strategy: StrategyOperator, rng: np.random.Generator, epsilon: float | None = None) -> PlmVerdict:
        """
        Runs the tests on the given sequence of device states.

        Each copy draws a test by weight and passes with probability
        Tr(E rho). Returns at the first failure.
        """
        states = list(states)
        if not states:
            raise ValidationError('the device produced no states')
        if not strategy.tests:
            raise ValidationError('strategy operator carries no binary tests')
        gap = strategy.gap
        if gap <= 0:
            raise ZeroGapError('strategy has zero spectral gap; refusing to run')

        weights = np.array([test.weight for test in strategy.tests])
        weights = weights / weights.sum()
        type_i = None if epsilon is None else (1 - gap * epsilon) ** len(states)

        for index, state in enumerate(states):
            rho = state.matrix if isinstance(state, DensityOperator) else np.asarray(state)
            test = strategy.tests[int(rng.choice(len(weights), p=weights))]
            if rng.random() >= test.pass_probability(rho):
                logger.info('copy %d failed test %s', index, test.label)
                return PlmVerdict(len(states), index, gap, type_i)
        return PlmVerdict(len(states), None, gap, type_i)

    @staticmethod
    def plm_sample_complexity(epsilon: float, delta: float, nu: float, approximate: bool = False) -> int:
        """
        N = ceil(ln delta / ln(1 - nu eps)), or ceil(ln(1/delta) / (nu eps))
        when approximate.
        """
        if nu <= 0:
            raise ZeroGapError('spectral gap is zero; no number of copies suffices')
        if not 0 < epsilon <= 1 or not 0 < delta < 1 or nu > 1:
            raise ValidationError(f'invalid parameters epsilon={epsilon!r}, delta={delta!r}, nu={nu!r}')
        margin = nu * epsilon
        if approximate:
            return max(1, math.ceil(math.log(1 / delta) / margin))
        if margin >= 1:
            return 1
        return max(1, math.ceil(math.log(delta) / math.log(1 - margin)))

    @staticmethod
    def worst_case_pass_probability(strategy: StrategyOperator, epsilon: float) -> float:
        """max Tr(Omega rho) over states with infidelity epsilon: 1 - nu eps."""
        return 1.0 - strategy.gap * epsilon
