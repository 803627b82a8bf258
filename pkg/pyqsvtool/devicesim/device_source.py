import logging

import numpy as np

from pyqsvtool.errors import ValidationError, ZeroGapError
from pyqsvtool.model.state_model import DensityOperator, PureState
from pyqsvtool.model.strategy_model import StrategyOperator
from pyqsvtool.parser.target_parser import TargetParser

logger = logging.getLogger(__name__)

KINDS = ('exact', 'worst-case', 'depolarized', 'file')
ORTHOGONALITY_FLOOR = 1e-12


class DeviceSource:
    '''
    i.i.d. emitter of one fixed density operator, built once and shared.
    '''

    def __init__(self, kind: str, state: DensityOperator, parameter: float | None = None):

        if kind not in KINDS:
            raise ValidationError(f'unknown device kind {kind!r}')
        self.kind: str = kind
        self.parameter: float | None = parameter
        self._state: DensityOperator = state

    @classmethod
    def exact(cls, target: PureState) -> 'DeviceSource':
        return cls('exact', DensityOperator(target.projector()))

    @classmethod
    def worst_case(cls, target: PureState, strategy: StrategyOperator | None, epsilon: float) -> 'DeviceSource':
        """
        (1 - eps)|psi><psi| + eps|v2><v2| with v2 the second eigenvector of the
        strategy operator, so that Tr(Omega rho) = 1 - nu eps.
        """
        if strategy is None:
            raise ValidationError('a worst-case device needs the strategy operator')
        if not 0 < epsilon <= 1:
            raise ValidationError(f'epsilon must lie in (0, 1], got {epsilon!r}')
        if strategy.gap <= 0:
            raise ZeroGapError('strategy has zero spectral gap; no worst case at positive infidelity')
        psi = target.amplitudes
        vector = strategy.spectrum.vector(1)
        vector = vector - np.vdot(psi, vector) * psi
        norm = np.linalg.norm(vector)
        if norm < ORTHOGONALITY_FLOOR:
            raise ValidationError('second eigenvector is parallel to the target')
        v2 = PureState(vector / norm)
        state = DensityOperator.mixture([1 - epsilon, epsilon], [target, v2])
        logger.debug('worst-case device at eps=%s: Tr(Omega rho) = %.12f', epsilon, strategy.expectation(state.matrix))
        return cls('worst-case', state, epsilon)

    @classmethod
    def depolarized(cls, target: PureState, p: float) -> 'DeviceSource':
        if not 0 <= p <= 1:
            raise ValidationError(f'depolarizing probability must lie in [0, 1], got {p!r}')
        mixed = DensityOperator.maximally_mixed(target.n)
        return cls('depolarized', DensityOperator.mixture([1 - p, p], [target.density(), mixed]), p)

    @classmethod
    def from_matrix(cls, matrix) -> 'DeviceSource':
        return cls('file', matrix if isinstance(matrix, DensityOperator) else DensityOperator(matrix))

    @classmethod
    def from_file(cls, path: str) -> 'DeviceSource':
        return cls('file', TargetParser.parse_density_file(path))

    @property
    def n(self) -> int:
        return self._state.n

    def emit(self) -> DensityOperator:
        return self._state

    def stream(self, count: int) -> list[DensityOperator]:
        if count < 1:
            raise ValidationError(f'at least one state is needed, got {count}')
        return [self._state] * count

    def __repr__(self) -> str:
        return f'DeviceSource({self.kind!r}, n={self.n})'
