import numpy as np

from pyqsvtool.errors import ProtocolConstructionError, ValidationError
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.model.layout_model import PauliLayout
from pyqsvtool.model.state_model import HermitianSpectrum, PureState

PROJECTOR_ATOL = 1e-9
BOUND_ATOL = 1e-9
PROVENANCES = ('plm', 'sop-L', 'dpso', 'stabilizer')


class BinaryTest:
    '''Pass projector E together with the probability of choosing it.'''

    def __init__(self, projector, weight: float, label: str = ''):

        projector = np.array(projector, dtype=complex)
        if projector.ndim != 2 or projector.shape[0] != projector.shape[1]:
            raise ValidationError(f'test projector must be square, got {projector.shape}')
        if np.max(np.abs(projector @ projector - projector)) > PROJECTOR_ATOL:
            raise ValidationError(f'test {label or "?"} is not a projector')
        if weight < 0:
            raise ValidationError(f'test {label or "?"} has negative weight {weight}')

        self.projector: np.ndarray = projector
        self.weight: float = float(weight)
        self.label: str = label

    def fixes(self, state: PureState, atol: float = PROJECTOR_ATOL) -> bool:
        vector = state.amplitudes
        return bool(np.max(np.abs(self.projector @ vector - vector)) <= atol)

    def pass_probability(self, rho: np.ndarray) -> float:
        return float(np.clip(np.real(np.trace(self.projector @ rho)), 0.0, 1.0))


class StrategyOperator:
    '''
    Strategy operator with its target and a lazily computed spectrum.

    Construction checks 0 <= Omega <= I and Omega|psi> = |psi>.
    '''

    def __init__(
        self, matrix, target: PureState, provenance: str,
        tests: list[BinaryTest] | None = None, fixation_atol: float = 1e-8
    ):

        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (target.dim, target.dim):
            raise ValidationError(
                f'strategy operator shape {matrix.shape} does not match a {target.n}-qubit target'
            )
        if provenance not in PROVENANCES:
            raise ValidationError(f'unknown provenance {provenance!r}')

        self.matrix: np.ndarray = (matrix + matrix.conj().T) / 2
        self.target: PureState = target
        self.provenance: str = provenance
        self.tests: list[BinaryTest] = tests or []
        self._spectrum: HermitianSpectrum | None = None

        residual = np.max(np.abs(self.matrix @ target.amplitudes - target.amplitudes))
        if residual > fixation_atol:
            raise ProtocolConstructionError(
                f'{provenance} strategy operator does not fix the target (residual {residual:.3e})'
            )
        eigenvalues = self.spectrum.eigenvalues
        if eigenvalues[-1] < -BOUND_ATOL or eigenvalues[0] > 1 + BOUND_ATOL:
            raise ProtocolConstructionError(
                f'{provenance} strategy operator eigenvalues leave [0, 1]: '
                f'[{eigenvalues[-1]:.3e}, {eigenvalues[0]:.3e}]'
            )

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def spectrum(self) -> HermitianSpectrum:
        if self._spectrum is None:
            self._spectrum = LinAlg.hermitian_eig(self.matrix)
        return self._spectrum

    @property
    def gap(self) -> float:
        return LinAlg.spectral_gap(self)

    def expectation(self, rho: np.ndarray) -> float:
        return float(np.real(np.trace(self.matrix @ rho)))

    def __repr__(self) -> str:
        return f'StrategyOperator({self.provenance}, n={self.n})'


class DpsoTestOperator:
    '''
    Test operator Omega_{K,l} of one layout, with the rank-one branch states
    |z> (x) |phi_{K,z}> of every outcome z of nonzero probability.
    '''

    def __init__(self, layout: PauliLayout, matrix: np.ndarray, branches: dict[tuple[int, ...], np.ndarray]):

        self.layout: PauliLayout = layout
        self.matrix: np.ndarray = matrix
        self.branches: dict[tuple[int, ...], np.ndarray] = branches

    def branch_projector(self, outcomes) -> np.ndarray:
        vector = self.branches.get(tuple(outcomes))
        if vector is None:
            return np.zeros_like(self.matrix)
        return np.outer(vector, vector.conj())

    def as_binary_test(self, weight: float) -> BinaryTest:
        return BinaryTest(self.matrix, weight, label=self.layout.letters())

    def __repr__(self) -> str:
        return f'DpsoTestOperator({self.layout.letters()!r}, branches={len(self.branches)})'
