import numpy as np

from pyqsvtool.errors import ValidationError, ZeroBranchError
from pyqsvtool.model.layout_model import PauliLayout, axis_eigenvector
from pyqsvtool.model.model import Model
from pyqsvtool.model.state_model import PureState
from pyqsvtool.settings import settings


class Target(Model):
    '''
    Classical description of a target state that answers amplitude queries and
    post-measurement requests.
    '''

    family: str = ''

    def amplitude(self, basis) -> complex:
        """
        Returns <s_1 ... s_n|psi> for a per-qubit list of (axis, bit) pairs.
        """
        raise NotImplementedError

    def post_measurement(self, layout: PauliLayout, outcomes, zero_branch_atol: float | None = None) -> PureState:
        """
        Returns the normalized state left on the unmeasured qubits after
        measuring the layout with the given outcome bits.
        """
        raise NotImplementedError

    def to_state(self) -> PureState:
        raise NotImplementedError

    def z_amplitude(self, bits) -> complex:
        return self.amplitude([('Z', bit) for bit in bits])

    def _check_basis(self, basis) -> list[tuple[str, int]]:
        basis = [(str(axis), int(bit)) for axis, bit in basis]
        if len(basis) != self.n:
            raise ValidationError(f'basis string of length {len(basis)} for a {self.n}-qubit target')
        for axis, bit in basis:
            axis_eigenvector(axis, bit)
        return basis

    def _check_outcomes(self, layout: PauliLayout, outcomes) -> tuple[int, ...]:
        if layout.n != self.n:
            raise ValidationError(f'{layout.n}-qubit layout for a {self.n}-qubit target')
        outcomes = tuple(int(bit) for bit in outcomes)
        if len(outcomes) != layout.t or any(bit not in (0, 1) for bit in outcomes):
            raise ValidationError(f'outcomes {outcomes} do not match {layout!r}')
        return outcomes

    @staticmethod
    def _normalize_branch(
        vector: np.ndarray, layout: PauliLayout, outcomes, zero_branch_atol: float | None = None
    ) -> PureState:
        atol = settings.zero_branch_atol if zero_branch_atol is None else zero_branch_atol
        weight = float(np.real(np.vdot(vector, vector)))
        if weight <= atol:
            raise ZeroBranchError(f'outcome {tuple(outcomes)} of {layout!r} has zero probability')
        return PureState(vector / np.sqrt(weight))


class DenseTarget(Target):

    def __init__(self, state: PureState, family: str = 'dense'):

        super().__init__(state.n)
        self.state: PureState = state
        self.family = family

    def to_state(self) -> PureState:
        return self.state

    def amplitude(self, basis) -> complex:
        basis = self._check_basis(basis)
        tensor = self.state.amplitudes.reshape([2] * self.n) if self.n else self.state.amplitudes
        for axis, bit in basis:
            tensor = np.tensordot(axis_eigenvector(axis, bit).conj(), tensor, axes=([0], [0]))
        return complex(tensor)

    def post_measurement(self, layout: PauliLayout, outcomes, zero_branch_atol: float | None = None) -> PureState:
        outcomes = self._check_outcomes(layout, outcomes)
        tensor = self.state.amplitudes.reshape([2] * self.n)
        # Contract from the last measured qubit so earlier axis positions hold
        for qubit, axis, bit in reversed(list(zip(layout.measured, layout.axes, outcomes))):
            tensor = np.tensordot(axis_eigenvector(axis, bit).conj(), tensor, axes=([0], [qubit]))
        return self._normalize_branch(tensor.reshape(-1), layout, outcomes, zero_branch_atol)

    def __repr__(self) -> str:
        return f'DenseTarget(n={self.n}, family={self.family!r})'
