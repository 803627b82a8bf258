import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import PauliLayout
from pyqsvtool.model.state_model import PureState
from pyqsvtool.stabilizer.group import StabilizerGroup
from pyqsvtool.targets.target import DenseTarget, Target


class StabilizerTarget(Target):
    '''
    Stabilizer state given by n independent commuting generators.

    Dense amplitudes are built on first use unless supplied; `family` tags
    targets with known symmetry, such as 'ghz'.
    '''

    def __init__(self, group: StabilizerGroup, state: PureState | None = None, family: str = 'stabilizer'):

        super().__init__(group.n)
        if group.rank != group.n:
            raise ValidationError(f'{group.rank} generators do not fix a {group.n}-qubit state')
        if state is not None and state.n != group.n:
            raise ValidationError('dense state and generators disagree on the qubit count')

        self.group: StabilizerGroup = group
        self.family = family
        self._state: PureState | None = state

    @classmethod
    def from_strings(cls, strings, family: str = 'stabilizer') -> 'StabilizerTarget':
        return cls(StabilizerGroup.from_strings(strings), family=family)

    def to_state(self) -> PureState:
        if self._state is None:
            self._state = PureState.normalized(self.group.state_vector())
        return self._state

    def to_dense_target(self) -> DenseTarget:
        return DenseTarget(self.to_state(), family=self.family)

    def generator_strings(self) -> list[str]:
        return [str(generator) for generator in self.group.generators]

    def basis_state(self, w) -> np.ndarray:
        """Common eigenvector S_w with generator i's sign flipped when w_i = 1."""
        return self.group.signed(w).state_vector()

    def amplitude(self, basis) -> complex:
        return self.to_dense_target().amplitude(basis)

    def post_measurement(self, layout: PauliLayout, outcomes, zero_branch_atol: float | None = None) -> PureState:
        return self.to_dense_target().post_measurement(layout, outcomes, zero_branch_atol)

    def __repr__(self) -> str:
        return f'StabilizerTarget({self.generator_strings()}, family={self.family!r})'
