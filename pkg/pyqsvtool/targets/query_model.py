import itertools

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import AXES, PauliLayout
from pyqsvtool.model.state_model import PureState
from pyqsvtool.targets.target import Target


class GeneralizedQueryModel(Target):
    '''
    Amplitude oracle in a fixed mixed-axis product basis.

    Wraps any target and answers queries <s_1 ... s_n|psi> where qubit j is
    read in axes[j]. Post-measurement states are rebuilt from 2**r queries,
    so the backing target only needs to answer amplitudes.
    '''

    def __init__(self, target: Target, axes: str):

        super().__init__(target.n)
        if len(axes) != target.n or any(axis not in AXES for axis in axes):
            raise ValidationError(f'axis assignment {axes!r} does not fit a {target.n}-qubit target')
        self.target: Target = target
        self.axes: str = axes
        self.family = target.family

    def query(self, bits) -> complex:
        bits = tuple(int(bit) for bit in bits)
        if len(bits) != self.n:
            raise ValidationError(f'query of length {len(bits)} for a {self.n}-qubit target')
        return self.target.amplitude(list(zip(self.axes, bits)))

    def amplitude(self, basis) -> complex:
        return self.target.amplitude(basis)

    def amplitudes(self) -> np.ndarray:
        return np.array([self.query(bits) for bits in itertools.product((0, 1), repeat=self.n)])

    def post_measurement(self, layout: PauliLayout, outcomes, zero_branch_atol: float | None = None) -> PureState:
        """
        Post-measurement state on K in the computational basis.

        The layout's measured axes are used as given; unmeasured qubits are
        queried in Z so the result is expressed in the standard basis.
        """
        outcomes = self._check_outcomes(layout, outcomes)
        fixed = dict(zip(layout.measured, zip(layout.axes, outcomes)))
        vector = np.empty(2 ** layout.r, dtype=complex)
        for index, bits in enumerate(itertools.product((0, 1), repeat=layout.r)):
            free = dict(zip(layout.unmeasured, bits))
            basis = [fixed[q] if q in fixed else ('Z', free[q]) for q in range(self.n)]
            vector[index] = self.target.amplitude(basis)
        return self._normalize_branch(vector, layout, outcomes, zero_branch_atol)

    def to_state(self) -> PureState:
        return self.target.to_state()

    def __repr__(self) -> str:
        return f'GeneralizedQueryModel({self.target!r}, {self.axes!r})'
