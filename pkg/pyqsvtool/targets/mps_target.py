import logging

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import PauliLayout, axis_eigenvector
from pyqsvtool.model.state_model import PureState
from pyqsvtool.targets.target import Target

logger = logging.getLogger(__name__)

MPS_NORM_ATOL = 1e-10
SINGULAR_VALUE_CUTOFF = 1e-14


class MpsTarget(Target):
    '''
    Open boundary matrix product state with site tensors of shape
    (left bond, 2, right bond).
    '''

    def __init__(self, tensors, max_bond: int | None = None, family: str = 'mps'):

        tensors = [np.array(tensor, dtype=complex) for tensor in tensors]
        if not tensors:
            raise ValidationError('an MPS needs at least one site tensor')
        super().__init__(len(tensors))

        for site, tensor in enumerate(tensors):
            if tensor.ndim != 3 or tensor.shape[1] != 2:
                raise ValidationError(f'site {site} tensor has shape {tensor.shape}, expected (Dl, 2, Dr)')
            if site and tensors[site - 1].shape[2] != tensor.shape[0]:
                raise ValidationError(f'bond mismatch between sites {site - 1} and {site}')
            if max_bond is not None and max(tensor.shape[0], tensor.shape[2]) > max_bond:
                raise ValidationError(f'site {site} exceeds bond dimension {max_bond}')
        if tensors[0].shape[0] != 1 or tensors[-1].shape[2] != 1:
            raise ValidationError('boundary bond dimensions must be 1')

        self.tensors: list[np.ndarray] = tensors
        self.family = family

        norm = self.norm()
        if abs(norm - 1.0) > MPS_NORM_ATOL:
            raise ValidationError(f'MPS norm {norm!r} differs from 1')

    @classmethod
    def from_dense(cls, state: PureState) -> 'MpsTarget':
        """
        Exact decomposition by successive SVDs, dropping only numerically zero
        singular values.
        """
        tensors = []
        remainder = state.amplitudes.reshape(1, -1)
        left = 1
        for _ in range(state.n - 1):
            u, s, vh = np.linalg.svd(remainder.reshape(left * 2, -1), full_matrices=False)
            kept = max(1, int(np.sum(s > SINGULAR_VALUE_CUTOFF)))
            tensors.append(u[:, :kept].reshape(left, 2, kept))
            remainder = s[:kept, None] * vh[:kept]
            left = kept
        tensors.append(remainder.reshape(left, 2, 1))
        logger.debug('exact MPS of %d sites, bond dimensions %s', state.n, [t.shape[2] for t in tensors])
        return cls(tensors)

    @classmethod
    def product(cls, bits) -> 'MpsTarget':
        tensors = []
        for bit in bits:
            tensor = np.zeros((1, 2, 1), dtype=complex)
            tensor[0, int(bit), 0] = 1.0
            tensors.append(tensor)
        return cls(tensors, family='product')

    @property
    def bond_dimension(self) -> int:
        return max(tensor.shape[2] for tensor in self.tensors)

    def norm(self) -> float:
        environment = np.ones((1, 1), dtype=complex)
        for tensor in self.tensors:
            environment = np.einsum('ab,aic,bid->cd', environment, tensor.conj(), tensor)
        return float(np.sqrt(abs(environment[0, 0])))

    def _site_matrix(self, site: int, axis: str, bit: int) -> np.ndarray:
        tensor = self.tensors[site]
        if axis == 'Z':
            return tensor[:, bit, :]
        # Basis change absorbed into the site tensor before contraction
        return np.tensordot(axis_eigenvector(axis, bit).conj(), tensor, axes=([0], [1]))

    def amplitude(self, basis) -> complex:
        basis = self._check_basis(basis)
        row = np.ones((1, 1), dtype=complex)
        for site, (axis, bit) in enumerate(basis):
            row = row @ self._site_matrix(site, axis, bit)
        return complex(row[0, 0])

    def post_measurement(self, layout: PauliLayout, outcomes, zero_branch_atol: float | None = None) -> PureState:
        """
        Contracts measured sites with their outcome vectors while the open
        physical legs of unmeasured sites accumulate into a 2**r register.
        """
        outcomes = self._check_outcomes(layout, outcomes)
        measured = dict(zip(layout.measured, zip(layout.axes, outcomes)))

        environment = np.ones((1, 1), dtype=complex)
        for site, tensor in enumerate(self.tensors):
            if site in measured:
                axis, bit = measured[site]
                environment = environment @ self._site_matrix(site, axis, bit)
            else:
                block = np.tensordot(environment, tensor, axes=([1], [0]))
                environment = block.reshape(block.shape[0] * 2, block.shape[2])
        return self._normalize_branch(environment[:, 0], layout, outcomes, zero_branch_atol)

    def to_state(self) -> PureState:
        vector = np.ones((1, 1), dtype=complex)
        for tensor in self.tensors:
            block = np.tensordot(vector, tensor, axes=([1], [0]))
            vector = block.reshape(block.shape[0] * 2, block.shape[2])
        return PureState.normalized(vector[:, 0])

    def __repr__(self) -> str:
        return f'MpsTarget(n={self.n}, bond={self.bond_dimension})'
