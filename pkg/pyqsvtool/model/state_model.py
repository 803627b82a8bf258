import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.model import Model

NORM_ATOL = 1e-12
TRACE_ATOL = 1e-10
HERMITIAN_ATOL = 1e-12
POSITIVITY_ATOL = 1e-10


class PureState(Model):
    '''
    Unit vector of length 2**n in the computational basis, qubit 0 most
    significant.
    '''

    def __init__(self, amplitudes):

        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        super().__init__(self.qubits_of_dimension(amplitudes.shape[0]))

        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValidationError(f'state norm {norm!r} differs from 1')

        amplitudes.setflags(write=False)
        self.amplitudes: np.ndarray = amplitudes

    @classmethod
    def normalized(cls, vector) -> 'PureState':
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ValidationError('cannot normalize the zero vector')
        return cls(vector / norm)

    @classmethod
    def basis(cls, n: int, index: int) -> 'PureState':
        vector = np.zeros(2 ** n, dtype=complex)
        vector[index] = 1.0
        return cls(vector)

    def amplitude(self, index: int) -> complex:
        return complex(self.amplitudes[index])

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> 'DensityOperator':
        return DensityOperator(self.projector())

    def __repr__(self) -> str:
        return f'PureState(n={self.n})'


class DensityOperator(Model):
    '''
    Hermitian, unit trace, positive semidefinite 2**n x 2**n matrix.

    With check=False only the shape is validated, for states produced inside
    the sampling loops from already valid operators.
    '''

    def __init__(self, matrix, check: bool = True):

        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f'density matrix must be square, got {matrix.shape}')
        super().__init__(self.qubits_of_dimension(matrix.shape[0]))

        if check:
            asymmetry = np.max(np.abs(matrix - matrix.conj().T))
            if asymmetry > HERMITIAN_ATOL:
                raise ValidationError(f'density matrix is not Hermitian ({asymmetry:.3e})')
            trace = np.trace(matrix).real
            if abs(trace - 1.0) > TRACE_ATOL:
                raise ValidationError(f'density matrix trace {trace!r} differs from 1')
        matrix = (matrix + matrix.conj().T) / 2
        if check:
            lowest = np.linalg.eigvalsh(matrix)[0]
            if lowest < -POSITIVITY_ATOL:
                raise ValidationError(f'density matrix has negative eigenvalue {lowest:.3e}')

        matrix.setflags(write=False)
        self.matrix: np.ndarray = matrix

    @classmethod
    def maximally_mixed(cls, n: int) -> 'DensityOperator':
        return cls(np.eye(2 ** n, dtype=complex) / 2 ** n)

    @classmethod
    def mixture(cls, weights, states) -> 'DensityOperator':
        """
        Builds sum_i w_i |s_i><s_i| for PureStates or sum_i w_i rho_i for
        DensityOperators.
        """
        total = None
        for weight, state in zip(weights, states):
            part = state.projector() if isinstance(state, PureState) else state.matrix
            total = weight * part if total is None else total + weight * part
        if total is None:
            raise ValidationError('empty mixture')
        return cls(total)

    def __repr__(self) -> str:
        return f'DensityOperator(n={self.n})'


class HermitianSpectrum:

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):

        self.eigenvalues: np.ndarray = eigenvalues
        self.eigenvectors: np.ndarray = eigenvectors

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def second(self) -> float:
        return float(self.eigenvalues[1])

    def vector(self, index: int) -> np.ndarray:
        return self.eigenvectors[:, index]

    def reconstruct(self) -> np.ndarray:
        vectors = self.eigenvectors
        return (vectors * self.eigenvalues) @ vectors.conj().T
