import numpy as np

from pyqsvtool.errors import CapacityError, ProtocolConstructionError, ValidationError
from pyqsvtool.model.model import Model
from pyqsvtool.model.state_model import DensityOperator, HermitianSpectrum, PureState
from pyqsvtool.settings import settings

LAMBDA_MAX_ATOL = 1e-8
FIDELITY_CLAMP_ATOL = 1e-12


class LinAlg:
    '''
    Dense complex linear algebra on qubit registers.

    Qubit 0 is the most significant bit of every basis index, which makes
    numpy's Kronecker product order the qubit order.
    '''

    @staticmethod
    def _as_matrix(operator) -> np.ndarray:
        if isinstance(operator, DensityOperator):
            return operator.matrix
        matrix = np.asarray(operator, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f'operator must be square, got shape {matrix.shape}')
        Model.qubits_of_dimension(matrix.shape[0])
        return matrix

    @staticmethod
    def check_capacity(dim: int, max_dimension: int | None = None) -> None:
        limit = settings.max_dimension if max_dimension is None else max_dimension
        if dim > limit:
            raise CapacityError(f'dimension {dim} exceeds the configured maximum {limit}')

    @staticmethod
    def tensor_product(a, b, max_dimension: int | None = None) -> np.ndarray:
        """
        Kronecker product a (x) b, with the qubits of a before those of b.
        """
        a = LinAlg._as_matrix(a)
        b = LinAlg._as_matrix(b)
        LinAlg.check_capacity(a.shape[0] * b.shape[0], max_dimension)
        return np.kron(a, b)

    @staticmethod
    def kron_all(operators) -> np.ndarray:
        result = np.ones((1, 1), dtype=complex)
        for operator in operators:
            result = np.kron(result, operator)
        return result

    @staticmethod
    def partial_trace(rho, keep) -> np.ndarray:
        """
        Traces out every qubit not in keep.

        The kept qubits stay in ascending order. An empty keep set returns the
        trace as a 1x1 matrix.
        """
        matrix = LinAlg._as_matrix(rho)
        n = Model.qubits_of_dimension(matrix.shape[0])
        keep = sorted(set(int(q) for q in keep))
        if keep and (keep[0] < 0 or keep[-1] >= n):
            raise ValidationError(f'keep set {keep} out of range for n={n}')

        traced = [q for q in range(n) if q not in keep]
        k = len(keep)
        tensor = matrix.reshape([2] * (2 * n))
        order = keep + traced + [n + q for q in keep] + [n + q for q in traced]
        tensor = tensor.transpose(order).reshape(2 ** k, 2 ** (n - k), 2 ** k, 2 ** (n - k))
        return np.trace(tensor, axis1=1, axis2=3)

    @staticmethod
    def embed(operator, qubits, n: int) -> np.ndarray:
        """
        Lifts an operator acting on the listed qubits (in that order) to the
        full n-qubit register, with identity elsewhere.
        """
        operator = np.asarray(operator, dtype=complex)
        qubits = [int(q) for q in qubits]
        m = len(qubits)
        if operator.shape != (2 ** m, 2 ** m):
            raise ValidationError(f'operator of shape {operator.shape} does not act on {m} qubits')
        LinAlg.check_capacity(2 ** n)

        rest = [q for q in range(n) if q not in qubits]
        full = np.kron(operator, np.eye(2 ** (n - m), dtype=complex)).reshape([2] * (2 * n))
        inverse = list(np.argsort(qubits + rest))
        full = full.transpose(inverse + [n + axis for axis in inverse])
        return full.reshape(2 ** n, 2 ** n)

    @staticmethod
    def arrange_vector(vector, qubits, n: int) -> np.ndarray:
        """
        Reorders a state vector whose tensor factors follow the listed qubit
        order into the natural order 0..n-1.
        """
        vector = np.asarray(vector, dtype=complex).reshape([2] * n)
        inverse = list(np.argsort([int(q) for q in qubits]))
        return vector.transpose(inverse).reshape(-1)

    @staticmethod
    def hermitian_eig(a, atol: float | None = None) -> HermitianSpectrum:
        """
        Full spectrum of a Hermitian matrix, sorted non-increasing.

        LAPACK's divide and conquer routine is deterministic for a given input,
        so repeated runs give identical eigenvectors.
        """
        matrix = LinAlg._as_matrix(a)
        tolerance = settings.hermitian_atol if atol is None else atol
        asymmetry = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
        if asymmetry > tolerance:
            raise ValidationError(f'matrix is not Hermitian (max asymmetry {asymmetry:.3e})')

        eigenvalues, eigenvectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
        return HermitianSpectrum(eigenvalues[::-1].copy(), eigenvectors[:, ::-1].copy())

    @staticmethod
    def spectral_gap(omega) -> float:
        """
        Returns 1 - lambda_2 of a strategy operator.

        Accepts anything with a `spectrum` attribute or a plain Hermitian matrix.
        The largest eigenvalue must be 1, since the operator fixes its target.
        """
        spectrum = omega.spectrum if hasattr(omega, 'spectrum') else LinAlg.hermitian_eig(omega)
        eigenvalues = spectrum.eigenvalues
        if abs(eigenvalues[0] - 1.0) > LAMBDA_MAX_ATOL:
            raise ProtocolConstructionError(
                f'largest eigenvalue {eigenvalues[0]!r} of the strategy operator is not 1'
            )
        if len(eigenvalues) == 1:
            return 1.0
        return float(np.clip(1.0 - eigenvalues[1], 0.0, 1.0))

    @staticmethod
    def fidelity(rho, psi: PureState) -> float:
        matrix = LinAlg._as_matrix(rho)
        if matrix.shape[0] != psi.dim:
            raise ValidationError(
                f'density matrix of dimension {matrix.shape[0]} against a {psi.dim}-dimensional state'
            )
        vector = psi.amplitudes
        value = float(np.real(vector.conj() @ matrix @ vector))
        if value < -FIDELITY_CLAMP_ATOL or value > 1 + FIDELITY_CLAMP_ATOL:
            raise ValidationError(f'fidelity {value!r} outside [0, 1]')
        return float(np.clip(value, 0.0, 1.0))
