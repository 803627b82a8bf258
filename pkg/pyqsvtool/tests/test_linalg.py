import numpy as np
import pytest

from pyqsvtool.errors import CapacityError, ProtocolConstructionError, ValidationError
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.model.state_model import DensityOperator, PureState

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


class TestLinAlg:

    # Qubit 0 is the most significant bit, so |10> is index 2
    def test_tensor_product_orders_qubits_most_significant_first(self):
        # Arrange
        one = PureState.basis(1, 1).projector()
        zero = PureState.basis(1, 0).projector()

        # Act
        result = LinAlg.tensor_product(one, zero)

        # Assert
        assert result[2, 2] == 1
        assert np.trace(result) == 1

    def test_tensor_product_respects_capacity(self):
        # Arrange
        a = np.eye(4)

        # Act / Assert
        with pytest.raises(CapacityError):
            LinAlg.tensor_product(a, a, max_dimension=8)

    # Tracing out qubit 1 of |0><0| (x) I/2 leaves |0><0|
    def test_partial_trace_of_product_state(self):
        # Arrange
        rho = np.kron(np.diag([1, 0]), I2 / 2)

        # Act
        reduced = LinAlg.partial_trace(rho, [0])

        # Assert
        assert np.allclose(reduced, np.diag([1, 0]))

    def test_partial_trace_keeps_ascending_order(self):
        # Arrange
        a = np.diag([1.0, 0.0])
        b = np.diag([0.25, 0.75])
        c = I2 / 2
        rho = LinAlg.kron_all([a, b, c])

        # Act
        reduced = LinAlg.partial_trace(rho, [2, 0])

        # Assert
        assert np.allclose(reduced, np.kron(a, c))

    def test_partial_trace_of_bell_state_is_maximally_mixed(self):
        # Arrange
        bell = PureState.normalized([1, 0, 0, 1])

        # Act
        reduced = LinAlg.partial_trace(bell.projector(), [1])

        # Assert
        assert np.allclose(reduced, I2 / 2)

    def test_partial_trace_with_empty_keep_returns_trace(self):
        # Arrange
        rho = DensityOperator.maximally_mixed(2)

        # Act
        reduced = LinAlg.partial_trace(rho, [])

        # Assert
        assert reduced.shape == (1, 1)
        assert np.isclose(reduced[0, 0], 1)

    def test_partial_trace_rejects_out_of_range_qubit(self):
        # Arrange
        rho = DensityOperator.maximally_mixed(2)

        # Act / Assert
        with pytest.raises(ValidationError):
            LinAlg.partial_trace(rho, [2])

    # Embedding X on qubit 2 of three equals I (x) I (x) X
    @pytest.mark.parametrize("qubit, expected", [
        (0, np.kron(X, np.eye(4))),
        (1, LinAlg.kron_all([I2, X, I2])),
        (2, np.kron(np.eye(4), X)),
    ])
    def test_embed_single_qubit_operator(self, qubit, expected):
        # Act
        result = LinAlg.embed(X, [qubit], 3)

        # Assert
        assert np.allclose(result, expected)

    def test_embed_follows_listed_qubit_order(self):
        # Arrange
        operator = np.kron(X, Z)

        # Act
        result = LinAlg.embed(operator, [2, 0], 3)

        # Assert
        assert np.allclose(result, LinAlg.kron_all([Z, I2, X]))

    def test_arrange_vector_reorders_factors(self):
        # Arrange
        # factors listed for qubits (1, 0): qubit 1 in |1>, qubit 0 in |0>
        vector = np.kron([0, 1], [1, 0])

        # Act
        result = LinAlg.arrange_vector(vector, [1, 0], 2)

        # Assert
        assert np.allclose(result, np.kron([1, 0], [0, 1]))

    def test_hermitian_eig_sorts_non_increasing(self):
        # Arrange
        matrix = np.diag([0.2, 1.0, 0.5, 0.0])

        # Act
        spectrum = LinAlg.hermitian_eig(matrix)

        # Assert
        assert np.allclose(spectrum.eigenvalues, [1.0, 0.5, 0.2, 0.0])
        assert np.allclose(spectrum.reconstruct(), matrix)

    def test_hermitian_eig_rejects_non_hermitian(self):
        # Arrange
        matrix = np.array([[0, 1], [0, 0]], dtype=complex)

        # Act / Assert
        with pytest.raises(ValidationError):
            LinAlg.hermitian_eig(matrix)

    def test_spectral_gap_of_projector_mixture(self):
        # Arrange
        omega = np.diag([1.0, 0.25, 0.5, 0.0])

        # Act
        gap = LinAlg.spectral_gap(omega)

        # Assert
        assert gap == pytest.approx(0.5)

    def test_spectral_gap_needs_unit_top_eigenvalue(self):
        # Arrange
        omega = np.diag([0.9, 0.1])

        # Act / Assert
        with pytest.raises(ProtocolConstructionError):
            LinAlg.spectral_gap(omega)

    def test_fidelity_of_mixture(self):
        # Arrange
        psi = PureState.basis(2, 0)
        rho = DensityOperator.mixture([0.7, 0.3], [psi, PureState.basis(2, 3)])

        # Act
        fidelity = LinAlg.fidelity(rho, psi)

        # Assert
        assert fidelity == pytest.approx(0.7)

    def test_fidelity_rejects_dimension_mismatch(self):
        # Arrange
        rho = DensityOperator.maximally_mixed(1)

        # Act / Assert
        with pytest.raises(ValidationError):
            LinAlg.fidelity(rho, PureState.basis(2, 0))


class TestStates:

    def test_pure_state_rejects_bad_norm(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            PureState([1, 1])

    def test_pure_state_rejects_non_power_of_two(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            PureState.normalized([1, 1, 1])

    def test_density_operator_rejects_negative_eigenvalue(self):
        # Arrange
        matrix = np.diag([1.5, -0.5])

        # Act / Assert
        with pytest.raises(ValidationError):
            DensityOperator(matrix)

    def test_density_operator_rejects_bad_trace(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            DensityOperator(np.eye(2))

    def test_density_operator_is_read_only(self):
        # Arrange
        rho = DensityOperator.maximally_mixed(1)

        # Act / Assert
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1
