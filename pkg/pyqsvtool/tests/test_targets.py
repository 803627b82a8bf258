import itertools

import numpy as np
import pytest

from pyqsvtool.errors import ValidationError, ZeroBranchError
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.model.layout_model import PauliLayout
from pyqsvtool.model.state_model import PureState
from pyqsvtool.targets.families import Families
from pyqsvtool.targets.mps_target import MpsTarget
from pyqsvtool.targets.query_model import GeneralizedQueryModel
from pyqsvtool.targets.stabilizer_target import StabilizerTarget
from pyqsvtool.targets.target import DenseTarget


def overlap(a: PureState, b: PureState) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


class TestDenseTarget:

    # <+|+> = 1 when the single qubit is read in the X basis
    def test_amplitude_in_x_basis(self):
        # Arrange
        target = DenseTarget(PureState.normalized([1, 1]))

        # Act
        plus = target.amplitude([('X', 0)])
        minus = target.amplitude([('X', 1)])

        # Assert
        assert plus == pytest.approx(1)
        assert minus == pytest.approx(0)

    # Measuring qubit 0 of GHZ_3 in Z with outcome 0 leaves |00>
    def test_post_measurement_of_ghz_in_z(self):
        # Arrange
        target = Families.ghz(3).to_dense_target()
        layout = PauliLayout(3, [0], 'Z')

        # Act
        branch = target.post_measurement(layout, [0])

        # Assert
        assert overlap(branch, PureState.basis(2, 0)) == pytest.approx(1)

    # Measuring qubit 0 of GHZ_3 in X with outcome 0 leaves the 2-qubit GHZ state
    def test_post_measurement_of_ghz_in_x(self):
        # Arrange
        target = Families.ghz(3).to_dense_target()
        layout = PauliLayout(3, [0], 'X')

        # Act
        branch = target.post_measurement(layout, [0])

        # Assert
        assert overlap(branch, PureState.normalized([1, 0, 0, 1])) == pytest.approx(1)

    def test_zero_branch_raises(self):
        # Arrange
        target = DenseTarget(PureState.basis(3, 0))
        layout = PauliLayout(3, [1], 'Z')

        # Act / Assert
        with pytest.raises(ZeroBranchError):
            target.post_measurement(layout, [1])

    # The GHZ_3 branch has weight 1/2, under an explicit tolerance of 0.6
    def test_zero_branch_tolerance_override(self):
        # Arrange
        target = Families.ghz(3).to_dense_target()
        layout = PauliLayout(3, [0], 'Z')

        # Act / Assert
        with pytest.raises(ZeroBranchError):
            target.post_measurement(layout, [0], zero_branch_atol=0.6)

    def test_outcomes_must_match_layout(self):
        # Arrange
        target = DenseTarget(PureState.basis(3, 0))
        layout = PauliLayout(3, [1], 'Z')

        # Act / Assert
        with pytest.raises(ValidationError):
            target.post_measurement(layout, [0, 1])


class TestMpsTarget:

    @pytest.fixture
    def haar_state(self):
        return Families.haar_random(4, seed=11).to_state()

    def test_from_dense_round_trips_the_state(self, haar_state):
        # Act
        mps = MpsTarget.from_dense(haar_state)

        # Assert
        assert overlap(mps.to_state(), haar_state) == pytest.approx(1)
        assert mps.bond_dimension <= 4

    # MPS contraction and dense contraction agree on every branch
    @pytest.mark.parametrize("letters", ['XIYI', 'IZIY', 'YXII', 'ZIIX', 'XYZI'])
    def test_post_measurement_matches_dense(self, haar_state, letters):
        # Arrange
        mps = MpsTarget.from_dense(haar_state)
        dense = DenseTarget(haar_state)
        layout = PauliLayout.from_letters(letters)

        for outcomes in itertools.product((0, 1), repeat=layout.t):
            # Act
            expected = dense.post_measurement(layout, outcomes)
            result = mps.post_measurement(layout, outcomes)

            # Assert
            assert overlap(result, expected) == pytest.approx(1, abs=1e-10)

    def test_product_amplitudes(self):
        # Arrange
        mps = MpsTarget.product([1, 0, 1])

        # Act
        hit = mps.z_amplitude([1, 0, 1])
        miss = mps.z_amplitude([0, 0, 1])

        # Assert
        assert hit == pytest.approx(1)
        assert miss == 0
        assert mps.family == 'product'

    def test_bond_mismatch_is_rejected(self):
        # Arrange
        tensors = [np.zeros((1, 2, 2)), np.zeros((3, 2, 1))]

        # Act / Assert
        with pytest.raises(ValidationError):
            MpsTarget(tensors)

    def test_unnormalized_mps_is_rejected(self):
        # Arrange
        tensor = np.ones((1, 2, 1))

        # Act / Assert
        with pytest.raises(ValidationError):
            MpsTarget([tensor])


class TestGeneralizedQueryModel:

    # <+++|GHZ_3> = 1/2
    def test_query_in_x_basis(self):
        # Arrange
        model = GeneralizedQueryModel(Families.ghz(3), 'XXX')

        # Act
        amplitude = model.query([0, 0, 0])

        # Assert
        assert amplitude == pytest.approx(0.5)

    def test_amplitudes_form_a_unit_vector(self):
        # Arrange
        model = GeneralizedQueryModel(Families.haar_random(3, seed=2), 'XYZ')

        # Act
        amplitudes = model.amplitudes()

        # Assert
        assert np.linalg.norm(amplitudes) == pytest.approx(1)

    def test_post_measurement_matches_dense(self):
        # Arrange
        dense = Families.haar_random(3, seed=5)
        model = GeneralizedQueryModel(dense, 'ZZZ')
        layout = PauliLayout.from_letters('YIX')

        # Act
        result = model.post_measurement(layout, [1, 0])

        # Assert
        assert overlap(result, dense.post_measurement(layout, [1, 0])) == pytest.approx(1)

    def test_rejects_bad_axes(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            GeneralizedQueryModel(Families.ghz(3), 'XQ')


class TestFamilies:

    def test_ghz_is_tagged_and_dense(self):
        # Act
        target = Families.ghz(4)

        # Assert
        assert target.family == 'ghz'
        expected = np.zeros(16)
        expected[[0, 15]] = 1 / np.sqrt(2)
        assert np.allclose(target.to_state().amplitudes, expected)
        assert target.to_dense_target().family == 'ghz'

    def test_haar_random_is_reproducible(self):
        # Act
        first = Families.haar_random(3, seed=7)
        second = Families.haar_random(3, seed=7)

        # Assert
        assert np.array_equal(first.to_state().amplitudes, second.to_state().amplitudes)

    # |<0|psi>|^2 of a Haar-random qubit is uniform on [0, 1]
    def test_haar_qubit_marginal(self):
        # Arrange
        samples = 4000

        # Act
        weights = np.array([
            abs(Families.haar_random(1, seed=seed).to_state().amplitudes[0]) ** 2 for seed in range(samples)
        ])

        # Assert
        stderr = np.sqrt(1 / 12 / samples)
        assert abs(weights.mean() - 0.5) <= 4.5 * stderr
        assert 0 <= weights.min() and weights.max() <= 1

    @pytest.mark.parametrize("seed", range(5))
    def test_random_stabilizer_state_is_fixed_by_its_generators(self, seed):
        # Arrange
        target = Families.random_stabilizer(4, seed)
        psi = target.to_state().amplitudes

        for generator in target.group.generators:
            # Act
            image = generator.apply(psi)

            # Assert
            assert np.allclose(image, psi)

    # S_w for w = 0 is the target; flipping a generator gives an orthogonal state
    def test_stabilizer_basis_states_are_orthonormal(self):
        # Arrange
        target = StabilizerTarget.from_strings(['+XX', '+ZZ'])
        vectors = [target.basis_state(w) for w in itertools.product((0, 1), repeat=2)]

        # Act
        gram = np.array([[np.vdot(a, b) for b in vectors] for a in vectors])

        # Assert
        assert np.allclose(gram, np.eye(4))
        assert LinAlg.fidelity(target.to_state().projector(), PureState(vectors[0])) == pytest.approx(1)
