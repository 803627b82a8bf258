import numpy as np
import pytest

from pyqsvtool.errors import ProtocolConstructionError, ValidationError, ZeroGapError
from pyqsvtool.model.state_model import PureState
from pyqsvtool.model.strategy_model import BinaryTest
from pyqsvtool.plm.plm import PLM
from pyqsvtool.stabilizer.formalism import StabilizerFormalism
from pyqsvtool.targets.families import Families


@pytest.fixture
def ghz_strategy():
    target = Families.ghz(3)
    return PLM.build_strategy(StabilizerFormalism.binary_tests(target.group), target.to_state())


class TestPlmStrategy:

    def test_strategy_keeps_its_tests(self, ghz_strategy):
        # Assert
        assert ghz_strategy.provenance == 'plm'
        assert len(ghz_strategy.tests) == 7
        assert ghz_strategy.gap == pytest.approx(4 / 7)

    def test_test_not_fixing_target_is_named(self):
        # Arrange
        target = PureState.basis(1, 0)
        tests = [BinaryTest(np.diag([0, 1]), 1.0, label='flip')]

        # Act / Assert
        with pytest.raises(ProtocolConstructionError, match='flip'):
            PLM.build_strategy(tests, target)

    def test_weights_must_sum_to_one(self):
        # Arrange
        target = PureState.basis(1, 0)
        tests = [BinaryTest(np.diag([1, 0]), 0.5)]

        # Act / Assert
        with pytest.raises(ValidationError):
            PLM.build_strategy(tests, target)

    # Testing only the target projector gives nu = 1
    def test_projector_strategy_has_unit_gap(self):
        # Arrange
        target = Families.haar_random(2, seed=1).to_state()

        # Act
        strategy = PLM.build_strategy([BinaryTest(target.projector(), 1.0)], target)

        # Assert
        assert strategy.gap == pytest.approx(1)

    def test_worst_case_pass_probability(self, ghz_strategy):
        # Act
        probability = PLM.worst_case_pass_probability(ghz_strategy, 0.1)

        # Assert
        assert probability == pytest.approx(1 - 0.4 / 7)


class TestPlmRun:

    def test_exact_copies_always_pass(self, ghz_strategy):
        # Arrange
        states = [ghz_strategy.target.density()] * 200

        # Act
        verdict = PLM.plm_run(states, ghz_strategy, np.random.default_rng(0), epsilon=0.1)

        # Assert
        assert verdict.accepted
        assert verdict.first_failure is None
        assert verdict.type_i_bound == pytest.approx((1 - 0.4 / 7) ** 200)

    # (|000> - |111>)/sqrt(2) fails every test built on an X-type stabilizer
    def test_phase_flipped_ghz_is_rejected(self, ghz_strategy):
        # Arrange
        flipped = PureState.normalized([1, 0, 0, 0, 0, 0, 0, -1]).density()

        # Act
        verdict = PLM.plm_run([flipped] * 50, ghz_strategy, np.random.default_rng(1))

        # Assert
        assert not verdict.accepted
        assert 0 <= verdict.first_failure < 50
        assert verdict.to_dict()['decision'] == 'reject'

    def test_empty_device_is_rejected(self, ghz_strategy):
        # Act / Assert
        with pytest.raises(ValidationError):
            PLM.plm_run([], ghz_strategy, np.random.default_rng(0))


class TestPlmSampleComplexity:

    # ceil(ln delta / ln(1 - nu eps)) at eps = 0.1, delta = 0.01
    @pytest.mark.parametrize("nu, expected", [(1.0, 44), (0.5, 90)])
    def test_exact_bound(self, nu, expected):
        # Act / Assert
        assert PLM.plm_sample_complexity(0.1, 0.01, nu) == expected

    def test_approximate_bound(self):
        # Act / Assert
        assert PLM.plm_sample_complexity(0.1, 0.01, 1.0, approximate=True) == 47

    def test_zero_gap(self):
        # Act / Assert
        with pytest.raises(ZeroGapError):
            PLM.plm_sample_complexity(0.1, 0.01, 0.0)

    @pytest.mark.parametrize("epsilon, delta", [(0.0, 0.1), (0.1, 1.0), (1.5, 0.1)])
    def test_invalid_parameters(self, epsilon, delta):
        # Act / Assert
        with pytest.raises(ValidationError):
            PLM.plm_sample_complexity(epsilon, delta, 0.5)
