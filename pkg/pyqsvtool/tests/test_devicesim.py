import numpy as np
import pytest

from pyqsvtool.devicesim.device_source import DeviceSource
from pyqsvtool.dpso.dpso import DPSO
from pyqsvtool.errors import ValidationError
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.model.plan_model import SamplingPlan
from pyqsvtool.sop.sop import SOP
from pyqsvtool.targets.families import Families


class TestDeviceSource:

    def test_exact_device_emits_the_target(self):
        # Arrange
        psi = Families.ghz(3).to_state()

        # Act
        device = DeviceSource.exact(psi)

        # Assert
        assert LinAlg.fidelity(device.emit(), psi) == pytest.approx(1)
        assert device.n == 3

    # The worst case at infidelity eps reaches Tr(Omega rho) = 1 - nu eps
    @pytest.mark.parametrize("epsilon", [0.05, 0.3, 1.0])
    def test_worst_case_saturates_the_gap(self, epsilon):
        # Arrange
        target = Families.ghz(3)
        strategy = DPSO.build_strategy_operator(target.to_dense_target(), SamplingPlan.ghz_class_uniform(3, 1))
        psi = target.to_state()

        # Act
        device = DeviceSource.worst_case(psi, strategy, epsilon)

        # Assert
        rho = device.emit()
        assert LinAlg.fidelity(rho, psi) == pytest.approx(1 - epsilon)
        assert strategy.expectation(rho.matrix) == pytest.approx(1 - strategy.gap * epsilon)
        assert strategy.gap == pytest.approx(0.5)

    def test_worst_case_for_sop_operator(self):
        # Arrange
        target = Families.haar_random(3, seed=3)
        strategy = SOP.build_L(target, 2)
        psi = target.to_state()

        # Act
        rho = DeviceSource.worst_case(psi, strategy, 0.2).emit()

        # Assert
        assert strategy.expectation(rho.matrix) == pytest.approx(1 - 0.2 * strategy.gap)

    def test_worst_case_needs_a_strategy(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            DeviceSource.worst_case(Families.ghz(3).to_state(), None, 0.1)

    # (1 - p)|psi><psi| + p I / 2^n has fidelity 1 - p + p / 2^n
    def test_depolarized_fidelity(self):
        # Arrange
        psi = Families.haar_random(2, seed=0).to_state()

        # Act
        rho = DeviceSource.depolarized(psi, 0.2).emit()

        # Assert
        assert LinAlg.fidelity(rho, psi) == pytest.approx(0.8 + 0.2 / 4)

    def test_depolarizing_probability_is_checked(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            DeviceSource.depolarized(Families.ghz(3).to_state(), 1.5)

    def test_stream_repeats_one_state(self):
        # Arrange
        device = DeviceSource.from_matrix(np.eye(4) / 4)

        # Act
        states = device.stream(5)

        # Assert
        assert len(states) == 5
        assert all(state is states[0] for state in states)
        assert device.kind == 'file'

    def test_stream_needs_positive_count(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            DeviceSource.from_matrix(np.eye(2) / 2).stream(0)
