import numpy as np
import pytest

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import PauliLayout
from pyqsvtool.model.plan_model import SamplingPlan
from pyqsvtool.stabilizer.pauli import SymplecticVector


class TestPauliLayout:

    def test_from_letters(self):
        # Act
        layout = PauliLayout.from_letters('ZIXY')

        # Assert
        assert layout.measured == (0, 2, 3)
        assert layout.axes == 'ZXY'
        assert layout.unmeasured == (1,)
        assert layout.letters() == 'ZIXY'
        assert (layout.t, layout.r) == (3, 1)

    @pytest.mark.parametrize("measured, axes", [
        ([1, 0], 'ZZ'),
        ([0, 1, 2], 'ZZZ'),
        ([0], 'Q'),
        ([0, 3], 'XX'),
    ])
    def test_rejects_invalid_layouts(self, measured, axes):
        # Act / Assert
        with pytest.raises(ValidationError):
            PauliLayout(3, measured, axes)

    def test_layouts_hash_by_value(self):
        # Act
        layouts = {PauliLayout(3, [0], 'X'), PauliLayout.from_letters('XII')}

        # Assert
        assert len(layouts) == 1


class TestSamplingPlan:

    # C(3, 2) subsets times 3^2 axis strings
    def test_naive_uniform_marginals(self):
        # Act
        plan = SamplingPlan.naive_uniform(3, 1)

        # Assert
        assert len(plan.layouts) == 27
        assert plan.p == {j: pytest.approx(1 / 3) for j in [(0, 1), (0, 2), (1, 2)]}
        assert all(q == pytest.approx(1 / 9) for q in plan.q.values())
        assert plan.name == 'naive'

    def test_z_only_plan(self):
        # Act
        plan = SamplingPlan.z_only(4, 2)

        # Assert
        assert set(plan.q) == {'ZZ'}
        assert len(plan.layouts) == 6

    def test_class_plan_is_normalized(self):
        # Act
        plan = SamplingPlan.ghz_class_uniform(4, 1)

        # Assert
        assert sum(plan.weights.values()) == pytest.approx(1)
        assert len(plan.layouts) == 4 * 27
        assert plan.name == 'classes'

    def test_from_settings_round_trips_layouts(self):
        # Arrange
        weights = {SymplecticVector.from_letters('ZZI'): 0.25, SymplecticVector.from_letters('XIY'): 0.75}

        # Act
        plan = SamplingPlan.from_settings(3, 1, weights)

        # Assert
        assert plan.settings() == weights

    @pytest.mark.parametrize("r", [0, 3])
    def test_rejects_level(self, r):
        # Act / Assert
        with pytest.raises(ValidationError):
            SamplingPlan(3, r, {})

    def test_rejects_unnormalized_weights(self):
        # Arrange
        weights = {PauliLayout.from_letters('ZZI'): 0.5}

        # Act / Assert
        with pytest.raises(ValidationError):
            SamplingPlan(3, 1, weights)

    def test_rejects_layout_of_other_level(self):
        # Arrange
        weights = {PauliLayout.from_letters('ZII'): 1.0}

        # Act / Assert
        with pytest.raises(ValidationError):
            SamplingPlan(3, 1, weights)

    def test_zero_weights_are_dropped(self):
        # Arrange
        weights = {PauliLayout.from_letters('ZZI'): 1.0, PauliLayout.from_letters('XXI'): 0.0}

        # Act
        plan = SamplingPlan(3, 1, weights)

        # Assert
        assert plan.layouts == [PauliLayout.from_letters('ZZI')]

    def test_sample_draws_from_support(self):
        # Arrange
        plan = SamplingPlan.ghz_class_uniform(3, 2)
        rng = np.random.default_rng(0)

        # Act
        draws = {plan.sample(rng) for _ in range(100)}

        # Assert
        assert draws <= set(plan.layouts)

    def test_to_rows(self):
        # Arrange
        plan = SamplingPlan.single(PauliLayout.from_letters('IXY'))

        # Act
        rows = plan.to_rows()

        # Assert
        assert rows == [{'layout': 'IXY', 'probability': 1.0}]
