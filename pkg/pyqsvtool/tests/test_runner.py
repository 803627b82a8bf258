import pytest

from pyqsvtool.errors import ValidationError
from pyqsvtool.runner.trial_runner import TrialRunner


def draw(index, rng):
    return index, float(rng.random())


class TestTrialRunner:

    def test_results_follow_trial_order(self):
        # Act
        results = TrialRunner.run(draw, 20, seed=1, workers=3)

        # Assert
        assert [index for index, _ in results] == list(range(20))

    # Each trial has its own (seed, index) stream
    @pytest.mark.parametrize("workers", [2, 4, 8])
    def test_worker_count_does_not_change_results(self, workers):
        # Act
        serial = TrialRunner.run(draw, 30, seed=7, workers=1)
        threaded = TrialRunner.run(draw, 30, seed=7, workers=workers)

        # Assert
        assert serial == threaded

    def test_seed_changes_results(self):
        # Act
        first = TrialRunner.run(draw, 5, seed=1, workers=1)
        second = TrialRunner.run(draw, 5, seed=2, workers=1)

        # Assert
        assert first != second

    def test_progress_bar_does_not_change_results(self):
        # Act
        quiet = TrialRunner.run(draw, 5, seed=3, workers=1)
        shown = TrialRunner.run(draw, 5, seed=3, workers=1, progress=True)

        # Assert
        assert quiet == shown

    @pytest.mark.parametrize("count, workers", [(0, 1), (5, 0)])
    def test_rejects_invalid_arguments(self, count, workers):
        # Act / Assert
        with pytest.raises(ValidationError):
            TrialRunner.run(draw, count, seed=0, workers=workers)
