import itertools
import logging
import math

import numpy as np
import pytest

from pyqsvtool.devicesim.device_source import DeviceSource
from pyqsvtool.dpso.dpso import DPSO
from pyqsvtool.errors import ProtocolConstructionError, ValidationError
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.model.layout_model import PauliLayout
from pyqsvtool.model.plan_model import SamplingPlan
from pyqsvtool.model.report_model import SopParams, TestConfig
from pyqsvtool.model.state_model import PureState
from pyqsvtool.runner.trial_runner import TrialRunner
from pyqsvtool.sop.sop import SOP
from pyqsvtool.targets.families import Families
from pyqsvtool.targets.target import DenseTarget


def level_one_L(psi: PureState) -> np.ndarray:
    """Average over single qubits q of the normalized Z-branches of psi off q."""
    n = psi.n
    total = np.zeros((psi.dim, psi.dim), dtype=complex)
    for q in range(n):
        others = [p for p in range(n) if p != q]
        for z in itertools.product((0, 1), repeat=n - 1):
            mask = np.array([
                all(((index >> (n - 1 - p)) & 1) == bit for p, bit in zip(others, z)) for index in range(psi.dim)
            ])
            branch = np.where(mask, psi.amplitudes, 0)
            norm = np.vdot(branch, branch).real
            if norm > 1e-14:
                total += np.outer(branch, branch.conj()) / norm
    return total / n


class TestSopOperators:

    # Bell target, K = {1}, z = 0: phi = |0>
    def test_bell_pair_state(self):
        # Arrange
        target = DenseTarget(PureState.normalized([1, 0, 0, 1]))

        # Act
        block = SOP.build_L_z(target, (1,), (0,))

        # Assert
        assert np.allclose(block, np.diag([1, 0]))

    def test_plus_plus_pair_state(self):
        # Arrange
        target = DenseTarget(PureState.normalized([1, 1, 1, 1]))

        # Act
        block = SOP.build_L_z(target, (1,), (0,))

        # Assert
        assert np.allclose(block, np.full((2, 2), 0.5))

    # At level 2 the four strings on K pair up as (00, 11) and (01, 10)
    def test_pairs_on_two_qubits(self):
        # Arrange
        target = Families.haar_random(3, seed=6)

        # Act
        pairs = SOP.pair_states(target, (0, 2), (1,))

        # Assert
        assert len(pairs) == 2
        assert abs(np.vdot(pairs[0].amplitudes, pairs[1].amplitudes)) == pytest.approx(0)

    @pytest.mark.parametrize("n, level", [(3, 1), (3, 2), (4, 2)])
    def test_L_fixes_target_and_is_bounded(self, n, level):
        # Arrange
        target = Families.haar_random(n, seed=n + level)
        psi = target.to_state().amplitudes

        # Act
        operator = SOP.build_L(target, level)

        # Assert
        assert np.allclose(operator.matrix @ psi, psi)
        eigenvalues = LinAlg.hermitian_eig(operator.matrix).eigenvalues
        assert eigenvalues[-1] >= -1e-9
        assert eigenvalues[0] <= 1 + 1e-9
        assert 0 <= operator.gap <= 1

    # Level-1 L built pair by pair equals the average of normalized Z branches
    def test_level_one_L_matches_direct_construction(self):
        # Arrange
        target = Families.haar_random(3, seed=12)

        # Act
        operator = SOP.build_L(target, 1)

        # Assert
        assert np.allclose(operator.matrix, level_one_L(target.to_state()))

    # Pairs (00, 11) and (01, 10) have disjoint supports, so every level-2 L_z is a projector
    def test_level_two_blocks_are_idempotent(self, caplog):
        # Arrange
        target = Families.haar_random(4, seed=3)
        blocks = [
            SOP.build_L_z(target, subset, z)
            for subset in itertools.combinations(range(4), 2)
            for z in itertools.product((0, 1), repeat=2)
        ]

        # Act
        with caplog.at_level(logging.WARNING, logger='pyqsvtool.sop.sop'):
            SOP.build_L(target, 2)

        # Assert
        for block in blocks:
            assert np.allclose(block @ block, block)
        assert not caplog.records

    # With Z on every other qubit, each DPSO branch is |z><z| (x) L_z of the level-1 round
    def test_level_one_matches_z_only_dpso_branch_by_branch(self):
        # Arrange
        n = 4
        target = Families.haar_random(n, seed=21)

        for q in range(n):
            complement = [p for p in range(n) if p != q]
            layout = PauliLayout.from_unmeasured(n, (q,), 'Z' * (n - 1))
            operator = DPSO.build_test_operator(target, layout)
            for z in itertools.product((0, 1), repeat=n - 1):
                basis = np.zeros((2 ** (n - 1), 2 ** (n - 1)))
                row = int(''.join(str(bit) for bit in z), 2)
                basis[row, row] = 1.0

                # Act
                block = LinAlg.embed(np.kron(basis, SOP.build_L_z(target, (q,), z)), complement + [q], n)

                # Assert
                assert np.allclose(operator.branch_projector(z), block)

        strategy = DPSO.build_strategy_operator(target, SamplingPlan.z_only(n, 1))
        assert np.allclose(strategy.matrix, SOP.build_L(target, 1).matrix)

    # Each |++> pair carries weight 1/2; a negative fixation tolerance rejects any residual
    def test_tolerance_overrides(self):
        # Arrange
        target = DenseTarget(PureState.normalized([1, 1, 1, 1]))

        # Act
        pairs = SOP.pair_states(target, (1,), (0,), zero_branch_atol=0.6)

        # Assert
        assert pairs == []
        with pytest.raises(ProtocolConstructionError):
            SOP.build_L(target, 1, fixation_atol=-1.0)

    def test_bell_L_matches_direct_construction(self):
        # Arrange
        target = DenseTarget(PureState.normalized([1, 0, 0, 1]))

        # Act
        operator = SOP.build_L(target, 1)

        # Assert
        assert np.allclose(operator.matrix, level_one_L(target.to_state()))
        assert operator.provenance == 'sop-L'


class TestSopSampling:

    # Sizes 1 and 2 on four qubits: 4 and 6 subsets
    def test_subset_distribution(self):
        # Act
        sizes = SOP.subset_distribution(4, 2)

        # Assert
        assert sizes == [(1, pytest.approx(0.4)), (2, pytest.approx(0.6))]

    @pytest.mark.parametrize("level", [0, 4])
    def test_subset_distribution_rejects_level(self, level):
        # Act / Assert
        with pytest.raises(ValidationError):
            SOP.subset_distribution(4, level)

    def test_sample_subset_is_sorted_and_sized(self):
        # Arrange
        rng = np.random.default_rng(1)

        for _ in range(50):
            # Act
            subset = SOP.sample_subset(5, 2, rng)

            # Assert
            assert 1 <= len(subset) <= 2
            assert list(subset) == sorted(set(subset))

    # The mean estimate of one SOP round is Tr(rho L)
    def test_estimator_is_unbiased(self):
        # Arrange
        target = Families.haar_random(3, seed=9)
        rho = Families.random_density(3, seed=19)
        expected = SOP.build_L(target, 1).expectation(rho.matrix)
        trials = 4000

        # Act
        values = np.array([
            SOP.sop_trial(rho, target, 1, TrialRunner.trial_rng(2, index), index).omega_hat
            for index in range(trials)
        ])

        # Assert
        stderr = values.std(ddof=1) / np.sqrt(trials)
        assert abs(values.mean() - expected) <= 4.5 * stderr

    @pytest.mark.parametrize("level", [1, 2])
    def test_sample_complexity(self, level):
        # Arrange
        cfg = TestConfig(0.1, 0.01, 0.5)

        # Act
        trials = SOP.sop_sample_complexity(level, cfg)

        # Assert
        assert trials == math.ceil(2 ** (4 * level - 1) * math.log(100) / 0.05 ** 2)

    def test_verify_reports_every_trial(self):
        # Arrange
        target = Families.haar_random(3, seed=9)
        gap = SOP.build_L(target, 1).gap
        params = SopParams(3, 1, 40, TestConfig(0.2, 0.05, gap))
        states = [target.to_state().density()] * params.trials

        # Act
        report = SOP.sop_verify(states, target, params, seed=4)

        # Assert
        assert report.protocol == 'sop'
        assert report.trials == 40
        assert len(report.records) == 40
        assert report.config.lower == -report.config.upper

    # L of |++> is (I (x) |+><+| + |+><+| (x) I) / 2 with nu = 1/2; exact copies
    # pass and the worst case at eps fails over repeated runs of N copies
    def test_decision_rates_over_repetitions(self):
        # Arrange
        target = DenseTarget(PureState.normalized([1, 1, 1, 1]))
        strategy = SOP.build_L(target, 1)
        cfg = TestConfig(0.5, 0.1, strategy.gap)
        repetitions = 30
        trials = SOP.sop_sample_complexity(1, cfg)
        params = SopParams(2, 1, trials, cfg)
        exact = DeviceSource.exact(target.to_state())
        worst = DeviceSource.worst_case(target.to_state(), strategy, cfg.epsilon)

        # Act
        accepted = sum(
            SOP.sop_verify(exact.stream(trials), target, params, seed=seed).accepted
            for seed in range(repetitions)
        )
        rejected = sum(
            not SOP.sop_verify(worst.stream(trials), target, params, seed=seed).accepted
            for seed in range(repetitions)
        )

        # Assert
        assert strategy.gap == pytest.approx(0.5)
        assert trials == 295
        assert accepted >= 0.9 * repetitions
        assert rejected >= 0.9 * repetitions

    def test_verify_rejects_size_mismatch(self):
        # Arrange
        target = Families.ghz(3)
        params = SopParams(4, 1, 10, TestConfig(0.2, 0.05, 0.5))

        # Act / Assert
        with pytest.raises(ValidationError):
            SOP.sop_verify([target.to_state().density()], target, params)

    def test_verify_needs_one_state_per_trial(self):
        # Arrange
        target = Families.haar_random(3, seed=9)
        params = SopParams(3, 1, 10, TestConfig(0.2, 0.05, 0.5))
        states = [target.to_state().density()] * 9

        # Act / Assert
        with pytest.raises(ValidationError, match='9 device states for 10 trials'):
            SOP.sop_verify(states, target, params)
