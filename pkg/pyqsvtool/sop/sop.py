import itertools
import logging
from math import comb

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.hypotest.hypotest import HypothesisTest
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.measurement.measurement import Measurement
from pyqsvtool.model.layout_model import PauliLayout
from pyqsvtool.model.report_model import SopParams, TestConfig, TrialRecord, VerdictReport
from pyqsvtool.model.state_model import DensityOperator, PureState
from pyqsvtool.model.strategy_model import StrategyOperator
from pyqsvtool.runner.trial_runner import TrialRunner
from pyqsvtool.settings import settings
from pyqsvtool.targets.target import Target

logger = logging.getLogger(__name__)

IDEMPOTENCY_ATOL = 1e-9


class SOP:
    '''
    Level-l shadow overlap protocol: Z measurements on all but a random
    subset K of at most l qubits, a shadow of K, and amplitude queries to the
    target's classical model.
    '''

    @staticmethod
    def subset_distribution(n: int, level: int) -> list[tuple[int, float]]:
        """Probability of each subset size r = 1 .. l: C(n, r) / sum_i C(n, i)."""
        if not 1 <= level <= n - 1:
            raise ValidationError(f'SOP level {level} out of range for n={n}')
        total = sum(comb(n, r) for r in range(1, level + 1))
        return [(r, comb(n, r) / total) for r in range(1, level + 1)]

    @staticmethod
    def sample_subset(n: int, level: int, rng: np.random.Generator) -> tuple[int, ...]:
        """Uniform over all subsets of size 1 .. l: a size by weight, then a uniform subset of it."""
        sizes = SOP.subset_distribution(n, level)
        r = sizes[int(rng.choice(len(sizes), p=[p for _, p in sizes]))][0]
        return tuple(sorted(int(q) for q in rng.choice(n, size=r, replace=False)))

    @staticmethod
    def _full_bits(n: int, subset, z, b) -> list[int]:
        bits = [0] * n
        complement = [q for q in range(n) if q not in subset]
        for qubit, bit in zip(complement, z):
            bits[qubit] = int(bit)
        for qubit, bit in zip(subset, b):
            bits[qubit] = int(bit)
        return bits

    @staticmethod
    def pair_states(target: Target, subset, z, zero_branch_atol: float | None = None) -> list[PureState]:
        """
        phi(b1, b2) for every unordered pair of complementary strings on K,
        skipping pairs whose two amplitudes both vanish.
        """
        subset = tuple(sorted(subset))
        r = len(subset)
        if len(z) != target.n - r:
            raise ValidationError(f'{len(z)} outcome bits for {target.n - r} measured qubits')
        full = (1 << r) - 1
        atol = settings.zero_branch_atol if zero_branch_atol is None else zero_branch_atol
        states = []
        for b1 in range(1 << (r - 1)):
            b2 = b1 ^ full
            vector = np.zeros(2 ** r, dtype=complex)
            for b in (b1, b2):
                bits = [(b >> (r - 1 - i)) & 1 for i in range(r)]
                vector[b] = target.z_amplitude(SOP._full_bits(target.n, subset, z, bits))
            if np.vdot(vector, vector).real <= atol:
                continue
            states.append(PureState.normalized(vector))
        return states

    @staticmethod
    def build_L_z(target: Target, subset, z, zero_branch_atol: float | None = None) -> np.ndarray:
        """L_z = sum over pairs of |phi(b1, b2)><phi(b1, b2)| on the K register."""
        r = len(subset)
        matrix = np.zeros((2 ** r, 2 ** r), dtype=complex)
        for phi in SOP.pair_states(target, subset, z, zero_branch_atol):
            matrix += phi.projector()
        return matrix

    @staticmethod
    def build_L(
        target: Target, level: int, fixation_atol: float | None = None, zero_branch_atol: float | None = None
    ) -> StrategyOperator:
        """
        L = (sum_i C(n, i))^-1 sum_K sum_z |z><z| (x) L_z over every subset K
        with 1 <= |K| <= l.
        """
        n = target.n
        sizes = SOP.subset_distribution(n, level)
        LinAlg.check_capacity(2 ** n)
        total = np.zeros((2 ** n, 2 ** n), dtype=complex)
        count = 0
        for r, _ in sizes:
            for subset in itertools.combinations(range(n), r):
                complement = [q for q in range(n) if q not in subset]
                order = complement + list(subset)
                for z in itertools.product((0, 1), repeat=n - r):
                    block = SOP.build_L_z(target, subset, z, zero_branch_atol)
                    if not block.any():
                        continue
                    residual = np.max(np.abs(block @ block - block))
                    if residual > IDEMPOTENCY_ATOL:
                        logger.warning('L_z for K=%s z=%s is not idempotent (%.3e)', subset, z, residual)
                    basis = np.zeros((2 ** (n - r), 2 ** (n - r)))
                    row = int(''.join(str(bit) for bit in z), 2)
                    basis[row, row] = 1.0
                    total += LinAlg.embed(np.kron(basis, block), order, n)
                count += 1
        fixation_atol = settings.fixation_atol if fixation_atol is None else fixation_atol
        return StrategyOperator(total / count, target.to_state(), 'sop-L', fixation_atol=fixation_atol)

    @staticmethod
    def sop_trial(rho: DensityOperator, target: Target, level: int, rng: np.random.Generator, index: int = 0) -> TrialRecord:
        """
        One round: Z measurements off a random subset K, a shadow of K, and
        omega = Tr(shadow L_z) summed pair by pair.
        """
        if rho.n != target.n:
            raise ValidationError(f'{rho.n}-qubit device state for a {target.n}-qubit target')
        n = target.n
        subset = SOP.sample_subset(n, level, rng)
        layout = PauliLayout.from_unmeasured(n, subset, 'Z' * (n - len(subset)))
        outcomes, zeta = Measurement.born_sample(rho, layout, rng)
        shadow = Measurement.shadow_snapshot(zeta, rng)
        pairs = SOP.pair_states(target, subset, outcomes)
        omega_hat = float(sum(Measurement.shadow_overlap(shadow, phi) for phi in pairs))
        return TrialRecord(
            index, layout, outcomes, shadow.axes, shadow.outcomes, omega_hat, target_branch_zero=not pairs
        )

    @staticmethod
    def sop_sample_complexity(level: int, cfg: TestConfig) -> int:
        """N = ceil(2^(4l - 1) ln(1/delta) / (nu^2 eps^2)), from the range [0, 2^(2l - 1)]."""
        if level < 1:
            raise ValidationError(f'level must be positive, got {level}')
        return HypothesisTest.simple_sample_complexity(cfg.with_range(*HypothesisTest.nominal_range('sop', level)))

    @staticmethod
    def sop_verify(
        states, target: Target, params: SopParams, seed: int = 0, workers: int | None = None,
        progress: bool = False, threshold: float | None = None, strict: bool | None = None
    ) -> VerdictReport:
        """
        Runs one trial per device state and decides on the mean. params.config
        must carry nu(L).
        """
        states = list(states)
        if not states:
            raise ValidationError('the device produced no states')
        if params.n != target.n:
            raise ValidationError(f'SOP parameters for {params.n} qubits against a {target.n}-qubit target')
        if len(states) != params.trials:
            raise ValidationError(f'{len(states)} device states for {params.trials} trials')

        def trial(index: int, rng: np.random.Generator) -> TrialRecord:
            return SOP.sop_trial(states[index], target, params.level, rng, index)

        records = TrialRunner.run(trial, len(states), seed, workers, progress, description='sop trials')
        estimates = [record.omega_hat for record in records]
        diagnostics = HypothesisTest.range_diagnostics(estimates, *HypothesisTest.nominal_range('sop', params.level))
        diagnostics['empty_branches'] = sum(record.target_branch_zero for record in records)
        cfg = params.config.with_range(*HypothesisTest.estimator_range('sop', params.level, strict))
        return HypothesisTest.verdict('sop', cfg, estimates, records, threshold, diagnostics)
