import itertools
import logging

import numpy as np

from pyqsvtool.errors import ValidationError, ZeroBranchError
from pyqsvtool.hypotest.hypotest import HypothesisTest
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.measurement.measurement import Measurement
from pyqsvtool.model.layout_model import PauliLayout, axis_eigenvector
from pyqsvtool.model.plan_model import SamplingPlan
from pyqsvtool.model.report_model import TestConfig, TrialRecord, VerdictReport
from pyqsvtool.model.state_model import DensityOperator
from pyqsvtool.model.strategy_model import BinaryTest, DpsoTestOperator, StrategyOperator
from pyqsvtool.runner.trial_runner import TrialRunner
from pyqsvtool.settings import settings
from pyqsvtool.stabilizer.gamma import GammaTable
from pyqsvtool.targets.stabilizer_target import StabilizerTarget
from pyqsvtool.targets.target import Target

logger = logging.getLogger(__name__)

ASSEMBLY_METHODS = ('test-operators', 'branch-projectors')


class DPSO:
    '''
    Level-r shadow overlap protocol with Pauli measurements on n - r qubits
    and a classical shadow of the remaining r.
    '''

    @staticmethod
    def _check_plan(target: Target, plan: SamplingPlan) -> None:
        if plan.n != target.n:
            raise ValidationError(f'{plan.n}-qubit plan for a {target.n}-qubit target')

    @staticmethod
    def _measured_factor(layout: PauliLayout, outcomes) -> np.ndarray:
        vector = np.ones(1, dtype=complex)
        for axis, bit in zip(layout.axes, outcomes):
            vector = np.kron(vector, axis_eigenvector(axis, bit))
        return vector

    @staticmethod
    def build_test_operator(target: Target, layout: PauliLayout) -> DpsoTestOperator:
        """
        Omega_{K,l} = sum_z |z><z| (x) |phi_{K,z}><phi_{K,z}|.

        Outcomes the target never produces have no post-measurement state and
        contribute nothing.
        """
        if layout.n != target.n:
            raise ValidationError(f'{layout!r} does not fit a {target.n}-qubit target')
        LinAlg.check_capacity(2 ** target.n)
        order = list(layout.measured) + list(layout.unmeasured)
        branches = {}
        for outcomes in itertools.product((0, 1), repeat=layout.t):
            try:
                phi = target.post_measurement(layout, outcomes)
            except ZeroBranchError:
                continue
            vector = np.kron(DPSO._measured_factor(layout, outcomes), phi.amplitudes)
            branches[outcomes] = LinAlg.arrange_vector(vector, order, target.n)

        columns = np.array(list(branches.values())).T
        matrix = columns @ columns.conj().T
        logger.debug('test operator %s: %d of %d branches', layout.letters(), len(branches), 2 ** layout.t)
        return DpsoTestOperator(layout, matrix, branches)

    @staticmethod
    def _branch_projector_sum(target: Target, layout: PauliLayout) -> np.ndarray:
        """Same operator as build_test_operator, assembled from Pi_z (x) |phi><phi| blocks."""
        order = list(layout.measured) + list(layout.unmeasured)
        total = np.zeros((2 ** target.n, 2 ** target.n), dtype=complex)
        for outcomes in itertools.product((0, 1), repeat=layout.t):
            try:
                phi = target.post_measurement(layout, outcomes)
            except ZeroBranchError:
                continue
            local = DPSO._measured_factor(layout, outcomes)
            block = np.kron(np.outer(local, local.conj()), phi.projector())
            total += LinAlg.embed(block, order, target.n)
        return total

    @staticmethod
    def build_strategy_operator(
        target: Target, plan: SamplingPlan, method: str = 'test-operators', fixation_atol: float | None = None
    ) -> StrategyOperator:
        """Omega = sum_{K,l} p_K q_l Omega_{K,l}, with each test operator kept as a binary test."""
        DPSO._check_plan(target, plan)
        if method not in ASSEMBLY_METHODS:
            raise ValidationError(f'unknown assembly method {method!r}')
        LinAlg.check_capacity(2 ** target.n)

        total = np.zeros((2 ** target.n, 2 ** target.n), dtype=complex)
        tests = []
        for layout, weight in plan.weights.items():
            if method == 'branch-projectors':
                total += weight * DPSO._branch_projector_sum(target, layout)
                continue
            operator = DPSO.build_test_operator(target, layout)
            total += weight * operator.matrix
            tests.append(operator.as_binary_test(weight))
        return StrategyOperator(
            total, target.to_state(), 'dpso', tests=tests or None,
            fixation_atol=settings.fixation_atol if fixation_atol is None else fixation_atol
        )

    @staticmethod
    def binary_tests(target: Target, plan: SamplingPlan) -> list[BinaryTest]:
        DPSO._check_plan(target, plan)
        return [DPSO.build_test_operator(target, layout).as_binary_test(w) for layout, w in plan.weights.items()]

    @staticmethod
    def plan_gap(target: Target, plan: SamplingPlan) -> float:
        """
        nu of the plan's strategy operator: from the gamma table for
        stabilizer targets, from a dense eigensolve otherwise.
        """
        DPSO._check_plan(target, plan)
        if isinstance(target, StabilizerTarget):
            return GammaTable.gap(GammaTable.weighted(target.group, plan.settings()))
        return DPSO.build_strategy_operator(target, plan).gap

    @staticmethod
    def dpso_trial(rho: DensityOperator, target: Target, plan: SamplingPlan, rng: np.random.Generator, index: int = 0) -> TrialRecord:
        """
        One round: draw a layout, measure it on rho, take a shadow of the rest
        and return its overlap with the target's post-measurement state.
        """
        DPSO._check_plan(target, plan)
        if rho.n != target.n:
            raise ValidationError(f'{rho.n}-qubit device state for a {target.n}-qubit target')
        layout = plan.sample(rng)
        outcomes, zeta = Measurement.born_sample(rho, layout, rng)
        shadow = Measurement.shadow_snapshot(zeta, rng)
        try:
            phi = target.post_measurement(layout, outcomes)
        except ZeroBranchError:
            return TrialRecord(index, layout, outcomes, shadow.axes, shadow.outcomes, 0.0, target_branch_zero=True)
        omega_hat = Measurement.shadow_overlap(shadow, phi)
        return TrialRecord(index, layout, outcomes, shadow.axes, shadow.outcomes, omega_hat)

    @staticmethod
    def dpso_sample_complexity(r: int, cfg: TestConfig) -> int:
        """N = ceil(2^(2r+1) ln(1/delta) / (nu^2 eps^2)), from the range [0, 2^r]."""
        if r < 1:
            raise ValidationError(f'level must be positive, got {r}')
        return HypothesisTest.simple_sample_complexity(cfg.with_range(*HypothesisTest.nominal_range('dpso', r)))

    @staticmethod
    def dpso_verify(
        states, target: Target, plan: SamplingPlan, cfg: TestConfig, seed: int = 0,
        workers: int | None = None, progress: bool = False, threshold: float | None = None,
        strict: bool | None = None
    ) -> VerdictReport:
        """
        Runs one trial per device state and decides on the mean shadow
        overlap. cfg.gap must be nu of the plan's strategy operator.
        """
        states = list(states)
        if not states:
            raise ValidationError('the device produced no states')
        DPSO._check_plan(target, plan)

        def trial(index: int, rng: np.random.Generator) -> TrialRecord:
            return DPSO.dpso_trial(states[index], target, plan, rng, index)

        records = TrialRunner.run(trial, len(states), seed, workers, progress, description='dpso trials')
        estimates = [record.omega_hat for record in records]
        diagnostics = HypothesisTest.range_diagnostics(estimates, *HypothesisTest.nominal_range('dpso', plan.r))
        diagnostics['target_branch_zero'] = sum(record.target_branch_zero for record in records)
        cfg = cfg.with_range(*HypothesisTest.estimator_range('dpso', plan.r, strict))
        return HypothesisTest.verdict('dpso', cfg, estimates, records, threshold, diagnostics)
