import logging
import math
from typing import Any, Callable

import numpy as np

from pyqsvtool.devicesim.device_source import DeviceSource
from pyqsvtool.dpso.dpso import DPSO
from pyqsvtool.dpso.optimizer import PlanOptimizer
from pyqsvtool.errors import ValidationError
from pyqsvtool.hypotest.hypotest import HypothesisTest
from pyqsvtool.model.config_model import ExperimentConfig
from pyqsvtool.model.plan_model import SamplingPlan
from pyqsvtool.model.report_model import SopParams, TestConfig
from pyqsvtool.model.strategy_model import StrategyOperator
from pyqsvtool.output_handler.output_handler import OutputHandler
from pyqsvtool.parser.target_parser import TargetParser
from pyqsvtool.plm.plm import PLM
from pyqsvtool.runner.trial_runner import TrialRunner
from pyqsvtool.settings import settings
from pyqsvtool.sop.sop import SOP
from pyqsvtool.stabilizer.formalism import StabilizerFormalism
from pyqsvtool.stabilizer.ghz import GhzAnalysis
from pyqsvtool.targets.families import Families
from pyqsvtool.targets.stabilizer_target import StabilizerTarget
from pyqsvtool.targets.target import Target

logger = logging.getLogger(__name__)

OPTIMIZER_METHODS = {'grid': 'grid', 'ascent': 'projected-ascent', 'lp': 'stabilizer-lp'}
RANDOM_TARGETS = ('haar', 'product', 'random-stabilizer')
COUNTING_MAX_N = 6


class PyQSVTool:
    '''
    One static method per sub-command. Each returns the process exit code.
    '''

    @staticmethod
    def run(config: ExperimentConfig, version: str = '') -> int:
        settings.workers = config.workers
        settings.strict_paper_bounds = config.strict_paper_bounds
        commands = {
            'gap': PyQSVTool.gap,
            'verify': PyQSVTool.verify,
            'sweep': PyQSVTool.sweep,
            'hist': PyQSVTool.hist,
            'complexity': PyQSVTool.complexity,
            'ghz-check': PyQSVTool.ghz_check,
        }
        logger.info('running %s with %s', config.command, config.model_dump(exclude_none=True))
        return commands[config.command](config, config.metadata(version))

    # Targets, plans and strategies

    @staticmethod
    def build_target(config: ExperimentConfig, n: int, seed: int) -> Target:
        """
        The configured target on n qubits. seed only matters for the random
        families.
        """
        if config.target == 'ghz':
            return Families.ghz(n)
        if config.target == 'haar':
            return Families.haar_random(n, seed)
        if config.target == 'product':
            return Families.product(np.random.default_rng(seed).integers(0, 2, size=n))
        if config.target == 'random-stabilizer':
            return Families.random_stabilizer(n, seed)
        return TargetParser.parse_target_file(config.target_file)

    @staticmethod
    def sample_seed(seed: int, index: int) -> int:
        """Seed of the index-th random target, drawn from that sample's own stream."""
        return int(TrialRunner.trial_rng(seed, index).integers(2 ** 32))

    @staticmethod
    def build_plan(config: ExperimentConfig, target: Target, r: int) -> SamplingPlan:
        """The DPSO plan of the configured scheme with its gap attached."""
        n = target.n
        if config.scheme in OPTIMIZER_METHODS:
            return PlanOptimizer.optimize_plan(target, r, OPTIMIZER_METHODS[config.scheme], seed=config.seed)
        if config.scheme == 'classes':
            plan = SamplingPlan.ghz_class_uniform(n, r)
        else:
            plan = SamplingPlan.naive_uniform(n, r)
        if isinstance(target, StabilizerTarget):
            scheme = 'ghz-classes' if config.scheme == 'classes' else 'naive'
            plan.gap = StabilizerFormalism.uniform_gap(target, n - r, scheme)
        else:
            plan.gap = DPSO.plan_gap(target, plan)
        return plan

    @staticmethod
    def plm_strategy(config: ExperimentConfig, target: Target, level: int) -> StrategyOperator:
        """
        Stabilizer targets use the tests (I + S)/2; other targets use the DPSO
        test operators of the configured plan as binary tests.
        """
        if isinstance(target, StabilizerTarget):
            tests = StabilizerFormalism.binary_tests(target.group)
        else:
            tests = DPSO.binary_tests(target, PyQSVTool.build_plan(config, target, level))
        return PLM.build_strategy(tests, target.to_state())

    @staticmethod
    def strategy_gap(config: ExperimentConfig, target: Target, level: int) -> tuple[float, str]:
        if config.protocol == 'sop':
            return SOP.build_L(target, level).gap, 'dense'
        if config.protocol == 'plm':
            method = 'plm-stabilizer' if isinstance(target, StabilizerTarget) else 'plm-dpso'
            return PyQSVTool.plm_strategy(config, target, level).gap, method
        plan = PyQSVTool.build_plan(config, target, level)
        return plan.gap, 'gamma-table' if isinstance(target, StabilizerTarget) else 'dense'

    @staticmethod
    def paired_gaps(config: ExperimentConfig, target: Target, level: int) -> tuple[float, float]:
        """nu(L) of SOP and nu(Omega) of the configured DPSO plan for one target."""
        return SOP.build_L(target, level).gap, PyQSVTool.build_plan(config, target, level).gap

    @staticmethod
    def sample_targets(config: ExperimentConfig, n: int, level: int, measure: Callable[[Target], Any]) -> list:
        """measure over config.samples random targets, or once for a fixed target."""
        if config.target not in RANDOM_TARGETS:
            target = PyQSVTool.build_target(config, n, config.seed)
            if level > target.n - 1:
                raise ValidationError(f'level {level} needs at least {level + 1} qubits, target has {target.n}')
            return [measure(target)]

        def sample(index: int, rng: np.random.Generator):
            return measure(PyQSVTool.build_target(config, n, int(rng.integers(2 ** 32))))

        return TrialRunner.run(
            sample, config.samples, config.seed, config.workers, config.progress,
            description=f'gaps n={n} level={level}'
        )

    @staticmethod
    def sample_gaps(config: ExperimentConfig, n: int, level: int) -> tuple[list[float], str]:
        """Gaps of the configured protocol, and the method that computed them."""
        results = PyQSVTool.sample_targets(
            config, n, level, lambda target: PyQSVTool.strategy_gap(config, target, level)
        )
        return [gap for gap, _ in results], results[0][1]

    @staticmethod
    def summarize(gaps: list[float]) -> tuple[float, float]:
        values = np.asarray(gaps, dtype=float)
        stderr = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
        return float(values.mean()), stderr

    # Sub-commands

    @staticmethod
    def gap(config: ExperimentConfig, metadata: dict) -> int:
        gaps, method = PyQSVTool.sample_gaps(config, config.n, config.level)
        mean, stderr = PyQSVTool.summarize(gaps)
        row = {
            'target': config.target, 'n': config.n, 'protocol': config.protocol, 'level': config.level,
            'scheme': config.scheme, 'samples': len(gaps), 'nu': mean, 'nu_stderr': stderr,
            'nu_min': min(gaps), 'nu_max': max(gaps), 'method': method,
        }
        OutputHandler.save_rows([row], config.format, config.out, metadata)
        return 0

    @staticmethod
    def sweep(config: ExperimentConfig, metadata: dict) -> int:
        if config.target not in RANDOM_TARGETS + ('ghz',):
            raise ValidationError(f'sweep needs a target family, got {config.target!r}')
        low, high = config.n_range
        rows = []
        for n in range(low, high + 1):
            for level in range(1, n):
                pairs = PyQSVTool.sample_targets(
                    config, n, level, lambda target: PyQSVTool.paired_gaps(config, target, level)
                )
                mean_sop, stderr_sop = PyQSVTool.summarize([sop for sop, _ in pairs])
                mean_dpso, stderr_dpso = PyQSVTool.summarize([dpso for _, dpso in pairs])
                rows.append({
                    'n': n, 'level': level, 'scheme': config.scheme, 'samples': len(pairs),
                    'mean_nu_sop': mean_sop, 'stderr_sop': stderr_sop,
                    'mean_nu_dpso': mean_dpso, 'stderr_dpso': stderr_dpso,
                })
        metadata = {**metadata, 'min_n': low, 'max_n': high, 'samples': config.samples}
        OutputHandler.save_rows(rows, config.format, config.out, metadata)
        return 0

    @staticmethod
    def hist(config: ExperimentConfig, metadata: dict) -> int:
        gaps, _ = PyQSVTool.sample_gaps(config, config.n, config.level)
        counts, edges = np.histogram(gaps, bins=config.bins, range=(0.0, 1.0))
        rows = [
            {'bin_low': float(edges[i]), 'bin_high': float(edges[i + 1]), 'count': int(counts[i])}
            for i in range(config.bins)
        ]
        metadata = {**metadata, 'samples': len(gaps), 'mean_nu': PyQSVTool.summarize(gaps)[0]}
        OutputHandler.save_rows(rows, config.format, config.out, metadata)
        return 0

    @staticmethod
    def complexity(config: ExperimentConfig, metadata: dict) -> int:
        """
        N for PLM, SOP and DPSO at each level up to config.level. PLM is
        charged with the DPSO gap so that the columns compare at equal nu.
        """
        target = None
        if config.nu is None:
            target = PyQSVTool.build_target(config, config.n, PyQSVTool.sample_seed(config.seed, 0))
            if config.level > target.n - 1:
                raise ValidationError(f'level {config.level} needs at least {config.level + 1} qubits, target has {target.n}')

        rows = []
        for level in range(1, config.level + 1):
            if target is None:
                nu_sop = nu_dpso = config.nu
            else:
                nu_sop = SOP.build_L(target, level).gap
                nu_dpso = PyQSVTool.build_plan(config, target, level).gap
            cfg_sop = TestConfig(config.epsilon, config.delta, nu_sop, chi=config.chi)
            cfg_dpso = TestConfig(config.epsilon, config.delta, nu_dpso, chi=config.chi)
            n_sop = SOP.sop_sample_complexity(level, cfg_sop)
            n_dpso = DPSO.dpso_sample_complexity(level, cfg_dpso)
            rows.append({
                'level': level, 'nu_sop': nu_sop, 'nu_dpso': nu_dpso,
                'N_plm': PLM.plm_sample_complexity(config.epsilon, config.delta, nu_dpso),
                'N_sop': n_sop, 'N_dpso': n_dpso,
                'range_factor': 2 ** (2 * level - 2), 'ratio': n_sop / n_dpso,
            })
        metadata = {**metadata, 'epsilon': config.epsilon, 'delta': config.delta}
        OutputHandler.save_rows(rows, config.format, config.out, metadata)
        return 0

    @staticmethod
    def ghz_check(config: ExperimentConfig, metadata: dict) -> int:
        """
        Symbolic GHZ gap table for every n in range and r in 1..n-1, plus the
        layout counting checks up to COUNTING_MAX_N qubits. Exit code 1 on any
        mismatch.
        """
        low, high = config.n_range
        rows, counting_ok = [], True
        for n in range(max(low, 3), high + 1):
            group = Families.ghz(n).group
            for r in range(1, n):
                rows.append(GhzAnalysis.closed_form_row(group, r))
                if n <= COUNTING_MAX_N:
                    counting = GhzAnalysis.counting_row(group, n - r)
                    if not counting['match']:
                        logger.warning('counting check failed: %s', counting)
                    counting_ok &= counting['match']

        if config.gamma_out is not None:
            target = Families.ghz(config.n)
            gamma_rows = list(StabilizerFormalism.gamma_rows(target, config.n - config.level))
            OutputHandler.save_rows(gamma_rows, 'csv', config.gamma_out, metadata)

        matched = all(row['match'] for row in rows) and counting_ok
        metadata = {**metadata, 'min_n': max(low, 3), 'max_n': high, 'counting_ok': counting_ok}
        OutputHandler.save_rows(rows, config.format, config.out, metadata)
        return 0 if matched else 1

    @staticmethod
    def verify(config: ExperimentConfig, metadata: dict) -> int:
        target = PyQSVTool.build_target(config, config.n, PyQSVTool.sample_seed(config.seed, 0))
        level = config.level
        if level > target.n - 1:
            raise ValidationError(f'level {level} needs at least {level + 1} qubits, target has {target.n}')
        state = target.to_state()

        if config.protocol == 'dpso':
            plan = PyQSVTool.build_plan(config, target, level)
            gap = plan.gap
            strategy = None
        elif config.protocol == 'sop':
            strategy = SOP.build_L(target, level)
            gap = strategy.gap
        else:
            strategy = PyQSVTool.plm_strategy(config, target, level)
            gap = strategy.gap
        cfg = TestConfig(config.epsilon, config.delta, gap, chi=config.chi)

        if config.device == 'exact':
            source = DeviceSource.exact(state)
        elif config.device == 'worst-case':
            if strategy is None:
                strategy = DPSO.build_strategy_operator(target, plan)
            source = DeviceSource.worst_case(state, strategy, config.epsilon)
        elif config.device == 'depolarized':
            source = DeviceSource.depolarized(state, config.noise)
        else:
            source = DeviceSource.from_file(config.device_file)
        if source.n != target.n:
            raise ValidationError(f'device emits {source.n}-qubit states for a {target.n}-qubit target')

        metadata = {**metadata, 'device': config.device, 'gap': gap}
        if config.protocol == 'plm':
            trials = PLM.plm_sample_complexity(config.epsilon, config.delta, gap) if config.trials == 'auto' else config.trials
            verdict = PLM.plm_run(source.stream(trials), strategy, np.random.default_rng(config.seed), config.epsilon)
            logger.info('plm verdict: %s after %d copies', verdict.decision, trials)
            OutputHandler.save_report(verdict.to_dict(), config.out, metadata)
            return 0 if verdict.accepted else 1

        trials, threshold = PyQSVTool.resolve_trials(config, cfg, level)
        states = source.stream(trials)
        if config.protocol == 'dpso':
            report = DPSO.dpso_verify(
                states, target, plan, cfg, config.seed, config.workers, config.progress,
                threshold, config.strict_paper_bounds
            )
            metadata['plan'] = plan.name
        else:
            report = SOP.sop_verify(
                states, target, SopParams(target.n, level, trials, cfg), config.seed, config.workers,
                config.progress, threshold, config.strict_paper_bounds
            )

        if config.trial_log is not None:
            OutputHandler.save_rows([record.to_row() for record in report.records], 'csv', config.trial_log, metadata)
        OutputHandler.save_report(report.to_dict(), config.out, metadata)
        return 0 if report.accepted else 1

    @staticmethod
    def resolve_trials(config: ExperimentConfig, cfg: TestConfig, level: int) -> tuple[int, float | None]:
        """
        Trial count and threshold. With --trials auto and --chi the two error
        caps are planned together over the range the verdict reports against;
        without --chi the protocol's closed-form N is used with the default
        threshold.
        """
        if config.trials != 'auto':
            return config.trials, None
        if config.chi is not None:
            bounds = HypothesisTest.estimator_range(config.protocol, level, config.strict_paper_bounds)
            threshold, trials = HypothesisTest.theorem1_plan(cfg.with_range(*bounds))
            return trials, threshold
        if config.protocol == 'dpso':
            return DPSO.dpso_sample_complexity(level, cfg), None
        return SOP.sop_sample_complexity(level, cfg), None
