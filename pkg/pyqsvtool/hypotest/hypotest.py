import logging
import math

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.report_model import TestConfig, TrialRecord, VerdictReport
from pyqsvtool.settings import settings

logger = logging.getLogger(__name__)

DEGENERATE_MARGIN = 1e-6
CEIL_RTOL = 1e-9


class HypothesisTest:
    '''
    Decision rule and Hoeffding error bounds shared by the shadow overlap
    protocols.

    H0: the device infidelity is at least epsilon. H0 is rejected, and the
    device accepted, iff the mean estimate is strictly above t0.
    '''

    @staticmethod
    def _ceil(value: float) -> int:
        """
        Integer ceiling that ignores floating point noise just above an
        integer.
        """
        return max(1, math.ceil(value - CEIL_RTOL * max(1.0, abs(value))))

    @staticmethod
    def default_threshold(cfg: TestConfig) -> float:
        margin = cfg.gap * cfg.epsilon
        if margin < DEGENERATE_MARGIN:
            logger.warning('nu * epsilon = %.3e; the threshold is degenerate at 1', margin)
        return 1.0 - margin / 2

    @staticmethod
    def hoeffding_tail(trials: int, t: float, lower: float, upper: float) -> float:
        """
        exp(-2 N t^2 / (b - a)^2), the Hoeffding bound on the probability that
        the mean of N samples in [a, b] deviates by t from its expectation.
        """
        if trials < 1:
            raise ValidationError(f'at least one trial is needed, got {trials}')
        if t <= 0:
            raise ValidationError(f'deviation must be positive, got {t!r}')
        if not lower < upper:
            raise ValidationError(f'range [{lower}, {upper}] is empty')
        return math.exp(-2 * trials * t * t / (upper - lower) ** 2)

    @staticmethod
    def error_bounds(cfg: TestConfig, threshold: float, trials: int) -> tuple[float, float]:
        """
        Returns the Type I and Type II bounds at threshold t0 after N trials.

        Type I: accepting a device with infidelity >= epsilon.
        Type II: rejecting the exact target.
        """
        floor = 1.0 - cfg.gap * cfg.epsilon
        if not floor < threshold < 1.0:
            raise ValidationError(f'threshold {threshold!r} outside ({floor!r}, 1)')
        type_i = HypothesisTest.hoeffding_tail(trials, threshold - floor, cfg.lower, cfg.upper)
        type_ii = HypothesisTest.hoeffding_tail(trials, 1.0 - threshold, cfg.lower, cfg.upper)
        return type_i, type_ii

    @staticmethod
    def theorem1_plan(cfg: TestConfig, fixed: str = 'type2') -> tuple[float, int]:
        """
        Smallest N, and its threshold, with Type I bound <= delta and Type II
        bound <= chi.

        N = ceil((b - a)^2 / (2 nu^2 eps^2) (sqrt(ln 1/chi) + sqrt(ln 1/delta))^2)

        With fixed='type2' the threshold saturates the chi cap on the Type II
        error; fixed='type1' puts chi on the Type I error instead and delta on
        the Type II error. chi defaults to delta.
        """
        if fixed not in ('type1', 'type2'):
            raise ValidationError(f'fixed must be type1 or type2, got {fixed!r}')
        chi = cfg.delta if cfg.chi is None else cfg.chi
        margin = cfg.gap * cfg.epsilon
        root_chi = math.sqrt(math.log(1 / chi))
        root_delta = math.sqrt(math.log(1 / cfg.delta))
        trials = HypothesisTest._ceil(cfg.width ** 2 / (2 * margin ** 2) * (root_chi + root_delta) ** 2)

        offset = cfg.width * math.sqrt(math.log(1 / chi) / (2 * trials))
        threshold = 1.0 - offset if fixed == 'type2' else 1.0 - margin + offset
        return threshold, trials

    @staticmethod
    def simple_sample_complexity(cfg: TestConfig) -> int:
        """N = ceil(2 (b - a)^2 ln(1/delta) / (nu^2 eps^2))."""
        margin = cfg.gap * cfg.epsilon
        return HypothesisTest._ceil(2 * cfg.width ** 2 * math.log(1 / cfg.delta) / margin ** 2)

    @staticmethod
    def nominal_range(protocol: str, level: int) -> tuple[float, float]:
        if protocol == 'dpso':
            return 0.0, float(2 ** level)
        if protocol == 'sop':
            return 0.0, float(2 ** (2 * level - 1))
        raise ValidationError(f'no estimator range for protocol {protocol!r}')

    @staticmethod
    def estimator_range(protocol: str, level: int, strict: bool | None = None) -> tuple[float, float]:
        """
        Range used for error bookkeeping of a verdict.

        A single snapshot can be negative, so unless strict the range is made
        symmetric around zero.
        """
        strict = settings.strict_paper_bounds if strict is None else strict
        lower, upper = HypothesisTest.nominal_range(protocol, level)
        return (lower, upper) if strict else (-upper, upper)

    @staticmethod
    def range_diagnostics(estimates, lower: float, upper: float) -> dict:
        values = np.asarray(estimates, dtype=float)
        outside = int(np.count_nonzero((values < lower) | (values > upper)))
        if outside:
            logger.info('%d of %d estimates fall outside [%s, %s]', outside, len(values), lower, upper)
        return {
            'min_estimate': float(values.min()),
            'max_estimate': float(values.max()),
            'negative_fraction': float(np.mean(values < 0)),
            'outside_nominal_range': outside,
        }

    @staticmethod
    def verdict(
        protocol: str, cfg: TestConfig, estimates, records: list[TrialRecord] | None = None,
        threshold: float | None = None, diagnostics: dict | None = None
    ) -> VerdictReport:
        """
        Averages the trial estimates and applies the decision rule.

        A mean exactly equal to the threshold rejects.
        """
        estimates = list(estimates)
        if not estimates:
            raise ValidationError('no trial estimates to decide on')
        threshold = HypothesisTest.default_threshold(cfg) if threshold is None else threshold
        mean = math.fsum(estimates) / len(estimates)
        type_i, type_ii = HypothesisTest.error_bounds(cfg, threshold, len(estimates))

        report = VerdictReport(
            protocol, len(estimates), mean, threshold, type_i, type_ii, cfg,
            records=records, diagnostics=diagnostics
        )
        logger.info(
            '%s verdict: %s (mean %.6f vs threshold %.6f over %d trials)',
            protocol, report.decision, mean, threshold, len(estimates)
        )
        return report
