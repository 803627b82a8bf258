import math

from pyqsvtool.errors import ValidationError, ZeroGapError
from pyqsvtool.model.layout_model import PauliLayout


class TestConfig:
    '''
    Parameters of one verification: infidelity epsilon, confidence delta,
    optional Type-II cap chi, single-trial range [lower, upper] and gap nu.
    '''

    __test__ = False

    def __init__(
        self, epsilon: float, delta: float, gap: float,
        lower: float = 0.0, upper: float = 1.0, chi: float | None = None
    ):

        if not 0 < epsilon <= 1:
            raise ValidationError(f'epsilon must lie in (0, 1], got {epsilon!r}')
        if not 0 < delta < 1:
            raise ValidationError(f'delta must lie in (0, 1), got {delta!r}')
        if chi is not None and not 0 < chi < 1:
            raise ValidationError(f'chi must lie in (0, 1), got {chi!r}')
        if not lower < upper:
            raise ValidationError(f'estimator range [{lower}, {upper}] is empty')
        if gap <= 0:
            raise ZeroGapError('spectral gap is zero; the target cannot be certified')
        if gap > 1 + 1e-12 or math.isnan(gap):
            raise ValidationError(f'spectral gap must lie in (0, 1], got {gap!r}')

        self.epsilon: float = float(epsilon)
        self.delta: float = float(delta)
        self.gap: float = min(float(gap), 1.0)
        self.lower: float = float(lower)
        self.upper: float = float(upper)
        self.chi: float | None = chi

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def with_range(self, lower: float, upper: float) -> 'TestConfig':
        return TestConfig(self.epsilon, self.delta, self.gap, lower, upper, self.chi)

    def to_dict(self) -> dict:
        return {
            'epsilon': self.epsilon, 'delta': self.delta, 'chi': self.chi,
            'gap': self.gap, 'lower': self.lower, 'upper': self.upper,
        }


class TrialRecord:

    def __init__(
        self, index: int, layout: PauliLayout, outcomes: tuple, shadow_axes: str,
        shadow_outcomes: tuple, omega_hat: float, target_branch_zero: bool = False
    ):

        self.index: int = index
        self.layout: PauliLayout = layout
        self.outcomes: tuple = outcomes
        self.shadow_axes: str = shadow_axes
        self.shadow_outcomes: tuple = shadow_outcomes
        self.omega_hat: float = omega_hat
        self.target_branch_zero: bool = target_branch_zero

    def to_row(self) -> dict:
        return {
            'trial_index': self.index,
            'K': ' '.join(str(q) for q in self.layout.unmeasured),
            'axes': self.layout.letters(),
            'z': ''.join(str(bit) for bit in self.outcomes),
            'shadow_axes': self.shadow_axes,
            'shadow_outcomes': ''.join(str(bit) for bit in self.shadow_outcomes),
            'omega_hat': self.omega_hat,
            'target_branch_zero': self.target_branch_zero,
        }


class VerdictReport:
    '''
    Outcome of a shadow-overlap verification: accept iff mean > threshold.
    '''

    def __init__(
        self, protocol: str, trials: int, mean: float, threshold: float,
        type_i_bound: float, type_ii_bound: float, config: TestConfig,
        records: list[TrialRecord] | None = None, diagnostics: dict | None = None
    ):

        self.protocol: str = protocol
        self.trials: int = trials
        self.mean: float = mean
        self.threshold: float = threshold
        self.decision: str = 'accept' if mean > threshold else 'reject'
        self.type_i_bound: float = type_i_bound
        self.type_ii_bound: float = type_ii_bound
        self.config: TestConfig = config
        self.records: list[TrialRecord] = records or []
        self.diagnostics: dict = diagnostics or {}

    @property
    def accepted(self) -> bool:
        return self.decision == 'accept'

    def to_dict(self) -> dict:
        return {
            'protocol': self.protocol,
            'decision': self.decision,
            'trials': self.trials,
            'mean': self.mean,
            'threshold': self.threshold,
            'type_i_bound': self.type_i_bound,
            'type_ii_bound': self.type_ii_bound,
            'config': self.config.to_dict(),
            'diagnostics': self.diagnostics,
        }


class PlmVerdict:
    '''Outcome of the pass/fail protocol: accept iff every copy passed.'''

    def __init__(self, copies: int, first_failure: int | None, gap: float, type_i_bound: float | None = None):

        self.copies: int = copies
        self.first_failure: int | None = first_failure
        self.decision: str = 'accept' if first_failure is None else 'reject'
        self.gap: float = gap
        self.type_i_bound: float | None = type_i_bound

    @property
    def accepted(self) -> bool:
        return self.decision == 'accept'

    def to_dict(self) -> dict:
        return {
            'protocol': 'plm',
            'decision': self.decision,
            'copies': self.copies,
            'first_failure': self.first_failure,
            'gap': self.gap,
            'type_i_bound': self.type_i_bound,
        }


class SopParams:
    '''Level, trial count and test parameters of one SOP run on n qubits.'''

    def __init__(self, n: int, level: int, trials: int, config: TestConfig):

        if not 1 <= level <= n - 1:
            raise ValidationError(f'SOP level {level} out of range for n={n}')
        if trials < 1:
            raise ValidationError(f'at least one trial is needed, got {trials}')

        self.n: int = n
        self.level: int = level
        self.trials: int = trials
        self.config: TestConfig = config
