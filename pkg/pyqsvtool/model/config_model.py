from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

COMMANDS = ('gap', 'verify', 'sweep', 'hist', 'complexity', 'ghz-check')
N_RANGES = {'sweep': (2, 6), 'ghz-check': (3, 12)}


class ExperimentConfig(BaseModel):
    '''
    One fully validated command line run, built from an optional JSON file
    overlaid with explicitly passed flags.
    '''

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    command: Literal['gap', 'verify', 'sweep', 'hist', 'complexity', 'ghz-check']
    target: Literal['ghz', 'haar', 'product', 'random-stabilizer', 'file'] = 'ghz'
    target_file: str | None = None
    n: int = Field(3, ge=2)
    protocol: Literal['plm', 'sop', 'dpso'] = 'dpso'
    level: int = Field(1, ge=1)
    scheme: Literal['naive', 'classes', 'grid', 'ascent', 'lp'] = 'naive'
    epsilon: float = Field(0.1, gt=0, le=1)
    delta: float = Field(0.1, gt=0, lt=1)
    chi: float | None = Field(None, gt=0, lt=1)
    trials: int | Literal['auto'] = 'auto'
    seed: int = Field(0, ge=0)
    samples: int = Field(1, ge=1)
    workers: int = Field(1, ge=1)
    device: Literal['exact', 'worst-case', 'depolarized', 'file'] = 'exact'
    device_file: str | None = None
    noise: float = Field(0.0, ge=0, le=1)
    min_n: int | None = Field(None, ge=2)
    max_n: int | None = Field(None, ge=2)
    bins: int = Field(20, ge=1)
    nu: float | None = Field(None, gt=0, le=1)
    trial_log: str | None = None
    gamma_out: str | None = None
    strict_paper_bounds: bool = False
    progress: bool = False
    verbose: bool = False
    out: str | None = None
    format: Literal['csv', 'json'] = 'csv'

    @model_validator(mode='after')
    def check_consistency(self) -> 'ExperimentConfig':
        if self.target == 'file' and not self.target_file:
            raise ValueError('target "file" needs target_file')
        if self.device == 'file' and not self.device_file:
            raise ValueError('device "file" needs device_file')
        if isinstance(self.trials, int) and self.trials < 1:
            raise ValueError('trials must be a positive integer or "auto"')
        low, high = self.n_range
        if low > high:
            raise ValueError(f'min_n={low} exceeds max_n={high}')
        if self.command in ('gap', 'verify', 'hist') and self.target != 'file' and self.level > self.n - 1:
            raise ValueError(f'level {self.level} needs at least {self.level + 1} qubits, n={self.n}')
        if self.scheme == 'classes' and self.target != 'ghz':
            raise ValueError('scheme "classes" is defined for the ghz target only')
        if self.scheme == 'lp' and self.target in ('haar', 'product'):
            raise ValueError('scheme "lp" needs a stabilizer target')
        return self

    @property
    def n_range(self) -> tuple[int, int]:
        """Qubit counts swept by sweep and ghz-check, with per-command defaults."""
        low, high = N_RANGES.get(self.command, (2, 6))
        return self.min_n or low, self.max_n or high

    def metadata(self, version: str) -> dict:
        """Run keys for the trailing comment block of CSV output."""
        return {
            'command': self.command, 'target': self.target, 'n': self.n, 'protocol': self.protocol,
            'level': self.level, 'scheme': self.scheme, 'seed': self.seed, 'version': version,
        }
