import itertools
import math

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import AXES, PauliLayout
from pyqsvtool.model.model import Model
from pyqsvtool.stabilizer.ghz import GhzAnalysis
from pyqsvtool.stabilizer.pauli import SymplecticVector

WEIGHT_SUM_ATOL = 1e-10


class SamplingPlan(Model):
    '''
    Distribution over the layouts (J, l) of a level-r protocol: J holds the
    n - r measured qubits and l their axes.

    The joint distribution is stored directly; p and q are its marginals.
    '''

    def __init__(self, n: int, r: int, weights: dict[PauliLayout, float], name: str = 'custom'):

        super().__init__(n)
        if not 1 <= r <= n - 1:
            raise ValidationError(f'level {r} out of range for n={n}')
        cleaned = {}
        for layout, weight in weights.items():
            if layout.n != n or layout.r != r:
                raise ValidationError(f'{layout!r} is not a level-{r} layout on {n} qubits')
            if weight < 0 or math.isnan(weight):
                raise ValidationError(f'{layout!r} has invalid probability {weight!r}')
            if weight > 0:
                cleaned[layout] = cleaned.get(layout, 0.0) + float(weight)
        total = math.fsum(cleaned.values())
        if abs(total - 1.0) > WEIGHT_SUM_ATOL:
            raise ValidationError(f'plan probabilities sum to {total!r}, not 1')

        self.r: int = r
        self.weights: dict[PauliLayout, float] = cleaned
        self.name: str = name
        self.gap: float | None = None

    @classmethod
    def product(cls, n: int, r: int, p: dict, q: dict, name: str = 'product') -> 'SamplingPlan':
        """
        p_J q_l for p over measured subsets J (tuples of qubits) and q over
        axis strings of length n - r.
        """
        weights = {}
        for measured, p_j in p.items():
            for axes, q_l in q.items():
                if p_j * q_l > 0:
                    weights[PauliLayout(n, measured, axes)] = p_j * q_l
        return cls(n, r, weights, name)

    @classmethod
    def naive_uniform(cls, n: int, r: int) -> 'SamplingPlan':
        subsets = list(itertools.combinations(range(n), n - r))
        axes = [''.join(letters) for letters in itertools.product(AXES, repeat=n - r)]
        return cls.product(
            n, r, {j: 1 / len(subsets) for j in subsets}, {l: 1 / len(axes) for l in axes}, name='naive'
        )

    @classmethod
    def z_only(cls, n: int, r: int) -> 'SamplingPlan':
        subsets = list(itertools.combinations(range(n), n - r))
        return cls.product(n, r, {j: 1 / len(subsets) for j in subsets}, {'Z' * (n - r): 1.0}, name='z-only')

    @classmethod
    def ghz_class_uniform(cls, n: int, r: int) -> 'SamplingPlan':
        """
        Equal probability for every (m_x, m_y, m_z) class of weight n - r,
        uniform inside each class.
        """
        weights = GhzAnalysis.class_weights(n, n - r, 'ghz-classes')
        return cls(n, r, {mu.to_layout(): p for mu, p in weights.items()}, name='classes')

    @classmethod
    def single(cls, layout: PauliLayout) -> 'SamplingPlan':
        return cls(layout.n, layout.r, {layout: 1.0}, name='single')

    @classmethod
    def from_settings(cls, n: int, r: int, weights: dict[SymplecticVector, float], name: str = 'custom') -> 'SamplingPlan':
        return cls(n, r, {mu.to_layout(): p for mu, p in weights.items()}, name)

    def settings(self) -> dict[SymplecticVector, float]:
        return {SymplecticVector.from_layout(layout): p for layout, p in self.weights.items()}

    @property
    def layouts(self) -> list[PauliLayout]:
        return list(self.weights)

    @property
    def p(self) -> dict[tuple[int, ...], float]:
        marginal: dict[tuple[int, ...], float] = {}
        for layout, weight in self.weights.items():
            marginal[layout.measured] = marginal.get(layout.measured, 0.0) + weight
        return marginal

    @property
    def q(self) -> dict[str, float]:
        marginal: dict[str, float] = {}
        for layout, weight in self.weights.items():
            marginal[layout.axes] = marginal.get(layout.axes, 0.0) + weight
        return marginal

    def sample(self, rng: np.random.Generator) -> PauliLayout:
        layouts = self.layouts
        if len(layouts) == 1:
            return layouts[0]
        probabilities = np.array([self.weights[layout] for layout in layouts])
        return layouts[int(rng.choice(len(layouts), p=probabilities / probabilities.sum()))]

    def to_rows(self) -> list[dict]:
        return [{'layout': layout.letters(), 'probability': weight} for layout, weight in self.weights.items()]

    def __repr__(self) -> str:
        return f'SamplingPlan({self.name!r}, n={self.n}, r={self.r}, layouts={len(self.weights)})'
