import itertools
import logging

import numpy as np

from pyqsvtool.dpso.dpso import DPSO
from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import AXES, PauliLayout
from pyqsvtool.model.plan_model import SamplingPlan
from pyqsvtool.stabilizer.formalism import StabilizerFormalism
from pyqsvtool.stabilizer.gamma import GammaTable
from pyqsvtool.stabilizer.pauli import SymplecticVector
from pyqsvtool.targets.stabilizer_target import StabilizerTarget
from pyqsvtool.targets.target import Target

logger = logging.getLogger(__name__)

METHODS = ('grid', 'projected-ascent', 'stabilizer-lp')
GRID_STEP = 0.1
DIFFERENCE_STEP = 1e-4
ASCENT_RATE = 0.05


class GapEvaluator:
    '''
    nu as a function of layout weights, with every per-layout operator built
    once: gamma rows for stabilizer targets, dense test operators otherwise.
    '''

    def __init__(self, target: Target, layouts: list[PauliLayout]):

        self.target: Target = target
        self.layouts: list[PauliLayout] = layouts
        if isinstance(target, StabilizerTarget):
            self.rows = np.array(
                [GammaTable.row(target.group, SymplecticVector.from_layout(layout)) for layout in layouts],
                dtype=float,
            )
            self.matrices = None
        else:
            self.rows = None
            self.matrices = np.array([DPSO.build_test_operator(target, layout).matrix for layout in layouts])

    def __call__(self, weights: np.ndarray) -> float:
        if self.rows is not None:
            return GammaTable.gap(weights @ self.rows)
        omega = np.tensordot(weights, self.matrices, axes=(0, 0))
        eigenvalues = np.linalg.eigvalsh((omega + omega.conj().T) / 2)
        return float(np.clip(1.0 - eigenvalues[-2], 0.0, 1.0))


class PlanOptimizer:
    '''
    Searches sampling plans for a large spectral gap. The result never falls
    below the naive uniform plan and carries its gap in plan.gap.
    '''

    @staticmethod
    def project_to_simplex(vector: np.ndarray) -> np.ndarray:
        """Euclidean projection onto the probability simplex, by sorting."""
        ordered = np.sort(vector)[::-1]
        cumulative = np.cumsum(ordered) - 1.0
        ranks = np.arange(1, len(vector) + 1)
        count = ranks[ordered - cumulative / ranks > 0][-1]
        return np.maximum(vector - cumulative[count - 1] / count, 0.0)

    @staticmethod
    def simplex_grid(size: int, step: float = GRID_STEP):
        """Points of the simplex with coordinates on multiples of step."""
        ticks = int(round(1 / step))
        for head in itertools.product(range(ticks + 1), repeat=size - 1):
            if sum(head) <= ticks:
                yield np.array(list(head) + [ticks - sum(head)]) / ticks

    @staticmethod
    def _product_weights(layouts, subsets, axis_strings, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        subset_index = {s: i for i, s in enumerate(subsets)}
        axes_index = {a: i for i, a in enumerate(axis_strings)}
        return np.array([p[subset_index[l.measured]] * q[axes_index[l.axes]] for l in layouts])

    @staticmethod
    def _grid(evaluator: GapEvaluator, n: int, r: int) -> tuple[np.ndarray, float]:
        """iid per-qubit axis probabilities on a simplex grid, uniform subsets."""
        t = n - r
        subsets = list(itertools.combinations(range(n), t))
        axis_strings = [''.join(letters) for letters in itertools.product(AXES, repeat=t)]
        p = np.full(len(subsets), 1 / len(subsets))
        points = list(PlanOptimizer.simplex_grid(3)) + [np.full(3, 1 / 3)]
        best_weights, best_gap = None, -1.0
        for point in points:
            q = np.array([np.prod([point[AXES.index(axis)] for axis in axes]) for axes in axis_strings])
            weights = PlanOptimizer._product_weights(evaluator.layouts, subsets, axis_strings, p, q)
            gap = evaluator(weights)
            if gap > best_gap:
                best_weights, best_gap = weights, gap
        return best_weights, best_gap

    @staticmethod
    def _ascend(objective, start: np.ndarray, project, iterations: int) -> tuple[np.ndarray, float]:
        point = project(start)
        value = objective(point)
        for _ in range(iterations):
            gradient = np.empty_like(point)
            for i in range(len(point)):
                shifted = point.copy()
                shifted[i] += DIFFERENCE_STEP
                gradient[i] = (objective(shifted) - value) / DIFFERENCE_STEP
            candidate = project(point + ASCENT_RATE * gradient)
            candidate_value = objective(candidate)
            if candidate_value < value:
                break
            point, value = candidate, candidate_value
        return point, value

    @staticmethod
    def _projected_ascent(
        evaluator: GapEvaluator, n: int, r: int, joint: bool, iterations: int, restarts: int, seed: int
    ) -> tuple[np.ndarray, float]:
        """
        Finite difference ascent over the (p, q) pair, or over the joint
        layout weights when joint is set. Restart 0 starts at the uniform point.
        """
        rng = np.random.default_rng(seed)
        if joint:
            blocks = [len(evaluator.layouts)]

            def weights_of(x):
                return x
        else:
            subsets = list(itertools.combinations(range(n), n - r))
            axis_strings = [''.join(letters) for letters in itertools.product(AXES, repeat=n - r)]
            blocks = [len(subsets), len(axis_strings)]

            def weights_of(x):
                return PlanOptimizer._product_weights(
                    evaluator.layouts, subsets, axis_strings, x[:blocks[0]], x[blocks[0]:]
                )

        edges = np.cumsum([0] + blocks)

        def project(x):
            return np.concatenate([
                PlanOptimizer.project_to_simplex(x[lo:hi]) for lo, hi in zip(edges[:-1], edges[1:])
            ])

        def objective(x):
            return evaluator(weights_of(x))

        best_weights, best_gap = None, -1.0
        for restart in range(restarts):
            if restart == 0:
                start = np.concatenate([np.full(size, 1 / size) for size in blocks])
            else:
                start = np.concatenate([rng.dirichlet(np.ones(size)) for size in blocks])
            point, value = PlanOptimizer._ascend(objective, start, project, iterations)
            logger.debug('ascent restart %d: nu = %.10f', restart, value)
            if value > best_gap:
                best_weights, best_gap = weights_of(point), value
        return best_weights, best_gap

    @staticmethod
    def optimize_plan(
        target: Target, r: int, method: str = 'projected-ascent', candidates=None,
        iterations: int = 200, restarts: int = 10, seed: int = 0
    ) -> SamplingPlan:
        """
        Best plan found by the method, or the naive uniform plan when nothing
        beats it. candidates restricts the search to those layouts.
        """
        if method not in METHODS:
            raise ValidationError(f'unknown optimization method {method!r}')
        n = target.n
        naive = SamplingPlan.naive_uniform(n, r)
        naive.gap = DPSO.plan_gap(target, naive)

        if candidates is not None:
            candidates = list(dict.fromkeys(candidates))
            if not candidates:
                raise ValidationError('empty candidate list')
            if len(candidates) == 1:
                plan = SamplingPlan.single(candidates[0])
                plan.gap = DPSO.plan_gap(target, plan)
                return plan

        if method == 'stabilizer-lp':
            if not isinstance(target, StabilizerTarget):
                raise ValidationError('the LP method needs a stabilizer target')
            settings_list = None if candidates is None else [SymplecticVector.from_layout(c) for c in candidates]
            distribution, gap = StabilizerFormalism.lp_optimize(target, n - r, settings_list)
            plan = SamplingPlan.from_settings(n, r, distribution, name='lp')
            plan.gap = gap
        else:
            layouts = candidates if candidates is not None else naive.layouts
            evaluator = GapEvaluator(target, layouts)
            if method == 'grid' and candidates is None:
                weights, gap = PlanOptimizer._grid(evaluator, n, r)
            elif method == 'grid':
                weights, gap = PlanOptimizer._candidate_grid(evaluator)
            else:
                weights, gap = PlanOptimizer._projected_ascent(
                    evaluator, n, r, candidates is not None, iterations, restarts, seed
                )
            weights = np.where(weights > 0, weights, 0.0)
            plan = SamplingPlan(n, r, dict(zip(layouts, weights / weights.sum())), name=method)
            plan.gap = gap

        logger.info('optimized plan (%s): nu = %.10f, naive nu = %.10f', method, plan.gap, naive.gap)
        if candidates is None and plan.gap < naive.gap:
            return naive
        return plan

    @staticmethod
    def _candidate_grid(evaluator: GapEvaluator) -> tuple[np.ndarray, float]:
        """
        Simplex grid over up to four candidates; larger lists try the uniform
        point and every single candidate.
        """
        size = len(evaluator.layouts)
        if size <= 4:
            points = list(PlanOptimizer.simplex_grid(size))
        else:
            points = list(np.eye(size))
        points.append(np.full(size, 1 / size))
        best_weights, best_gap = None, -1.0
        for point in points:
            gap = evaluator(point)
            if gap > best_gap:
                best_weights, best_gap = point, gap
        return best_weights, best_gap
