import itertools
import logging

import numpy as np
from scipy.optimize import linprog

from pyqsvtool.errors import IncompatibleMeasurementError, SolverError, ValidationError
from pyqsvtool.linalg.linalg import LinAlg
from pyqsvtool.model.state_model import DensityOperator, PureState
from pyqsvtool.model.strategy_model import BinaryTest
from pyqsvtool.settings import settings
from pyqsvtool.stabilizer.gamma import GammaTable
from pyqsvtool.stabilizer.ghz import GhzAnalysis
from pyqsvtool.stabilizer.group import StabilizerGroup
from pyqsvtool.stabilizer.pauli import PAULI_MATRICES, SymplecticVector
from pyqsvtool.targets.stabilizer_target import StabilizerTarget

logger = logging.getLogger(__name__)

LP_TOLERANCE = 1e-9


class StabilizerFormalism:

    @staticmethod
    def _density(rho) -> np.ndarray:
        if isinstance(rho, PureState):
            return rho.projector()
        if isinstance(rho, DensityOperator):
            return rho.matrix
        return np.asarray(rho, dtype=complex)

    @staticmethod
    def _local_projector(mu: SymplecticVector, v) -> np.ndarray:
        """(x)_a (I + (-1)^{v_a} P_a) / 2 on the measured qubits only."""
        letters = mu.axes
        factors = [(np.eye(2) + (1 - 2 * int(bit)) * PAULI_MATRICES[letter]) / 2 for letter, bit in zip(letters, v)]
        return LinAlg.kron_all(factors)

    @staticmethod
    def _local_element(mu: SymplecticVector, u) -> np.ndarray:
        factors = [PAULI_MATRICES[letter] if bit else np.eye(2) for letter, bit in zip(mu.axes, u)]
        return LinAlg.kron_all(factors)

    @staticmethod
    def _check_weight(mu: SymplecticVector) -> None:
        if mu.weight < 1:
            raise ValidationError('the measurement setting must act on at least one qubit')

    @staticmethod
    def outcome_projector(mu: SymplecticVector, v) -> np.ndarray:
        """
        Pi_{mu, v} = 2^-t sum_u (-1)^{u.v} W_mu(u), lifted to all n qubits.
        """
        StabilizerFormalism._check_weight(mu)
        v = [int(bit) for bit in v]
        if len(v) != mu.weight:
            raise ValidationError(f'{len(v)} outcome bits for a weight-{mu.weight} setting')
        total = np.zeros((2 ** mu.n, 2 ** mu.n), dtype=complex)
        for u in itertools.product((0, 1), repeat=mu.weight):
            sign = (-1) ** sum(a * b for a, b in zip(u, v))
            total += sign * mu.measurement_element(u).to_matrix()
        return total / 2 ** mu.weight

    @staticmethod
    def measurement_group(mu: SymplecticVector) -> StabilizerGroup:
        """T_mu, generated by the measured single-qubit Paulis."""
        StabilizerFormalism._check_weight(mu)
        generators = [mu.measurement_element([int(a == b) for b in range(mu.weight)]) for a in range(mu.weight)]
        return StabilizerGroup(generators, mu.n)

    @staticmethod
    def general_test_operator(
        rho, mu: SymplecticVector, method: str = 'branch-sum', zero_branch_atol: float | None = None
    ) -> np.ndarray:
        """
        Test operator of the Pauli measurement mu against the state rho.

        method='branch-sum':
            sum_v Pi_{mu,v} (x) Tr_J(rho Pi_{mu,v}) / Tr(rho Pi_{mu,v}) over
            the nonzero branches.
        method='compatible':
            (2^t Tr(rho Pi_{mu,0}))^-1 sum_{T in T_mu} T (x) Tr_J(rho T),
            exact for stabilizer states and undefined when the all-zero
            outcome has probability zero.
        """
        StabilizerFormalism._check_weight(mu)
        matrix = StabilizerFormalism._density(rho)
        atol = settings.zero_branch_atol if zero_branch_atol is None else zero_branch_atol
        n = mu.n
        LinAlg.check_capacity(2 ** n)
        measured = list(mu.support)
        kept = [q for q in range(n) if q not in measured]
        order = measured + kept
        total = np.zeros((2 ** n, 2 ** n), dtype=complex)

        if method == 'branch-sum':
            for v in itertools.product((0, 1), repeat=mu.weight):
                local = StabilizerFormalism._local_projector(mu, v)
                weighted = matrix @ LinAlg.embed(local, measured, n)
                probability = float(np.real(np.trace(weighted)))
                if probability <= atol:
                    continue
                reduced = LinAlg.partial_trace(weighted, kept) / probability
                total += LinAlg.embed(np.kron(local, reduced), order, n)
            return total

        if method == 'compatible':
            zero_branch = matrix @ LinAlg.embed(StabilizerFormalism._local_projector(mu, [0] * mu.weight), measured, n)
            probability = float(np.real(np.trace(zero_branch)))
            if probability <= atol:
                raise IncompatibleMeasurementError(
                    f'all-zero outcome of {mu.letters()} has zero probability on the target'
                )
            for u in itertools.product((0, 1), repeat=mu.weight):
                local = StabilizerFormalism._local_element(mu, u)
                reduced = LinAlg.partial_trace(matrix @ LinAlg.embed(local, measured, n), kept)
                total += LinAlg.embed(np.kron(local, reduced), order, n)
            return total / (2 ** mu.weight * probability)

        raise ValidationError(f'unknown construction method {method!r}')

    @staticmethod
    def r_group(group: StabilizerGroup, mu: SymplecticVector) -> StabilizerGroup:
        """
        R_mu: elements of the stabilizer group acting as identity or as the
        measured Pauli on every measured qubit.
        """
        elements = group.elements()
        members = np.flatnonzero(GammaTable.member_mask(group, mu))
        return StabilizerGroup.from_elements([elements[v] for v in members], group.n)

    @staticmethod
    def intersection_size(group: StabilizerGroup, mu: SymplecticVector, either_sign: bool = False) -> int:
        """
        |T_mu intersected with S|, or |S intersected with +-T_mu| when
        either_sign is set. |R_mu| = 2^(n - t) times the latter for every mu;
        the two counts agree when mu is compatible.
        """
        mask = GammaTable.intersection_mask(group, mu)
        if either_sign:
            mask = mask | GammaTable.intersection_mask(group, mu, sign=-1)
        return int(np.count_nonzero(mask))

    @staticmethod
    def is_compatible(group: StabilizerGroup, mu: SymplecticVector) -> bool:
        """True unless some element of S lies in -T_mu."""
        return not GammaTable.intersection_mask(group, mu, sign=-1).any()

    @staticmethod
    def stabilizer_test_operator(group: StabilizerGroup, mu: SymplecticVector) -> np.ndarray:
        """Omega_mu = |R_mu|^-1 sum_{R in R_mu} R, the projector onto the R_mu code."""
        StabilizerFormalism._check_weight(mu)
        LinAlg.check_capacity(2 ** group.n)
        elements = group.elements()
        members = np.flatnonzero(GammaTable.member_mask(group, mu))
        total = np.zeros((2 ** group.n, 2 ** group.n), dtype=complex)
        for v in members:
            total += elements[v].to_matrix()
        return total / len(members)

    @staticmethod
    def stabilizer_basis_diagonal(group: StabilizerGroup, mu: SymplecticVector) -> np.ndarray:
        StabilizerFormalism._check_weight(mu)
        return GammaTable.row(group, mu)

    @staticmethod
    def uniform_weights(n: int, t: int) -> dict[SymplecticVector, float]:
        settings_of_weight = list(SymplecticVector.all_of_weight(n, t))
        return {mu: 1 / len(settings_of_weight) for mu in settings_of_weight}

    @staticmethod
    def gamma_table(target: StabilizerTarget, t: int, scheme: str = 'naive', symmetric: bool | None = None) -> np.ndarray:
        """
        gamma_{t, w} of a uniform scheme. GHZ targets use the orbit reduction
        unless symmetric=False.
        """
        if symmetric is None:
            symmetric = target.family == 'ghz'
        if scheme == 'ghz-classes' and target.family != 'ghz':
            raise ValidationError('the class-uniform scheme is defined for GHZ targets only')
        if symmetric:
            if target.family != 'ghz':
                raise ValidationError('the orbit reduction needs a GHZ target')
            return GhzAnalysis.symmetric_gamma(target.group, t, scheme)
        if scheme == 'naive':
            weights = StabilizerFormalism.uniform_weights(target.n, t)
        else:
            weights = GhzAnalysis.class_weights(target.n, t, scheme)
        return GammaTable.weighted(target.group, weights)

    @staticmethod
    def uniform_gap(target: StabilizerTarget, t: int, scheme: str = 'naive', symmetric: bool | None = None) -> float:
        return GammaTable.gap(StabilizerFormalism.gamma_table(target, t, scheme, symmetric))

    @staticmethod
    def gamma_rows(target: StabilizerTarget, t: int):
        """Yields (mu, w, gamma) rows for every weight-t setting."""
        for mu in SymplecticVector.all_of_weight(target.n, t):
            row = GammaTable.row(target.group, mu)
            for w, gamma in enumerate(row):
                yield {'mu': mu.letters(), 'w': format(w, f'0{target.n}b'), 'gamma': int(gamma)}

    @staticmethod
    def lp_optimize(target: StabilizerTarget, t: int, candidates=None) -> tuple[dict[SymplecticVector, float], float]:
        """
        Solves min_p max_{w != 0} sum_mu p_mu gamma_{mu, w} over the simplex,
        as the LP: minimize s subject to G^T p - s <= 0, sum p = 1, p >= 0.

        Settings with identical gamma rows are merged before solving; the
        weight of a merged column goes to its first setting.
        """
        settings_list = list(candidates) if candidates is not None else list(SymplecticVector.all_of_weight(target.n, t))
        if not settings_list:
            raise ValidationError('no measurement settings to optimize over')
        rows = np.array([GammaTable.row(target.group, mu) for mu in settings_list], dtype=float)
        if rows.shape[1] == 1:
            return {settings_list[0]: 1.0}, 1.0

        unique_rows, first_index = np.unique(rows, axis=0, return_index=True)
        order = np.argsort(first_index)
        unique_rows, first_index = unique_rows[order], first_index[order]
        columns = len(unique_rows)

        cost = np.zeros(columns + 1)
        cost[-1] = 1.0
        a_ub = np.hstack([unique_rows[:, 1:].T, -np.ones((rows.shape[1] - 1, 1))])
        b_ub = np.zeros(rows.shape[1] - 1)
        a_eq = np.hstack([np.ones((1, columns)), np.zeros((1, 1))])
        bounds = [(0, None)] * columns + [(None, None)]

        result = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0], bounds=bounds, method='highs')
        if not result.success:
            raise SolverError(f'LP did not converge: {result.message}', result.status, getattr(result, 'nit', 0))

        probabilities = np.clip(result.x[:columns], 0.0, None)
        probabilities = probabilities / probabilities.sum()
        distribution = {
            settings_list[index]: float(p) for index, p in zip(first_index, probabilities) if p > LP_TOLERANCE
        }
        table = probabilities @ unique_rows
        nu = GammaTable.gap(table)
        logger.info('LP over %d settings (%d distinct): nu = %.10f', len(settings_list), columns, nu)
        return distribution, nu

    @staticmethod
    def binary_tests(group: StabilizerGroup) -> list[BinaryTest]:
        """
        Pass projectors (I + S) / 2 for every non-identity stabilizer, chosen
        uniformly.
        """
        LinAlg.check_capacity(2 ** group.n)
        identity = np.eye(2 ** group.n, dtype=complex)
        elements = group.elements()[1:]
        return [
            BinaryTest((identity + element.to_matrix()) / 2, 1 / len(elements), label=str(element))
            for element in elements
        ]
