import itertools
import logging
from math import comb, factorial

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.stabilizer.gamma import GammaTable
from pyqsvtool.stabilizer.group import StabilizerGroup
from pyqsvtool.stabilizer.pauli import SymplecticVector

logger = logging.getLogger(__name__)

SCHEMES = ('naive', 'ghz-classes')


class GhzClass:
    '''
    Measurement settings of weight t with m_x X's, m_y Y's and m_z Z's, which
    qubit permutations of the GHZ state map onto each other.
    '''

    def __init__(self, n: int, counts: tuple[int, int, int]):

        self.n: int = n
        self.counts: tuple[int, int, int] = counts

    @property
    def t(self) -> int:
        return sum(self.counts)

    @property
    def size(self) -> int:
        m_x, m_y, m_z = self.counts
        return comb(self.n, self.t) * factorial(self.t) // (factorial(m_x) * factorial(m_y) * factorial(m_z))

    @property
    def representative(self) -> SymplecticVector:
        m_x, m_y, m_z = self.counts
        return SymplecticVector.from_letters('X' * m_x + 'Y' * m_y + 'Z' * m_z + 'I' * (self.n - self.t))

    def members(self):
        for mu in SymplecticVector.all_of_weight(self.n, self.t):
            if mu.counts() == self.counts:
                yield mu

    def __repr__(self) -> str:
        return f'GhzClass(n={self.n}, counts={self.counts})'


class GhzAnalysis:
    '''
    Closed-form machinery for GHZ targets: the permutation classes, the
    uniform sampling schemes and their gamma tables up to n = 12.
    '''

    @staticmethod
    def equivalence_classes(n: int, t: int) -> list[GhzClass]:
        if not 1 <= t <= n:
            raise ValidationError(f'weight {t} out of range for n={n}')
        classes = []
        for m_x in range(t, -1, -1):
            for m_y in range(t - m_x, -1, -1):
                classes.append(GhzClass(n, (m_x, m_y, t - m_x - m_y)))
        return classes

    @staticmethod
    def class_probabilities(n: int, t: int, scheme: str) -> list[tuple[GhzClass, float]]:
        """
        Total probability of each class: proportional to its size under the
        naive scheme, 2 / ((t + 1)(t + 2)) each under the class scheme.
        """
        classes = GhzAnalysis.equivalence_classes(n, t)
        if scheme == 'naive':
            total = comb(n, t) * 3 ** t
            return [(c, c.size / total) for c in classes]
        if scheme == 'ghz-classes':
            return [(c, 1 / len(classes)) for c in classes]
        raise ValidationError(f'unknown sampling scheme {scheme!r}')

    @staticmethod
    def class_weights(n: int, t: int, scheme: str) -> dict[SymplecticVector, float]:
        """Per-setting probabilities, uniform inside each class."""
        weights = {}
        for ghz_class, probability in GhzAnalysis.class_probabilities(n, t, scheme):
            share = probability / ghz_class.size
            for mu in ghz_class.members():
                weights[mu] = share
        return weights

    @staticmethod
    def orbit_keys(n: int) -> np.ndarray:
        """
        Orbit index of every w under qubit permutations: S_w depends on w_1 and
        on the Hamming weight k of (w_2 ... w_n) only through min(k, n - k).
        """
        w = np.arange(2 ** n, dtype=np.int64)
        first = (w >> (n - 1)) & 1
        rest = w & ((1 << (n - 1)) - 1)
        k = np.zeros_like(w)
        for bit in range(n - 1):
            k += (rest >> bit) & 1
        return first * (n // 2 + 1) + np.minimum(k, n - k)

    @staticmethod
    def symmetric_gamma(group: StabilizerGroup, t: int, scheme: str) -> np.ndarray:
        """
        gamma_{t, w} of a uniform scheme on the GHZ state, evaluated once per
        class representative and averaged over permutation orbits of w.
        """
        n = group.n
        keys = GhzAnalysis.orbit_keys(n)
        orbit_sizes = np.bincount(keys)
        occupied = orbit_sizes > 0
        table = np.zeros(2 ** n, dtype=float)
        for ghz_class, probability in GhzAnalysis.class_probabilities(n, t, scheme):
            row = GammaTable.row(group, ghz_class.representative).astype(float)
            means = np.zeros(len(orbit_sizes))
            means[occupied] = np.bincount(keys, weights=row)[occupied] / orbit_sizes[occupied]
            table += probability * means[keys]
        return table

    @staticmethod
    def expected_gap(n: int, r: int, scheme: str) -> float:
        t = n - r
        if scheme == 'naive':
            return (2 / 3) ** t
        if scheme == 'ghz-classes':
            return 2 / (t + 2)
        raise ValidationError(f'unknown sampling scheme {scheme!r}')

    @staticmethod
    def closed_form_row(group: StabilizerGroup, r: int, atol: float = 1e-10) -> dict:
        """
        Symbolic gaps of both uniform schemes at level r next to their closed
        forms, with the check that w = (1, 0, ..., 0) attains the maximum.
        """
        n = group.n
        t = n - r
        row = {'n': n, 'r': r, 't': t}
        leading = 1 << (n - 1)
        argmax_ok = True
        match = True
        for scheme, column in (('naive', 'naive'), ('ghz-classes', 'classes')):
            table = GhzAnalysis.symmetric_gamma(group, t, scheme)
            nu = GammaTable.gap(table)
            expected = GhzAnalysis.expected_gap(n, r, scheme)
            row[f'nu_{column}'] = nu
            row[f'expected_{column}'] = expected
            argmax_ok &= bool(table[leading] >= table[1:].max() - atol)
            match &= abs(nu - expected) <= atol
        row['argmax_ok'] = argmax_ok
        row['match'] = bool(match and argmax_ok)
        logger.debug('GHZ n=%d r=%d: %s', n, r, row)
        return row

    @staticmethod
    def count_z_containing(n: int, t: int) -> int:
        return sum('Z' in mu.letters() for mu in SymplecticVector.all_of_weight(n, t))

    @staticmethod
    def count_xy_only(n: int, t: int) -> int:
        return sum('Z' not in mu.letters() for mu in SymplecticVector.all_of_weight(n, t))

    @staticmethod
    def z_containing_formula(n: int, t: int) -> int:
        return comb(n, t) * (3 ** t - 2 ** t)

    @staticmethod
    def even_weight_sum(t: int) -> int:
        """sum over x in Z2^t with even weight >= 2 of 2^(t - |x|), by enumeration."""
        return sum(
            2 ** (t - sum(x)) for x in itertools.product((0, 1), repeat=t)
            if sum(x) >= 2 and sum(x) % 2 == 0
        )

    @staticmethod
    def even_weight_formula(t: int) -> int:
        return (3 ** t + 1) // 2 - 2 ** t

    @staticmethod
    def counting_row(group: StabilizerGroup, t: int) -> dict:
        """
        Enumerated layout counts next to their closed forms, and the check that
        every Z-containing layout keeps gamma = 1 at w = (1, 0, ..., 0).
        """
        n = group.n
        leading = 1 << (n - 1)
        z_leading_ok = all(
            GammaTable.row(group, mu)[leading] == 1
            for mu in SymplecticVector.all_of_weight(n, t) if 'Z' in mu.letters()
        )
        row = {
            'n': n, 't': t,
            'z_containing': GhzAnalysis.count_z_containing(n, t),
            'z_containing_formula': GhzAnalysis.z_containing_formula(n, t),
            'xy_only': GhzAnalysis.count_xy_only(n, t),
            'xy_only_formula': comb(n, t) * 2 ** t,
            'even_weight_sum': GhzAnalysis.even_weight_sum(t),
            'even_weight_formula': GhzAnalysis.even_weight_formula(t),
            'z_leading_ok': z_leading_ok,
        }
        row['match'] = (
            row['z_containing'] == row['z_containing_formula'] and row['xy_only'] == row['xy_only_formula']
            and row['even_weight_sum'] == row['even_weight_formula'] and z_leading_ok
        )
        return row
