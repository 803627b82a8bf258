from functools import lru_cache

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.stabilizer.group import StabilizerGroup, gf2_canonical_basis, parity
from pyqsvtool.stabilizer.pauli import SymplecticVector


@lru_cache(maxsize=8192)
def _row_from_basis(n: int, basis: tuple[int, ...]) -> np.ndarray:
    w = np.arange(2 ** n, dtype=np.int64)
    row = np.ones(2 ** n, dtype=np.uint8)
    for vector in basis:
        row &= (1 - parity(w & vector)).astype(np.uint8)
    row.setflags(write=False)
    return row


class GammaTable:
    '''
    Stabilizer-basis eigenvalues of the Pauli test operators, computed with
    sign arithmetic over Z2 and no dense matrices.

    w is an integer whose most significant of n bits flips the first
    generator.
    '''

    @staticmethod
    def member_mask(group: StabilizerGroup, mu: SymplecticVector) -> np.ndarray:
        """
        Boolean mask over group elements: on every measured qubit the element
        acts as identity or as the measured Pauli.
        """
        if mu.n != group.n:
            raise ValidationError(f'{mu.n}-qubit setting against a {group.n}-qubit group')
        xs, zs, _ = group.element_table()
        mx, mz, support = mu.masks()
        mismatch = ((xs ^ mx) | (zs ^ mz)) & (xs | zs) & support
        return mismatch == 0

    @staticmethod
    def intersection_mask(group: StabilizerGroup, mu: SymplecticVector, sign: int = 1) -> np.ndarray:
        """Elements equal to sign * W_mu(u) for some u, i.e. in T_mu (or -T_mu)."""
        xs, zs, phases = group.element_table()
        _, _, support = mu.masks()
        inside = ((xs | zs) & ~support) == 0
        return GammaTable.member_mask(group, mu) & inside & (phases == (0 if sign == 1 else 2))

    @staticmethod
    def row(group: StabilizerGroup, mu: SymplecticVector) -> np.ndarray:
        """
        gamma_{mu, w} for every w: 1 iff every R in R_mu keeps sign +1 in the
        flipped basis, that is parity(v_R . w) = 0.
        """
        members = np.flatnonzero(GammaTable.member_mask(group, mu))
        return _row_from_basis(group.n, gf2_canonical_basis(int(v) for v in members))

    @staticmethod
    def weighted(group: StabilizerGroup, weights: dict[SymplecticVector, float]) -> np.ndarray:
        """sum_mu p_mu gamma_{mu, .}, the diagonal of a Pauli strategy operator."""
        table = np.zeros(2 ** group.n, dtype=float)
        for mu, weight in weights.items():
            if weight:
                table += weight * GammaTable.row(group, mu)
        return table

    @staticmethod
    def gap(table: np.ndarray) -> float:
        if len(table) == 1:
            return 1.0
        return float(np.clip(1.0 - table[1:].max(), 0.0, 1.0))
