import logging

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.state_model import DensityOperator, PureState
from pyqsvtool.stabilizer.group import StabilizerGroup
from pyqsvtool.stabilizer.pauli import PauliString
from pyqsvtool.targets.mps_target import MpsTarget
from pyqsvtool.targets.stabilizer_target import StabilizerTarget
from pyqsvtool.targets.target import DenseTarget

logger = logging.getLogger(__name__)


class Families:

    @staticmethod
    def ghz(n: int) -> StabilizerTarget:
        """
        (|0...0> + |1...1>)/sqrt(2) with generators X...X and Z_0 Z_a for
        a = 1..n-1, tagged family 'ghz'.
        """
        if n < 2:
            raise ValidationError(f'GHZ needs at least 2 qubits, got {n}')
        generators = ['+' + 'X' * n]
        for a in range(1, n):
            letters = ['I'] * n
            letters[0] = letters[a] = 'Z'
            generators.append('+' + ''.join(letters))
        amplitudes = np.zeros(2 ** n, dtype=complex)
        amplitudes[0] = amplitudes[-1] = 1 / np.sqrt(2)
        return StabilizerTarget(
            StabilizerGroup.from_strings(generators), state=PureState(amplitudes), family='ghz'
        )

    @staticmethod
    def haar_random(n: int, seed: int) -> DenseTarget:
        rng = np.random.default_rng(seed)
        vector = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        return DenseTarget(PureState.normalized(vector), family='haar')

    @staticmethod
    def product(bits) -> MpsTarget:
        return MpsTarget.product(bits)

    @staticmethod
    def zero(n: int) -> DenseTarget:
        return DenseTarget(PureState.basis(n, 0), family='product')

    @staticmethod
    def random_stabilizer(n: int, seed: int, depth: int | None = None) -> StabilizerTarget:
        """
        Conjugates the generators Z_0 ... Z_{n-1} of |0...0> through a random
        circuit of H, S, X, Z and CNOT gates.
        """
        rng = np.random.default_rng(seed)
        generators = [PauliString.single(n, qubit, 'Z') for qubit in range(n)]
        depth = 5 * n * n if depth is None else depth
        for _ in range(depth):
            gate = rng.integers(0, 5 if n > 1 else 4)
            qubit = int(rng.integers(0, n))
            if gate == 0:
                generators = [g.conjugate_h(qubit) for g in generators]
            elif gate == 1:
                generators = [g.conjugate_s(qubit) for g in generators]
            elif gate == 2:
                generators = [g.conjugate_x(qubit) for g in generators]
            elif gate == 3:
                generators = [g.conjugate_z(qubit) for g in generators]
            else:
                target = int((qubit + rng.integers(1, n)) % n)
                generators = [g.conjugate_cnot(qubit, target) for g in generators]
        logger.debug('random stabilizer target %s', [str(g) for g in generators])
        return StabilizerTarget(StabilizerGroup(generators, n))

    @staticmethod
    def random_density(n: int, seed: int, rank: int | None = None) -> DensityOperator:
        """Random mixed state G G^dagger / Tr(G G^dagger) from a complex Ginibre matrix."""
        rng = np.random.default_rng(seed)
        rank = 2 ** n if rank is None else rank
        ginibre = rng.normal(size=(2 ** n, rank)) + 1j * rng.normal(size=(2 ** n, rank))
        matrix = ginibre @ ginibre.conj().T
        return DensityOperator(matrix / np.trace(matrix).real)
