import itertools

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import AXES, ClassicalShadow, PauliLayout, axis_eigenvector
from pyqsvtool.model.state_model import DensityOperator, PureState

IMAGINARY_ATOL = 1e-10


class Measurement:
    '''
    Born-rule sampling of product Pauli measurements and classical shadows.

    Multi-qubit product measurements are sampled one qubit at a time from the
    conditional distributions, which never materializes the 2**t projectors.
    '''

    @staticmethod
    def _project(tensor: np.ndarray, m: int, position: int, vector: np.ndarray) -> np.ndarray:
        """
        <s|_p T |s>_p on an m-qubit operator tensor of shape [2] * 2m; the
        result has shape [2] * 2(m - 1).
        """
        reduced = np.tensordot(vector.conj(), tensor, axes=([0], [position]))
        return np.tensordot(reduced, vector, axes=([m - 1 + position], [0]))

    @staticmethod
    def _trace(tensor: np.ndarray, m: int) -> float:
        return float(np.real(np.trace(tensor.reshape(2 ** m, 2 ** m))))

    @staticmethod
    def _sequential_measure(matrix: np.ndarray, positions, axes: str, rng: np.random.Generator):
        """
        Samples product outcomes on the given qubit positions and returns the
        bits together with the unnormalized remainder on the other qubits.
        """
        m = int(np.log2(matrix.shape[0]))
        tensor = matrix.reshape([2] * (2 * m))
        bits = {}
        # Highest position first so the positions still to visit keep their axes
        for position, axis in sorted(zip(positions, axes), reverse=True):
            branches = [
                Measurement._project(tensor, m, position, axis_eigenvector(axis, bit)) for bit in (0, 1)
            ]
            weights = [max(Measurement._trace(branch, m - 1), 0.0) for branch in branches]
            total = weights[0] + weights[1]
            if total <= 0:
                raise ValidationError('measured operator has no probability mass')
            bit = int(rng.random() >= weights[0] / total)
            bits[position] = bit
            tensor = branches[bit]
            m -= 1
        remainder = tensor.reshape(2 ** m, 2 ** m)
        return tuple(bits[position] for position in positions), remainder

    @staticmethod
    def born_sample(rho: DensityOperator, layout: PauliLayout, rng: np.random.Generator):
        """
        Measures the layout on rho.

        Returns the outcome bits, in the order of layout.measured, and the
        normalized reduced state on the unmeasured qubits.
        """
        if rho.n != layout.n:
            raise ValidationError(f'{layout.n}-qubit layout applied to a {rho.n}-qubit state')
        outcomes, remainder = Measurement._sequential_measure(rho.matrix, layout.measured, layout.axes, rng)
        remainder = remainder / np.trace(remainder).real
        return outcomes, DensityOperator(remainder, check=False)

    @staticmethod
    def outcome_probabilities(rho: DensityOperator, layout: PauliLayout) -> dict[tuple[int, ...], float]:
        """Exact Born probabilities of every outcome string of the layout."""
        probabilities = {}
        tensor = rho.matrix.reshape([2] * (2 * rho.n))
        for outcomes in itertools.product((0, 1), repeat=layout.t):
            branch, m = tensor, rho.n
            for qubit, axis, bit in sorted(zip(layout.measured, layout.axes, outcomes), reverse=True):
                branch = Measurement._project(branch, m, qubit, axis_eigenvector(axis, bit))
                m -= 1
            probabilities[outcomes] = Measurement._trace(branch, m)
        return probabilities

    @staticmethod
    def random_axes(r: int, rng: np.random.Generator) -> str:
        return ''.join(AXES[index] for index in rng.integers(0, 3, size=r))

    @staticmethod
    def shadow_snapshot(zeta: DensityOperator, rng: np.random.Generator) -> ClassicalShadow:
        axes = Measurement.random_axes(zeta.n, rng)
        outcomes, _ = Measurement._sequential_measure(zeta.matrix, range(zeta.n), axes, rng)
        return ClassicalShadow(axes, outcomes)

    @staticmethod
    def shadow_overlap(shadow: ClassicalShadow, phi: PureState) -> float:
        """
        <phi| (x)_i (3|s_i><s_i| - I) |phi>, applied factor by factor to phi.

        The raw value is returned; single snapshots can be negative.
        """
        if shadow.r != phi.n:
            raise ValidationError(f'{shadow.r}-qubit shadow against a {phi.n}-qubit state')
        vector = phi.amplitudes.reshape([2] * phi.n)
        image = vector
        for index in range(shadow.r):
            image = np.moveaxis(np.tensordot(shadow.factor(index), image, axes=([1], [index])), 0, index)
        value = np.vdot(vector, image)
        if abs(value.imag) > IMAGINARY_ATOL:
            raise ValidationError(f'shadow overlap has imaginary part {value.imag:.3e}')
        return float(value.real)
