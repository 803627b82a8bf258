import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.model import Model

AXES = ('X', 'Y', 'Z')

_SQRT_HALF = 1 / np.sqrt(2)

# Outcome bit 0 is the +1 eigenvector of each axis; |+i> is bit 0 for Y.
AXIS_EIGENVECTORS = {
    'Z': (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    'X': (np.array([1, 1], dtype=complex) * _SQRT_HALF, np.array([1, -1], dtype=complex) * _SQRT_HALF),
    'Y': (np.array([1, 1j], dtype=complex) * _SQRT_HALF, np.array([1, -1j], dtype=complex) * _SQRT_HALF),
}


def axis_eigenvector(axis: str, bit: int) -> np.ndarray:
    try:
        return AXIS_EIGENVECTORS[axis][bit]
    except (KeyError, IndexError):
        raise ValidationError(f'invalid single-qubit outcome ({axis!r}, {bit!r})') from None


def bit_to_eigenvalue(bit: int) -> int:
    return 1 - 2 * bit


def eigenvalue_to_bit(eigenvalue: int) -> int:
    if eigenvalue not in (1, -1):
        raise ValidationError(f'eigenvalue must be +1 or -1, got {eigenvalue!r}')
    return (1 - eigenvalue) // 2


class PauliLayout(Model):
    '''
    Product Pauli measurement on the qubits J with one axis per qubit; the
    remaining qubits K are left for the shadow.
    '''

    def __init__(self, n: int, measured, axes: str):

        super().__init__(n)
        measured = tuple(int(q) for q in measured)
        axes = str(axes)

        if len(measured) != len(axes):
            raise ValidationError(f'{len(measured)} measured qubits but {len(axes)} axes')
        if list(measured) != sorted(set(measured)):
            raise ValidationError(f'measured qubits {measured} must be strictly increasing')
        if measured and (measured[0] < 0 or measured[-1] >= n):
            raise ValidationError(f'measured qubits {measured} out of range for n={n}')
        if any(axis not in AXES for axis in axes):
            raise ValidationError(f'axes {axes!r} must use only X, Y and Z')
        if len(measured) >= n:
            raise ValidationError('at least one qubit must stay unmeasured')

        self.measured: tuple[int, ...] = measured
        self.axes: str = axes
        self.unmeasured: tuple[int, ...] = tuple(q for q in range(n) if q not in measured)

    @classmethod
    def from_unmeasured(cls, n: int, unmeasured, axes: str) -> 'PauliLayout':
        unmeasured = set(unmeasured)
        return cls(n, [q for q in range(n) if q not in unmeasured], axes)

    @classmethod
    def from_letters(cls, letters: str) -> 'PauliLayout':
        """
        Builds a layout from a per-qubit string such as 'ZXI', where I marks an
        unmeasured qubit.
        """
        measured = [q for q, letter in enumerate(letters) if letter != 'I']
        return cls(len(letters), measured, ''.join(letters[q] for q in measured))

    @property
    def t(self) -> int:
        return len(self.measured)

    @property
    def r(self) -> int:
        return self.n - self.t

    def letters(self) -> str:
        letters = ['I'] * self.n
        for qubit, axis in zip(self.measured, self.axes):
            letters[qubit] = axis
        return ''.join(letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliLayout) and self.n == other.n
            and self.measured == other.measured and self.axes == other.axes
        )

    def __hash__(self) -> int:
        return hash((self.n, self.measured, self.axes))

    def __repr__(self) -> str:
        return f'PauliLayout({self.letters()!r})'


class ClassicalShadow:
    '''One randomized Pauli snapshot of an r-qubit register.'''

    def __init__(self, axes: str, outcomes):

        outcomes = tuple(int(bit) for bit in outcomes)
        if len(axes) != len(outcomes):
            raise ValidationError('shadow needs one outcome per axis')
        if any(axis not in AXES for axis in axes) or any(bit not in (0, 1) for bit in outcomes):
            raise ValidationError(f'invalid shadow ({axes!r}, {outcomes})')

        self.axes: str = axes
        self.outcomes: tuple[int, ...] = outcomes

    @property
    def r(self) -> int:
        return len(self.axes)

    def factor(self, index: int) -> np.ndarray:
        vector = axis_eigenvector(self.axes[index], self.outcomes[index])
        return 3 * np.outer(vector, vector.conj()) - np.eye(2)

    def operator(self) -> np.ndarray:
        result = np.ones((1, 1), dtype=complex)
        for index in range(self.r):
            result = np.kron(result, self.factor(index))
        return result

    def __repr__(self) -> str:
        return f'ClassicalShadow({self.axes!r}, {self.outcomes})'
