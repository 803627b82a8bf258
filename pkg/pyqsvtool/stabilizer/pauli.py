import itertools

import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.layout_model import PauliLayout

LETTERS = ('I', 'X', 'Z', 'Y')
_BITS_OF_LETTER = {'I': (0, 0), 'X': (1, 0), 'Z': (0, 1), 'Y': (1, 1)}
_LETTER_OF_BITS = {bits: letter for letter, bits in _BITS_OF_LETTER.items()}
_PHASE_PREFIX = {0: '+', 1: '+i', 2: '-', 3: '-i'}

PAULI_MATRICES = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def qubit_mask(qubit: int, n: int) -> int:
    return 1 << (n - 1 - qubit)


def bits_to_mask(bits) -> int:
    mask = 0
    for bit in bits:
        mask = (mask << 1) | int(bit)
    return mask


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    """
    Power of i picked up by the single-qubit product P1 P2 of Hermitian
    letters.
    """
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


class PauliString:
    '''
    i**phase times a tensor product of Hermitian letters I, X, Y, Z.

    Hermitian strings have an even phase, that is a sign of +1 or -1.
    '''

    def __init__(self, x, z, phase: int = 0):

        x = np.array(x, dtype=np.uint8).reshape(-1)
        z = np.array(z, dtype=np.uint8).reshape(-1)
        if x.shape != z.shape:
            raise ValidationError('x and z parts must have equal length')
        if np.any(x > 1) or np.any(z > 1):
            raise ValidationError('x and z parts must be binary')

        self.x: np.ndarray = x
        self.z: np.ndarray = z
        self.phase: int = int(phase) % 4

    @classmethod
    def from_string(cls, text: str) -> 'PauliString':
        """
        Parses strings such as '+XXX', '-ZZI', '+iXY' or a bare 'XZ'.
        """
        text = text.strip()
        phase = 0
        for prefix, value in (('+i', 1), ('-i', 3), ('+', 0), ('-', 2)):
            if text.startswith(prefix):
                phase = value
                text = text[len(prefix):]
                break
        if not text or any(letter not in _BITS_OF_LETTER for letter in text):
            raise ValidationError(f'invalid Pauli string {text!r}')
        x = [_BITS_OF_LETTER[letter][0] for letter in text]
        z = [_BITS_OF_LETTER[letter][1] for letter in text]
        return cls(x, z, phase)

    @classmethod
    def identity(cls, n: int) -> 'PauliString':
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> 'PauliString':
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[qubit], z[qubit] = _BITS_OF_LETTER[letter]
        return cls(x, z)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def sign(self) -> int:
        if self.phase % 2:
            raise ValidationError(f'{self} is not Hermitian')
        return 1 - self.phase

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def letters(self) -> str:
        return ''.join(_LETTER_OF_BITS[(int(a), int(b))] for a, b in zip(self.x, self.z))

    def masks(self) -> tuple[int, int]:
        return bits_to_mask(self.x), bits_to_mask(self.z)

    def negate(self) -> 'PauliString':
        return PauliString(self.x, self.z, self.phase + 2)

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def commutes_with(self, other: 'PauliString') -> bool:
        symplectic = int(np.sum(self.x & other.z) + np.sum(self.z & other.x))
        return symplectic % 2 == 0

    def __mul__(self, other: 'PauliString') -> 'PauliString':
        if self.n != other.n:
            raise ValidationError('cannot multiply Pauli strings of different lengths')
        phase = self.phase + other.phase
        for x1, z1, x2, z2 in zip(self.x, self.z, other.x, other.z):
            phase += _g(int(x1), int(z1), int(x2), int(z2))
        return PauliString(self.x ^ other.x, self.z ^ other.z, phase)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString) and self.phase == other.phase
            and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f'PauliString({str(self)!r})'

    def to_matrix(self) -> np.ndarray:
        result = np.ones((1, 1), dtype=complex)
        for letter in self.letters():
            result = np.kron(result, PAULI_MATRICES[letter])
        return (1j ** self.phase) * result

    def apply(self, vector) -> np.ndarray:
        """
        Applies the string to a state vector without building its matrix.

        Uses i**phase * tensor(P) = i**(phase + #Y) X**x Z**z.
        """
        vector = np.asarray(vector, dtype=complex)
        n = self.n
        x_mask, z_mask = self.masks()
        index = np.arange(2 ** n)
        parity = np.zeros(2 ** n, dtype=np.int64)
        for qubit in range(n):
            if self.z[qubit]:
                parity ^= (index >> (n - 1 - qubit)) & 1
        y_count = int(np.count_nonzero(self.x & self.z))
        coefficient = 1j ** ((self.phase + y_count) % 4)
        result = np.empty_like(vector)
        result[index ^ x_mask] = coefficient * (1 - 2 * parity) * vector
        return result

    # Clifford conjugation C P C^dagger, as products of images of single letters

    def _conjugate(self, images: dict) -> 'PauliString':
        result = PauliString(np.zeros(self.n, dtype=np.uint8), np.zeros(self.n, dtype=np.uint8), self.phase)
        for qubit, letter in enumerate(self.letters()):
            if letter != 'I':
                result = result * images[(qubit, letter)]
        return result

    def conjugate_h(self, qubit: int) -> 'PauliString':
        n = self.n
        images = {
            (qubit, 'X'): PauliString.single(n, qubit, 'Z'),
            (qubit, 'Y'): PauliString.single(n, qubit, 'Y').negate(),
            (qubit, 'Z'): PauliString.single(n, qubit, 'X'),
        }
        return self._conjugate(_with_identity_images(images, self, qubit))

    def conjugate_s(self, qubit: int) -> 'PauliString':
        n = self.n
        images = {
            (qubit, 'X'): PauliString.single(n, qubit, 'Y'),
            (qubit, 'Y'): PauliString.single(n, qubit, 'X').negate(),
            (qubit, 'Z'): PauliString.single(n, qubit, 'Z'),
        }
        return self._conjugate(_with_identity_images(images, self, qubit))

    def conjugate_x(self, qubit: int) -> 'PauliString':
        n = self.n
        images = {
            (qubit, 'X'): PauliString.single(n, qubit, 'X'),
            (qubit, 'Y'): PauliString.single(n, qubit, 'Y').negate(),
            (qubit, 'Z'): PauliString.single(n, qubit, 'Z').negate(),
        }
        return self._conjugate(_with_identity_images(images, self, qubit))

    def conjugate_z(self, qubit: int) -> 'PauliString':
        n = self.n
        images = {
            (qubit, 'X'): PauliString.single(n, qubit, 'X').negate(),
            (qubit, 'Y'): PauliString.single(n, qubit, 'Y').negate(),
            (qubit, 'Z'): PauliString.single(n, qubit, 'Z'),
        }
        return self._conjugate(_with_identity_images(images, self, qubit))

    def conjugate_cnot(self, control: int, target: int) -> 'PauliString':
        n = self.n
        x_c, y_c, z_c = (PauliString.single(n, control, letter) for letter in 'XYZ')
        x_t, y_t, z_t = (PauliString.single(n, target, letter) for letter in 'XYZ')
        images = {
            (control, 'X'): x_c * x_t,
            (control, 'Y'): y_c * x_t,
            (control, 'Z'): z_c,
            (target, 'X'): x_t,
            (target, 'Y'): z_c * y_t,
            (target, 'Z'): z_c * z_t,
        }
        return self._conjugate(_with_identity_images(images, self, control, target))


def _with_identity_images(images: dict, pauli: PauliString, *touched: int) -> dict:
    for qubit, letter in enumerate(pauli.letters()):
        if letter != 'I' and qubit not in touched:
            images[(qubit, letter)] = PauliString.single(pauli.n, qubit, letter)
    return images


class SymplecticVector:
    '''
    Pauli measurement setting mu = (mu_x; mu_z): X, Y or Z on the measured
    qubits and identity elsewhere.
    '''

    def __init__(self, mx, mz):

        mx = np.array(mx, dtype=np.uint8).reshape(-1)
        mz = np.array(mz, dtype=np.uint8).reshape(-1)
        if mx.shape != mz.shape or np.any(mx > 1) or np.any(mz > 1):
            raise ValidationError('symplectic vector needs two binary parts of equal length')
        self.mx: np.ndarray = mx
        self.mz: np.ndarray = mz

    @classmethod
    def from_letters(cls, letters: str) -> 'SymplecticVector':
        if any(letter not in _BITS_OF_LETTER for letter in letters):
            raise ValidationError(f'invalid measurement letters {letters!r}')
        return cls([_BITS_OF_LETTER[c][0] for c in letters], [_BITS_OF_LETTER[c][1] for c in letters])

    @classmethod
    def from_layout(cls, layout: PauliLayout) -> 'SymplecticVector':
        return cls.from_letters(layout.letters())

    @classmethod
    def all_of_weight(cls, n: int, t: int):
        """
        Yields every weight-t setting, subsets in lexicographic order and axes
        in X, Y, Z order within each subset.
        """
        for support in itertools.combinations(range(n), t):
            for axes in itertools.product('XYZ', repeat=t):
                letters = ['I'] * n
                for qubit, axis in zip(support, axes):
                    letters[qubit] = axis
                yield cls.from_letters(''.join(letters))

    @property
    def n(self) -> int:
        return len(self.mx)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.mx | self.mz))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(q) for q in np.flatnonzero(self.mx | self.mz))

    @property
    def axes(self) -> str:
        letters = self.letters()
        return ''.join(letters[q] for q in self.support)

    def letters(self) -> str:
        return ''.join(_LETTER_OF_BITS[(int(a), int(b))] for a, b in zip(self.mx, self.mz))

    def counts(self) -> tuple[int, int, int]:
        letters = self.letters()
        return letters.count('X'), letters.count('Y'), letters.count('Z')

    def masks(self) -> tuple[int, int, int]:
        """Returns the x, z and support bit masks, qubit 0 most significant."""
        x_mask, z_mask = bits_to_mask(self.mx), bits_to_mask(self.mz)
        return x_mask, z_mask, x_mask | z_mask

    def to_layout(self) -> PauliLayout:
        return PauliLayout(self.n, self.support, self.axes)

    def measurement_element(self, u) -> PauliString:
        """
        W_mu(u): the product of the measured single-qubit Paulis selected by
        the bits u, one bit per measured qubit in ascending order.
        """
        u = [int(bit) for bit in u]
        if len(u) != self.weight:
            raise ValidationError(f'u has {len(u)} bits for a weight-{self.weight} setting')
        x = np.zeros(self.n, dtype=np.uint8)
        z = np.zeros(self.n, dtype=np.uint8)
        for bit, qubit in zip(u, self.support):
            if bit:
                x[qubit], z[qubit] = self.mx[qubit], self.mz[qubit]
        return PauliString(x, z)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymplecticVector) and self.letters() == other.letters()

    def __hash__(self) -> int:
        return hash(self.letters())

    def __repr__(self) -> str:
        return f'SymplecticVector({self.letters()!r})'
