import numpy as np

from pyqsvtool.errors import ValidationError
from pyqsvtool.stabilizer.pauli import PauliString

STATE_OVERLAP_FLOOR = 1e-6


def gf2_insert(basis: dict[int, int], value: int) -> bool:
    """
    Adds value to a GF(2) basis keyed by leading bit. Returns False when the
    value is already in the span.
    """
    while value:
        top = value.bit_length() - 1
        if top not in basis:
            basis[top] = value
            return True
        value ^= basis[top]
    return False


def gf2_rank(values) -> int:
    basis: dict[int, int] = {}
    return sum(gf2_insert(basis, int(value)) for value in values)


def gf2_canonical_basis(values) -> tuple[int, ...]:
    """Reduced row echelon basis of the span, a canonical key for subspaces."""
    basis: dict[int, int] = {}
    for value in values:
        gf2_insert(basis, int(value))
    pivots = sorted(basis, reverse=True)
    for pivot in pivots:
        for other in pivots:
            if other != pivot and (basis[other] >> pivot) & 1:
                basis[other] ^= basis[pivot]
    return tuple(basis[pivot] for pivot in pivots)


def parity(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        values ^= values >> shift
    return values & 1


class StabilizerGroup:
    '''
    Abelian group of Hermitian Pauli strings generated by independent
    commuting generators; -I is never an element.

    Element v is the product of the generators whose bits are set in v, with
    the first generator on the most significant of k bits.
    '''

    def __init__(self, generators: list[PauliString], n: int | None = None):

        generators = list(generators)
        if n is None:
            if not generators:
                raise ValidationError('an empty generator list needs an explicit qubit count')
            n = generators[0].n
        for generator in generators:
            if generator.n != n:
                raise ValidationError(f'generator {generator} does not act on {n} qubits')
            if not generator.is_hermitian:
                raise ValidationError(f'generator {generator} is not Hermitian')
        for i, first in enumerate(generators):
            for second in generators[i + 1:]:
                if not first.commutes_with(second):
                    raise ValidationError(f'generators {first} and {second} anticommute')
        if gf2_rank(self._symplectic(g, n) for g in generators) != len(generators):
            raise ValidationError('generators are not independent')

        self.n: int = n
        self.generators: list[PauliString] = generators
        self._elements: list[PauliString] | None = None
        self._table: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    @staticmethod
    def _symplectic(pauli: PauliString, n: int) -> int:
        x_mask, z_mask = pauli.masks()
        return (x_mask << n) | z_mask

    @classmethod
    def from_strings(cls, strings) -> 'StabilizerGroup':
        return cls([PauliString.from_string(text) for text in strings])

    @classmethod
    def from_elements(cls, elements, n: int) -> 'StabilizerGroup':
        """
        Picks an independent generating set, in order, from a list of elements
        of a common stabilizer group.
        """
        basis: dict[int, int] = {}
        generators = [e for e in elements if gf2_insert(basis, cls._symplectic(e, n))]
        return cls(generators, n)

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return 2 ** self.rank

    def elements(self) -> list[PauliString]:
        if self._elements is None:
            k = self.rank
            elements = [PauliString.identity(self.n)]
            for v in range(1, 2 ** k):
                low = v & -v
                generator = self.generators[k - low.bit_length()]
                elements.append(elements[v ^ low] * generator)
            self._elements = elements
        return self._elements

    def element_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Returns x masks, z masks and phases of every element, indexed by v."""
        if self._table is None:
            masks = [element.masks() for element in self.elements()]
            self._table = (
                np.array([m[0] for m in masks], dtype=np.int64),
                np.array([m[1] for m in masks], dtype=np.int64),
                np.array([element.phase for element in self.elements()], dtype=np.int64),
            )
        return self._table

    def contains(self, pauli: PauliString) -> bool:
        return any(element == pauli for element in self.elements())

    def signed(self, w) -> 'StabilizerGroup':
        """Group with generator i negated when bit i of w (first generator first) is 1."""
        w = [int(bit) for bit in w]
        if len(w) != self.rank:
            raise ValidationError(f'sign vector of length {len(w)} for {self.rank} generators')
        return StabilizerGroup(
            [g.negate() if bit else g for g, bit in zip(self.generators, w)], self.n
        )

    def projector(self) -> np.ndarray:
        total = np.zeros((2 ** self.n, 2 ** self.n), dtype=complex)
        for element in self.elements():
            total += element.to_matrix()
        return total / self.size

    def state_vector(self) -> np.ndarray:
        """
        The stabilized state of a full-rank group, with the first nonzero
        amplitude made real and positive.
        """
        if self.rank != self.n:
            raise ValidationError(f'a rank-{self.rank} group does not fix a single {self.n}-qubit state')
        for index in range(2 ** self.n):
            vector = np.zeros(2 ** self.n, dtype=complex)
            vector[index] = 1.0
            for generator in self.generators:
                vector = (vector + generator.apply(vector)) / 2
            norm = np.linalg.norm(vector)
            if norm > STATE_OVERLAP_FLOOR:
                vector = vector / norm
                lead = vector[np.flatnonzero(np.abs(vector) > STATE_OVERLAP_FLOOR)[0]]
                return vector * (abs(lead) / lead)
        raise ValidationError('stabilizer group fixes no state')

    def __repr__(self) -> str:
        return f'StabilizerGroup({[str(g) for g in self.generators]})'
