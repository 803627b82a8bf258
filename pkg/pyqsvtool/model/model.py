from pyqsvtool.errors import ValidationError


class Model():

    def __init__(self, n: int):

        self.n: int = n

    @property
    def dim(self) -> int:
        return 2 ** self.n

    @staticmethod
    def qubits_of_dimension(dim: int) -> int:
        """
        Returns the number of qubits of a Hilbert space with the given dimension.

        Raises ValidationError unless dim is a positive power of two.
        """
        if dim < 1 or dim & (dim - 1):
            raise ValidationError(f'dimension {dim} is not a power of two')
        return dim.bit_length() - 1
