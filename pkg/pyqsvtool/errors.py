'''
Exception hierarchy shared by every pyqsvtool module.

The command line entry point catches QSVError and turns it into exit code 2.
'''


class QSVError(Exception):
    '''Base class of every error raised on purpose by pyqsvtool.'''


class ValidationError(QSVError, ValueError):
    '''Malformed input: bad shapes, norms, probability vectors or parameters.'''


class CapacityError(QSVError):
    '''The requested operator exceeds the configured dense dimension cap.'''


class ProtocolConstructionError(QSVError):
    '''A strategy or test operator does not fix the target state.'''


class ZeroGapError(QSVError):
    '''A spectral gap of zero reached an operation that needs a positive gap.'''


class ZeroBranchError(QSVError):
    '''A post-measurement state was requested for a zero-probability outcome.'''


class IncompatibleMeasurementError(QSVError):
    '''The all-zero outcome of a Pauli measurement has zero probability.'''


class SolverError(QSVError):

    def __init__(self, message: str, status: int = -1, iterations: int = 0):
        super().__init__(
            f'{message} (status={status}, iterations={iterations})'
        )
        self.status: int = status
        self.iterations: int = iterations
