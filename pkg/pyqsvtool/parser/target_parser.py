import json
import logging

import numpy as np

from pyqsvtool.errors import QSVError, ValidationError
from pyqsvtool.model.state_model import DensityOperator, PureState
from pyqsvtool.parser.file_reader import FileReader
from pyqsvtool.targets.mps_target import MpsTarget
from pyqsvtool.targets.stabilizer_target import StabilizerTarget
from pyqsvtool.targets.target import DenseTarget, Target

logger = logging.getLogger(__name__)

TARGET_KINDS = ('dense', 'mps', 'stabilizer')


def line_of(text: str, key: str) -> int:
    """1-based line of the first occurrence of "key" in a JSON text, or 1."""
    position = text.find(f'"{key}"')
    return text.count('\n', 0, position) + 1 if position >= 0 else 1


class TargetParser:
    '''
    Reads target and density matrix JSON files. Every error names the file
    and the line of the offending key.
    '''

    @staticmethod
    def load_json(path: str) -> tuple[dict, str]:
        text = FileReader.read_text(path)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f'{path}:{e.lineno}: {e.msg}') from None
        if not isinstance(data, dict):
            raise ValidationError(f'{path}:1: expected a JSON object')
        return data, text

    @staticmethod
    def to_complex(value) -> complex:
        """A complex number from a [re, im] pair or a plain real number."""
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return complex(value)
        if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
            return complex(value[0], value[1])
        raise ValidationError(f'{value!r} is not a number or a [re, im] pair')

    @staticmethod
    def to_complex_array(values) -> np.ndarray:
        if isinstance(values, list) and values and not (
            len(values) == 2 and all(isinstance(v, (int, float)) for v in values)
        ):
            return np.array([TargetParser.to_complex_array(v) for v in values])
        return np.array(TargetParser.to_complex(values))

    @staticmethod
    def parse_target(data: dict) -> Target:
        kind = data.get('kind')
        if kind == 'dense':
            amplitudes = [TargetParser.to_complex(v) for v in data.get('amplitudes', [])]
            return DenseTarget(PureState(amplitudes))
        if kind == 'mps':
            tensors = data.get('tensors')
            if not isinstance(tensors, list):
                raise ValidationError('"tensors" must be a list of site tensors')
            return MpsTarget([TargetParser.to_complex_array(tensor) for tensor in tensors])
        if kind == 'stabilizer':
            generators = data.get('generators')
            if not isinstance(generators, list) or not all(isinstance(g, str) for g in generators):
                raise ValidationError('"generators" must be a list of Pauli strings such as "+XXX"')
            return StabilizerTarget.from_strings(generators)
        raise ValidationError(f'unknown target kind {kind!r}, expected one of {", ".join(TARGET_KINDS)}')

    @staticmethod
    def parse_density(data: dict) -> DensityOperator:
        if data.get('kind') != 'density':
            raise ValidationError(f'unknown device file kind {data.get("kind")!r}, expected "density"')
        matrix = data.get('matrix')
        if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
            raise ValidationError('"matrix" must be a list of rows')
        return DensityOperator([[TargetParser.to_complex(v) for v in row] for row in matrix])

    @staticmethod
    def _parse_file(path: str, parse, anchor_keys):
        data, text = TargetParser.load_json(path)
        try:
            return parse(data)
        except QSVError as e:
            key = next((k for k in anchor_keys if k in data), 'kind')
            raise ValidationError(f'{path}:{line_of(text, key)}: {e}') from None

    @staticmethod
    def parse_target_file(path: str) -> Target:
        target = TargetParser._parse_file(path, TargetParser.parse_target, ('amplitudes', 'tensors', 'generators'))
        logger.info('loaded %r from %s', target, path)
        return target

    @staticmethod
    def parse_density_file(path: str) -> DensityOperator:
        return TargetParser._parse_file(path, TargetParser.parse_density, ('matrix',))
