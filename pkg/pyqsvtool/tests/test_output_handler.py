import io
import json

import numpy as np
import pytest

from pyqsvtool.errors import ValidationError
from pyqsvtool.output_handler.csv_output import CSVOutput
from pyqsvtool.output_handler.json_output import JSONOutput
from pyqsvtool.output_handler.output_handler import OutputHandler
from pyqsvtool.output_handler.values import plain


class TestCSVOutput:

    @pytest.fixture
    def rows(self):
        return [
            {'n': 3, 'level': 1, 'mean_nu': np.float64(0.5)},
            {'n': 3, 'level': 2, 'mean_nu': np.float64(2 / 3)},
        ]

    def test_format_rows(self, rows):
        # Act
        formatted = CSVOutput.format_rows(rows)

        # Assert
        assert list(formatted) == ['n', 'level', 'mean_nu']
        assert formatted['level'] == [1, 2]
        assert type(formatted['mean_nu'][0]) is float

    def test_format_empty_rows(self):
        # Act / Assert
        assert CSVOutput.format_rows([]) == {}

    # Metadata follows the data as '# key=value' lines
    def test_write_results_with_metadata(self, rows):
        # Arrange
        file = io.StringIO()

        # Act
        CSVOutput.write_results(CSVOutput.format_rows(rows), file, {'seed': 0, 'command': 'sweep'})

        # Assert
        lines = file.getvalue().splitlines()
        assert lines[0] == 'n,level,mean_nu'
        assert lines[1] == '3,1,0.5'
        assert lines[3:] == ['# seed=0', '# command=sweep']


class TestJSONOutput:

    def test_document_layout(self):
        # Act
        document = JSONOutput.document('report', {'mean': np.float64(0.9)}, {'seed': np.int64(4)})

        # Assert
        assert document == {'schema_version': 1, 'metadata': {'seed': 4}, 'report': {'mean': 0.9}}
        assert json.dumps(document)


class TestOutputHandler:

    def test_save_rows_as_json(self, tmp_path):
        # Arrange
        path = tmp_path / 'rows.json'

        # Act
        OutputHandler.save_rows([{'level': 1, 'nu': 0.5}], 'json', str(path), {'command': 'gap'})

        # Assert
        document = json.loads(path.read_text(encoding='utf-8'))
        assert document['rows'] == [{'level': 1, 'nu': 0.5}]
        assert document['metadata'] == {'command': 'gap'}

    def test_save_rows_as_csv_to_stdout(self, capsys):
        # Act
        OutputHandler.save_rows([{'level': 1, 'nu': 0.5}])

        # Assert
        assert capsys.readouterr().out == 'level,nu\n1,0.5\n'

    def test_save_report(self, tmp_path):
        # Arrange
        path = tmp_path / 'report.json'

        # Act
        OutputHandler.save_report({'decision': 'accept'}, str(path))

        # Assert
        assert json.loads(path.read_text(encoding='utf-8'))['report'] == {'decision': 'accept'}

    def test_unknown_format(self):
        # Act / Assert
        with pytest.raises(ValidationError):
            OutputHandler.save_rows([{'a': 1}], 'xml')


class TestPlain:

    def test_converts_nested_numpy_values(self):
        # Act
        value = plain({'a': np.array([1, 2]), 'b': (np.bool_(True), np.float32(0.5)), 3: None})

        # Assert
        assert value == {'a': [1, 2], 'b': [True, 0.5], '3': None}
