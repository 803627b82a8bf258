import sys

from pyqsvtool.errors import ValidationError
from pyqsvtool.output_handler.csv_output import CSVOutput
from pyqsvtool.output_handler.json_output import JSONOutput


class OutputHandler:

    @staticmethod
    def save_rows(rows: list[dict], output_format: str = 'csv', path: str | None = None, metadata: dict | None = None) -> None:
        """
        Saves result rows as CSV or JSON to the given path, or to stdout.
        """
        if output_format == 'csv':
            formatted = CSVOutput.format_rows(rows)
            if path is None:
                CSVOutput.write_results(formatted, sys.stdout, metadata)
            else:
                CSVOutput.save_results(formatted, path, metadata)
        elif output_format == 'json':
            OutputHandler.save_document(JSONOutput.document('rows', rows, metadata), path)
        else:
            raise ValidationError(f'unknown output format {output_format!r}')

    @staticmethod
    def save_report(report: dict, path: str | None = None, metadata: dict | None = None) -> None:
        """A verdict is always written as JSON."""
        OutputHandler.save_document(JSONOutput.document('report', report, metadata), path)

    @staticmethod
    def save_document(document: dict, path: str | None) -> None:
        if path is None:
            JSONOutput.write_results(document, sys.stdout)
        else:
            JSONOutput.save_results(document, path)
