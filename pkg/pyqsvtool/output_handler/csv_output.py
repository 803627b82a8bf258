import csv

from pyqsvtool.output_handler.values import plain


class CSVOutput:

    @staticmethod
    def format_rows(rows: list[dict]) -> dict:
        """
        Formats result rows into a dictionary suitable for CSV output.

        Every row is a dictionary with the same keys. The result maps each key,
        a CSV column, to the list of that column's values.
        """
        if not len(rows):
            return dict()

        headers = list(rows[0].keys())

        formatted_dict = dict()
        for header in headers:
            formatted_dict[header] = list()

        for row in rows:
            for header in headers:
                formatted_dict[header].append(plain(row[header]))

        return formatted_dict

    @staticmethod
    def write_results(data: dict, file, metadata: dict | None = None) -> None:
        """
        Writes the column dictionary to an open text file: header row, data
        rows, then one '# key=value' comment line per metadata entry.
        """
        writer = csv.writer(file, lineterminator='\n')

        # Write the header to the CSV
        writer.writerow(data.keys())

        # Write the rows to the CSV (zipping values together)
        writer.writerows(zip(*data.values()))

        for key, value in (metadata or {}).items():
            file.write(f'# {key}={plain(value)}\n')

    @staticmethod
    def save_results(data: dict, path: str, metadata: dict | None = None) -> None:
        with open(path, 'w', newline='', encoding='utf-8') as file:
            CSVOutput.write_results(data, file, metadata)
