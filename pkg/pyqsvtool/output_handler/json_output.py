import json

from pyqsvtool.output_handler.values import plain

SCHEMA_VERSION = 1


class JSONOutput:

    @staticmethod
    def document(key: str, results, metadata: dict | None = None) -> dict:
        return {'schema_version': SCHEMA_VERSION, 'metadata': plain(metadata or {}), key: plain(results)}

    @staticmethod
    def write_results(document: dict, file) -> None:
        json.dump(document, file, indent=4)
        file.write('\n')

    @staticmethod
    def save_results(document: dict, path: str) -> None:
        with open(path, 'w', encoding='utf-8') as file:
            JSONOutput.write_results(document, file)
