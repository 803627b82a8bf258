import logging

import chardet

logger = logging.getLogger(__name__)


class FileReader:

    @staticmethod
    def _guess_file_encode(file_path: str) -> str:
        """
        Guess the encoding of a file using chardet library.
        If undefined, utf-8 is default
        """
        with open(file_path, 'rb') as file:
            file_encoding = chardet.detect(file.read())['encoding']
        if file_encoding is None:
            return 'utf-8'
        return file_encoding

    @staticmethod
    def read_text(file_path: str) -> str:
        """
        Reads a text file as UTF-8 (with or without BOM), falling back to the
        encoding chardet detects.
        """
        try:
            with open(file_path, 'r', encoding='utf_8_sig') as file:
                return file.read()
        except UnicodeDecodeError:
            encoding = FileReader._guess_file_encode(file_path)
            logger.info('%s is not UTF-8; reading it as %s', file_path, encoding)
            with open(file_path, 'r', encoding=encoding) as file:
                return file.read()
