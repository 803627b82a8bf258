import pydantic

from pyqsvtool.errors import ValidationError
from pyqsvtool.model.config_model import ExperimentConfig
from pyqsvtool.parser.target_parser import TargetParser, line_of


class ConfigParser:
    '''
    Builds an ExperimentConfig from an optional JSON file and the flags
    given on the command line, which take precedence over the file.
    '''

    @staticmethod
    def _flag(field: str) -> str:
        return '--' + field.replace('_', '-')

    @staticmethod
    def _line(text: str, field: str) -> int:
        if f'"{field}"' in text:
            return line_of(text, field)
        return line_of(text, field.replace('_', '-'))

    @staticmethod
    def build(command: str, flags: dict, config_path: str | None = None) -> ExperimentConfig:
        """
        Validates the merged values. The first problem is reported against the
        flag that set the field, or against its line in the config file.
        """
        file_values, text = {}, ''
        if config_path is not None:
            file_values, text = TargetParser.load_json(config_path)
            file_values = {key.replace('-', '_'): value for key, value in file_values.items()}
            file_command = file_values.pop('command', command)
            if file_command != command:
                raise ValidationError(
                    f'{config_path}:{line_of(text, "command")}: file is for "{file_command}", not "{command}"'
                )

        merged = {**file_values, **flags, 'command': command}
        try:
            return ExperimentConfig(**merged)
        except pydantic.ValidationError as e:
            error = e.errors()[0]
            field = str(error['loc'][0]) if error['loc'] else ''
            message = error['msg']
            if field in flags:
                raise ValidationError(f'{ConfigParser._flag(field)}: {message}') from None
            if config_path is not None:
                line = ConfigParser._line(text, field) if field in file_values else 1
                raise ValidationError(f'{config_path}:{line}: {field or "config"}: {message}') from None
            raise ValidationError(f'{field or "config"}: {message}') from None
