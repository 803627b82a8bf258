import argparse
import json
import logging
import sys

import pydantic

from pyqsvtool.errors import QSVError
from pyqsvtool.model.config_model import COMMANDS
from pyqsvtool.parser.config_parser import ConfigParser
from pyqsvtool.pyqsvtool_run import PyQSVTool

'''
This module contains the main() function, which is the entry point for the
command line interface.
'''

__version__ = '1.0.0'


def trials_type(value: str):
    '''A positive trial count or "auto".'''
    if value == 'auto':
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a positive integer or "auto", got {value!r}') from None


def build_parser() -> argparse.ArgumentParser:
    '''
    Every option defaults to SUPPRESS, so only the flags actually passed
    reach the config and override the --config file.
    '''
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", type=str, help="JSON file with the run configuration.")
    common.add_argument(
        "--target", type=str, help="Target state family.",
        choices=['ghz', 'haar', 'product', 'random-stabilizer', 'file']
    )
    common.add_argument("--target-file", type=str, dest='target_file', help="Target JSON file.")
    common.add_argument("--n", type=int, help="Number of qubits.")
    common.add_argument("--protocol", type=str, help="Verification protocol.", choices=['plm', 'sop', 'dpso'])
    common.add_argument("--level", type=int, help="Measured qubits r (DPSO) or subset size l (SOP).")
    common.add_argument(
        "--scheme", type=str, help="DPSO sampling plan.", choices=['naive', 'classes', 'grid', 'ascent', 'lp']
    )
    common.add_argument("--epsilon", type=float, help="Infidelity to reject.")
    common.add_argument("--delta", type=float, help="Type I error cap.")
    common.add_argument("--chi", type=float, help="Type II error cap.")
    common.add_argument("--trials", type=trials_type, help="Number of trials, or auto.")
    common.add_argument("--seed", type=int, help="Base seed of every random stream.")
    common.add_argument("--samples", type=int, help="Number of random targets.")
    common.add_argument("--workers", type=int, help="Worker threads for trials and samples.")
    common.add_argument(
        "--device", type=str, help="Simulated device.", choices=['exact', 'worst-case', 'depolarized', 'file']
    )
    common.add_argument("--device-file", type=str, dest='device_file', help="Density matrix JSON file.")
    common.add_argument("--noise", type=float, help="Depolarizing probability.")
    common.add_argument("--min-n", type=int, dest='min_n', help="Smallest qubit count of a sweep.")
    common.add_argument("--max-n", type=int, dest='max_n', help="Largest qubit count of a sweep.")
    common.add_argument("--bins", type=int, help="Histogram bins.")
    common.add_argument("--nu", type=float, help="Spectral gap to assume instead of computing it.")
    common.add_argument("--trial-log", type=str, dest='trial_log', help="CSV file for per-trial records.")
    common.add_argument("--gamma-out", type=str, dest='gamma_out', help="CSV file for the GHZ gamma table.")
    common.add_argument(
        "--strict-bounds", action='store_true', dest='strict_paper_bounds',
        help="Bound errors over [0, b] instead of [-b, b]."
    )
    common.add_argument("--progress", action='store_true', help="Show progress bars.")
    common.add_argument("--verbose", action='store_true', help="Log at INFO level.")
    common.add_argument("--out", type=str, help="Output file; stdout when absent.")
    common.add_argument("--format", type=str, help="Format of the output.", choices=['csv', 'json'])

    parser = argparse.ArgumentParser(
        prog='pyqsvtool', description="Quantum state verification experiments from the console."
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common])
    return parser


def main(argv=None) -> int:
    '''The entry point for Setuptools.'''

    args = vars(build_parser().parse_args(argv))
    command = args.pop('command')
    config_path = args.pop('config', None)

    logging.basicConfig(
        level=logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr
    )

    try:
        config = ConfigParser.build(command, args, config_path)
        if config.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return PyQSVTool.run(config, __version__)
    except (QSVError, pydantic.ValidationError, OSError, json.JSONDecodeError) as e:
        print(f'pyqsvtool: error: {e}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
