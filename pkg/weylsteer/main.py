"""
Точка входа командной строки WeylSteer.

Разбирает аргументы, собирает RunConfig (из JSON-документа и/или флагов),
настраивает язык сообщений и режим --verbose, затем передаёт управление cli.run.
"""

import argparse
import sys

from .cli import run
from .constants import APP_VERSION, EXIT_CONFIG
from .core.errors import ConfigError
from .core.localization import init_language_from_env, set_runtime_ui_language, translate_runtime
from .core.run_config import COMMANDS, OUTPUT_FORMATS, RunConfig
from .utils import debug, set_debug_echo


def _t(key: str) -> str:
    return translate_runtime(key, key)


def _fmt(key: str, **kwargs) -> str:
    text = _t(key)
    try:
        return text.format(**kwargs)
    except Exception:
        return text


class ConfigArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ConfigError instead of exiting with 2."""

    def error(self, message):
        raise ConfigError(_fmt('error.main.usage', prog=self.prog, message=message))


def build_parser() -> argparse.ArgumentParser:
    common = ConfigArgumentParser(add_help=False)
    common.add_argument('config', nargs='?', help='JSON run configuration')
    common.add_argument('--target', action='append', default=[], help='named gate (repeat for two targets)')
    common.add_argument('--matrix', action='append', default=[], help='matrix file (repeat for two targets)')
    common.add_argument('--output', help='write the report here instead of stdout')
    common.add_argument('--format', choices=OUTPUT_FORMATS)
    common.add_argument('--seed', type=int)

    parser = ConfigArgumentParser(prog='weylsteer', description='Gate synthesis on the Bloch sphere and in the Weyl chamber')
    parser.add_argument('--version', action='version', version=f'%(prog)s {APP_VERSION}')
    parser.add_argument('--verbose', action='store_true', help='echo the debug log to stderr')
    parser.add_argument('--lang', help='message language (en, ru)')
    sub = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        sub.add_parser(command, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Load the document (if any) and apply command-line overrides."""
    if args.config:
        config = RunConfig.from_file(args.config)
        if config.command != args.command:
            raise ConfigError(_fmt('error.config.command_mismatch', command=args.command, document=config.command))
    else:
        config = RunConfig.from_mapping({'command': args.command})
    targets = list(args.target) + [{'matrix_file': path} for path in args.matrix]
    if len(targets) == 1:
        config.target = targets[0]
    elif targets:
        config.target = targets
    if args.output:
        config.output_path = args.output
    if args.format:
        config.output_format = args.format
    if args.seed is not None:
        config.seed = args.seed
    return config


def main(argv=None) -> int:
    init_language_from_env()
    try:
        args = build_parser().parse_args(argv)
        if args.lang:
            set_runtime_ui_language(args.lang)
        set_debug_echo(args.verbose)
        debug(_fmt('log.main.start', command=args.command))
        config = config_from_args(args)
    except ConfigError as e:
        sys.stderr.write(_fmt('error.cli.config', error=e) + '\n')
        return EXIT_CONFIG
    return run(config)


if __name__ == '__main__':
    raise SystemExit(main())
