import json
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError, CommandParser
from pydantic import ValidationError as ConfigValidationError

from ..exceptions import GpiError, NonConvergence
from ..experiments import gpi_defaults
from ..serializers import ExperimentConfigSerializer

INPUT_ERROR = 1
NOT_CONVERGED = 2


class InputErrorParser(CommandParser):
    """Flag errors exit with INPUT_ERROR instead of argparse's 2, which means non-convergence here."""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=INPUT_ERROR)


class GpiCommand(BaseCommand):
    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = InputErrorParser
        return parser


class ExperimentCommand(GpiCommand):
    """
    Shared flags and error mapping for the experiment subcommands.
    Input errors exit with 1, non-convergence with 2.
    """
    run_flags = True

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--graph', help="edge-list CSV file (src,dst,weight per line)")
        source.add_argument('--example', help="builtin network: 1, 2, example1, example2, tri-complex, tri-real")
        source.add_argument('--gen', help="random strongly connected digraph 'n,prob,seed'")
        parser.add_argument('--delta', type=float)
        parser.add_argument('--out', help="output directory for CSV/JSON artifacts")
        if self.run_flags:
            parser.add_argument('--epsilon', type=float)
            parser.add_argument('--seed', type=int)
            parser.add_argument('--x0', help="explicit initial vector, comma separated")
            parser.add_argument('--max-iter', type=int, dest='max_iter')
            parser.add_argument('--with-oracle', action='store_true', dest='with_oracle')

    def validated(self, options, keys):
        data = {key: options[key] for key in keys if options.get(key) is not None}
        serializer = ExperimentConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(json.dumps(serializer.errors), returncode=INPUT_ERROR)
        return serializer.validated_data

    def run_guarded(self, runner, *args, on_partial=None):
        try:
            return runner(*args)
        except NonConvergence as exc:
            if on_partial is not None and exc.result is not None:
                on_partial(exc.result)
            raise CommandError(str(exc), returncode=NOT_CONVERGED)
        except (GpiError, ConfigValidationError) as exc:
            raise CommandError(str(exc), returncode=INPUT_ERROR)

    def out_dir(self, options):
        return Path(options['out']) if options.get('out') else None

    def defaults(self):
        return gpi_defaults()
