from pathlib import Path

from django.core.management.base import CommandError

from ...experiments import gpi_defaults
from ...montecarlo import montecarlo
from ...serializers import MonteCarloRowSerializer
from ...utils import MONTECARLO_HEADER, parse_number_list, write_csv, write_json
from ..base import INPUT_ERROR, GpiCommand


class Command(GpiCommand):
    help = "CONGEST round counts of the distributed algorithm over random digraphs of growing size"

    def add_arguments(self, parser):
        parser.add_argument('--sizes', default='6,12,24,48')
        parser.add_argument('--trials', type=int, default=20)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--edge-prob', type=float, default=0.5, dest='edge_prob')
        parser.add_argument('--workers', type=int)
        parser.add_argument('--max-iter', type=int, dest='max_iter')
        parser.add_argument('--out')
        parser.add_argument('--progress', action='store_true')

    def handle(self, *args, **options):
        ok, sizes = parse_number_list(options['sizes'], cast=int)
        if not ok or any(n < 2 for n in sizes):
            raise CommandError("--sizes must be integers >= 2", returncode=INPUT_ERROR)
        if options['trials'] < 1:
            raise CommandError("--trials must be at least 1", returncode=INPUT_ERROR)
        if not 0 <= options['edge_prob'] <= 1:
            raise CommandError("--edge-prob must lie in [0, 1]", returncode=INPUT_ERROR)

        defaults = gpi_defaults()
        rows, failed = montecarlo(
            sizes, options['trials'], options['seed'],
            edge_prob=options['edge_prob'],
            workers=options['workers'] or defaults['workers'],
            max_iter=options['max_iter'] or defaults['max_iter'],
            l_max=defaults['l_max'], m_max=defaults['m_max'],
            progress=options['progress'],
        )

        self.stdout.write("n  trials  failures  mean_rounds  std_rounds  mean_baseline")
        for row in rows:
            self.stdout.write(
                f"{row.n}  {row.trials}  {row.failures}  {row.mean_rounds:.1f}  "
                f"{row.std_rounds:.1f}  {row.mean_baseline_rounds:.1f}")

        if options['out']:
            out = Path(options['out'])
            write_csv(out / 'montecarlo.csv', MONTECARLO_HEADER, rows)
            write_json(out / 'montecarlo.json', {
                'rows': MonteCarloRowSerializer(rows, many=True).data,
                'failed_trials': [{'n': o.n, 'trial': o.trial, 'error': o.error} for o in failed],
            })
