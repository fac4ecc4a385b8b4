from django.core.management.base import CommandError

from ...central import epsilon_sweep
from ...experiments import build_config, resolve_graph
from ...graphs import laplacian
from ...spectral import gac_oracle
from ...serializers import SweepRowSerializer
from ...utils import SWEEP_HEADER, parse_number_list, write_csv, write_json
from ..base import INPUT_ERROR, ExperimentCommand


class Command(ExperimentCommand):
    help = "Run the centralized algorithm for several thresholds and tabulate iterations against error"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--epsilons', default='1e-2,1e-3,5e-4,1e-4,1e-5,1e-6')

    def handle(self, *args, **options):
        ok, epsilons = parse_number_list(options['epsilons'])
        if not ok:
            raise CommandError(epsilons, returncode=INPUT_ERROR)
        data = self.validated(options, ['graph', 'example', 'gen', 'delta', 'seed', 'x0', 'max_iter'])

        def sweep():
            source = resolve_graph(data)
            cfg = build_config(source, data, self.defaults())
            reference_gac = gac_oracle(laplacian(source.graph)).gac
            return epsilon_sweep(source.graph, cfg, epsilons, reference_gac)

        rows = self.run_guarded(sweep)
        for row in rows:
            self.stdout.write(
                f"epsilon {row.epsilon:g}: {row.iterations} iterations, estimate {row.estimate:.6f}, "
                f"error {row.abs_error:.3e}, scenario {row.scenario}")
        out = self.out_dir(options)
        if out is not None:
            write_csv(out / 'sweep.csv', SWEEP_HEADER, rows)
            write_json(out / 'sweep.json', SweepRowSerializer(rows, many=True).data)
