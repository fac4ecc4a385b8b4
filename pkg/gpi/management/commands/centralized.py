from ...experiments import run_centralized_experiment
from ...serializers import TraceRecordSerializer
from ...utils import TRACE_HEADER, write_csv, write_json
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Estimate the GAC with the centralized generalized power iteration"

    def handle(self, *args, **options):
        data = self.validated(options, [
            'graph', 'example', 'gen', 'delta', 'epsilon', 'seed', 'x0', 'max_iter', 'with_oracle'])
        out = self.out_dir(options)

        def write(outcome):
            if out is None:
                return
            write_csv(out / 'trace.csv', TRACE_HEADER, outcome.result.trace)
            write_json(out / 'trace.json', TraceRecordSerializer(outcome.result.trace, many=True).data)
            write_json(out / 'summary.json', outcome.summary)

        outcome = self.run_guarded(run_centralized_experiment, data, self.defaults(), on_partial=write)
        write(outcome)

        summary = outcome.summary
        self.stdout.write(
            f"estimate {summary['estimate']:.6f}, scenario {summary['scenario']}, "
            f"{summary['iterations']} iterations (scenario settled at {summary['scenario_settled_at']})")
        if 'oracle_gac' in summary:
            self.stdout.write(f"oracle {summary['oracle_gac']:.6f}, error {summary['oracle_error']:.3e}")
