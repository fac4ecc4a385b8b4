from ...experiments import run_distributed_experiment
from ...serializers import MessageStatsSerializer, NodeTraceRecordSerializer
from ...utils import NODE_TRACE_HEADER, write_csv, write_json
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Estimate the GAC with the distributed algorithm on the round simulator"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--schedule', choices=['adaptive', 'linear', 'fixed'])
        parser.add_argument('--l-max', type=int, dest='l_max')
        parser.add_argument('--m-max', type=int, dest='m_max')
        parser.add_argument('--observer', choices=['consensus', 'exact'])

    def handle(self, *args, **options):
        data = self.validated(options, [
            'graph', 'example', 'gen', 'delta', 'epsilon', 'seed', 'x0', 'max_iter', 'with_oracle',
            'schedule', 'l_max', 'm_max', 'observer'])
        out = self.out_dir(options)

        def write(outcome):
            if out is None:
                return
            write_csv(out / 'node_trace.csv', NODE_TRACE_HEADER, outcome.result.traces)
            write_json(out / 'node_trace.json', NodeTraceRecordSerializer(outcome.result.traces, many=True).data)
            write_json(out / 'message_stats.json', MessageStatsSerializer(outcome.result.stats).data)
            write_json(out / 'summary.json', outcome.summary)

        outcome = self.run_guarded(run_distributed_experiment, data, self.defaults(), on_partial=write)
        write(outcome)

        summary = outcome.summary
        for node, (estimate, scenario) in enumerate(zip(summary['estimates'], summary['scenarios'])):
            self.stdout.write(f"node {node}: estimate {estimate:.6f}, scenario {scenario}")
        stats = summary['stats']
        self.stdout.write(
            f"{summary['iterations']} iterations, {stats['rounds']} rounds, {stats['messages']} messages, "
            f"max payload {stats['max_payload_scalars']} scalars, {summary['congest_rounds']} CONGEST rounds")
