from ...experiments import run_oracle
from ...utils import write_json
from ..base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Compute the GAC directly from the Laplacian spectrum"
    run_flags = False

    def handle(self, *args, **options):
        data = self.validated(options, ['graph', 'example', 'gen', 'delta'])
        outcome = self.run_guarded(run_oracle, data, self.defaults())
        report = outcome.summary

        self.stdout.write(f"graph: {report['graph']} (n={report['n']}, edges={report['edges']})")
        self.stdout.write(f"GAC: {report['gac']:.6f} ({report['kind']})")
        self.stdout.write(f"max weighted in-degree: {report['max_indegree']:.6g}")
        low, high = report['delta_interval']
        self.stdout.write(f"admissible delta: ({low:g}, {high:.6g})")
        self.stdout.write("spectrum of L:")
        for re, im in report['eigenvalues']:
            self.stdout.write(f"  {re:+.6f} {im:+.6f}j")
        if report['modified_eigenvalues'] is not None:
            self.stdout.write(f"spectrum of modified Laplacian (delta={report['delta']:g}):")
            for re, im in report['modified_eigenvalues']:
                self.stdout.write(f"  {re:+.6f} {im:+.6f}j")
            self.stdout.write(f"estimate from modified Laplacian: {report['modified_estimate']:.6f}")
        if report['assumption_suspect']:
            self.stderr.write("warning: the minimal real part is shared by several eigenvalues")

        out = self.out_dir(options)
        if out is not None:
            write_json(out / 'oracle.json', report)
