from pathlib import Path

from django.core.management.base import CommandError

from ...graphs import dump_edge_list, random_strongly_connected, to_json
from ..base import INPUT_ERROR, GpiCommand


class Command(GpiCommand):
    help = "Write a random strongly connected weighted digraph to a file"

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--prob', type=float, default=0.5)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--out', required=True, help="target file; .json writes graph JSON, anything else CSV")

    def handle(self, *args, **options):
        if options['n'] < 2:
            raise CommandError("--n must be at least 2", returncode=INPUT_ERROR)
        if not 0 <= options['prob'] <= 1:
            raise CommandError("--prob must lie in [0, 1]", returncode=INPUT_ERROR)

        g = random_strongly_connected(options['n'], options['prob'], options['seed'])
        path = Path(options['out'])
        path.parent.mkdir(parents=True, exist_ok=True)
        text = to_json(g) if path.suffix == '.json' else dump_edge_list(g)
        path.write_text(text, encoding='utf-8')
        self.stdout.write(f"wrote {g.n} vertices and {len(g.edges)} edges to {path}")
