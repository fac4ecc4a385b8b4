import json
import logging
import math
import re
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .exceptions import GraphFormatError

logger = logging.getLogger(__name__)

VERTEX_COUNT_HEADER = re.compile(r"#\s*n\s*=\s*(\d+)\s*$")


@dataclass(frozen=True)
class WeightedDigraph:
    """
    Weighted digraph on vertices 0..n-1.

    An edge (src, dst, w) means information flows src -> dst, so w is the
    entry w[dst][src] of the weight matrix and src is an in-neighbor of dst.
    """
    n: int
    edges: tuple
    in_neighbors: tuple = field(repr=False)

    @classmethod
    def from_edges(cls, n, edges):
        n = int(n)
        if n < 2:
            raise GraphFormatError(f"a graph needs at least 2 vertices, got {n}")
        seen = set()
        clean = []
        for src, dst, weight in edges:
            src, dst, weight = int(src), int(dst), float(weight)
            if not (0 <= src < n and 0 <= dst < n):
                raise GraphFormatError(f"vertex id out of range 0..{n - 1}: ({src}, {dst})")
            if src == dst:
                raise GraphFormatError(f"self-loop on vertex {src}")
            if not math.isfinite(weight) or weight <= 0:
                raise GraphFormatError(f"weight must be finite and positive, got {weight}")
            if (src, dst) in seen:
                raise GraphFormatError(f"duplicate edge {src}->{dst}")
            seen.add((src, dst))
            clean.append((src, dst, weight))

        in_neighbors = [[] for _ in range(n)]
        for src, dst, weight in clean:
            in_neighbors[dst].append((src, weight))
        in_neighbors = tuple(tuple(sorted(row)) for row in in_neighbors)
        return cls(n=n, edges=tuple(clean), in_neighbors=in_neighbors)

    @classmethod
    def from_weight_matrix(cls, W):
        """Build from W where W[i][j] > 0 is the weight of edge j -> i."""
        W = np.asarray(W, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise GraphFormatError(f"weight matrix must be square, got shape {W.shape}")
        n = W.shape[0]
        edges = [(j, i, W[i, j]) for i in range(n) for j in range(n) if W[i, j] != 0]
        return cls.from_edges(n, edges)

    def out_neighbors(self):
        out = [[] for _ in range(self.n)]
        for src, dst, _ in self.edges:
            out[src].append(dst)
        return tuple(tuple(sorted(row)) for row in out)

    def weight_matrix(self):
        W = np.zeros((self.n, self.n))
        for src, dst, weight in self.edges:
            W[dst, src] = weight
        return W

    def scaled(self, factor):
        return WeightedDigraph.from_edges(
            self.n, [(s, d, w * factor) for s, d, w in self.edges])

    def to_networkx(self):
        G = nx.DiGraph()
        G.add_nodes_from(range(self.n))
        G.add_weighted_edges_from(self.edges)
        return G


def load_edge_list(text):
    """
    Parse a `src,dst,weight` CSV document (0-indexed, `#` comments allowed).
    A `# n=<count>` header fixes the vertex count, so trailing vertices
    without edges survive; otherwise n is one more than the largest id.
    """
    edges = []
    seen = {}
    header_n = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            match = VERTEX_COUNT_HEADER.match(line)
            if match and header_n is None:
                header_n = (int(match.group(1)), line_no)
            continue
        parts = [p.strip() for p in line.split(',')]
        if len(parts) != 3:
            raise GraphFormatError(f"expected 'src,dst,weight', got {raw!r}", line=line_no)
        try:
            src, dst = int(parts[0]), int(parts[1])
            weight = float(parts[2])
        except ValueError:
            raise GraphFormatError(f"cannot parse {raw!r}", line=line_no)
        if src < 0 or dst < 0:
            raise GraphFormatError("vertex ids must be nonnegative", line=line_no)
        if src == dst:
            raise GraphFormatError(f"self-loop on vertex {src}", line=line_no)
        if not math.isfinite(weight) or weight <= 0:
            raise GraphFormatError(f"weight must be finite and positive, got {parts[2]}", line=line_no)
        if (src, dst) in seen:
            raise GraphFormatError(
                f"duplicate edge {src}->{dst} (first on line {seen[(src, dst)]})", line=line_no)
        seen[(src, dst)] = line_no
        edges.append((src, dst, weight))

    if not edges:
        raise GraphFormatError("edge list is empty")
    n = max(max(s, d) for s, d, _ in edges) + 1
    if header_n is not None:
        count, line_no = header_n
        if count < n:
            raise GraphFormatError(f"header declares n={count} but vertex {n - 1} is used", line=line_no)
        n = count
    return WeightedDigraph.from_edges(n, edges)


def dump_edge_list(g):
    # repr() keeps full float precision for the round trip
    lines = [f"# n={g.n}"]
    lines += [f"{src},{dst},{weight!r}" for src, dst, weight in g.edges]
    return "\n".join(lines) + "\n"


def to_json(g):
    return json.dumps({"n": g.n, "edges": [[s, d, w] for s, d, w in g.edges]})


def from_json(text):
    try:
        data = json.loads(text) if isinstance(text, str) else text
        return WeightedDigraph.from_edges(data["n"], data["edges"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise GraphFormatError(f"invalid graph JSON: {exc}")


def laplacian(g):
    W = g.weight_matrix()
    return np.diag(W.sum(axis=1)) - W


def max_weighted_indegree(g):
    return float(g.weight_matrix().sum(axis=1).max())


@dataclass(frozen=True)
class DeltaViolation:
    delta: float
    max_indegree: float
    upper: float

    @property
    def message(self):
        return (f"delta={self.delta} must lie in the open interval (0, {self.upper:.6g}) "
                f"since the max weighted in-degree is {self.max_indegree:.6g}")


def default_delta(g):
    return 0.99 / max_weighted_indegree(g)


def validate_delta(g, delta):
    """
    Check 0 < delta < 1/Delta.
    Returns:
        (True, None) when admissible, (False, DeltaViolation) otherwise.
    """
    max_indegree = max_weighted_indegree(g)
    upper = 1.0 / max_indegree
    if 0 < delta < upper:
        return True, None
    return False, DeltaViolation(delta=delta, max_indegree=max_indegree, upper=upper)


def is_strongly_connected(g):
    return nx.is_strongly_connected(g.to_networkx())


def random_strongly_connected(n, extra_edge_prob, seed):
    """
    Random strongly connected digraph: a random Hamiltonian cycle plus each
    remaining ordered pair with probability extra_edge_prob. Weights are
    uniform on (0, 1].
    """
    if n < 2:
        raise GraphFormatError(f"a graph needs at least 2 vertices, got {n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    edges = {}
    for pos in range(n):
        src, dst = int(order[pos]), int(order[(pos + 1) % n])
        if (src, dst) not in edges:
            edges[(src, dst)] = 1.0 - rng.random()

    for src in range(n):
        for dst in range(n):
            if src == dst or (src, dst) in edges:
                continue
            if rng.random() < extra_edge_prob:
                edges[(src, dst)] = 1.0 - rng.random()

    g = WeightedDigraph.from_edges(n, [(s, d, w) for (s, d), w in edges.items()])
    logger.debug("generated digraph n=%d edges=%d seed=%s", n, len(g.edges), seed)
    return g
