from dataclasses import dataclass
from typing import Optional

from .graphs import WeightedDigraph


@dataclass(frozen=True)
class ReferenceNetwork:
    """
    A builtin network with the parameters it was published with.
    ``weights[i][j]`` is the weight of edge j -> i.
    """
    name: str
    weights: tuple
    delta: float
    epsilon: float
    gac: float
    kind: str
    x0: Optional[tuple] = None
    dominant_magnitude: Optional[float] = None
    centralized_iterations: Optional[int] = None
    distributed_iterations: Optional[int] = None

    def graph(self):
        return WeightedDigraph.from_weight_matrix(self.weights)

    def as_dict(self):
        return {
            "name": self.name,
            "weights": [list(row) for row in self.weights],
            "delta": self.delta,
            "epsilon": self.epsilon,
            "gac": self.gac,
            "kind": self.kind,
            "x0": list(self.x0) if self.x0 is not None else None,
            "dominant_magnitude": self.dominant_magnitude,
            "centralized_iterations": self.centralized_iterations,
            "distributed_iterations": self.distributed_iterations,
        }


EXAMPLE_1 = ReferenceNetwork(
    name='example1',
    weights=(
        (0, 0, .78, .71, .93, .73),
        (0, 0, 0, 0, .90, .88),
        (.98, 0, 0, .76, .55, 0),
        (0, .10, 0, 0, 0, .75),
        (0, 0, .61, .77, 0, 0),
        (0, 0, 0, 0, .61, 0),
    ),
    delta=0.235,
    epsilon=5e-4,
    gac=1.192,
    kind='ComplexPair',
    x0=(0.0976, 0.2323, 0.2316, 0.8137, 0.1618, 0.4411),
    dominant_magnitude=2.055,
    centralized_iterations=46,
    distributed_iterations=58,
)

EXAMPLE_2 = ReferenceNetwork(
    name='example2',
    weights=(
        (0, 0, 0, .61, .75, 0),
        (.60, 0, 0, .97, 0, .71),
        (0, .86, 0, .77, 0, 0),
        (0, 0, 0, 0, .74, .72),
        (.85, 1, 0, 0, 0, 1),
        (0, 0, .76, 0, .58, 0),
    ),
    delta=0.269,
    epsilon=5e-4,
    gac=1.255,
    kind='Real',
    x0=(0.1423, 0.4528, 0.6571, 0.0866, 0.5208, 0.2534),
    dominant_magnitude=1.939,
    centralized_iterations=49,
    distributed_iterations=56,
)

TRI_COMPLEX = ReferenceNetwork(
    name='tri-complex',
    weights=(
        (0, .09, .59),
        (.28, 0, .17),
        (.07, .4, 0),
    ),
    delta=1 / 3,
    epsilon=1e-4,
    gac=0.8,
    kind='ComplexPair',
)

TRI_REAL = ReferenceNetwork(
    name='tri-real',
    weights=(
        (0, 0, .97),
        (0, 0, .75),
        (.78, .52, 0),
    ),
    delta=1 / 3,
    epsilon=1e-4,
    gac=0.8294,
    kind='Real',
)

REFERENCE_NETWORKS = {net.name: net for net in (EXAMPLE_1, EXAMPLE_2, TRI_COMPLEX, TRI_REAL)}
# --example 1 / --example 2 on the command line
REFERENCE_NETWORKS['1'] = EXAMPLE_1
REFERENCE_NETWORKS['2'] = EXAMPLE_2


def get_reference_network(name):
    """
    Returns:
        (True, ReferenceNetwork) or (False, error message)
    """
    network = REFERENCE_NETWORKS.get(str(name))
    if network is None:
        choices = ', '.join(sorted(k for k in REFERENCE_NETWORKS if not k.isdigit()))
        return False, f"Unknown example '{name}'. Choose one of: {choices}, 1, 2."
    return True, network
