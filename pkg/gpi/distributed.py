import enum
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import Field

from .central import GpiConfig, Scenario, initial_vector, select_branch
from .exceptions import AssumptionViolation, NonConvergence, ObserverFailure
from .graphs import is_strongly_connected, laplacian
from .netsim import SimNetwork
from .spectral import dominant_2x2_magnitude, left_null_eigvec

logger = logging.getLogger(__name__)

GRAM_DET_TOL = 1e-14
DEGENERATE_TOL = 2e-12


class LoopSchedule(str, enum.Enum):
    ADAPTIVE = 'adaptive'
    LINEAR = 'linear'
    FIXED = 'fixed'


class DistConfig(GpiConfig):
    l_max: int = Field(default=50, ge=1)
    m_max: int = Field(default=50, ge=1)
    eps_L: float = Field(default=1e-10, gt=0)
    eps_M: float = Field(default=1e-10, gt=0)
    loop_schedule: LoopSchedule = LoopSchedule.ADAPTIVE
    # exact replaces the consensus observer with centrally computed inner products
    observer: Literal['consensus', 'exact'] = 'consensus'

    def inner_caps(self, k):
        if self.loop_schedule == LoopSchedule.FIXED:
            return self.l_max, self.m_max
        return min(k, self.l_max), min(k, self.m_max)


@dataclass
class NodeState:
    """
    Everything node i knows. History deques hold the ages k-2, k-1, k with
    the newest entry last; ``zbar`` entries are (z1, z2, z3, z4) tuples.
    """
    node: int
    w1_i: float
    w1_sum: float
    in_weights: dict
    x: deque
    xbar: deque
    zbar: deque
    k: int = 0
    d_check: float = math.nan
    d_hat: float = math.nan
    d: float = math.nan
    lam_check: float = math.nan
    lam_hat: float = math.nan
    lam_tilde: float = math.nan
    scenario: Scenario = Scenario.UNDECIDED
    # scratch values for the sub-round loops
    y: float = 0.0
    y_step: float = 0.0
    ybar: float = 0.0
    z: tuple = (0.0, 0.0, 0.0, 0.0)
    z_step: float = 0.0
    dmax: float = math.nan

    @classmethod
    def initial(cls, node, w1_i, w1_sum, x0_i, in_weights, epsilon, z4_seed=0.0):
        return cls(
            node=node, w1_i=w1_i, w1_sum=w1_sum, in_weights=dict(in_weights),
            x=deque([x0_i], maxlen=3),
            xbar=deque([x0_i], maxlen=3),
            zbar=deque([(1.0, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, z4_seed)], maxlen=3),
            d=epsilon,
        )

    def mix(self, inbox, own):
        """delta-free neighbor sum: sum_j w_ij (value_j - own), inbox sorted by sender."""
        weights = self.in_weights
        total = 0.0
        for sender, payload in inbox:
            total += weights[sender] * (payload[0] - own)
        return total

    def mix4(self, inbox, own):
        """mix for the four observer channels at once, same summation order per channel."""
        weights = self.in_weights
        o1, o2, o3, o4 = own
        s1 = s2 = s3 = s4 = 0.0
        for sender, (v1, v2, v3, v4) in inbox:
            w = weights[sender]
            s1 += w * (v1 - o1)
            s2 += w * (v2 - o2)
            s3 += w * (v3 - o3)
            s4 += w * (v4 - o4)
        return s1, s2, s3, s4


@dataclass(frozen=True)
class NodeTraceRecord:
    k: int
    node: int
    d_check: float
    d_hat: float
    d: float
    lam_check: float
    lam_hat: float
    lam_tilde: float
    scenario: str

    @classmethod
    def from_node(cls, node):
        return cls(
            k=node.k, node=node.node, d_check=node.d_check, d_hat=node.d_hat, d=node.d,
            lam_check=node.lam_check, lam_hat=node.lam_hat, lam_tilde=node.lam_tilde,
            scenario=node.scenario.value,
        )


@dataclass
class DistResult:
    estimates: list
    scenarios: list
    iterations: int
    rounds: int
    stats: object
    traces: list = field(default_factory=list)
    state_history: list = field(default_factory=list)
    converged: bool = True


def taylor_loop(network, delta, l_star, eps_L=None):
    """
    Run y(l) = y(l-1) + delta * sum_j w_ij (y_j(l-1) - y(l-1)) from
    y(0) = x_{k-1} and accumulate sum_l y(l)/l!. With eps_L the loop
    stops once max_i |y(l) - y(l-1)| < eps_L.
    Returns the per-node sums.
    """
    nodes = network.nodes

    def send_initial(node, inbox):
        node.y = node.x[-1]
        node.ybar = node.y
        return (node.y,)

    network.run_round(send_initial)
    for l in range(1, l_star + 1):
        last = l == l_star

        def advance(node, inbox, l=l, last=last):
            step = delta * node.mix(inbox, node.y)
            node.y += step
            node.y_step = abs(step)
            node.ybar += node.y / math.factorial(l)
            return None if last else (node.y,)

        network.run_round(advance)
        if eps_L is not None and not last and max(n.y_step for n in nodes) < eps_L:
            break
    network.discard_pending()
    return [node.ybar for node in nodes]


def node_intermediate_state(node, ybar_i):
    """x_bar_k^i: the truncated-series value minus the deflation term of iteration k-1."""
    z1_prev, _, _, z4_prev = node.zbar[-1]
    if z1_prev <= 0:
        raise ObserverFailure(f"nonpositive norm estimate {z1_prev:.3e}", node=node.node, k=node.k + 1)
    xbar = ybar_i - math.e * node.w1_i * z4_prev / math.sqrt(z1_prev)
    node.k += 1
    return xbar


def observer_init(node, xbar_k):
    """Initial observer values (z1..z4) at node i for the inner products of iteration k."""
    ratio = node.w1_sum / node.w1_i
    xbar_prev = node.xbar[-1]
    z3 = ratio * node.xbar[-2] * xbar_k if node.k > 1 else 0.0
    return (ratio * xbar_k * xbar_k, ratio * xbar_prev * xbar_k, z3, node.w1_sum * xbar_k)


def consensus_observer(network, delta, m_star, eps_M=None):
    """
    Four stacked consensus observers, one 4-scalar message per edge per
    sub-round. Each node's ``z`` must already hold its initial values.
    Returns the per-node observer outputs.
    """
    nodes = network.nodes
    network.run_round(lambda node, inbox: node.z)
    for m in range(1, m_star + 1):
        last = m == m_star

        def advance(node, inbox, last=last):
            updated = tuple(z + delta * s for z, s in zip(node.z, node.mix4(inbox, node.z)))
            node.z_step = max(abs(a - b) for a, b in zip(updated, node.z))
            node.z = updated
            return None if last else node.z

        network.run_round(advance)
        if eps_M is not None and not last and max(n.z_step for n in nodes) < eps_M:
            break
    network.discard_pending()
    return [node.z for node in nodes]


def exact_observer(nodes, xbars):
    """Centrally computed inner products in place of the consensus observer."""
    xbar_k = np.asarray(xbars)
    xbar_prev = np.array([node.xbar[-1] for node in nodes])
    w1 = np.array([node.w1_i for node in nodes])
    k = nodes[0].k
    z3 = float(xbar_k @ np.array([node.xbar[-2] for node in nodes])) if k > 1 else 0.0
    exact = (float(xbar_k @ xbar_k), float(xbar_k @ xbar_prev), z3, float(xbar_k @ w1))
    for node in nodes:
        node.z = exact
    return [exact] * len(nodes)


def node_update_state(node, xbar_k, zbar_k):
    """Store the new observer outputs and return x_k^i = xbar_k^i / sqrt(z1_k)."""
    z1 = zbar_k[0]
    if z1 <= 0:
        raise ObserverFailure(f"nonpositive norm estimate {z1:.3e}", node=node.node, k=node.k)
    node.xbar.append(xbar_k)
    node.zbar.append(tuple(zbar_k))
    x_k = xbar_k / math.sqrt(z1)
    node.x.append(x_k)
    return x_k


def node_distances(node):
    z1_k, z2_k, z3_k, _ = node.zbar[-1]
    z1_p, z2_p, _, _ = node.zbar[-2]
    z1_pp = node.zbar[-3][0]

    d_check = math.sqrt(min(1.0, max(0.0, 1.0 - z2_k * z2_k / (z1_k * z1_p))))

    first = z1_k * z1_p - z2_k * z2_k
    second = z1_p * z1_pp - z2_p * z2_p
    if first <= DEGENERATE_TOL * z1_k * z1_p or second <= DEGENERATE_TOL * z1_p * z1_pp:
        d_hat = 1.0
    else:
        ratio = (z2_k * z2_p - z3_k * z1_p) ** 2 / (first * second)
        d_hat = math.sqrt(min(1.0, max(0.0, 1.0 - ratio)))

    node.d_check, node.d_hat = d_check, d_hat
    return d_check, d_hat


def node_eigs(node):
    """
    lam_check from the 1x1 block and lam_hat from the 2x2 block on
    span{x_{k-2}, x_{k-1}}; a near-singular Gram matrix keeps the old lam_hat.
    """
    z1_k, z2_k, z3_k, _ = node.zbar[-1]
    z1_p, z2_p, _, _ = node.zbar[-2]
    z1_pp = node.zbar[-3][0]

    lam_check = abs(z2_k / math.sqrt(z1_p))

    c = z2_p / math.sqrt(z1_p * z1_pp)
    gram = np.array([[1.0, c], [c, 1.0]])
    lam_hat = node.lam_hat
    if np.linalg.det(gram) >= GRAM_DET_TOL:
        block = np.array([
            [z2_p / math.sqrt(z1_pp), z3_k / math.sqrt(z1_pp)],
            [z1_p / math.sqrt(z1_p), z2_k / math.sqrt(z1_p)],
        ])
        lam_hat = dominant_2x2_magnitude(np.linalg.solve(gram, block))

    node.lam_check, node.lam_hat = lam_check, lam_hat
    return lam_check, lam_hat


def node_finalize(node, delta):
    node.d, node.lam_tilde, node.scenario = select_branch(
        node.d_check, node.d_hat, node.lam_check, node.lam_hat, node.lam_tilde, delta)
    return node.d, node.lam_tilde, node.scenario


def termination_sweep(network, epsilon, rounds=None):
    """
    Max-consensus on d over ``rounds`` exchanges (n - 1 by default). Each
    node ends up holding max_i d^i and stops iff it is below epsilon.
    Returns the per-node stop flags.
    """
    rounds = network.graph.n - 1 if rounds is None else rounds

    def send_initial(node, inbox):
        node.dmax = node.d
        return (node.dmax,)

    network.run_round(send_initial)
    for r in range(1, rounds + 1):
        last = r == rounds

        def absorb(node, inbox, last=last):
            node.dmax = max([node.dmax] + [m.payload[0] for m in inbox])
            return None if last else (node.dmax,)

        network.run_round(absorb)
    network.discard_pending()
    return [node.dmax < epsilon for node in network.nodes]


def build_nodes(g, cfg, w1, x0):
    w1_sum = float(w1.sum())
    z4_seed = float(x0 @ w1) if cfg.observer == 'exact' else 0.0
    return [
        NodeState.initial(i, float(w1[i]), w1_sum, float(x0[i]), g.in_neighbors[i], cfg.epsilon, z4_seed)
        for i in range(g.n)
    ]


def run_distributed(g, cfg):
    cfg.check_against(g)
    if not is_strongly_connected(g):
        raise AssumptionViolation("graph is not strongly connected")
    w1 = left_null_eigvec(laplacian(g))
    x0 = initial_vector(g.n, cfg)
    nodes = build_nodes(g, cfg, w1, x0)
    network = SimNetwork(g, nodes)
    adaptive = cfg.loop_schedule == LoopSchedule.ADAPTIVE

    traces = []
    history = []

    def snapshot(converged):
        return DistResult(
            estimates=[n.lam_tilde for n in nodes], scenarios=[n.scenario for n in nodes],
            iterations=nodes[0].k, rounds=network.round, stats=network.stats,
            traces=traces, state_history=history, converged=converged,
        )

    for k in range(1, cfg.max_iter + 1):
        l_star, m_star = cfg.inner_caps(k)
        ybars = taylor_loop(network, cfg.delta, l_star, cfg.eps_L if adaptive else None)
        xbars = [node_intermediate_state(node, ybar) for node, ybar in zip(nodes, ybars)]

        if cfg.observer == 'exact':
            zbars = exact_observer(nodes, xbars)
        else:
            for node, xbar in zip(nodes, xbars):
                node.z = observer_init(node, xbar)
            zbars = consensus_observer(network, cfg.delta, m_star, cfg.eps_M if adaptive else None)

        history.append(np.array([
            node_update_state(node, xbar, zbar) for node, xbar, zbar in zip(nodes, xbars, zbars)]))
        for node in nodes:
            node_distances(node)
            node_eigs(node)
            node_finalize(node, cfg.delta)
            traces.append(NodeTraceRecord.from_node(node))

        logger.debug("k=%d max d=%.3e lam_tilde=[%.6g, %.6g]", k, max(n.d for n in nodes),
                     min(n.lam_tilde for n in nodes), max(n.lam_tilde for n in nodes))

        if all(termination_sweep(network, cfg.epsilon)):
            result = snapshot(converged=True)
            logger.info("distributed run converged: iterations=%d rounds=%d estimates=[%.6g, %.6g]",
                        result.iterations, result.rounds, min(result.estimates), max(result.estimates))
            return result

    raise NonConvergence(f"no convergence within {cfg.max_iter} iterations", result=snapshot(converged=False))
