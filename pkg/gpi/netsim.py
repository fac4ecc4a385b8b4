import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .exceptions import LocalityViolation

logger = logging.getLogger(__name__)

BITS_PER_SCALAR = 64


class RoundMessage(NamedTuple):
    sender: int
    payload: tuple


@dataclass
class MessageStats:
    rounds: int = 0
    messages: int = 0
    total_scalars: int = 0
    max_payload_scalars: int = 0
    per_round_max_payload: list = field(default_factory=list)
    per_round_messages: list = field(default_factory=list)

    def record_round(self, messages, scalars, largest):
        self.rounds += 1
        self.messages += messages
        self.total_scalars += scalars
        self.max_payload_scalars = max(self.max_payload_scalars, largest)
        self.per_round_max_payload.append(largest)
        self.per_round_messages.append(messages)

    def as_dict(self):
        return {
            "rounds": self.rounds,
            "messages": self.messages,
            "max_payload_scalars": self.max_payload_scalars,
            "total_scalars": self.total_scalars,
        }


class SimNetwork:
    """
    Synchronous message-passing network over a WeightedDigraph.

    Each call to run_round first hands every node the messages sent to it in
    the previous round, then runs ``compute(node, inbox)`` for every node in
    ascending id order. Whatever compute returns is queued for the next
    round: None sends nothing, a tuple is broadcast on every outgoing edge,
    and a dict maps destination ids to payload tuples.

    Senders run in ascending id order, so every inbox is already sorted by
    sender. A broadcast shares one RoundMessage across its out-edges.
    """

    def __init__(self, graph, nodes=None):
        self.graph = graph
        self.nodes = list(nodes) if nodes is not None else [None] * graph.n
        self.round = 0
        self.stats = MessageStats()
        self._out_neighbors = graph.out_neighbors()
        self._out_sets = [set(row) for row in self._out_neighbors]
        self._pending = [[] for _ in range(graph.n)]

    def run_round(self, compute):
        inboxes = self._pending
        pending = [[] for _ in range(self.graph.n)]
        messages = scalars = largest = 0
        for node_id, node in enumerate(self.nodes):
            outgoing = compute(node, inboxes[node_id])
            if outgoing is None:
                continue
            if isinstance(outgoing, dict):
                for dst, payload in outgoing.items():
                    if dst not in self._out_sets[node_id]:
                        raise LocalityViolation(f"node {node_id} has no edge to {dst}")
                    message = RoundMessage(node_id, tuple(float(v) for v in payload))
                    pending[dst].append(message)
                    messages += 1
                    scalars += len(message.payload)
                    largest = max(largest, len(message.payload))
            else:
                message = RoundMessage(node_id, tuple(float(v) for v in outgoing))
                targets = self._out_neighbors[node_id]
                for dst in targets:
                    pending[dst].append(message)
                if targets:
                    messages += len(targets)
                    scalars += len(targets) * len(message.payload)
                    largest = max(largest, len(message.payload))
        self._pending = pending
        self.stats.record_round(messages, scalars, largest)
        self.round += 1
        return self

    def discard_pending(self):
        """Drop messages that no later round of the current phase will read."""
        dropped = sum(len(msgs) for msgs in self._pending)
        self._pending = [[] for _ in range(self.graph.n)]
        return dropped


def congest_slots(payload_scalars, n):
    return math.ceil(payload_scalars * BITS_PER_SCALAR / math.log2(n))


def congest_equivalent_rounds(stats, n, payload_scale=1):
    """
    CONGEST rounds needed to carry the recorded traffic when a link moves
    log2(n) bits per round. Every simulated round costs the slots of its
    largest message (at least one). ``payload_scale`` inflates every
    payload, e.g. payload_scale=n models an O(n)-message protocol.
    """
    if n < 2:
        raise ValueError("CONGEST accounting needs n >= 2")
    return sum(max(1, congest_slots(p * payload_scale, n)) for p in stats.per_round_max_payload)
