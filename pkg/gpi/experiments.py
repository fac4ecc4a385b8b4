"""
Experiment runner shared by the management commands and the REST views.

Input arrives as the validated data of ExperimentConfigSerializer; every
result leaves as a plain dict rendered by the result serializers.
"""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from django.conf import settings

from .central import GpiConfig, run_centralized, scenario_settled_at
from .distributed import DistConfig, run_distributed
from .exceptions import AssumptionViolation, GpiError, GraphFormatError
from .graphs import (
    default_delta,
    from_json,
    is_strongly_connected,
    laplacian,
    load_edge_list,
    max_weighted_indegree,
    random_strongly_connected,
)
from .netsim import congest_equivalent_rounds
from .reference_networks import get_reference_network
from .serializers import (
    CentralResultSerializer,
    DistResultSerializer,
    OracleReportSerializer,
)
from .spectral import gac_oracle


@dataclass
class ExperimentSource:
    graph: object
    label: str
    reference: Optional[object] = None


@dataclass
class ExperimentOutcome:
    mode: str
    source: ExperimentSource
    config: object
    summary: dict
    result: object = None


def gpi_defaults():
    return {
        'epsilon': settings.GPI_DEFAULT_EPSILON,
        'max_iter': settings.GPI_MAX_ITER,
        'l_max': settings.GPI_L_MAX,
        'm_max': settings.GPI_M_MAX,
        'eps_L': settings.GPI_EPS_L,
        'eps_M': settings.GPI_EPS_M,
        'schedule': settings.GPI_SCHEDULE,
        'workers': settings.GPI_MONTECARLO_WORKERS,
    }


# Helper function to turn the graph flags into a graph
def resolve_graph(data):
    if data.get('graph'):
        path = Path(data['graph'])
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as exc:
            raise GraphFormatError(f"cannot read {path}: {exc.strerror}")
        return ExperimentSource(graph=load_edge_list(text), label=path.name)

    if data.get('example'):
        ok, network = get_reference_network(data['example'])
        if not ok:
            raise GraphFormatError(network)
        return ExperimentSource(graph=network.graph(), label=network.name, reference=network)

    if data.get('gen'):
        n, prob, seed = data['gen']
        return ExperimentSource(
            graph=random_strongly_connected(n, prob, seed), label=f"gen-{n}-{prob}-{seed}")

    if data.get('graph_data') is not None:
        return ExperimentSource(graph=from_json(data['graph_data']), label='inline')

    raise GraphFormatError("no graph source given")


# Helper function to merge flags, published parameters and settings defaults
def build_config(source, data, defaults, distributed=False):
    reference = source.reference
    delta = data.get('delta')
    if delta is None:
        delta = reference.delta if reference is not None else default_delta(source.graph)
    epsilon = data.get('epsilon')
    if epsilon is None:
        epsilon = reference.epsilon if reference is not None else defaults['epsilon']

    x0 = data.get('x0')
    if x0 is None and reference is not None and data.get('seed') is None:
        x0 = reference.x0

    fields = {
        'delta': delta,
        'epsilon': epsilon,
        'max_iter': data.get('max_iter') or defaults['max_iter'],
        'seed': data.get('seed') or 0,
        'x0': tuple(x0) if x0 is not None else None,
    }
    if not distributed:
        return GpiConfig(**fields)
    return DistConfig(
        **fields,
        l_max=data.get('l_max') or defaults['l_max'],
        m_max=data.get('m_max') or defaults['m_max'],
        eps_L=defaults['eps_L'],
        eps_M=defaults['eps_M'],
        loop_schedule=data.get('schedule') or defaults['schedule'],
        observer=data.get('observer') or 'consensus',
    )


def oracle_report(g, delta=None):
    report = gac_oracle(laplacian(g), delta=delta, max_indegree=max_weighted_indegree(g))
    return OracleReportSerializer(report).data


def _finite_or_none(value):
    return value if math.isfinite(value) else None


def _source_info(source, cfg=None):
    info = {"graph": source.label, "n": source.graph.n, "edges": len(source.graph.edges)}
    if cfg is not None:
        info.update({"delta": cfg.delta, "epsilon": cfg.epsilon})
    return info


def run_oracle(data, defaults):
    source = resolve_graph(data)
    if not is_strongly_connected(source.graph):
        raise AssumptionViolation(f"{source.label} is not strongly connected")
    delta = data.get('delta')
    if delta is None and source.reference is not None:
        delta = source.reference.delta
    summary = {"mode": "oracle", **_source_info(source), **oracle_report(source.graph, delta)}
    return ExperimentOutcome(mode='oracle', source=source, config=None, summary=summary)


def run_centralized_experiment(data, defaults):
    """
    Raises NonConvergence with an ExperimentOutcome as ``result`` when the
    iteration cap is hit, so callers can still report the partial run.
    """
    source = resolve_graph(data)
    cfg = build_config(source, data, defaults)
    try:
        result = run_centralized(source.graph, cfg)
    except GpiError as exc:
        if getattr(exc, 'result', None) is not None:
            exc.result = _central_outcome(source, cfg, exc.result, data)
        raise
    return _central_outcome(source, cfg, result, data)


def _central_outcome(source, cfg, result, data):
    summary = {
        "mode": "centralized",
        **_source_info(source, cfg),
        **CentralResultSerializer(result).data,
        "scenario_settled_at": scenario_settled_at(result.trace),
    }
    if data.get('with_oracle'):
        oracle = oracle_report(source.graph, cfg.delta)
        summary["oracle_gac"] = oracle["gac"]
        summary["oracle_error"] = _finite_or_none(abs(result.estimate - oracle["gac"]))
    return ExperimentOutcome(mode='centralized', source=source, config=cfg, summary=summary, result=result)


def node_settled_at(traces):
    """Per node, the iteration from which its scenario no longer changes."""
    by_node = {}
    for record in traces:
        by_node.setdefault(record.node, []).append(record)
    return {node: scenario_settled_at(records) for node, records in sorted(by_node.items())}


def run_distributed_experiment(data, defaults):
    source = resolve_graph(data)
    cfg = build_config(source, data, defaults, distributed=True)
    try:
        result = run_distributed(source.graph, cfg)
    except GpiError as exc:
        if getattr(exc, 'result', None) is not None:
            exc.result = _dist_outcome(source, cfg, exc.result, data)
        raise
    return _dist_outcome(source, cfg, result, data)


def _dist_outcome(source, cfg, result, data):
    settled = node_settled_at(result.traces)
    summary = {
        "mode": "distributed",
        **_source_info(source, cfg),
        **DistResultSerializer(result).data,
        "congest_rounds": congest_equivalent_rounds(result.stats, source.graph.n),
        "scenario_settled_at": max((k for k in settled.values() if k is not None), default=None),
    }
    if data.get('with_oracle'):
        oracle = oracle_report(source.graph, cfg.delta)
        summary["oracle_gac"] = oracle["gac"]
        summary["oracle_error"] = _finite_or_none(max(abs(e - oracle["gac"]) for e in result.estimates))
    return ExperimentOutcome(mode='distributed', source=source, config=cfg, summary=summary, result=result)
