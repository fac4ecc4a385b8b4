"""
Monte Carlo message-complexity study: the distributed algorithm on random
strongly connected digraphs of growing size, with CONGEST-equivalent round
counts next to an O(n)-payload baseline.

Kept free of Django imports so worker processes can unpickle run_trial.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from .distributed import DistConfig, run_distributed
from .exceptions import GpiError
from .graphs import default_delta, max_weighted_indegree, random_strongly_connected
from .netsim import congest_equivalent_rounds

logger = logging.getLogger(__name__)

MONTECARLO_DELTA_MARGIN = 0.01
MONTECARLO_EPSILON = 0.01


@dataclass(frozen=True)
class TrialOutcome:
    n: int
    trial: int
    ok: bool
    iterations: int = 0
    gpi_rounds: int = 0
    baseline_rounds: int = 0
    error: str = ''


@dataclass(frozen=True)
class MonteCarloRow:
    n: int
    trials: int
    failures: int
    mean_iterations: float
    mean_rounds: float
    std_rounds: float
    mean_baseline_rounds: float
    std_baseline_rounds: float


def trial_seeds(seed, n, trial):
    graph_seed, vector_seed = np.random.SeedSequence([seed, n, trial]).generate_state(2)
    return int(graph_seed), int(vector_seed)


def run_trial(n, trial, seed, edge_prob, max_iter, l_max, m_max):
    """One random digraph through the distributed algorithm; failures are reported, not raised."""
    graph_seed, vector_seed = trial_seeds(seed, n, trial)
    g = random_strongly_connected(n, edge_prob, graph_seed)
    delta = 1.0 / max_weighted_indegree(g) - MONTECARLO_DELTA_MARGIN
    if delta <= 0:
        delta = default_delta(g)
    cfg = DistConfig(delta=delta, epsilon=MONTECARLO_EPSILON, seed=vector_seed,
                     max_iter=max_iter, l_max=l_max, m_max=m_max)
    try:
        result = run_distributed(g, cfg)
    except GpiError as exc:
        return TrialOutcome(n=n, trial=trial, ok=False, error=f"{type(exc).__name__}: {exc}")
    return TrialOutcome(
        n=n, trial=trial, ok=True, iterations=result.iterations,
        gpi_rounds=congest_equivalent_rounds(result.stats, n),
        baseline_rounds=congest_equivalent_rounds(result.stats, n, payload_scale=n),
    )


def _summarize(n, outcomes):
    good = [o for o in outcomes if o.ok]
    if not good:
        return MonteCarloRow(n=n, trials=len(outcomes), failures=len(outcomes),
                             mean_iterations=math.nan, mean_rounds=math.nan, std_rounds=math.nan,
                             mean_baseline_rounds=math.nan, std_baseline_rounds=math.nan)
    rounds = np.array([o.gpi_rounds for o in good], dtype=float)
    baseline = np.array([o.baseline_rounds for o in good], dtype=float)
    return MonteCarloRow(
        n=n, trials=len(outcomes), failures=len(outcomes) - len(good),
        mean_iterations=float(np.mean([o.iterations for o in good])),
        mean_rounds=float(rounds.mean()), std_rounds=float(rounds.std()),
        mean_baseline_rounds=float(baseline.mean()), std_baseline_rounds=float(baseline.std()),
    )


def montecarlo(sizes, trials, seed, edge_prob=0.5, workers=1, max_iter=500, l_max=50, m_max=50,
               progress=False):
    """
    Repeat the distributed run on ``trials`` random digraphs per size and
    tabulate CONGEST-equivalent rounds next to an O(n)-payload baseline.
    Returns (rows, failed_trials).
    """
    jobs = [(n, t) for n in sizes for t in range(trials)]
    outcomes = {}
    bar = tqdm(total=len(jobs), desc="trials", disable=not progress)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(run_trial, n, t, seed, edge_prob, max_iter, l_max, m_max): (n, t)
                for n, t in jobs
            }
            for future in as_completed(futures):
                outcomes[futures[future]] = future.result()
                bar.update(1)
    else:
        for n, t in jobs:
            outcomes[(n, t)] = run_trial(n, t, seed, edge_prob, max_iter, l_max, m_max)
            bar.update(1)
    bar.close()

    failed = [o for _, o in sorted(outcomes.items()) if not o.ok]
    for outcome in failed:
        logger.warning("trial n=%d #%d failed: %s", outcome.n, outcome.trial, outcome.error)

    rows = [_summarize(n, [outcomes[(n, t)] for t in range(trials)]) for n in sizes]
    return rows, failed
