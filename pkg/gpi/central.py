import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import (
    AssumptionViolation,
    DegenerateSubspace,
    NonConvergence,
    RankDeficientBasis,
)
from .graphs import is_strongly_connected, laplacian, validate_delta
from .spectral import (
    dominant_2x2_magnitude,
    left_null_eigvec,
    modified_laplacian,
    project_g,
    subspace_dist_1d,
    subspace_dist_2d,
)

logger = logging.getLogger(__name__)


class Scenario(str, enum.Enum):
    REAL = 'R'
    IMAGINARY = 'I'
    UNDECIDED = 'Undecided'


class GpiConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=0)
    epsilon: float = Field(gt=0)
    max_iter: int = Field(default=500, ge=3)
    seed: int = 0
    # ties between the two distances go to the real branch
    tie_break: Literal['prefer_real'] = 'prefer_real'
    x0: Optional[Tuple[float, ...]] = None

    def check_against(self, g):
        ok, violation = validate_delta(g, self.delta)
        if not ok:
            raise AssumptionViolation(violation.message)
        if self.x0 is not None and len(self.x0) != g.n:
            raise AssumptionViolation(f"x0 has {len(self.x0)} entries but the graph has {g.n} vertices")


@dataclass(frozen=True)
class CentralState:
    """
    State after iteration k: x_cur is x_k, x_prev is x_{k-1}, x_prev2 is
    x_{k-2}. d_next and lam_tilde are the values carried into k+1.
    """
    k: int
    delta: float
    x_cur: np.ndarray
    x_prev: Optional[np.ndarray] = None
    x_prev2: Optional[np.ndarray] = None
    xbar_cur: Optional[np.ndarray] = None
    d_check: float = math.nan
    d_hat: float = math.nan
    d_next: float = math.nan
    lam_check: float = math.nan
    lam_hat: float = math.nan
    lam_tilde: float = math.nan
    scenario: Scenario = Scenario.UNDECIDED


@dataclass(frozen=True)
class TraceRecord:
    k: int
    d_check: float
    d_hat: float
    d: float
    lam_check: float
    lam_hat: float
    lam_tilde: float
    scenario: str

    @classmethod
    def from_state(cls, state):
        return cls(
            k=state.k, d_check=state.d_check, d_hat=state.d_hat, d=state.d_next,
            lam_check=state.lam_check, lam_hat=state.lam_hat, lam_tilde=state.lam_tilde,
            scenario=state.scenario.value,
        )


@dataclass
class CentralResult:
    estimate: float
    scenario: Scenario
    iterations: int
    trace: list = field(default_factory=list)
    converged: bool = True
    x0: Optional[np.ndarray] = None


def initial_vector(n, cfg):
    if cfg.x0 is not None:
        x0 = np.asarray(cfg.x0, dtype=float)
    else:
        x0 = np.random.default_rng(cfg.seed).standard_normal(n)
    norm = np.linalg.norm(x0)
    if norm == 0:
        raise AssumptionViolation("initial vector is zero")
    return x0 / norm


def init_central(Ltilde, cfg):
    x0 = initial_vector(Ltilde.matrix.shape[0], cfg)
    return CentralState(k=0, delta=cfg.delta, x_cur=x0, d_next=cfg.epsilon)


def select_branch(d_check, d_hat, lam_check, lam_hat, previous, delta):
    """
    Pick the smaller distance and turn the matching eigen-magnitude into a
    GAC estimate. A missing or nonpositive magnitude keeps ``previous``.
    Returns (d_next, lam_tilde, scenario).
    """
    if d_check <= d_hat:
        scenario, lam = Scenario.REAL, lam_check
    else:
        scenario, lam = Scenario.IMAGINARY, lam_hat
    d_next = min(d_check, d_hat)
    if lam is None or not math.isfinite(lam) or lam <= 0:
        return d_next, previous, scenario
    return d_next, (1.0 - math.log(lam)) / delta, scenario


def step_central(state, Ltilde):
    A = Ltilde.matrix if hasattr(Ltilde, 'matrix') else Ltilde
    k = state.k + 1
    x_prev = state.x_cur
    xbar = A @ x_prev
    norm = np.linalg.norm(xbar)
    if norm == 0:
        raise AssumptionViolation("iterate fell into the deflated null direction")
    x_cur = xbar / norm

    d_check = subspace_dist_1d(x_prev, x_cur)
    d_hat = 1.0
    if state.x_prev is not None:
        try:
            d_hat = subspace_dist_2d(state.x_prev, x_prev, x_cur)
        except DegenerateSubspace:
            logger.debug("k=%d: degenerate 2-d subspace, d_hat set to 1", k)

    lam_check = abs(float(np.dot(xbar, x_prev)))
    try:
        lam_hat = dominant_2x2_magnitude(project_g(A, np.column_stack([x_prev, x_cur])))
    except RankDeficientBasis:
        lam_hat = state.lam_hat

    d_next, lam_tilde, scenario = select_branch(
        d_check, d_hat, lam_check, lam_hat, state.lam_tilde, state.delta)
    logger.debug("k=%d d_check=%.3e d_hat=%.3e lam_tilde=%.6g scenario=%s",
                 k, d_check, d_hat, lam_tilde, scenario.value)

    return replace(
        state, k=k, x_prev2=state.x_prev, x_prev=x_prev, x_cur=x_cur, xbar_cur=xbar,
        d_check=d_check, d_hat=d_hat, d_next=d_next, lam_check=lam_check, lam_hat=lam_hat,
        lam_tilde=lam_tilde, scenario=scenario,
    )


def run_power_iteration(Ltilde, cfg):
    """
    Run the iteration on an already built operator (exact or truncated
    modified Laplacian) until d < epsilon.
    """
    state = init_central(Ltilde, cfg)
    x0 = state.x_cur
    trace = []
    while True:
        state = step_central(state, Ltilde)
        trace.append(TraceRecord.from_state(state))
        if state.d_next < cfg.epsilon:
            break
        if state.k >= cfg.max_iter:
            partial = CentralResult(
                estimate=state.lam_tilde, scenario=state.scenario, iterations=state.k,
                trace=trace, converged=False, x0=x0)
            raise NonConvergence(f"no convergence within {cfg.max_iter} iterations", result=partial)

    logger.info("centralized run converged: estimate=%.6g scenario=%s iterations=%d",
                state.lam_tilde, state.scenario.value, state.k)
    return CentralResult(
        estimate=state.lam_tilde, scenario=state.scenario, iterations=state.k, trace=trace, x0=x0)


def build_modified_laplacian(g, delta):
    if not is_strongly_connected(g):
        raise AssumptionViolation("graph is not strongly connected")
    L = laplacian(g)
    return modified_laplacian(L, left_null_eigvec(L), delta)


def run_centralized(g, cfg):
    cfg.check_against(g)
    return run_power_iteration(build_modified_laplacian(g, cfg.delta), cfg)


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    iterations: int
    estimate: float
    abs_error: float
    scenario: str


def epsilon_sweep(g, cfg, epsilons, reference_gac):
    """Trade-off between iteration count and accuracy over several thresholds."""
    cfg.check_against(g)
    Ltilde = build_modified_laplacian(g, cfg.delta)
    rows = []
    for eps in epsilons:
        run_cfg = cfg.model_copy(update={'epsilon': eps})
        try:
            result = run_power_iteration(Ltilde, run_cfg)
        except NonConvergence as exc:
            logger.warning("epsilon=%g did not converge within %d iterations", eps, cfg.max_iter)
            result = exc.result
        rows.append(SweepRow(
            epsilon=eps, iterations=result.iterations, estimate=result.estimate,
            abs_error=abs(result.estimate - reference_gac), scenario=result.scenario.value,
        ))
    return rows


def scenario_settled_at(trace):
    """
    First iteration k from which every later record carries the final
    scenario, or None for an empty trace.
    """
    if not trace:
        return None
    final = trace[-1].scenario
    settled = trace[-1].k
    for record in reversed(trace):
        if record.scenario != final:
            break
        settled = record.k
    return settled
