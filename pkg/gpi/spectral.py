import cmath
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    AssumptionViolation,
    DegenerateSubspace,
    EigenSolverError,
    MatrixExpError,
    NonUnitVector,
    RankDeficientBasis,
)

logger = logging.getLogger(__name__)

EIG_RESIDUAL_TOL = 1e-8
UNIT_TOL = 1e-10
PARALLEL_TOL = 1e-12
MAX_EXP_TERMS = 60


class DominantKind(enum.Enum):
    REAL = 'Real'
    COMPLEX_PAIR = 'ComplexPair'


@dataclass(frozen=True)
class SpectralTriplets:
    """
    Eigenvalues of A with unit right and left eigenvectors, sorted by
    nondecreasing magnitude. Column i of ``right`` / ``left`` belongs to
    ``eigenvalues[i]``; the left vector satisfies w^H A = lambda w^H.
    """
    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        for i, lam in enumerate(self.eigenvalues):
            yield lam, self.right[:, i], self.left[:, i]


@dataclass(frozen=True)
class ModifiedLaplacian:
    matrix: np.ndarray
    delta: float
    w1: np.ndarray


@dataclass(frozen=True)
class ApproxModifiedLaplacian:
    matrix: np.ndarray
    l_star: int
    delta: float
    w1: np.ndarray


@dataclass(frozen=True)
class GacReport:
    gac: float
    kind: DominantKind
    eigenvalues: np.ndarray
    delta: float = None
    max_indegree: float = None
    modified_eigenvalues: np.ndarray = None
    modified_estimate: float = None
    assumption_suspect: bool = False

    @property
    def delta_interval(self):
        if self.max_indegree is None:
            return None
        return (0.0, 1.0 / self.max_indegree)


def _normalize_columns(V):
    norms = np.linalg.norm(V, axis=0)
    norms[norms == 0] = 1.0
    return V / norms


def eig_dense(A):
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise EigenSolverError("matrix has non-finite entries", matrix=A)

    try:
        values, left, right = scipy.linalg.eig(A, left=True, right=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"eigensolver failed: {exc}", matrix=A)

    right = _normalize_columns(right)
    left = _normalize_columns(left)
    order = np.lexsort((values.imag, values.real, np.abs(values)))
    values, right, left = values[order], right[:, order], left[:, order]

    scale = max(np.linalg.norm(A, 2), 1.0)
    right_residual = np.linalg.norm(A @ right - right * values, axis=0).max()
    left_residual = np.linalg.norm(left.conj().T @ A - values[:, None] * left.conj().T, axis=1).max()
    residual = max(right_residual, left_residual)
    if residual > EIG_RESIDUAL_TOL * scale:
        raise EigenSolverError(
            f"eigen residual {residual:.3e} exceeds {EIG_RESIDUAL_TOL:g}*||A||", residual=residual, matrix=A)

    return SpectralTriplets(eigenvalues=values, right=right, left=left)


def left_null_eigvec(L):
    """
    Unit, elementwise positive left eigenvector of L for the zero eigenvalue.
    """
    L = np.asarray(L, dtype=float)
    scale = max(np.linalg.norm(L, 2), 1.0)

    magnitudes = np.sort(np.abs(np.linalg.eigvals(L)))
    if len(magnitudes) > 1 and magnitudes[1] <= EIG_RESIDUAL_TOL * scale:
        raise AssumptionViolation(
            f"zero eigenvalue is not simple: two smallest |lambda| are "
            f"{magnitudes[0]:.3e} and {magnitudes[1]:.3e}")

    # null vector of L^T is the last right singular vector
    _, _, vh = np.linalg.svd(L.T)
    w1 = vh[-1].real
    w1 = w1 / np.linalg.norm(w1)
    if w1.sum() < 0:
        w1 = -w1
    if np.any(w1 <= 0):
        raise AssumptionViolation("left null eigenvector is not elementwise positive; graph not strongly connected")

    residual = np.linalg.norm(w1 @ L)
    if residual > UNIT_TOL * scale:
        raise EigenSolverError(f"left null residual {residual:.3e} too large", residual=residual, matrix=L)
    return w1


def matrix_exp(A, tol=1e-14):
    """
    Scaling and squaring around a truncated Taylor series.

    A is scaled by 2^-s until its spectral norm is at most 1/2, the series
    is summed until the remainder bound drops below tol/2^s, then the
    result is squared s times.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    norm = np.linalg.norm(A, 2)
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    B = A / (2 ** squarings)
    b = norm / (2 ** squarings)
    target = tol / (2 ** squarings)

    result = np.eye(n)
    term = np.eye(n)
    for m in range(1, MAX_EXP_TERMS + 1):
        term = term @ B / m
        result = result + term
        remainder = b ** (m + 1) / math.factorial(m + 1) * math.exp(b)
        if remainder <= target:
            break
    else:
        raise MatrixExpError(
            f"tolerance {tol:g} not reached within {MAX_EXP_TERMS} Taylor terms")

    for _ in range(squarings):
        result = result @ result
    return result


def _require_unit(vec, name='vector'):
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > UNIT_TOL:
        raise NonUnitVector(f"{name} must have unit norm, got {norm:.12g}")


def modified_laplacian(L, w1, delta, tol=1e-14):
    L = np.asarray(L, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    _require_unit(w1, 'w1')
    n = L.shape[0]
    matrix = matrix_exp(np.eye(n) - delta * L, tol=tol) - math.e * np.outer(w1, w1)
    return ModifiedLaplacian(matrix=matrix, delta=delta, w1=w1)


def taylor_series_action(L, delta, x, l_star):
    """Sum_{j=0}^{l_star} (I - delta L)^j x / j!, one matrix-vector product per term."""
    L = np.asarray(L, dtype=float)
    y = np.asarray(x, dtype=float).copy()
    total = y.copy()
    for j in range(1, l_star + 1):
        y = y - delta * (L @ y)
        total = total + y / math.factorial(j)
    return total


def approx_modified_laplacian(L, w1, delta, l_star):
    if l_star < 1:
        raise ValueError(f"l_star must be at least 1, got {l_star}")
    L = np.asarray(L, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    _require_unit(w1, 'w1')
    n = L.shape[0]
    base = np.eye(n) - delta * L
    power = np.eye(n)
    series = np.eye(n)
    for j in range(1, l_star + 1):
        power = power @ base
        series = series + power / math.factorial(j)
    matrix = series - math.e * np.outer(w1, w1)
    return ApproxModifiedLaplacian(matrix=matrix, l_star=l_star, delta=delta, w1=w1)


def gac_oracle(L, delta=None, max_indegree=None):
    """
    Smallest nonzero real part over the Laplacian spectrum.

    When delta is given the result is cross-checked against the modified
    Laplacian: (1/delta)(1 - log max|lambda(L~)|) must agree within 1e-6.
    """
    L = np.asarray(L, dtype=float)
    triplets = eig_dense(L)
    values = triplets.eigenvalues
    scale = max(np.linalg.norm(L, 2), 1.0)
    imag_tol = EIG_RESIDUAL_TOL * scale

    magnitudes = np.abs(values)
    if len(magnitudes) > 1 and magnitudes[1] <= EIG_RESIDUAL_TOL * scale:
        raise AssumptionViolation(
            f"zero eigenvalue is not simple: two smallest |lambda| are "
            f"{magnitudes[0]:.3e} and {magnitudes[1]:.3e}; the graph is not connected")

    # sorted by magnitude, so index 0 is the zero eigenvalue
    nonzero = values[1:]
    idx = int(np.argmin(nonzero.real))
    achiever = nonzero[idx]
    gac = float(achiever.real)
    kind = DominantKind.COMPLEX_PAIR if abs(achiever.imag) > imag_tol else DominantKind.REAL

    ties = [lam for lam in nonzero
            if abs(lam.real - gac) <= imag_tol and lam.imag >= -imag_tol]
    suspect = len(ties) > 1
    if suspect:
        logger.warning("several eigenvalues share the minimal real part %.6g; "
                       "dominant modified eigenvalue may not be simple", gac)

    modified_values = None
    estimate = None
    if delta is not None:
        w1 = left_null_eigvec(L)
        Lt = modified_laplacian(L, w1, delta)
        modified_values = eig_dense(Lt.matrix).eigenvalues
        estimate = (1.0 - math.log(np.abs(modified_values).max())) / delta
        if abs(estimate - gac) > 1e-6:
            logger.warning("modified Laplacian estimate %.9g drifts from direct GAC %.9g", estimate, gac)

    return GacReport(
        gac=gac, kind=kind, eigenvalues=values, delta=delta, max_indegree=max_indegree,
        modified_eigenvalues=modified_values, modified_estimate=estimate,
        assumption_suspect=suspect,
    )


def _as_columns(Q):
    Q = np.asarray(Q)
    if Q.ndim == 1:
        Q = Q.reshape(-1, 1)
    return Q


def _gram(Q):
    G = Q.conj().T @ Q
    if np.linalg.cond(G) > 1e12:
        raise RankDeficientBasis("basis columns are parallel at tolerance")
    return G


def project_f(Q):
    """Orthogonal projector Q (Q^H Q)^-1 Q^H onto span(Q)."""
    Q = _as_columns(Q)
    G = _gram(Q)
    return Q @ np.linalg.solve(G, Q.conj().T)


def project_g(A, Q):
    """Projection (Q^H Q)^-1 Q^H A Q of A onto span(Q) in the Q basis."""
    Q = _as_columns(Q)
    G = _gram(Q)
    return np.linalg.solve(G, Q.conj().T @ np.asarray(A) @ Q)


def subspace_dist_1d(x1, x2):
    _require_unit(x1, 'x1')
    _require_unit(x2, 'x2')
    z = abs(np.vdot(x1, x2))
    return math.sqrt(max(0.0, 1.0 - z * z))


def subspace_dist_2d(x0, x1, x2):
    """Distance between span{x0, x1} and span{x1, x2} from three inner products."""
    for name, vec in (('x0', x0), ('x1', x1), ('x2', x2)):
        _require_unit(vec, name)
    z1 = np.vdot(x1, x2)
    z2 = np.vdot(x0, x1)
    z3 = np.vdot(x0, x2)
    if abs(z1) >= 1 - PARALLEL_TOL or abs(z2) >= 1 - PARALLEL_TOL:
        raise DegenerateSubspace("consecutive vectors are parallel")
    ratio = abs(z1 * z2 - z3) ** 2 / ((1 - abs(z1) ** 2) * (1 - abs(z2) ** 2))
    return math.sqrt(min(1.0, max(0.0, 1.0 - ratio)))


def dominant_2x2_magnitude(R):
    R = np.asarray(R, dtype=complex)
    half_trace = (R[0, 0] + R[1, 1]) / 2
    det = R[0, 0] * R[1, 1] - R[0, 1] * R[1, 0]
    # principal branch, "+" root only; for tr(R) < 0 this can be the smaller root
    root = cmath.sqrt(half_trace * half_trace - det)
    return abs(half_trace + root)
