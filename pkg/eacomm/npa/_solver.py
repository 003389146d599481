from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
import math
import time

import numpy as np
import optuna
from scipy import linalg
from scipy import sparse

from eacomm._errors import SolverError
from eacomm.npa._sdp import SdpProblem


_logger = optuna.logging.get_logger(__name__)

MAX_SIZE = 500
MAX_VARIABLES = 10000
INACCURATE_TOL = 1e-5

_STEP_FRACTION = 0.95
_STALL_STEP = 1e-10
_STALL_LIMIT = 3


@dataclass(frozen=True, eq=False)
class SdpResult:
    """Outcome of :func:`solve_sdp`.

    ``primal_objective`` is attained by the moments ``y``; ``dual_objective`` is certified by
    the dual matrix. Both include the problem offset. ``value`` is the larger of the two, so
    it never undershoots the optimum by the remaining gap.
    """

    status: str
    primal_objective: float
    dual_objective: float
    gap: float
    primal_infeasibility: float
    dual_infeasibility: float
    iterations: int
    moments: np.ndarray = field(repr=False)
    elapsed: float

    @property
    def value(self) -> float:
        return max(self.primal_objective, self.dual_objective)


class _Operator:
    """y ↦ Σ y_k A_k, its adjoint and the Schur complement ⟨A_i, W A_j W⟩."""

    def __init__(self, coefficients: sparse.csr_matrix, n: int) -> None:
        self.n = n
        self.forward = coefficients.tocsr()
        self.forward.sort_indices()
        self.transpose = self.forward.T.tocsr()

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.forward @ x.ravel()

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        return (self.transpose @ y).reshape(self.n, self.n)

    def schur(self, w: np.ndarray) -> np.ndarray:
        m = self.forward.shape[0]
        schur = np.empty((m, m))
        indptr, indices, data = self.forward.indptr, self.forward.indices, self.forward.data
        for k in range(m):
            p, q = np.divmod(indices[indptr[k] : indptr[k + 1]], self.n)
            scaled = (w[:, p] * data[indptr[k] : indptr[k + 1]]) @ w[q, :]
            schur[:, k] = self.forward @ scaled.ravel()
        return 0.5 * (schur + schur.T)


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def _max_step(chol: np.ndarray, delta: np.ndarray) -> float:
    """Largest α with L Lᵀ + α Δ ⪰ 0."""
    scaled = linalg.solve_triangular(chol, delta, lower=True)
    scaled = linalg.solve_triangular(chol, scaled.T, lower=True)
    smallest = float(linalg.eigh(_sym(scaled), eigvals_only=True)[0])
    return math.inf if smallest >= 0.0 else -1.0 / smallest


def _factor(schur: np.ndarray) -> tuple[np.ndarray, bool]:
    try:
        return linalg.cho_factor(schur, lower=True)
    except np.linalg.LinAlgError:
        shift = 1e-12 * max(1.0, float(np.max(np.abs(np.diag(schur)))))
        _logger.debug(f"Schur complement regularized by {shift:.1e}.")
        return linalg.cho_factor(schur + shift * np.eye(schur.shape[0]), lower=True)


def _direction(
    op: _Operator,
    factor: tuple[np.ndarray, bool],
    w: np.ndarray,
    r_p: np.ndarray,
    r_d: np.ndarray,
    r_c: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rhs = op.apply(r_c - w @ r_d @ w) - r_p
    dy = linalg.cho_solve(factor, rhs)
    dz = r_d + op.adjoint(dy)
    dx = _sym(r_c - w @ dz @ w)
    return dx, dy, _sym(dz)


def _newton_step(
    op: _Operator, x: np.ndarray, z: np.ndarray, r_p: np.ndarray, r_d: np.ndarray
) -> tuple[float, float, np.ndarray, np.ndarray, np.ndarray]:
    """Mehrotra predictor-corrector step with Nesterov-Todd scaling.

    With X = L Lᵀ and Lᵀ Z L = U diag(d²) Uᵀ, G = L U diag(d)^(-1/2) scales both X and Z to
    diag(d) and W = G Gᵀ satisfies W Z W = X.
    """
    n = x.shape[0]
    chol_x = linalg.cholesky(x, lower=True)
    chol_z = linalg.cholesky(z, lower=True)
    s, u = linalg.eigh(chol_x.T @ z @ chol_x)
    if s[0] <= 0.0:
        raise np.linalg.LinAlgError("The iterate left the positive definite cone.")
    d = np.sqrt(s)
    g = chol_x @ u / np.sqrt(d)
    g_inv = (np.sqrt(d)[:, None] * u.T) @ linalg.solve_triangular(
        chol_x, np.eye(n), lower=True
    )
    w = g @ g.T
    mu = float(np.sum(s)) / n
    factor = _factor(op.schur(w))

    dx, dy, dz = _direction(op, factor, w, r_p, r_d, -x)
    alpha_x = min(1.0, _STEP_FRACTION * _max_step(chol_x, dx))
    alpha_z = min(1.0, _STEP_FRACTION * _max_step(chol_z, dz))
    mu_affine = float(np.sum((x + alpha_x * dx) * (z + alpha_z * dz))) / n
    sigma = min(1.0, (mu_affine / mu) ** 3)

    dx_scaled = g_inv @ dx @ g_inv.T
    dz_scaled = g.T @ dz @ g
    target = sigma * mu * np.eye(n) - np.diag(s) - _sym(dx_scaled @ dz_scaled)
    r_c = g @ (2.0 * target / (d[:, None] + d[None, :])) @ g.T
    dx, dy, dz = _direction(op, factor, w, r_p, r_d, _sym(r_c))
    alpha_x = min(1.0, _STEP_FRACTION * _max_step(chol_x, dx))
    alpha_z = min(1.0, _STEP_FRACTION * _max_step(chol_z, dz))
    return alpha_x, alpha_z, dx, dy, dz


def solve_sdp(
    problem: SdpProblem,
    tol: float = 1e-7,
    max_iters: int = 200,
    time_limit: float | None = None,
) -> SdpResult:
    """Solve ``problem`` with a dense primal-dual interior-point method.

    The moment side ``max b·y s.t. C + Σ y_k A_k ⪰ 0`` is solved together with its dual
    ``min ⟨C, X⟩ s.t. ⟨A_k, X⟩ = −b_k, X ⪰ 0`` from the infeasible start X = ξI, Z = ηI.
    Iterations stop once the relative gap and both relative infeasibilities are below ``tol``.

    Args:
        problem:
            The SDP to solve.
        tol:
            Target for the relative gap and infeasibilities.
        max_iters:
            Iteration cap.
        time_limit:
            Optional wall-clock limit in seconds.

    Returns:
        An :class:`SdpResult` with status ``"optimal"``, or ``"inaccurate"`` when the solver
        stalled with all measures below ``INACCURATE_TOL``.

    Raises:
        ValueError: The problem is empty or exceeds the dense solver limits.
        SolverError: No convergence; the partial result is attached.
    """
    n, m = problem.size, problem.num_variables
    if n > MAX_SIZE or m > MAX_VARIABLES:
        raise ValueError(
            f"Problem with a {n}×{n} matrix and {m} variables exceeds the dense solver limits "
            f"({MAX_SIZE}, {MAX_VARIABLES}); export it with export_sdpa instead."
        )
    if n == 0 or m == 0:
        raise ValueError("The problem has no matrix or no variables.")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}.")

    op = _Operator(problem.coefficients, n)
    b = problem.objective
    c = problem.constant
    norm_b = float(linalg.norm(b))
    norm_c = float(linalg.norm(c))
    row_norms = np.sqrt(np.asarray(op.forward.multiply(op.forward).sum(axis=1)).ravel())
    xi = max(10.0, math.sqrt(n), n * float(np.max((1.0 + np.abs(b)) / (1.0 + row_norms))))
    eta = max(10.0, math.sqrt(n), (1.0 + max(norm_c, float(row_norms.max()))) / math.sqrt(n))
    x = xi * np.eye(n)
    z = eta * np.eye(n)
    y = np.zeros(m)

    started = time.perf_counter()
    iterations = 0
    stalls = 0
    failure = None
    while True:
        r_d = c + op.adjoint(y) - z
        r_p = -b - op.apply(x)
        primal = float(b @ y) + problem.offset
        dual = float(np.sum(c * x)) + problem.offset
        gap = abs(dual - primal) / (1.0 + abs(primal) + abs(dual))
        primal_infeasibility = float(linalg.norm(r_d)) / (1.0 + norm_c)
        dual_infeasibility = float(linalg.norm(r_p)) / (1.0 + norm_b)
        _logger.debug(
            f"Iteration {iterations}: primal {primal:.10f}, dual {dual:.10f}, gap {gap:.2e}, "
            f"infeasibility {primal_infeasibility:.2e}/{dual_infeasibility:.2e}."
        )
        if max(gap, primal_infeasibility, dual_infeasibility) <= tol:
            break
        if iterations >= max_iters:
            failure = f"no convergence within {max_iters} iterations"
            break
        if time_limit is not None and time.perf_counter() - started > time_limit:
            failure = f"time limit of {time_limit} s reached"
            break
        try:
            alpha_x, alpha_z, dx, dy, dz = _newton_step(op, x, z, r_p, r_d)
        except np.linalg.LinAlgError as e:
            failure = f"numerical breakdown ({e})"
            break
        x = _sym(x + alpha_x * dx)
        y = y + alpha_z * dy
        z = _sym(z + alpha_z * dz)
        iterations += 1
        stalls = stalls + 1 if max(alpha_x, alpha_z) < _STALL_STEP else 0
        if stalls >= _STALL_LIMIT:
            failure = "step size stagnation"
            break

    worst = max(gap, primal_infeasibility, dual_infeasibility)
    if failure is None:
        status = "optimal"
    elif worst <= INACCURATE_TOL:
        status = "inaccurate"
    else:
        status = "failed"
    result = SdpResult(
        status=status,
        primal_objective=primal,
        dual_objective=dual,
        gap=gap,
        primal_infeasibility=primal_infeasibility,
        dual_infeasibility=dual_infeasibility,
        iterations=iterations,
        moments=y,
        elapsed=time.perf_counter() - started,
    )
    if status == "failed":
        raise SolverError(f"SDP solver stopped: {failure} (worst measure {worst:.2e}).", result)
    if status == "inaccurate":
        _logger.warning(f"SDP solver stopped: {failure}; returning a solution at {worst:.2e}.")
    else:
        _logger.info(
            f"SDP solved in {iterations} iterations ({result.elapsed:.2f} s): {primal:.10f}."
        )
    return result
