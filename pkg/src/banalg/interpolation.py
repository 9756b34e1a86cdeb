"""Weighted complex-l1 minimum-norm interpolation and its dual.

Primal:  minimize sum_i w_i |a_i|   subject to  E a = sigma      (a complex)
Dual:    maximize |sum_j c_j sigma_j|  subject to  |(E^T c)_i| <= w_i  for all i

The dual constraint says the functional sum_j c_j phi_j has weighted dual
norm at most one, so any feasible c certifies a lower bound and any feasible
a certifies an upper bound; the solver closes the gap between the two and
returns both sides.

Method: lift each complex coordinate to an R^2 pair and run a log-barrier
Newton method on the dual cone program
    maximize  b.y + mu * sum_i log(w_i^2 - |z_i|^2),   z = A^T y,
shrinking mu stagewise.  The barrier gradient hands back a central-path
primal point x_i = (2 mu / s_i) z_i which is corrected onto the constraint
set by least squares.  Once the support of x is visible, an exact solve on
the support (with the matching stationarity system for the certificate)
polishes both sides to machine precision; if the polish is rejected the
stages simply continue.  When E is square and invertible (semisimple case:
as many characters as dimensions) the primal is a single linear solve and
no iteration runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BseError

GAP_REL = 1e-8  # relative primal-dual gap target
GAP_HARD_LIMIT = 1e-6  # beyond this the solve is reported as failed


@dataclass
class InterpolationSolution:
    """Feasible primal/dual pair with a certified gap.

    value is the primal objective of the returned (feasible) interpolant;
    dual_value = |sum_j c_j sigma_j| for the returned (feasible) certificate;
    the true optimum lies in [dual_value, value].  unique reports whether the
    minimizer is the only one (None when undetermined); the norm value, not
    the minimizer, is the contractual output either way.
    """

    a: np.ndarray
    c: np.ndarray
    value: float
    dual_value: float
    gap: float
    method: str  # "square" | "barrier" | "barrier+polish"
    unique: bool | None = None


def _real_lift(E: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s, n = E.shape
    A = np.zeros((2 * s, 2 * n))
    A[0::2, 0::2] = E.real
    A[0::2, 1::2] = -E.imag
    A[1::2, 0::2] = E.imag
    A[1::2, 1::2] = E.real
    b = np.zeros(2 * s)
    b[0::2] = sigma.real
    b[1::2] = sigma.imag
    return A, b


def interpolation_residual(E: np.ndarray, a: np.ndarray, sigma: np.ndarray) -> float:
    return float(np.max(np.abs(E @ a - sigma), initial=0.0))


def certificate_slack(E: np.ndarray, c: np.ndarray, w: np.ndarray) -> float:
    """max_i |(E^T c)_i| - w_i; feasible certificates have slack <= 0."""
    return float(np.max(np.abs(E.T @ c) - w))


def certificate_value(c: np.ndarray, sigma: np.ndarray) -> float:
    return float(abs(c @ sigma))


def _scale_into_feasibility(E: np.ndarray, c: np.ndarray, w: np.ndarray) -> np.ndarray:
    ratio = float(np.max(np.abs(E.T @ c) / w))
    if ratio > 1.0:
        c = c / ratio
    return c


def _try_polish(E: np.ndarray, sigma: np.ndarray, w: np.ndarray,
                x_groups: np.ndarray
                ) -> tuple[np.ndarray, np.ndarray, float, bool] | None:
    """Exact solve on the support visible in the barrier iterate.

    Vertex case (support size <= #constraints): solve the square system for
    the interpolant and the stationarity system for the certificate.
    Face case (larger support, non-unique minimizer): the certificate still
    satisfies the overdetermined stationarity equations with the iterate's
    phases; the primal candidate is the least-squares interpolant on the
    support.  Returns None when the candidate fails its feasibility checks.
    """
    s, n = E.shape
    group_norms = np.linalg.norm(x_groups, axis=1)
    top = float(np.max(group_norms, initial=0.0))
    if top <= 0.0:
        return None
    support = np.flatnonzero(group_norms > 1e-7 * top)
    sig_scale = max(1.0, float(np.max(np.abs(sigma))))

    best: tuple[np.ndarray, np.ndarray, float, bool] | None = None
    candidates = [support]
    if support.size > s:
        trimmed = support[np.argsort(-group_norms[support])[:s]]
        trimmed.sort()
        candidates.append(trimmed)
    for T in candidates:
        Et = E[:, T]
        if T.size == s:
            try:
                at = np.linalg.solve(Et, sigma)
            except np.linalg.LinAlgError:
                continue
        else:
            at, *_ = np.linalg.lstsq(Et, sigma, rcond=None)
        a = np.zeros(n, dtype=complex)
        a[T] = at
        if interpolation_residual(E, a, sigma) > 1e-11 * sig_scale:
            continue
        # stationarity: (E^T c)_i = w_i * conj(a_i)/|a_i| on the support;
        # in the face case take the phases from the barrier iterate instead
        if T.size <= s:
            live = np.abs(at) > 0
            d = w[T][live] * np.conj(at[live]) / np.abs(at[live])
            rows = Et[:, live].T
        else:
            phases = x_groups[T, 0] + 1j * x_groups[T, 1]
            d = w[T] * np.conj(phases) / np.abs(phases)
            rows = Et.T
        if rows.shape[0] == rows.shape[1]:
            try:
                c = np.linalg.solve(rows, d)
            except np.linalg.LinAlgError:
                continue
        else:
            c, *_ = np.linalg.lstsq(rows, d, rcond=None)
        if not np.all(np.isfinite(c.view(float))):
            continue
        c = _scale_into_feasibility(E, c, w)
        value = float(np.sum(w * np.abs(a)))
        gap = value - certificate_value(c, sigma)
        # strictly slack dual constraints off the support certify uniqueness
        slacks = np.abs(E.T @ c) / w
        off = np.setdiff1d(np.arange(n), T)
        unique = T.size <= s and bool(
            np.all(slacks[off] < 1.0 - 1e-8) if off.size else True
        )
        if best is None or gap < best[2]:
            best = (a, c, gap, unique)
    return best


def _solve_cone(E: np.ndarray, sigma: np.ndarray, w: np.ndarray,
                gap_rel: float) -> InterpolationSolution:
    """Barrier stages with per-stage polish attempts; best certified pair wins."""
    s, n = E.shape
    sn = float(np.max(np.abs(sigma)))
    sig = sigma / sn
    A, b = _real_lift(E, sig)
    pinv = np.linalg.pinv(A)
    Ag = np.ascontiguousarray(A.reshape(2 * s, n, 2).transpose(1, 0, 2))  # (n, 2s, 2)
    w2 = w * w
    bnorm = max(1.0, float(np.linalg.norm(b)))

    def eval_state(yv):
        z = (A.T @ yv).reshape(n, 2)
        s_i = w2 - np.sum(z * z, axis=1)
        return z, s_i

    def barrier_value(yv, mu):
        z, s_i = eval_state(yv)
        if np.any(s_i <= 0):
            return -np.inf
        return float(b @ yv + mu * np.sum(np.log(s_i)))

    x0 = pinv @ b  # min-2-norm interpolant: feasible fallback and mu scale
    v0 = float(np.sum(w * np.linalg.norm(x0.reshape(n, 2), axis=1)))
    best_x, best_y = x0, np.zeros(2 * s)
    best_gap = v0
    best_polished = None

    mu = max(v0, 1.0) / max(n, 1)
    y = np.zeros(2 * s)
    stalled = 0
    for _stage in range(40):
        prev_gap = best_gap
        for _it in range(25):
            z, s_i = eval_state(y)
            u = (2.0 * mu / s_i)[:, None] * z
            grad = b - A @ u.reshape(-1)
            if float(np.linalg.norm(grad)) <= 1e-11 * bnorm:
                break
            scale1 = 2.0 * mu / s_i
            scale2 = 4.0 * mu / (s_i * s_i)
            H = np.einsum("irt,i,ist->rs", Ag, scale1, Ag)
            V = np.einsum("irt,it->ri", Ag, z)  # (2s, n): columns A_i z_i
            H += (V * scale2) @ V.T
            H[np.diag_indices_from(H)] += 1e-14 * float(np.max(np.abs(H)))
            try:
                p = np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                p, *_ = np.linalg.lstsq(H, grad, rcond=None)
            decrement = float(grad @ p)
            g0 = barrier_value(y, mu)
            if not np.isfinite(decrement) or decrement <= 1e-16 * max(1.0, abs(g0)):
                break
            t = 1.0
            for _ls in range(60):
                if barrier_value(y + t * p, mu) >= g0 + 0.25 * t * decrement:
                    break
                t *= 0.5
            else:
                break
            y = y + t * p
        z, s_i = eval_state(y)
        x = ((2.0 * mu / s_i)[:, None] * z).reshape(-1)
        x = x + pinv @ (b - A @ x)
        gap = float(np.sum(w * np.linalg.norm(x.reshape(n, 2), axis=1))) - float(b @ y)
        if gap < best_gap:
            best_gap, best_x, best_y = gap, x, y
        if best_gap <= 1e-2:
            polished = _try_polish(E, sig, w, x.reshape(n, 2))
            if polished is not None and polished[2] <= min(best_gap, gap_rel):
                best_polished = polished
                break
        if best_gap <= gap_rel:
            break
        stalled = stalled + 1 if gap > 0.97 * prev_gap else 0
        if stalled >= 3:
            break
        mu *= 0.1

    if best_polished is not None:
        a, c, gap, unique = best_polished
        method = "barrier+polish"
    else:
        a = best_x[0::2] + 1j * best_x[1::2]
        c = best_y[0::2] - 1j * best_y[1::2]
        c = _scale_into_feasibility(E, c, w)
        gap = best_gap
        method = "barrier"
        unique = None
    a = sn * a
    value = float(np.sum(w * np.abs(a)))
    dual_value = certificate_value(c, sigma)
    gap = value - dual_value
    if gap > GAP_HARD_LIMIT * max(1.0, value):
        raise BseError(
            f"interpolation solver failed to certify the optimum "
            f"(relative gap {gap / max(1.0, value):.3e})"
        )
    return InterpolationSolution(a, c, value, dual_value, gap, method, unique)


def solve_primal(E: np.ndarray, sigma: np.ndarray, w: np.ndarray,
                 gap_rel: float = GAP_REL) -> InterpolationSolution:
    """Primal route: exact linear solve when E is square, cone solver otherwise.

    Always returns a feasible interpolant and a feasible dual certificate
    whose values bracket the optimum within the achieved gap.
    """
    E = np.asarray(E, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    w = np.asarray(w, dtype=float)
    s, n = E.shape
    if s == 0:
        raise BseError("empty constraint system")
    if not np.any(np.abs(sigma) > 0):
        return InterpolationSolution(
            np.zeros(n, dtype=complex), np.zeros(s, dtype=complex), 0.0, 0.0, 0.0,
            "square" if s == n else "barrier", unique=True,
        )
    if s == n:
        # full-rank square system: the interpolation constraints pin a uniquely
        a = np.linalg.solve(E, sigma)
        value = float(np.sum(w * np.abs(a)))
        # dual certificate: the interpolant's phases pushed through E^{-T}
        mags = np.abs(a)
        live = mags > 1e-14 * float(np.max(mags))
        d = np.where(live, w * np.conj(a) / np.where(live, mags, 1.0), 0.0)
        c = np.linalg.solve(E.T, d)
        c = _scale_into_feasibility(E, c, w)
        dual_value = certificate_value(c, sigma)
        return InterpolationSolution(a, c, value, dual_value,
                                     value - dual_value, "square", unique=True)
    return _solve_cone(E, sigma, w, gap_rel)


def solve_dual(E: np.ndarray, sigma: np.ndarray, w: np.ndarray,
               gap_rel: float = GAP_REL) -> tuple[float, np.ndarray]:
    """Dual route: run the cone program itself and report the certificate side.

    Runs regardless of the shape of E, so on semisimple instances (square E)
    this is an independent computation from the primal's plain linear solve.
    """
    E = np.asarray(E, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    w = np.asarray(w, dtype=float)
    if E.shape[0] == 0:
        raise BseError("empty constraint system")
    if not np.any(np.abs(sigma) > 0):
        return 0.0, np.zeros(E.shape[0], dtype=complex)
    sol = _solve_cone(E, sigma, w, gap_rel)
    return sol.dual_value, sol.c
