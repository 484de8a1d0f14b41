"""Nonlinear least squares for growth-curve parameters.

A damped (Levenberg-Marquardt style) Gauss-Newton loop minimises
``sum((y_i - f(x_i))^2)`` over ``(L, k, x0)`` using the analytic parameter
Jacobian from :mod:`liftcurve.models`. Damping is multiplied up on
rejected steps and decayed on accepted ones, candidate parameters are
projected onto box bounds, and accepted steps never increase the sum of
squares. Local-minimum ties are broken by a deterministic 3-point
multi-start (auto init plus the same init with k perturbed by +-50%).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import GrowthParams, ModelFamily, evaluate, param_gradient

Bounds = tuple[tuple[float, float], tuple[float, float], tuple[float, float]]

_DAMPING_MAX = 1e12
_DAMPING_MIN = 1e-12


@dataclass(frozen=True)
class FitConfig:
    """Solver configuration; ``init=None`` triggers :func:`auto_init`."""

    family: ModelFamily
    init: GrowthParams | None = None
    bounds: Bounds | None = None
    max_iterations: int = 200
    tolerance: float = 1e-10
    damping_init: float = 1e-3

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.damping_init <= 0:
            raise ValueError(f"damping_init must be positive, got {self.damping_init}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.bounds is not None:
            for lo, hi in self.bounds:
                if not lo < hi:
                    raise ValueError(f"bounds need lo < hi, got ({lo}, {hi})")


@dataclass(frozen=True)
class FitResult:
    params: GrowthParams
    sse: float
    rmse: float
    iterations: int
    converged: bool
    covariance_proxy: np.ndarray  # (J^T J)^-1 scaled by residual variance

    def to_record(self) -> dict:
        """Serialisable summary (internal kg units)."""
        return {
            "family": self.params.family.value,
            "L": self.params.L,
            "k": self.params.k,
            "x0": self.params.x0,
            "sse": self.sse,
            "rmse": self.rmse,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _validate_data(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"x and y lengths differ: {x.size} vs {y.size}")
    if x.size < 10:
        raise ValueError(f"insufficient data: need at least 10 points, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("data must be finite")
    if not (np.all(x > 0) and np.all(y > 0)):
        raise ValueError("data must be positive (kg)")
    return x, y


def default_bounds(x: np.ndarray, y: np.ndarray) -> Bounds:
    """Box bounds that keep the exponentials from running away.

    L in (0, 3*max(y)], k in [1e-4, 1], x0 in [-100, min(x)+100].
    """
    y_max = float(np.max(y))
    return (
        (1e-9 * y_max, 3.0 * y_max),
        (1e-4, 1.0),
        (-100.0, float(np.min(x)) + 100.0),
    )


def auto_init(x, y, family: ModelFamily, bounds: Bounds | None = None) -> GrowthParams:
    """Data-driven starting point.

    ``L0 = 1.05*max(y)``; ``k0 = 2/range(x)``; the location starts below
    the data for Von Bertalanffy and two rate lengths under the median
    for the logistic. The result is projected into ``bounds``.
    """
    x, y = _validate_data(x, y)
    x_range = float(np.max(x) - np.min(x))
    if x_range <= 0:
        raise ValueError("degenerate x-range: max(x) == min(x)")
    L0 = 1.05 * float(np.max(y))
    k0 = 2.0 / x_range
    if family is ModelFamily.VON_BERTALANFFY:
        x0 = 0.25 * float(np.quantile(x, 0.01))
    else:
        x0 = float(np.median(x)) - 2.0 / k0
    if bounds is None:
        bounds = default_bounds(x, y)
    theta = _project(np.array([L0, k0, x0]), bounds)
    return GrowthParams(family=family, L=float(theta[0]), k=float(theta[1]), x0=float(theta[2]))


def _project(theta: np.ndarray, bounds: Bounds) -> np.ndarray:
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return np.clip(theta, lo, hi)


def _sse(family: ModelFamily, theta: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    params = GrowthParams(family=family, L=theta[0], k=theta[1], x0=theta[2])
    r = y - evaluate(params, x)
    return float(r @ r)


def _levenberg_marquardt(
    family: ModelFamily,
    start: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    bounds: Bounds,
    config: FitConfig,
) -> tuple[np.ndarray, float, int, bool]:
    """Single-start damped least squares; returns (theta, sse, iterations, converged)."""
    theta = _project(start, bounds)
    sse = _sse(family, theta, x, y)
    damping = config.damping_init
    iterations = 0
    converged = False
    tiny = np.finfo(float).tiny

    for iterations in range(1, config.max_iterations + 1):
        params = GrowthParams(family=family, L=theta[0], k=theta[1], x0=theta[2])
        residual = y - evaluate(params, x)
        jac = param_gradient(params, x)  # residual Jacobian is -jac
        gradient = jac.T @ residual  # -0.5 * grad(SSE)
        normal = jac.T @ jac
        diag = np.diag(np.maximum(np.diag(normal), 1e-300))

        accepted = False
        while damping <= _DAMPING_MAX:
            try:
                step = np.linalg.solve(normal + damping * diag, gradient)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.all(np.isfinite(step)):
                candidate = _project(theta + step, bounds)
                sse_new = _sse(family, candidate, x, y)
                if np.isfinite(sse_new) and sse_new <= sse:
                    accepted = True
                    break
            damping *= 10.0
        if not accepted:
            # max damping reached without an acceptable step
            return theta, sse, iterations, False

        change = sse - sse_new
        theta, sse = candidate, sse_new
        damping = max(damping * 0.1, _DAMPING_MIN)
        if change < config.tolerance * max(sse, tiny):
            converged = True
            break

    return theta, sse, iterations, converged


def fit(x, y, config: FitConfig) -> FitResult:
    """Fit growth-curve parameters to ``(bodyweight, total)`` data.

    Deterministic for fixed data and config. A solver that cannot make
    progress returns ``converged=False`` rather than raising.
    """
    x, y = _validate_data(x, y)
    bounds = config.bounds if config.bounds is not None else default_bounds(x, y)
    base = config.init if config.init is not None else auto_init(x, y, config.family, bounds)

    starts = [
        np.array([base.L, base.k, base.x0]),
        np.array([base.L, base.k * 1.5, base.x0]),
        np.array([base.L, base.k * 0.5, base.x0]),
    ]
    best: tuple[np.ndarray, float, int, bool] | None = None
    for start in starts:
        outcome = _levenberg_marquardt(config.family, start, x, y, bounds, config)
        if best is None:
            best = outcome
            continue
        # lowest SSE wins; ties go to the smaller rate
        if outcome[1] < best[1] or (outcome[1] == best[1] and outcome[0][1] < best[0][1]):
            best = outcome

    theta, sse, iterations, converged = best
    params = GrowthParams(
        family=config.family, L=float(theta[0]), k=float(theta[1]), x0=float(theta[2])
    )
    jac = param_gradient(params, x)
    dof = max(x.size - 3, 1)
    covariance = (sse / dof) * np.linalg.pinv(jac.T @ jac)
    return FitResult(
        params=params,
        sse=sse,
        rmse=float(np.sqrt(sse / x.size)),
        iterations=iterations,
        converged=converged,
        covariance_proxy=covariance,
    )
