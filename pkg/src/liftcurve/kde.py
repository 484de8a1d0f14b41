"""Gaussian kernel density estimation of the bodyweight distribution.

The estimate is ``g(x) = (1/(n*h)) * sum_i K((x_i - x)/h)`` with the
standard Gaussian kernel ``K(u) = exp(-u^2/2)/sqrt(2*pi)`` and a Scott's
rule bandwidth. Two bandwidth conventions are supported:

* ``StdScaled`` (default): ``h = sample_std * n**(-1/5)`` -- the spread-
  scaled rule used by mainstream KDE implementations.
* ``PaperLiteral``: ``h = n**(-1/5)`` -- a bare number applied as kg,
  kept behind a flag for exact replication of pipelines that use it.

Evaluation is direct O(n*m) with fixed-size chunking (no tree or FFT
approximation), so results are bit-stable for a given model.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Chunk edges are fixed constants so that summation order, and therefore
# the exact float result, never depends on the environment.
_EVAL_CHUNK = 2048
_POINT_CHUNK = 8192


class BandwidthMode(enum.Enum):
    PAPER_LITERAL = "paper"
    STD_SCALED = "scaled"


def scott_bandwidth(
    n: int,
    sample_std: float | None = None,
    mode: BandwidthMode = BandwidthMode.STD_SCALED,
) -> float:
    """Scott's-rule bandwidth for a sample of size ``n``.

    ``sample_std`` (kg) is required for ``StdScaled`` and ignored for
    ``PaperLiteral``. Raises :class:`ValueError` for ``n < 2``.
    """
    if n < 2:
        raise ValueError(f"bandwidth needs at least 2 points, got n={n}")
    factor = float(n) ** -0.2
    if mode is BandwidthMode.PAPER_LITERAL:
        return factor
    if sample_std is None or not sample_std > 0:
        raise ValueError(f"StdScaled mode needs a positive sample_std, got {sample_std!r}")
    return sample_std * factor


@dataclass(frozen=True)
class KdeModel:
    """Fitted density model: sample points plus a positive bandwidth (kg)."""

    points: np.ndarray
    bandwidth: float
    bandwidth_mode: BandwidthMode = BandwidthMode.STD_SCALED

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError("points must be a non-empty 1-d array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.size


def fit_kde(
    points,
    mode: BandwidthMode = BandwidthMode.STD_SCALED,
    max_points: int | None = None,
    seed: int = 0,
) -> KdeModel:
    """Fit a :class:`KdeModel` to a sample of bodyweights.

    If ``max_points`` is given and the sample is larger, a uniform random
    subsample (seeded, without replacement) is used; bandwidth is then
    computed from the subsample. Intended for samples beyond ~5e5 points
    where exact O(n*m) evaluation gets expensive.
    """
    pts = np.asarray(points, dtype=float).ravel()
    if pts.size < 2:
        raise ValueError(f"KDE fit needs at least 2 points, got {pts.size}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    if max_points is not None and pts.size > max_points:
        rng = np.random.Generator(np.random.Philox(key=seed))
        idx = rng.choice(pts.size, size=max_points, replace=False)
        pts = pts[np.sort(idx)]
    std = float(np.std(pts, ddof=1))
    h = scott_bandwidth(pts.size, std, mode)
    return KdeModel(points=pts, bandwidth=h, bandwidth_mode=mode)


def density_batch(model: KdeModel, xs) -> np.ndarray:
    """Density (kg^-1) at each evaluation point.

    Direct summation over all model points, chunked over both axes to
    bound memory; strictly positive for finite inputs near the sample.
    """
    eval_x = np.asarray(xs, dtype=float).ravel()
    if not np.all(np.isfinite(eval_x)):
        raise ValueError("evaluation points must be finite")
    pts = model.points
    inv_h = 1.0 / model.bandwidth
    out = np.zeros(eval_x.size)
    for i in range(0, eval_x.size, _EVAL_CHUNK):
        chunk = eval_x[i : i + _EVAL_CHUNK]
        acc = np.zeros(chunk.size)
        for j in range(0, pts.size, _POINT_CHUNK):
            block = pts[j : j + _POINT_CHUNK]
            z = (block[None, :] - chunk[:, None]) * inv_h
            np.square(z, out=z)
            z *= -0.5
            np.exp(z, out=z)
            acc += z.sum(axis=1)
        out[i : i + _EVAL_CHUNK] = acc
    out /= model.n * model.bandwidth * _SQRT_2PI
    return out


def density(model: KdeModel, x: float) -> float:
    """Density (kg^-1) at a single point; equals ``density_batch`` elementwise."""
    return float(density_batch(model, np.asarray([x]))[0])


def export_density_csv(model: KdeModel, grid, path) -> None:
    """Write a two-column ``(x_kg, density)`` CSV over a caller-supplied grid."""
    grid = np.asarray(grid, dtype=float).ravel()
    values = density_batch(model, grid)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x_kg", "density"])
        for x, d in zip(grid, values):
            writer.writerow([repr(float(x)), repr(float(d))])
