"""Detrended covariances per window and their aggregation over scales.

For every scale s the two input series are cut into floor(T/s) windows,
regressed window-by-window on the external forces, profiled, and locally
detrended; the signed mean product of the two detrended profiles is the
window covariance F_v^2. Aggregation keeps two views of it:

* the exponent pipeline uses |F_v^2|, giving F(q, s) = [mean_v
  |F_v^2|^(q/2)]^(1/q) for q != 0 and the logarithmic average
  exp(mean_v ln |F_v^2|^(1/2)) at q = 0, so F(q, s) is always defined;
* the signed mean of F_v^2 is kept per scale (``cov2``) because the
  correlation coefficient rho(s) needs the sign to be able to go negative.

With zero force columns the pipeline reduces exactly to detrended
cross-correlation analysis, and with identical inputs to plain detrended
fluctuation analysis; both reductions are bitwise, not statistical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import QGrid, ScaleGrid, TimeSeries, _frozen_array, validate_series
from .detrend import (
    DetrendConfig,
    ForceMatrix,
    series_pair,
    window_residual_profiles,
)
from .errors import DegenerateInputError, ShapeError

KIND_DFA = "DFA"
KIND_DCCA = "DCCA"
KIND_DPXA = "DPXA"

# q values this close to zero route to the logarithmic-average branch
Q_ZERO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FluctuationSurface:
    """F(q, s) over the order/scale grids plus the signed per-scale mean
    window covariance at q = 2."""

    scales: ScaleGrid
    orders: QGrid
    F: np.ndarray            # shape (len(orders), len(scales)), >= 0
    cov2: np.ndarray         # shape (len(scales),), signed
    kind: str
    zero_windows: np.ndarray  # per-scale count of exactly degenerate windows

    def __post_init__(self):
        object.__setattr__(self, "F", _frozen_array(self.F))
        object.__setattr__(self, "cov2", _frozen_array(self.cov2))
        object.__setattr__(self, "zero_windows",
                           _frozen_array(self.zero_windows, dtype=int))


@dataclass(frozen=True, eq=False)
class RhoCurve:
    """Scale-dependent detrended correlation coefficient, in [-1, 1]."""

    scales: ScaleGrid
    rho: np.ndarray
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "rho", _frozen_array(self.rho))


def window_cov(rx, ry) -> float:
    """Signed mean product of two already-detrended window profiles."""
    a = np.asarray(rx, dtype=float)
    b = np.asarray(ry, dtype=float)
    if a.shape != b.shape:
        raise ShapeError(f"window shapes differ: {a.shape} != {b.shape}")
    return float(np.mean(a * b))


def _force_data(forces: ForceMatrix | None, length: int) -> np.ndarray | None:
    if forces is None:
        return None
    if forces.length != length:
        raise ShapeError(
            f"force length {forces.length} != series length {length}"
        )
    return forces.data if forces.p > 0 else None


def _pair_profiles(x: TimeSeries, y: TimeSeries, fdata, s: int,
                   cfg: DetrendConfig):
    dx = window_residual_profiles(x.values, fdata, s, cfg)
    if y is x:
        return dx, dx
    return dx, window_residual_profiles(y.values, fdata, s, cfg)


def _aggregate(f2: np.ndarray, q: float) -> float:
    absf2 = np.abs(f2)
    if abs(q) <= Q_ZERO_TOL:
        mask = absf2 > 0.0
        return float(np.exp(0.5 * np.mean(np.log(absf2[mask]))))
    with np.errstate(divide="ignore"):
        moments = absf2 ** (q / 2.0)
    return float(np.mean(moments) ** (1.0 / q))


def fluctuation_dpxa(x, y, forces: ForceMatrix | None, scales: ScaleGrid,
                     orders: QGrid, cfg: DetrendConfig = DetrendConfig(),
                     kind: str | None = None) -> FluctuationSurface:
    """Full fluctuation surface F(q, s) of two series given external forces.

    ``forces=None`` (or an empty ForceMatrix) computes DCCA; passing the
    same object for x and y computes DFA.
    """
    xs, ys = series_pair(x, y)
    if y is x or y is xs:
        ys = xs
    scales.check_series_length(len(xs))
    fdata = _force_data(forces, len(xs))
    if kind is None:
        kind = KIND_DPXA if fdata is not None else (
            KIND_DFA if ys is xs else KIND_DCCA)

    qs = orders.orders
    F = np.empty((qs.size, len(scales)))
    cov2 = np.empty(len(scales))
    zeros = np.empty(len(scales), dtype=int)
    for j, s in enumerate(scales.scales):
        dx, dy = _pair_profiles(xs, ys, fdata, int(s), cfg)
        f2 = np.mean(dx * dy, axis=1)
        if np.all(f2 == 0.0):
            raise DegenerateInputError(
                f"all {f2.size} windows are exactly degenerate at scale {s}"
            )
        cov2[j] = f2.mean()
        zeros[j] = int(np.count_nonzero(f2 == 0.0))
        for i, q in enumerate(qs):
            F[i, j] = _aggregate(f2, float(q))
    return FluctuationSurface(scales, orders, F, cov2, kind, zeros)


def fluctuation_dcca(x, y, scales: ScaleGrid, orders: QGrid,
                     cfg: DetrendConfig = DetrendConfig()) -> FluctuationSurface:
    """Detrended cross-correlation fluctuations (no external forces)."""
    return fluctuation_dpxa(x, y, None, scales, orders, cfg, kind=KIND_DCCA)


def fluctuation_dfa(x, scales: ScaleGrid, orders: QGrid,
                    cfg: DetrendConfig = DetrendConfig()) -> FluctuationSurface:
    """Detrended fluctuation analysis of a single series."""
    xs = validate_series(x)
    return fluctuation_dpxa(xs, xs, None, scales, orders, cfg, kind=KIND_DFA)


def rho_curve(x, y, forces: ForceMatrix | None, scales: ScaleGrid,
              cfg: DetrendConfig = DetrendConfig()) -> RhoCurve:
    """Detrended (partial) cross-correlation coefficient per scale.

    The numerator is the signed mean window covariance of the pair; the
    denominators are the second-order fluctuations of each series run
    through the same force regression. Cauchy-Schwarz bounds the result
    to [-1, 1].
    """
    xs, ys = series_pair(x, y)
    scales.check_series_length(len(xs))
    fdata = _force_data(forces, len(xs))
    kind = KIND_DPXA if fdata is not None else KIND_DCCA

    rho = np.empty(len(scales))
    for j, s in enumerate(scales.scales):
        dx, dy = _pair_profiles(xs, ys, fdata, int(s), cfg)
        cov_xy = float(np.mean(dx * dy))
        var_x = float(np.mean(dx * dx))
        var_y = float(np.mean(dy * dy))
        denom = np.sqrt(var_x * var_y)
        if denom == 0.0:
            raise DegenerateInputError(
                f"constant residuals give a zero denominator at scale {s}"
            )
        value = cov_xy / denom
        if abs(value) > 1.0 + 1e-9:
            raise DegenerateInputError(
                f"correlation {value} outside [-1, 1] at scale {s}"
            )
        rho[j] = min(1.0, max(-1.0, value))
    return RhoCurve(scales, rho, kind)


def rho_dcca(x, y, scales: ScaleGrid,
             cfg: DetrendConfig = DetrendConfig()) -> RhoCurve:
    """DCCA coefficient: rho_curve without external forces."""
    return rho_curve(x, y, None, scales, cfg)
