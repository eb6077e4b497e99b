"""Per-window removal of external forces and local trends.

Within each size-s box the observed series is regressed on the external
force columns by ordinary least squares (orthogonalization-based, never
raw normal equations), the residuals are cumulated into a disturbance
profile, and the profile's local trend is removed with either a
polynomial fit or a centered moving average of window length s.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import TimeSeries, as_series, _frozen_array
from .errors import (
    ConfigError,
    DataError,
    RankDeficiencyWarning,
    ShapeError,
    WindowTooSmallError,
)

POLYNOMIAL = "polynomial"
MOVING_AVERAGE = "moving_average"


@dataclass(frozen=True, eq=False)
class ForceMatrix:
    """The p external-force series as a (T, p) column matrix; p may be 0."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2:
            raise ShapeError(f"force matrix must be 2-d, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise ShapeError("force matrix has no rows")
        if not np.all(np.isfinite(arr)):
            raise DataError("force matrix contains non-finite values")
        object.__setattr__(self, "data", _frozen_array(arr))

    @classmethod
    def from_series(cls, columns) -> "ForceMatrix":
        series = [as_series(c) for c in columns]
        if not series:
            raise ShapeError("from_series needs at least one column; use "
                             "ForceMatrix.empty for p = 0")
        lengths = {len(s) for s in series}
        if len(lengths) > 1:
            raise ShapeError(f"force columns differ in length: {sorted(lengths)}")
        return cls(np.column_stack([s.values for s in series]))

    @classmethod
    def empty(cls, length: int) -> "ForceMatrix":
        return cls(np.empty((length, 0)))

    @property
    def length(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class DetrendConfig:
    """Detrending choices: trend model of the profile and force-regression
    intercept.

    ``poly_order`` applies to the polynomial method and must satisfy
    poly_order <= s - 2 at every analysis scale s. The force regression
    includes an intercept column by default so that additive offsets in the
    contamination model are absorbed; set ``with_intercept=False`` to
    regress on the forces alone.
    """

    method: str = POLYNOMIAL
    poly_order: int = 1
    with_intercept: bool = True

    def __post_init__(self):
        if self.method not in (POLYNOMIAL, MOVING_AVERAGE):
            raise ConfigError(f"unknown detrending method {self.method!r}")
        if self.poly_order < 0:
            raise ConfigError(f"poly_order must be >= 0, got {self.poly_order}")

    def check_scale(self, s: int) -> None:
        if self.method == POLYNOMIAL and self.poly_order >= s - 1:
            raise ConfigError(
                f"poly_order {self.poly_order} too large for scale {s} "
                f"(need poly_order <= s - 2)"
            )


def window_ols(xv, Zv, with_intercept: bool = True):
    """Least-squares fit of one window against its force block.

    Returns ``(beta, residuals)`` where ``beta`` lists the intercept first
    when enabled. Rank-deficient designs are resolved to the minimum-norm
    solution with a RankDeficiencyWarning rather than an error.
    """
    x = np.asarray(xv, dtype=float)
    Z = np.asarray(Zv, dtype=float)
    if Z.ndim == 1:
        Z = Z.reshape(-1, 1) if Z.size else Z.reshape(x.size, 0)
    s, p = Z.shape
    if x.size != s:
        raise ShapeError(f"window length {x.size} != force block length {s}")
    ncols = p + int(with_intercept)
    if s <= ncols:
        raise WindowTooSmallError(
            f"window of size {s} cannot fit {ncols} regression columns"
        )
    if ncols == 0:
        return np.empty(0), x.copy()
    design = np.column_stack([np.ones(s), Z]) if with_intercept else Z
    beta, _, rank, _ = np.linalg.lstsq(design, x, rcond=None)
    if rank < ncols:
        warnings.warn(
            f"rank-deficient design (rank {rank} < {ncols}); "
            "minimum-norm solution used",
            RankDeficiencyWarning,
            stacklevel=2,
        )
    return beta, x - design @ beta


def profile(residuals) -> np.ndarray:
    """Disturbance profile: cumulative sum restarting at the window start."""
    return np.cumsum(np.asarray(residuals, dtype=float))


def local_trend(window_profile, cfg: DetrendConfig) -> np.ndarray:
    """Local trend of one window profile under the configured method."""
    P = np.asarray(window_profile, dtype=float)
    s = P.size
    cfg.check_scale(s)
    if cfg.method == POLYNOMIAL:
        basis = _poly_basis(s, cfg.poly_order)
        coef, _, _, _ = np.linalg.lstsq(basis, P, rcond=None)
        return basis @ coef
    return _moving_average(P.reshape(1, -1), s)[0]


# --------------------------------------------------------------------------- #
# batched engine: all windows of one series at one scale

def _poly_basis(s: int, order: int) -> np.ndarray:
    # abscissa scaled to [-1, 1] so high orders stay well conditioned
    t = np.arange(s, dtype=float)
    half = max((s - 1) / 2.0, 1.0)
    t = (t - (s - 1) / 2.0) / half
    return np.vander(t, order + 1, increasing=True)


def _moving_average(profiles: np.ndarray, span: int) -> np.ndarray:
    """Centered moving average of length ``span`` along axis 1, with shrunken
    one-sided averages at the box edges."""
    M, s = profiles.shape
    left = (span - 1) // 2
    right = span - 1 - left
    csum = np.zeros((M, s + 1))
    np.cumsum(profiles, axis=1, out=csum[:, 1:])
    k = np.arange(s)
    lo = np.maximum(k - left, 0)
    hi = np.minimum(k + right + 1, s)
    return (csum[:, hi] - csum[:, lo]) / (hi - lo)


def _batched_ols_residuals(X: np.ndarray, Zw: np.ndarray | None,
                           with_intercept: bool) -> np.ndarray:
    """OLS residuals for every window at once.

    X is (M, s); Zw is (M, s, p) or None. Uses batched QR; windows whose
    design is rank deficient fall back to a minimum-norm lstsq solve.
    """
    M, s = X.shape
    p = 0 if Zw is None else Zw.shape[2]
    d = p + int(with_intercept)
    if d == 0:
        return X.copy()
    if s <= d:
        raise WindowTooSmallError(
            f"window of size {s} cannot fit {d} regression columns"
        )
    if p == 0:
        # intercept only: residuals are the mean-removed windows
        return X - X.mean(axis=1, keepdims=True)

    if with_intercept:
        design = np.concatenate([np.ones((M, s, 1)), Zw], axis=2)
    else:
        design = Zw
    Q, R = np.linalg.qr(design)
    diag = np.abs(np.diagonal(R, axis1=1, axis2=2))
    deficient = diag.min(axis=1) <= 1e-12 * (diag.max(axis=1) + 1e-300)
    rhs = np.einsum("msd,ms->md", Q, X)
    fitted = np.empty_like(X)
    ok = ~deficient
    if ok.any():
        beta = np.linalg.solve(R[ok], rhs[ok][..., None])[..., 0]
        fitted[ok] = np.einsum("msd,md->ms", design[ok], beta)
    if deficient.any():
        warnings.warn(
            f"rank-deficient design in {int(deficient.sum())} of {M} windows; "
            "minimum-norm solution used",
            RankDeficiencyWarning,
            stacklevel=2,
        )
        for i in np.flatnonzero(deficient):
            beta_i, _, _, _ = np.linalg.lstsq(design[i], X[i], rcond=None)
            fitted[i] = design[i] @ beta_i
    return X - fitted


def window_residual_profiles(values: np.ndarray, forces: np.ndarray | None,
                             size: int, cfg: DetrendConfig) -> np.ndarray:
    """Detrended disturbance profiles for all windows of one series.

    Runs the full per-window pipeline (force regression, profile, local
    trend removal) at one scale and returns an (M, s) matrix of detrended
    profiles. Trailing points beyond M*s are excluded.
    """
    T = values.size
    M = T // size
    cfg.check_scale(size)
    X = values[: M * size].reshape(M, size)
    Zw = None
    if forces is not None and forces.shape[1] > 0:
        Zw = forces[: M * size].reshape(M, size, forces.shape[1])
    residuals = _batched_ols_residuals(X, Zw, cfg.with_intercept)
    profiles = np.cumsum(residuals, axis=1)
    if cfg.method == POLYNOMIAL:
        basis = _poly_basis(size, cfg.poly_order)
        Qb, _ = np.linalg.qr(basis)
        trend = (profiles @ Qb) @ Qb.T
    else:
        trend = _moving_average(profiles, size)
    return profiles - trend


def series_pair(x, y) -> tuple[TimeSeries, TimeSeries]:
    """Validate a pair of equal-length series."""
    xs, ys = as_series(x), as_series(y)
    if len(xs) != len(ys):
        raise ShapeError(f"series lengths differ: {len(xs)} != {len(ys)}")
    return xs, ys
