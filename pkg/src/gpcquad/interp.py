"""Monotone piecewise CDF models and their densities.

Two fitting schemes over the same selected points:

* piecewise cubic Hermite with parabolic slope estimates clamped into the
  monotone box (slopes in [0, 3*min of adjacent chord slopes]);
* piecewise rational quadratic (quadratic over quadratic) with slopes from
  a geometric mean of adjacent chord slopes, monotone whenever slopes >= 0.

Both produce a CDF that is 0 left of the first knot, 1 right of the last,
continuously differentiable in between, with a non-negative density.

Rational pieces are *stored* as numerator/denominator coefficients in the
global coordinate but *evaluated* in the Bernstein-weighted local form,
whose terms are all non-negative; the global monomial form loses roughly
(interval length)^-2 worth of precision on narrow intervals and cannot meet
the knot-interpolation tolerances.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .ecdf import MonotoneData, TransformParams
from .errors import InvariantViolation

__all__ = [
    "DensityModel",
    "PlateauWarning",
    "parabolic_slopes",
    "project_slopes",
    "geometric_mean_slopes",
    "fit_cubic",
    "fit_rational",
    "cdf_eval",
    "pdf_eval",
    "cdf_original",
    "pdf_original",
    "inverse_cdf",
    "draw_samples",
    "validate_model",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
]

MODEL_FORMAT_VERSION = 1

IDENTITY_TRANSFORM = TransformParams(a=0.0, b=1.0, delta=1e-3)


class PlateauWarning(UserWarning):
    """Inverse CDF hit the interior of a flat stretch; midpoint returned."""


@dataclass(frozen=True)
class DensityModel:
    """A fitted piecewise CDF/PDF pair on [x_1, x_n] plus its sample transform.

    coeffs rows are (c1, c2, c3, c4) for the cubic variant and
    (a1, a2, a3, b1, b2, b3) for the rational variant, one row per interval.
    Immutable; safe for concurrent evaluation.
    """

    variant: str
    x: np.ndarray
    y: np.ndarray
    slopes: np.ndarray
    coeffs: np.ndarray
    transform: TransformParams

    @property
    def n(self) -> int:
        return len(self.x)


# ---------------------------------------------------------------------------
# slope estimation
# ---------------------------------------------------------------------------


def _chords(data: MonotoneData) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dx = np.diff(data.x)
    dy = np.diff(data.y)
    return dx, dy, dy / dx


def parabolic_slopes(data: MonotoneData) -> np.ndarray:
    """Second-order derivative estimates at the knots.

    Interior knots get the chord average weighted by opposite interval
    widths; the ends get the one-sided three-point formula.
    """
    n = data.n
    if n < 3:
        raise InvariantViolation(f"need at least 3 points, got {n}")
    x = data.x
    dx, _, s = _chords(data)
    d = np.empty(n)
    d[1:-1] = (s[1:] * dx[:-1] + s[:-1] * dx[1:]) / (x[2:] - x[:-2])
    d[0] = (s[0] * (2 * dx[0] + dx[1]) - s[1] * dx[0]) / (x[2] - x[0])
    d[-1] = (s[-1] * (2 * dx[-1] + dx[-2]) - s[-2] * dx[-1]) / (x[-1] - x[-3])
    return d


def project_slopes(data: MonotoneData, raw: np.ndarray) -> np.ndarray:
    """Clamp raw slope estimates into [0, 3*min(adjacent chord slopes)].

    A knot touching a flat interval gets slope 0. The clamped slopes keep
    every cubic Hermite piece non-decreasing.
    """
    n = data.n
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (n,):
        raise InvariantViolation(f"raw slopes must have length {n}")
    _, _, s = _chords(data)
    left = np.concatenate(([s[0]], s))    # s_{k-1} with s_0 = s_1
    right = np.concatenate((s, [s[-1]]))  # s_k with s_n = s_{n-1}
    out = np.where(
        left * right > 0,
        np.minimum(np.maximum(0.0, raw), 3.0 * np.minimum(left, right)),
        0.0,
    )
    return out


def geometric_mean_slopes(data: MonotoneData) -> np.ndarray:
    """Knot slopes as geometric means of adjacent chord slopes.

    The exponent pair sums to one; the ends use the chord across the two
    outer intervals with a negative exponent. Any zero chord in the mean
    (or a non-finite result from the one-sided forms) collapses to slope 0,
    which keeps the rational pieces monotone.
    """
    n = data.n
    if n < 3:
        raise InvariantViolation(f"need at least 3 points, got {n}")
    x, y = data.x, data.y
    _, _, s = _chords(data)

    def power_pair(b1, e1, b2, e2):
        if b1 <= 0.0 or b2 <= 0.0:
            return 0.0
        try:
            v = float(b1) ** float(e1) * float(b2) ** float(e2)
        except OverflowError:
            return 0.0
        return v if math.isfinite(v) and v > 0.0 else 0.0

    d = np.empty(n)
    span = x[2:] - x[:-2]
    for k in range(1, n - 1):
        d[k] = power_pair(
            s[k - 1], (x[k + 1] - x[k]) / span[k - 1], s[k], (x[k] - x[k - 1]) / span[k - 1]
        )
    s31 = (y[2] - y[0]) / (x[2] - x[0])
    d[0] = power_pair(
        s[0], (x[2] - x[0]) / (x[2] - x[1]), s31, (x[0] - x[1]) / (x[2] - x[1])
    )
    snn2 = (y[-1] - y[-3]) / (x[-1] - x[-3])
    d[-1] = power_pair(
        s[-1], (x[-1] - x[-3]) / (x[-2] - x[-3]), snn2, (x[-2] - x[-1]) / (x[-2] - x[-3])
    )
    return d


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


def _rational_wv(y0, y1, d0, d1, s):
    w = (y1 * d0 + y0 * d1) / s
    v = (d0 + d1) / s
    return w, v


def fit_cubic(data: MonotoneData, transform: TransformParams | None = None) -> DensityModel:
    """Monotone piecewise cubic CDF through the selected points."""
    data.validate()
    slopes = project_slopes(data, parabolic_slopes(data))
    x, y = data.x, data.y
    n = data.n
    dx, dy, s = _chords(data)
    coeffs = np.zeros((n - 1, 4))
    for k in range(n - 1):
        if dy[k] == 0.0:
            coeffs[k] = (y[k], 0.0, 0.0, 0.0)
        else:
            d0, d1 = slopes[k], slopes[k + 1]
            coeffs[k] = (
                y[k],
                d0,
                (3.0 * s[k] - 2.0 * d0 - d1) / dx[k],
                (d0 + d1 - 2.0 * s[k]) / dx[k] ** 2,
            )
    model = DensityModel(
        variant="cubic",
        x=x.copy(),
        y=y.copy(),
        slopes=slopes,
        coeffs=coeffs,
        transform=transform or IDENTITY_TRANSFORM,
    )
    validate_model(model)
    return model


def fit_rational(data: MonotoneData, transform: TransformParams | None = None) -> DensityModel:
    """Monotone piecewise rational quadratic CDF through the selected points."""
    data.validate()
    slopes = geometric_mean_slopes(data)
    x, y = data.x, data.y
    n = data.n
    _, dy, s = _chords(data)
    coeffs = np.zeros((n - 1, 6))
    for k in range(n - 1):
        if dy[k] == 0.0:
            coeffs[k] = (y[k], 0.0, 0.0, 1.0, 0.0, 0.0)
        else:
            w, v = _rational_wv(y[k], y[k + 1], slopes[k], slopes[k + 1], s[k])
            x0, x1 = x[k], x[k + 1]
            coeffs[k] = (
                y[k + 1] * x0**2 - w * x0 * x1 + y[k] * x1**2,
                w * (x0 + x1) - 2.0 * y[k + 1] * x0 - 2.0 * y[k] * x1,
                y[k + 1] - w + y[k],
                x0**2 - v * x0 * x1 + x1**2,
                v * (x0 + x1) - 2.0 * x0 - 2.0 * x1,
                2.0 - v,
            )
    model = DensityModel(
        variant="rational",
        x=x.copy(),
        y=y.copy(),
        slopes=slopes,
        coeffs=coeffs,
        transform=transform or IDENTITY_TRANSFORM,
    )
    validate_model(model)
    return model


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _piece_index(model: DensityModel, x: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(model.x, x, side="right") - 1
    return np.clip(idx, 0, model.n - 2)


def _rational_theta_terms(model: DensityModel, idx: np.ndarray, x: np.ndarray):
    """Per-point Bernstein ingredients (theta, y0, y1, w, v, s, d0, d1, h)."""
    xk = model.x[idx]
    h = model.x[idx + 1] - xk
    theta = (x - xk) / h
    y0 = model.y[idx]
    y1 = model.y[idx + 1]
    d0 = model.slopes[idx]
    d1 = model.slopes[idx + 1]
    dy = y1 - y0
    flat = dy == 0.0
    s = np.where(flat, 1.0, dy / h)  # placeholder 1 on flat pieces
    w = (y1 * d0 + y0 * d1) / s
    v = (d0 + d1) / s
    return theta, y0, y1, w, v, s, d0, d1, h, flat


def _cubic_hermite_terms(model: DensityModel, idx: np.ndarray, x: np.ndarray):
    """Per-point Hermite ingredients (t, y0, y1, d0, d1, s, h).

    The Hermite-basis form is exact at the knots; the monomial form of the
    same piece loses ~eps*(chord slope) there, which matters on steep ramps.
    """
    xk = model.x[idx]
    h = model.x[idx + 1] - xk
    t = (x - xk) / h
    y0 = model.y[idx]
    y1 = model.y[idx + 1]
    d0 = model.slopes[idx]
    d1 = model.slopes[idx + 1]
    flat = y1 == y0
    s = (y1 - y0) / h
    d0 = np.where(flat, 0.0, d0)
    d1 = np.where(flat, 0.0, d1)
    return t, y0, y1, d0, d1, s, h


def cdf_eval(model: DensityModel, x):
    """CDF in the normalized coordinate: 0 left of the support, 1 right of it."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    idx = _piece_index(model, x)
    if model.variant == "cubic":
        t, y0, y1, d0, d1, _, h = _cubic_hermite_terms(model, idx, x)
        om = 1.0 - t
        out = (
            y0 * (1.0 + 2.0 * t) * om**2
            + h * d0 * t * om**2
            + y1 * t**2 * (3.0 - 2.0 * t)
            + h * d1 * t**2 * (t - 1.0)
        )
    else:
        theta, y0, y1, w, v, s, _, _, _, flat = _rational_theta_terms(model, idx, x)
        om = 1.0 - theta
        num = y0 * om**2 + w * theta * om + y1 * theta**2
        den = om**2 + v * theta * om + theta**2
        out = num / den
        out[flat] = y0[flat]
    out = np.where(x < model.x[0], 0.0, out)
    out = np.where(x > model.x[-1], 1.0, out)
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def pdf_eval(model: DensityModel, x):
    """Density in the normalized coordinate: derivative of the CDF, >= 0,
    0 outside the support. Sub-epsilon negative roundoff is clamped to 0."""
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    idx = _piece_index(model, x)
    if model.variant == "cubic":
        t, _, _, d0, d1, s, _ = _cubic_hermite_terms(model, idx, x)
        om = 1.0 - t
        out = d0 * om * (1.0 - 3.0 * t) + 6.0 * s * t * om + d1 * t * (3.0 * t - 2.0)
    else:
        theta, _, _, _, v, s, d0, d1, _, flat = _rational_theta_terms(model, idx, x)
        om = 1.0 - theta
        num = d0 * om**2 + 2.0 * s * theta * om + d1 * theta**2
        den = om**2 + v * theta * om + theta**2
        out = num / den**2
        out[flat] = 0.0
    out = np.where((x < model.x[0]) | (x > model.x[-1]), 0.0, out)
    out = np.maximum(out, 0.0)
    return float(out[0]) if scalar else out


def cdf_original(model: DensityModel, xhat):
    """CDF of the original (pre-transform) variable."""
    return cdf_eval(model, model.transform.normalize(xhat))


def pdf_original(model: DensityModel, xhat):
    """Density of the original variable: (1/b) * pdf((xhat - a)/b)."""
    return pdf_eval(model, model.transform.normalize(xhat)) / model.transform.b


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------


def _polish_root(model: DensityModel, k: int, target: float, x: float) -> float:
    """Bracketed Newton on the piece CDF, converging in the y-residual.

    Stopping on the residual (not the x-interval) keeps the round trip
    cdf(inverse_cdf(y)) = y tight even where the density is steep; the
    bracket shrinks to the float lattice when the residual cannot improve.
    """
    lo, hi = model.x[k], model.x[k + 1]
    x = min(max(x, lo), hi)
    for _ in range(100):
        val = _cdf_on_piece(model, k, x) - target
        if abs(val) <= 1e-13:
            break
        if val > 0.0:
            hi = x
        else:
            lo = x
        der = _pdf_on_piece(model, k, x)
        nxt = x - val / der if der > 0.0 else math.nan
        x = nxt if lo < nxt < hi else 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * max(1.0, abs(lo)):
            break
    return x


def _invert_cubic_piece(model: DensityModel, k: int, target: float) -> float:
    y0, y1 = model.y[k], model.y[k + 1]
    h = model.x[k + 1] - model.x[k]
    guess = model.x[k] + h * (target - y0) / (y1 - y0)
    return _polish_root(model, k, target, guess)


def _hermite_value(t, y0, y1, d0, d1, h):
    om = 1.0 - t
    return (
        y0 * (1.0 + 2.0 * t) * om * om
        + h * d0 * t * om * om
        + y1 * t * t * (3.0 - 2.0 * t)
        + h * d1 * t * t * (t - 1.0)
    )


def _hermite_slope(t, d0, d1, s):
    om = 1.0 - t
    return d0 * om * (1.0 - 3.0 * t) + 6.0 * s * t * om + d1 * t * (3.0 * t - 2.0)


def _invert_rational_piece(model: DensityModel, k: int, target: float) -> float:
    """Closed-form quadratic root of N(x) - target*D(x) = 0 on interval k."""
    y0, y1 = model.y[k], model.y[k + 1]
    d0, d1 = model.slopes[k], model.slopes[k + 1]
    h = model.x[k + 1] - model.x[k]
    s = (y1 - y0) / h
    w, v = _rational_wv(y0, y1, d0, d1, s)
    # Bernstein -> power basis in theta for (N - z*D)(theta) = 0
    r0 = y0 - target
    rm = w - target * v
    r1 = y1 - target
    a = r0 - rm + r1
    b = rm - 2.0 * r0
    c = r0
    theta = None
    if a == 0.0:
        if b != 0.0:
            theta = -c / b
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
            for cand in (q / a, c / q if q != 0.0 else math.inf):
                if -1e-12 <= cand <= 1.0 + 1e-12:
                    theta = cand
                    break
    if theta is None:
        theta = 0.5  # roundoff pushed both roots out; the polish recovers
    theta = min(max(theta, 0.0), 1.0)
    return _polish_root(model, k, target, model.x[k] + theta * h)


def inverse_cdf(model: DensityModel, y: float) -> float:
    """Solve p(x) = y on the support.

    For y matching the level of a flat stretch the preimage is an interval;
    its midpoint is returned and a PlateauWarning is issued.
    """
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"target CDF value must be in [0,1], got {y}")
    yk = model.y
    if y <= yk[0]:
        return float(model.x[0])
    if y >= yk[-1]:
        return float(model.x[-1])
    j = int(np.searchsorted(yk, y, side="right")) - 1
    if yk[j] == y:
        jhi = j
        jlo = j
        while jlo > 0 and yk[jlo - 1] == y:
            jlo -= 1
        if jhi > jlo:
            warnings.warn(
                f"target {y} lies on a plateau [{model.x[jlo]}, {model.x[jhi]}]; "
                f"returning its midpoint",
                PlateauWarning,
                stacklevel=2,
            )
            return float(0.5 * (model.x[jlo] + model.x[jhi]))
        return float(model.x[j])
    # now yk[j] < y < yk[j+1] with the interval necessarily non-flat
    if model.variant == "cubic":
        return float(_invert_cubic_piece(model, j, y))
    return float(_invert_rational_piece(model, j, y))


def draw_samples(model: DensityModel, count: int, seed: int, original: bool = True):
    """Inverse-CDF samples, deterministic per seed, in original coordinates
    (set original=False for the normalized coordinate)."""
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, 1.0, count)
    xs = np.fromiter((inverse_cdf(model, ui) for ui in u), dtype=float, count=count)
    return model.transform.denormalize(xs) if original else xs


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _cubic_derivative_min(c2, c3, c4, h) -> float:
    """Exact minimum of the piece derivative (a quadratic in u) over [0, h]."""
    lo = min(c2, c2 + h * (2.0 * c3 + 3.0 * c4 * h))
    if c4 != 0.0:
        u_star = -c3 / (3.0 * c4)
        if 0.0 < u_star < h:
            lo = min(lo, c2 + u_star * (2.0 * c3 + u_star * 3.0 * c4))
    return lo


def validate_model(model: DensityModel, raise_on_failure: bool = True) -> dict:
    """Recheck the construction invariants; returns the residual report.

    Slope-type residuals are scaled by max(1, |slope|) so the tolerance is
    meaningful for steep near-atom ramps as well as O(1) densities.
    """
    x, y, d = model.x, model.y, model.slopes
    n = model.n
    report: dict = {}
    failures = []
    if model.variant not in ("cubic", "rational"):
        failures.append(f"unknown variant {model.variant!r}")
    if not (x[0] == 0.0 and y[0] == 0.0 and x[-1] == 1.0 and y[-1] == 1.0):
        failures.append("endpoints not pinned to (0,0), (1,1)")
    if not np.all(np.diff(x) > 0):
        failures.append("knots not strictly increasing")
    if not np.all(np.diff(y) >= 0):
        failures.append("knot values not non-decreasing")
    if np.any(d < 0):
        failures.append("negative knot slope")
    if model.coeffs.shape != (n - 1, 4 if model.variant == "cubic" else 6):
        failures.append(f"coefficient table shape {model.coeffs.shape} wrong")
    if not (model.transform.b > 0 and model.transform.delta > 0):
        failures.append("invalid transform parameters")

    if not failures:
        # Hermite conditions checked per piece at both of its ends (the
        # public evaluator would hand a shared knot to the next piece)
        flat = np.diff(y) == 0
        val_res = 0.0
        slope_res = 0.0
        for k in range(n - 1):
            for xv, yv, dv in (
                (x[k], y[k], 0.0 if flat[k] else d[k]),
                (x[k + 1], y[k + 1], 0.0 if flat[k] else d[k + 1]),
            ):
                val_res = max(val_res, abs(_cdf_on_piece(model, k, xv) - yv))
                slope_res = max(
                    slope_res,
                    abs(_pdf_on_piece(model, k, xv) - dv) / max(1.0, abs(dv)),
                )
        report["hermite_value_max"] = val_res
        report["hermite_slope_max"] = slope_res
        # C1: density agrees from both sides at every interior knot
        jumps = [
            abs(_pdf_on_piece(model, k, x[k + 1]) - _pdf_on_piece(model, k + 1, x[k + 1]))
            / max(1.0, abs(d[k + 1]))
            for k in range(n - 2)
        ]
        report["c1_jump_max"] = max(jumps) if jumps else 0.0
        if report["hermite_value_max"] > 1e-12:
            failures.append(f"knot interpolation residual {report['hermite_value_max']:.2e}")
        if report["hermite_slope_max"] > 1e-12:
            failures.append(f"knot slope residual {report['hermite_slope_max']:.2e}")
        if report["c1_jump_max"] > 1e-12:
            failures.append(f"density jump at a knot {report['c1_jump_max']:.2e}")
        # exact per-piece monotonicity, roundoff measured against the
        # piece's own chord slope
        if model.variant == "cubic":
            h = np.diff(x)
            dy = np.diff(y)
            raw_min = 0.0
            worst_rel = 0.0
            for c, hk, dyk in zip(model.coeffs, h, dy):
                if dyk == 0.0:
                    continue
                dmin = _cubic_derivative_min(c[1], c[2], c[3], hk)
                raw_min = min(raw_min, dmin)
                worst_rel = min(worst_rel, dmin / max(1.0, dyk / hk))
            report["derivative_min"] = float(raw_min)
            if worst_rel < -1e-13:
                failures.append(
                    f"cubic piece has negative derivative (relative {worst_rel:.2e})"
                )
        else:
            report["derivative_min"] = 0.0 if np.all(d >= 0) else float(np.min(d))

    if failures and raise_on_failure:
        raise InvariantViolation("; ".join(failures))
    report["failures"] = failures
    report["ok"] = not failures
    return report


def _pdf_on_piece(model: DensityModel, k: int, xv: float) -> float:
    """Density of piece k at xv regardless of which piece xv belongs to."""
    y0, y1 = model.y[k], model.y[k + 1]
    if model.variant == "cubic":
        if y1 == y0:
            return 0.0
        h = model.x[k + 1] - model.x[k]
        t = (xv - model.x[k]) / h
        return float(
            _hermite_slope(t, model.slopes[k], model.slopes[k + 1], (y1 - y0) / h)
        )
    if y1 == y0:
        return 0.0
    d0, d1 = model.slopes[k], model.slopes[k + 1]
    h = model.x[k + 1] - model.x[k]
    s = (y1 - y0) / h
    v = (d0 + d1) / s
    t = (xv - model.x[k]) / h
    om = 1.0 - t
    den = om**2 + v * t * om + t * t
    return float((d0 * om**2 + 2.0 * s * t * om + d1 * t * t) / den**2)


def _cdf_on_piece(model: DensityModel, k: int, xv: float) -> float:
    """CDF of piece k at xv regardless of which piece xv belongs to."""
    y0, y1 = model.y[k], model.y[k + 1]
    if model.variant == "cubic":
        h = model.x[k + 1] - model.x[k]
        t = (xv - model.x[k]) / h
        if y1 == y0:
            return float(y0)
        return float(_hermite_value(t, y0, y1, model.slopes[k], model.slopes[k + 1], h))
    if y1 == y0:
        return float(y0)
    d0, d1 = model.slopes[k], model.slopes[k + 1]
    h = model.x[k + 1] - model.x[k]
    s = (y1 - y0) / h
    w, v = _rational_wv(y0, y1, d0, d1, s)
    t = (xv - model.x[k]) / h
    om = 1.0 - t
    return float((y0 * om**2 + w * t * om + y1 * t * t) / (om**2 + v * t * om + t * t))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def model_to_dict(model: DensityModel) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "variant": model.variant,
        "transform": {
            "a": model.transform.a,
            "b": model.transform.b,
            "delta": model.transform.delta,
        },
        "knots_x": model.x.tolist(),
        "knots_y": model.y.tolist(),
        "slopes": model.slopes.tolist(),
        "pieces": model.coeffs.tolist(),
    }


def model_from_dict(doc: dict) -> DensityModel:
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise InvariantViolation(f"unsupported model format version {version!r}")
    try:
        tr = doc["transform"]
        model = DensityModel(
            variant=doc["variant"],
            x=np.asarray(doc["knots_x"], dtype=float),
            y=np.asarray(doc["knots_y"], dtype=float),
            slopes=np.asarray(doc["slopes"], dtype=float),
            coeffs=np.asarray(doc["pieces"], dtype=float),
            transform=TransformParams(a=tr["a"], b=tr["b"], delta=tr["delta"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvariantViolation(f"malformed model document: {exc}") from exc
    validate_model(model)
    return model


def save_model(model: DensityModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load_model(path) -> DensityModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
