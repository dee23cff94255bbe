"""Self-dual Einstein orbifold metrics on S^4 with cone angle 2pi/k, k = 3, 4, 6.

The metric is f(r) dr^2 + T_1 dtheta_1^2 + T_2 dtheta_2^2 + T_3 dtheta_3^2.
Two evaluation routes are kept:

* ``printed_forms`` is a literal transcription of the rational functions in r.
* the working route writes each function through a smooth parameter
  u in [0, 1] in which every factor that vanishes at an endpoint of the
  r-domain is an explicit product of u, 1 - u or 2 - u.  With it the
  arc-length element dt/du is smooth and nonzero on [0, 1], endpoint limits
  are exact, and derivatives have no cancellation near collapse points.

The two routes agree to rounding in the interior (checked in the tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .dual import Dual, sqrt as dsqrt

__all__ = [
    "HitchinError", "HitchinDomainError", "QuadratureError", "CollapsePointError",
    "EmbeddingObstruction", "SeamMismatch",
    "KS", "HitchinMetric", "metric", "eval_hitchin", "printed_forms", "metric_u",
    "r_of_u", "ArclengthTable", "arclength_param", "hitchin_curvature", "curvature_fd",
    "CurvatureReport", "curvature_report", "SphereProfile", "sphere_profile",
    "RevolutionProfile", "embed_revolution", "total_curvature", "pole_slopes",
    "positive_fraction", "endpoint_limits", "EndpointLimits", "richardson_limit",
]

KS = (3, 4, 6)
_R3 = (math.sqrt(5.0) - 1.0) / 2.0
_R6 = math.sqrt(2.0) - 1.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class HitchinError(ValueError):
    pass


class HitchinDomainError(HitchinError):
    pass


class QuadratureError(HitchinError):
    pass


class CollapsePointError(HitchinError):
    pass


class EmbeddingObstruction(HitchinError):
    def __init__(self, msg: str, interval: tuple[float, float]):
        super().__init__(msg)
        self.interval = interval


class SeamMismatch(HitchinError):
    pass


@dataclass(frozen=True)
class HitchinMetric:
    k: int
    r_lo: float
    r_hi: float
    smooth_end: str  # "lo" or "hi": where T_1 collapses

    def contains(self, r) -> bool:
        r = np.asarray(r, dtype=float)
        return bool(np.all((r >= self.r_lo) & (r <= self.r_hi)))


def metric(k: int) -> HitchinMetric:
    if k == 3:
        return HitchinMetric(3, _R3, 1.0, "lo")
    if k == 4:
        return HitchinMetric(4, 1.0, math.inf, "lo")
    if k == 6:
        return HitchinMetric(6, _R6, 1.0, "lo")
    raise HitchinError(f"k must be one of {KS}, got {k}")


# ------------------------------------------------------------ printed forms

def printed_forms(k: int, r):
    """(T_1, T_2, T_3, f) transcribed term by term from the rational forms in r.

    For k = 3 the dr^2 coefficient is read as
    5(3r-1)(r^2+r+4)(r+1)^2 / ((r^2+r-1)(3r^3+7r^2+r+1)^2).
    """
    r = np.asarray(r, dtype=float)
    # endpoint values may divide by zero; the result is inf or nan there
    with np.errstate(divide="ignore", invalid="ignore"):
        return _printed(k, r)


def _printed(k: int, r: np.ndarray):
    if k == 3:
        D = 3 * r ** 3 + 7 * r ** 2 + r + 1
        beta = np.sqrt((r + r ** 2 - 1) / r)
        T1 = 80 * r ** 2 * (r ** 6 - 2 * r ** 5 - 5 * r ** 4 - 15 * r ** 3 - 20 * r ** 2 + 13 * r + 4) / (
            D ** 2 * (3 * r ** 3 - 13 * r ** 2 + r + 1))
        den = D ** 2 * (r ** 2 + r - 1) * (r ** 2 + r + 4)
        T2 = 5 * r * (3 * r - 1) * (r - beta) * (r + beta + 2) * (
            2 - 3 * r - r ** 2 + r ** 3 + 5 * beta * r) ** 2 / den
        T3 = 5 * r * (3 * r - 1) * (r + beta) * (r - beta + 2) * (
            2 - 3 * r - r ** 2 + r ** 3 - 5 * beta * r) ** 2 / den
        f = 5 * (3 * r - 1) * (r ** 2 + r + 4) * (r + 1) ** 2 / ((r + r ** 2 - 1) * D ** 2)
        return T1, T2, T3, f
    if k == 4:
        q = 1 + r + r ** 2
        T1 = (1 - r ** 2) ** 2 / (q * (r + 2) * (2 * r + 1))
        T2 = q / ((r + 2) * (2 * r + 1) ** 2)
        T3 = r * q / ((r + 2) ** 2 * (2 * r + 1))
        f = q / (r * (r + 2) ** 2 * (2 * r + 1) ** 2)
        return T1, T2, T3, f
    if k == 6:
        a = 3 * r ** 2 + 2 * r + 1
        b = 3 * r ** 2 - 2 * r + 1
        c = r ** 2 - 2 * r + 3
        d = r ** 2 + 2 * r + 3
        m = r ** 2 - 2 * r - 1
        T1 = a * (r ** 2 + 2 * r - 1) ** 2 * c * (r ** 2 + 1) / (b * m ** 2 * d ** 2)
        T2 = b * c * (r + 1) ** 3 * (r - 1) / (a * d ** 2 * m)
        T3 = -4 * b * a * r / (d ** 2 * m * c)
        f = (r + 1) * c * a * b / (r * (1 - r) * m ** 2 * (r ** 2 + 1) * d ** 2)
        return T1, T2, T3, f
    raise HitchinError(f"k must be one of {KS}, got {k}")


# ------------------------------------------------------------- stable forms
#
# k = 3: r = r0 + c u^2, c = 1 - r0.  r^2 + r - 1 = (r - r0)(r + r0 + 1),
#   the quartic factor r^2 - 4r - 1 cancels between numerator and denominator
#   of T_1, and r - beta = (1 - r)^2 (r + 1) / (r (r + beta)).
# k = 4: r = 1 / w^2 with w = 1 - u; everything is a polynomial in W = w^2.
# k = 6: r = 1 - c (1 - u)^2, c = 1 - r0.  r^2 + 2r - 1 = (r - r0)(r + r0 + 2).

def _k3(r, lo, hi, beta):
    D = 3 * r ** 3 + 7 * r ** 2 + r + 1
    q4 = r ** 2 + r + 4
    D2 = D * D
    T1 = 80 * r ** 2 * lo * (r + _R3 + 1) * q4 / (D2 * (3 * r - 1))
    r_minus_beta = hi * hi * (r + 1) / (r * (r + beta))
    pre = 5 * r ** 2 * (3 * r - 1) / (D2 * q4)
    T2 = pre * r_minus_beta * (r + beta + 2) * ((r - 2) * beta + 5) ** 2
    T3 = pre * (r + beta) * (r - beta + 2) * ((r - 2) * beta - 5) ** 2
    # f without the 1/lo factor; callers multiply back
    f_lo = 5 * (3 * r - 1) * q4 * (r + 1) ** 2 / ((r + _R3 + 1) * D2)
    return T1, T2, T3, f_lo


def _k4(W, one_minus_W2):
    q = W * W + W + 1
    a = 1 + 2 * W
    b = 2 + W
    T1 = one_minus_W2 * one_minus_W2 / (q * a * b)
    T2 = W * q / (a * b * b)
    T3 = q / (a * a * b)
    # f = W^3 q / (a b)^2; callers combine W^3 with dr/du
    f_w = q / (a * a * b * b)
    return T1, T2, T3, f_w


def _k6(r, lo, hi):
    a = 3 * r ** 2 + 2 * r + 1
    b = 3 * r ** 2 - 2 * r + 1
    c = r ** 2 - 2 * r + 3
    d = r ** 2 + 2 * r + 3
    m = r ** 2 - 2 * r - 1
    s = lo * (r + _R6 + 2)
    T1 = a * s * s * c * (r ** 2 + 1) / (b * m * m * d * d)
    T2 = -b * c * (r + 1) ** 3 * hi / (a * d * d * m)
    T3 = -4 * b * a * r / (d * d * m * c)
    # f without the 1/hi factor
    f_hi = (r + 1) * c * a * b / (r * m * m * (r ** 2 + 1) * d * d)
    return T1, T2, T3, f_hi


def r_of_u(k: int, u):
    if k == 3:
        return _R3 + (1 - _R3) * u * u
    if k == 4:
        w = 1 - u
        return 1 / (w * w)
    if k == 6:
        return 1 - (1 - _R6) * (1 - u) ** 2
    raise HitchinError(f"k must be one of {KS}, got {k}")


def metric_u(k: int, u):
    """(T_1, T_2, T_3, s) in the smooth parameter u, with s = dt/du = sqrt(f) dr/du.

    Accepts floats, arrays or Duals.  Valid on the closed interval [0, 1].
    """
    if k == 3:
        c = 1 - _R3
        r = _R3 + c * u * u
        lo = c * u * u
        hi = c * (1 - u) * (1 + u)
        beta = u * dsqrt(c * (r + _R3 + 1) / r)
        T1, T2, T3, f_lo = _k3(r, lo, hi, beta)
        # sqrt(f_lo / (c u^2)) * 2 c u
        return T1, T2, T3, 2 * math.sqrt(c) * dsqrt(f_lo)
    if k == 4:
        w = 1 - u
        W = w * w
        T1, T2, T3, f_w = _k4(W, u * (2 - u) * (1 + W))
        # sqrt(W^3 f_w) * 2 / w^3
        return T1, T2, T3, 2 * dsqrt(f_w)
    if k == 6:
        c = 1 - _R6
        r = 1 - c * (1 - u) ** 2
        lo = c * u * (2 - u)
        hi = c * (1 - u) ** 2
        T1, T2, T3, f_hi = _k6(r, lo, hi)
        # sqrt(f_hi / (c (1-u)^2)) * 2 c (1 - u)
        return T1, T2, T3, 2 * math.sqrt(c) * dsqrt(f_hi)
    raise HitchinError(f"k must be one of {KS}, got {k}")


def eval_hitchin(k: int, r):
    """(T_1, T_2, T_3, f) at r in the closed domain; f is inf where it diverges."""
    m = metric(k)
    r = np.asarray(r, dtype=float)
    if np.any(np.isnan(r)) or not m.contains(r):
        raise HitchinDomainError(f"r outside [{m.r_lo}, {m.r_hi}] for k={k}")
    with np.errstate(divide="ignore", invalid="ignore"):
        if k == 3:
            lo = r - _R3
            hi = 1 - r
            beta = np.sqrt(lo * (r + _R3 + 1) / r)
            T1, T2, T3, f_lo = _k3(r, lo, hi, beta)
            f = np.where(lo > 0, f_lo / np.where(lo > 0, lo, 1.0), np.inf)
        elif k == 4:
            W = np.where(np.isinf(r), 0.0, 1 / r)
            T1, T2, T3, f_w = _k4(W, 1 - W * W)
            f = W ** 3 * f_w
        else:
            lo = r - _R6
            hi = 1 - r
            T1, T2, T3, f_hi = _k6(r, lo, hi)
            f = np.where(hi > 0, f_hi / np.where(hi > 0, hi, 1.0), np.inf)
    out = tuple(np.asarray(x, dtype=float) for x in (T1, T2, T3, f))
    if r.ndim == 0:
        return tuple(float(x) for x in out)
    return out


# ----------------------------------------------------------- arc length

def _s(k: int, u):
    return metric_u(k, u)[3]


def _gl_cells(k: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gauss-Legendre integral of s over each [a, b] (vectorized)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * _GL_NODES
    return half * np.sum(_GL_WEIGHTS * _s(k, x), axis=-1)


@dataclass(frozen=True)
class ArclengthTable:
    k: int
    u: np.ndarray
    r: np.ndarray
    t: np.ndarray
    L_total: float
    quad_error: float

    def t_of_u(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        j = np.clip(np.searchsorted(self.u, u, side="right") - 1, 0, len(self.u) - 2)
        return self.t[j] + _gl_cells(self.k, self.u[j], u)

    def u_of_t(self, t) -> np.ndarray:
        """Invert t(u) by Newton's method started from linear interpolation."""
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12) or np.any(t > self.L_total + 1e-12):
            raise HitchinDomainError(f"t outside [0, {self.L_total}]")
        u = np.interp(t, self.t, self.u)
        for _ in range(30):
            step = (self.t_of_u(u) - t) / _s(self.k, u)
            u = np.clip(u - step, 0.0, 1.0)
            if np.max(np.abs(step), initial=0.0) < 1e-15:
                break
        return u


@lru_cache(maxsize=None)
def arclength_param(k: int, n_points: int = 512) -> ArclengthTable:
    """t(u) tabulated on n_points cells; the total is cross-checked adaptively."""
    if n_points < 64:
        raise HitchinError("n_points must be at least 64")
    metric(k)
    u = np.linspace(0.0, 1.0, n_points + 1)
    cells = _gl_cells(k, u[:-1], u[1:])
    if np.any(cells <= 0):
        raise QuadratureError("non-positive arc length increment")
    t = np.concatenate([[0.0], np.cumsum(cells)])
    total, err, info = _adaptive_total(k)
    if abs(total - t[-1]) > 1e-10 * max(1.0, total):
        raise QuadratureError(f"tabulated length {t[-1]!r} disagrees with adaptive {total!r}")
    t[-1] = t[-1]
    with np.errstate(divide="ignore"):
        r = r_of_u(k, u)
    return ArclengthTable(k, u, r, t, float(t[-1]), float(err))


def _adaptive_total(k: int):
    total, err, info = integrate.quad(lambda x: float(_s(k, x)), 0.0, 1.0,
                                      epsabs=1e-14, epsrel=1e-13, limit=200, full_output=1)[:3]
    if err > 1e-10:
        raise QuadratureError(f"adaptive quadrature did not converge for k={k} (err {err:.2e})")
    return total, err, info


# ------------------------------------------------------------ curvature

def _y_t(k: int, i: int, u: np.ndarray):
    """(y, dy/dt, d2y/dt2) for y = sqrt(T_i) at parameter values u."""
    ones = np.ones_like(u)
    seed = Dual(Dual(u, ones), Dual(ones, 0.0 * ones))
    m = metric_u(k, seed)
    T = m[i - 1]
    s = m[3]
    y = dsqrt(T)
    y0, yu, yuu = y.a.a, y.a.b, y.b.b
    s0, su = s.a.a, s.a.b
    yt = yu / s0
    ytt = (yuu - yu * su / s0) / (s0 * s0)
    return y0, yt, ytt


def _interior(table: ArclengthTable, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t >= table.L_total):
        raise CollapsePointError(f"t must lie in the open interval (0, {table.L_total})")
    return t


def hitchin_curvature(k: int, i: int, t, table: ArclengthTable | None = None):
    """sec(gamma', X_i*) = -y''/y, y = sqrt(T_i), derivatives in arc length."""
    if i not in (1, 2, 3):
        raise HitchinError("index must be 1, 2 or 3")
    table = table or arclength_param(k)
    t = _interior(table, t)
    u = table.u_of_t(t)
    y, _, ytt = _y_t(k, i, np.atleast_1d(u))
    if np.any(y <= 1e-150):
        raise CollapsePointError(f"T_{i} vanishes at the requested point")
    out = -ytt / y
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def curvature_fd(k: int, i: int, n: int = 2001, table: ArclengthTable | None = None):
    """(t, sec) from central differences of sqrt(T_i) on a uniform t-grid."""
    table = table or arclength_param(k)
    t = np.linspace(0.0, table.L_total, n)
    u = table.u_of_t(t)
    T = metric_u(k, u)[i - 1]
    y = np.sqrt(np.maximum(T, 0.0))
    dt = t[1] - t[0]
    d2 = (y[2:] - 2 * y[1:-1] + y[:-2]) / dt ** 2
    return t[1:-1], -d2 / y[1:-1]


def _runs(t: np.ndarray, mask: np.ndarray) -> list[tuple[float, float]]:
    out = []
    j = 0
    n = len(t)
    while j < n:
        if mask[j]:
            a = j
            while j + 1 < n and mask[j + 1]:
                j += 1
            out.append((float(t[a]), float(t[j])))
        j += 1
    return out


@dataclass(frozen=True)
class CurvatureReport:
    k: int
    t: np.ndarray
    sec: np.ndarray  # shape (3, n)
    negative: tuple[tuple[tuple[float, float], ...], ...]
    L: float

    def all_positive_fraction(self) -> float:
        return float(np.mean(np.all(self.sec > 0, axis=0)))


def curvature_report(k: int, n: int = 2001) -> CurvatureReport:
    table = arclength_param(k)
    t = np.linspace(0.0, table.L_total, n + 2)[1:-1]
    sec = np.array([hitchin_curvature(k, i, t, table) for i in (1, 2, 3)])
    neg = tuple(tuple(_runs(t, sec[i] < 0)) for i in range(3))
    return CurvatureReport(k, t, sec, neg, table.L_total)


def positive_fraction(k: int, n: int = 3001) -> float:
    """Fraction of [0, 3L] where all three sec(gamma', X_i*) are positive.

    A point t of [0, 3L] is folded onto [0, L] by the same reflections that
    build the sphere profile; the three curvatures are permuted by them, so
    the all-positive condition is evaluated at the folded point.
    """
    table = arclength_param(k)
    L = table.L_total
    t = np.linspace(0.0, 3 * L, n + 2)[1:-1]
    _, s = _fold3(t, L)
    s = np.clip(s, 1e-9 * L, L * (1 - 1e-9))
    sec = np.array([hitchin_curvature(k, i, s, table) for i in (1, 2, 3)])
    return float(np.mean(np.all(sec > 0, axis=0)))


# ------------------------------------------------------- sphere profile

def _fold3(t: np.ndarray, L: float):
    """Segment index (0, 1, 2) -> T index (1, 3, 2) and folded coordinate in [0, L]."""
    seg = np.clip(np.floor(t / L).astype(int), 0, 2)
    s = np.where(seg == 0, t, np.where(seg == 1, 2 * L - t, t - 2 * L))
    idx = np.array([1, 3, 2])[seg]
    return idx, np.clip(s, 0.0, L)


@dataclass(frozen=True)
class SphereProfile:
    """h on [0, 3L]: sqrt(T_1)/2, then sqrt(T_3)(2L - t)/2, then sqrt(T_2)(t - 2L)/2."""

    k: int
    table: ArclengthTable
    seam_value_defect: float
    seam_slope_defect: float

    @property
    def L(self) -> float:
        return self.table.L_total

    @property
    def t_end(self) -> float:
        return 3 * self.table.L_total

    def _eval(self, t, order: int):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t < -1e-12) or np.any(t > self.t_end + 1e-12):
            raise HitchinDomainError(f"t outside [0, {self.t_end}]")
        idx, s = _fold3(np.clip(t, 0, self.t_end), self.L)
        sign = np.where((t >= self.L) & (t < 2 * self.L), -1.0, 1.0)
        out = np.empty((3, t.size))
        u = self.table.u_of_t(s)
        for i in (1, 2, 3):
            m = idx == i
            if not np.any(m):
                continue
            if order == 0:
                out[0, m] = np.sqrt(np.maximum(metric_u(self.k, u[m])[i - 1], 0.0))
            else:
                y, yt, ytt = _y_t(self.k, i, u[m])
                out[0, m], out[1, m], out[2, m] = y, sign[m] * yt, ytt
        return out / 2.0

    def h(self, t):
        return self._eval(t, 0)[0]

    def dh(self, t):
        return self._eval(t, 1)[1]

    def d2h(self, t):
        return self._eval(t, 2)[2]


def _seam_defects(k: int, table: ArclengthTable) -> tuple[float, float]:
    L = table.L_total
    vals = []
    slopes = []
    # at L: T_1 at s = L meets T_3 at s = L; at 2L: T_3 at s = 0 meets T_2 at s = 0
    for (i, j, s, sgn_i, sgn_j) in ((1, 3, L, 1.0, -1.0), (3, 2, 0.0, -1.0, 1.0)):
        u = table.u_of_t(np.array([s]))
        u = np.clip(u, 1e-12, 1 - 1e-12)
        a = _y_t(k, i, u)
        b = _y_t(k, j, u)
        vals.append(abs(float(a[0][0] - b[0][0])) / 2)
        slopes.append(abs(float(sgn_i * a[1][0] - sgn_j * b[1][0])) / 2)
    return max(vals), max(slopes)


@lru_cache(maxsize=None)
def sphere_profile(k: int) -> SphereProfile:
    table = arclength_param(k)
    dv, ds = _seam_defects(k, table)
    if dv > 1e-8:
        raise SeamMismatch(f"k={k}: profile jumps by {dv:.3e} at a seam")
    return SphereProfile(k, table, dv, ds)


def pole_slopes(k: int) -> tuple[float, float]:
    """One-sided difference quotients of h at t = 0 and t = 3L (Richardson-corrected)."""
    sp = sphere_profile(k)
    T = sp.t_end
    d = 1e-4 * sp.L
    h0 = float(sp.h(0.0)[0])
    h1 = float(sp.h(T)[0])
    a = [(float(sp.h(x)[0]) - h0) / x for x in (d, d / 2)]
    b = [(h1 - float(sp.h(T - x)[0])) / x for x in (d, d / 2)]
    return 2 * a[1] - a[0], 2 * b[1] - b[0]


# ------------------------------------------------------------ embedding

@dataclass(frozen=True)
class RevolutionProfile:
    t: np.ndarray
    rho: np.ndarray
    z: np.ndarray
    drho: np.ndarray


def embed_revolution(h, dh, t_end: float, n: int = 2001) -> RevolutionProfile:
    """rho = h, z = integral of sqrt(1 - h'^2), on a uniform grid of n points.

    h and dh are vectorized callables.  Raises EmbeddingObstruction if
    |h'| > 1 + 1e-9 anywhere on the grid or at the quadrature nodes.
    """
    if not t_end > 0 or n < 3:
        raise HitchinError("need t_end > 0 and n >= 3")
    t = np.linspace(0.0, t_end, n)
    a, b = t[:-1], t[1:]
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _GL_NODES
    slope_nodes = np.asarray(dh(x.ravel()), dtype=float).reshape(x.shape)
    slope_grid = np.asarray(dh(t[1:-1]), dtype=float)
    for pts, sl in ((x.ravel(), slope_nodes.ravel()), (t[1:-1], slope_grid)):
        bad = np.abs(sl) > 1 + 1e-9
        if np.any(bad):
            lo, hi = float(pts[bad].min()), float(pts[bad].max())
            raise EmbeddingObstruction(f"|h'| > 1 on [{lo:.6g}, {hi:.6g}]", (lo, hi))
    dz = np.sqrt(np.maximum(0.0, 1.0 - slope_nodes ** 2))
    z = np.concatenate([[0.0], np.cumsum(half * np.sum(_GL_WEIGHTS * dz, axis=1))])
    rho = np.asarray(h(t), dtype=float)
    drho = np.concatenate([[np.nan], slope_grid, [np.nan]])
    return RevolutionProfile(t, rho, z, drho)


def total_curvature(k: int, n_cells: int = 256) -> tuple[float, float]:
    """(integral of K dA, 2 pi (h'(0) - h'(3L)) from the pole slopes).

    K = -h''/h and dA = 2 pi h dt, so the integrand is -2 pi h''.
    """
    sp = sphere_profile(k)
    edges = np.linspace(0.0, sp.t_end, n_cells + 1)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * _GL_NODES
    d2 = sp.d2h(x.ravel()).reshape(x.shape)
    integral = -2 * math.pi * float(np.sum(half * np.sum(_GL_WEIGHTS * d2, axis=1)))
    s0, s1 = pole_slopes(k)
    return integral, 2 * math.pi * (s0 - s1)


# ------------------------------------------------------- endpoint limits

def richardson_limit(fn, x0: float, direction: float, h0: float, levels: int = 8,
                     power: float = 1.0) -> tuple[float, float]:
    """Limit of fn(x0 + direction*h) as h -> 0 along h0 / 2^j by Neville extrapolation.

    The error is assumed to expand in powers of h**power.  Returns
    (limit, spread) where spread is the last Cauchy difference.
    """
    hs = [h0 / 2 ** j for j in range(levels)]
    vals = [float(fn(x0 + direction * h)) for h in hs]
    table = [vals]
    for m in range(1, levels):
        prev = table[-1]
        fac = 2.0 ** (power * m)
        table.append([(fac * prev[j + 1] - prev[j]) / (fac - 1) for j in range(len(prev) - 1)])
    diag = [row[-1] for row in table]
    return diag[-1], abs(diag[-1] - diag[-2])


@dataclass(frozen=True)
class EndpointLimits:
    k: int
    smooth: tuple[float, float, float]  # T_1, T_2, T_3 at the smooth end
    far: tuple[float, float, float]  # T_1, T_2, T_3 at the cone end
    collapsing_far: tuple[int, ...]  # indices vanishing at the cone end


def endpoint_limits(k: int, tol: float = 1e-8) -> EndpointLimits:
    """T_i at u = 0 and u = 1 through the smooth parameterization."""
    lo = tuple(float(x) for x in metric_u(k, 0.0)[:3])
    hi = tuple(float(x) for x in metric_u(k, 1.0)[:3])
    far = tuple(i + 1 for i in range(3) if abs(hi[i]) < tol)
    return EndpointLimits(k, lo, hi, far)
