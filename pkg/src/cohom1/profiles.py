"""Closed-form metric functions f_i, g_i, h_i along the normal geodesic.

For each catalog space the nine functions are given on [0, L].  The Weyl
group extends them to [0, T_max] by the reflections t -> -t and t -> 2L - t,
each of which permutes the indices and may flip the sign of h.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import groups

__all__ = [
    "ProfileError", "SingularBlockError", "SeamError",
    "SymmetryRule", "MetricBlocks", "MetricProfile", "Collapse",
    "SPACES", "profile", "eval_profile", "extend_profile", "inverse_block",
    "collapse_direction", "collapse_residual", "seam_defect", "inverse_convexity",
    "ConvexityReport",
]

DET_TOL = 1e-14
SEAM_TOL = 1e-10
RANGE_TOL = 1e-12

SPACES = ("S4", "CP2", "S7", "B7", "E_p", "W1", "W2")


class ProfileError(ValueError):
    pass


class SingularBlockError(ProfileError):
    pass


class SeamError(ProfileError):
    pass


class SymmetryRule(enum.Enum):
    # (perm at 0, h-sign at 0, perm at L, h-sign at L, T_max in units of L)
    CYCLIC3 = ((0, 2, 1), (1, 1, 1), (2, 1, 0), (1, 1, 1), 3)
    REFLECT2 = ((0, 1, 2), (1, 1, 1), (2, 1, 0), (1, 1, 1), 2)
    MODIFIED4 = ((0, 1, 2), (1, -1, -1), (2, 1, 0), (-1, 1, -1), 4)
    EVEN2 = ((0, 1, 2), (1, 1, 1), (0, 1, 2), (1, -1, -1), 4)

    @property
    def span(self) -> int:
        return self.value[4]


_RULES = {
    "S4": SymmetryRule.CYCLIC3, "S7": SymmetryRule.CYCLIC3, "B7": SymmetryRule.CYCLIC3,
    "CP2": SymmetryRule.REFLECT2, "W2": SymmetryRule.MODIFIED4,
    "E_p": SymmetryRule.EVEN2, "W1": SymmetryRule.EVEN2,
}
_DIAGONAL = ("S4", "CP2")


@dataclass(frozen=True)
class MetricBlocks:
    """f, g, h with shape (3,) + shape(t)."""

    f: np.ndarray
    g: np.ndarray
    h: np.ndarray

    def block(self, i: int) -> np.ndarray:
        """2x2 block [[f_i, h_i], [h_i, g_i]] for index i in 1..3, shape (..., 2, 2)."""
        f, g, h = self.f[i - 1], self.g[i - 1], self.h[i - 1]
        return np.stack([np.stack([f, h], -1), np.stack([h, g], -1)], -2)

    def columns(self) -> list[np.ndarray]:
        return [self.f[0], self.f[1], self.f[2], self.g[0], self.g[1], self.g[2],
                self.h[0], self.h[1], self.h[2]]


@dataclass(frozen=True)
class MetricProfile:
    space: str
    p: int | None
    eps: float | None
    L: float
    symmetry: SymmetryRule

    @property
    def t_max(self) -> float:
        return self.symmetry.span * self.L

    @property
    def diagonal(self) -> bool:
        return self.space in _DIAGONAL

    def diagram(self) -> groups.GroupDiagram:
        if self.space == "E_p":
            return groups.catalog("E_p", p=self.p)
        return groups.catalog(self.space)


def profile(space: str, p: int | None = None, eps: float | None = None) -> MetricProfile:
    """Validated profile.  eps defaults to 1/2 and p to 10 where they apply."""
    if space not in SPACES:
        raise ProfileError(f"unknown space {space!r}; expected one of {SPACES}")
    if space == "E_p":
        p = 10 if p is None else p
        if int(p) != p or p < 1:
            raise ProfileError(f"E_p needs an integer p >= 1, got {p}")
        p = int(p)
    elif space == "W1":
        p = 1
    else:
        p = None
    if space in ("E_p", "W1", "W2"):
        eps = 0.5 if eps is None else float(eps)
        if not eps > 0:
            raise ProfileError(f"eps must be positive, got {eps}")
    else:
        eps = None
    L = groups.catalog("E_p", p=p).L if space == "E_p" else groups.catalog(space).L
    return MetricProfile(space, p, eps, L, _RULES[space])


# ------------------------------------------------------------ closed forms

def _eschenburg(p: int, eps: float, t):
    c2 = np.cos(t) ** 2
    c4 = c2 * c2
    alpha = ((p - 1) ** 2 * (eps - 1) * c4 + (p - 1) * (p - 1 - eps * (2 * p + 1)) * c2
             + eps * (p * p + p + 1))
    if np.any(alpha <= 0):
        raise ProfileError(f"E_p denominator alpha <= 0 for p={p}, eps={eps}")
    pre = eps / (4 * alpha)
    f1 = pre * ((3 * eps * (p - 2) ** 2 - 4 * p * p + 8 * p - 16) * c4
                + (4 * p * p - 8 * p + 16 - 6 * eps * p * (p - 2)) * c2 + 3 * eps * p * p)
    g1 = pre * ((p - 1) ** 2 * (3 * eps - 4) * c4
                + (2 * p - 2) * (2 * p - 2 - 3 * eps * (p + 1)) * c2 + 3 * eps * (p + 1) ** 2)
    h1 = -pre * ((p - 1) * (3 * eps * (p - 2) - 4 * p + 4) * c4
                 + (4 * (p - 1) ** 2 - 6 * eps * (p * p - p - 1)) * c2 + 3 * eps * p * (p + 1))
    f23 = 1 + (eps - 1) * c2
    h23 = -eps * np.cos(t)
    ones = np.ones_like(c2)
    return ((f1, f23, f23), (g1, eps * ones, eps * ones), (h1, h23, h23))


def _w1(eps: float, t):
    c2 = np.cos(t) ** 2
    f1 = 0.25 * ((eps - 4) * c2 * c2 + 2 * (eps + 2) * c2 + eps)
    f23 = 1 + (eps - 1) * c2
    g = eps * np.ones_like(c2)
    h1 = -eps / 2 * (c2 + 1)
    h23 = -eps * np.cos(t)
    return ((f1, f23, f23), (g, g, g), (h1, h23, h23))


def _s7_index1(t):
    c2 = np.cos(t) ** 2
    return np.ones_like(c2), 8 * c2 + 1, 4 * c2 - 1


def _b7_index1(t):
    s2 = np.sin(t) ** 2
    c = np.cos(t)
    return (5 + 4 * s2 - 4 * c) / 5, (5 + 4 * s2 + 4 * c) / 5, -(1 - 4 * c * c) / 5


def _closed_forms(prof: MetricProfile, t: np.ndarray):
    """Printed formulas, valid as analytic functions for every real t."""
    s = prof.space
    z = np.zeros_like(t)
    if s == "S4":
        f = (4 * np.sin(t) ** 2, (math.sqrt(3) * np.cos(t) - np.sin(t)) ** 2,
             (math.sqrt(3) * np.cos(t) + np.sin(t)) ** 2)
        return f, (z, z, z), (z, z, z)
    if s == "CP2":
        f = (np.sin(t) ** 2, np.cos(2 * t) ** 2, np.cos(t) ** 2)
        return f, (z, z, z), (z, z, z)
    if s in ("S7", "B7"):
        one = _s7_index1 if s == "S7" else _b7_index1
        L = prof.L
        # indices 2 and 3 are defined by f_2(t) = f_1(t + 2L), f_3(t) = f_1(2L - t)
        a, b, c = one(t), one(t + 2 * L), one(2 * L - t)
        return (a[0], b[0], c[0]), (a[1], b[1], c[1]), (a[2], b[2], c[2])
    if s == "E_p":
        return _eschenburg(prof.p, prof.eps, t)
    if s == "W1":
        return _w1(prof.eps, t)
    if s == "W2":
        e = prof.eps
        one = np.ones_like(t)
        f = (4 * np.sin(t) ** 2 + 4 * e * np.cos(t) ** 2,
             4 * np.cos(2 * t) ** 2 + e * np.sin(2 * t) ** 2,
             4 * np.cos(t) ** 2 + 4 * e * np.sin(t) ** 2)
        return f, (e * one, e * one, e * one), (2 * e * np.cos(t), -e * np.sin(2 * t), -2 * e * np.sin(t))
    raise ProfileError(f"no closed form for {s}")


def _blocks(parts) -> MetricBlocks:
    f, g, h = (np.array(np.broadcast_arrays(*x), dtype=float) for x in parts)
    return MetricBlocks(f, g, h)


def _check_range(t: np.ndarray, hi: float, what: str) -> None:
    if np.any(~np.isfinite(t)) or np.any(t < -RANGE_TOL) or np.any(t > hi + RANGE_TOL):
        raise ProfileError(f"t outside {what} = [0, {hi:.17g}]")


def eval_profile(prof: MetricProfile, t) -> MetricBlocks:
    """The nine functions on [0, L]."""
    t = np.asarray(t, dtype=float)
    _check_range(t, prof.L, "[0, L]")
    return _blocks(_closed_forms(prof, t))


# --------------------------------------------------------------- extension

def _reduce(rule: SymmetryRule, L: float, t: float, force_segment: int | None = None):
    """Fold t into [0, L]; return (idx, sgn, s) with ext_i(t) = sgn_i * fn_{idx_i}(s).

    The f and g entries ignore sgn.  force_segment picks which side of a seam
    to use, so both one-sided values can be compared.
    """
    p0, s0, pL, sL, _ = rule.value
    idx = [0, 1, 2]
    sgn = [1, 1, 1]
    m = int(math.floor(t / L)) if force_segment is None else force_segment
    # work in segment coordinates so seams are exact
    x = t - m * L
    while m != 0:
        if m > 0:
            # reflect at L: t -> 2L - t maps segment m to 1 - m
            perm, sig = pL, sL
            x = L - x
            m = 1 - m
        else:
            perm, sig = p0, s0
            x = L - x
            m = -m - 1
        for a in range(3):
            sgn[a] *= sig[idx[a]]
            idx[a] = perm[idx[a]]
    return tuple(idx), tuple(sgn), x


def _segment_table(prof: MetricProfile, t: np.ndarray, force: int | None = None):
    shape = t.shape
    t = np.atleast_1d(t)
    out_f = np.empty((3,) + t.shape)
    out_g = np.empty((3,) + t.shape)
    out_h = np.empty((3,) + t.shape)
    seg = np.clip(np.floor(t / prof.L).astype(int), 0, prof.symmetry.span - 1)
    if force is not None:
        seg[...] = force
    for m in np.unique(seg):
        mask = seg == m
        idx, sgn, _ = _reduce(prof.symmetry, prof.L, (m + 0.5) * prof.L)
        x = t[mask] - m * prof.L
        if m % 2:
            x = prof.L - x
        base = _blocks(_closed_forms(prof, x))
        for a in range(3):
            out_f[a][mask] = base.f[idx[a]]
            out_g[a][mask] = base.g[idx[a]]
            out_h[a][mask] = sgn[a] * base.h[idx[a]]
    return MetricBlocks(*(x.reshape((3,) + shape) for x in (out_f, out_g, out_h)))


@lru_cache(maxsize=None)
def seam_defect(prof: MetricProfile) -> float:
    """Largest jump of any extended function across the seams L, 2L, ..."""
    worst = 0.0
    for m in range(1, prof.symmetry.span):
        t = np.array([m * prof.L])
        a = _segment_table(prof, t, m - 1)
        b = _segment_table(prof, t, m)
        for x, y in zip(a.columns(), b.columns()):
            worst = max(worst, float(np.max(np.abs(x - y))))
    return worst


def extend_profile(prof: MetricProfile, t) -> MetricBlocks:
    """The nine functions on [0, T_max] via the Weyl-symmetry rule."""
    d = seam_defect(prof)
    if d > SEAM_TOL:
        raise SeamError(f"{prof.space}: seam discontinuity {d:.3e} exceeds {SEAM_TOL}")
    t = np.asarray(t, dtype=float)
    _check_range(t, prof.t_max, "[0, T_max]")
    return _segment_table(prof, np.clip(t, 0.0, prof.t_max))


def inverse_block(prof: MetricProfile, i: int, t):
    """(F, G, H) = (g_i, f_i, -h_i)/det; for diagonal spaces (1/f_i, 0, 0)."""
    if i not in (1, 2, 3):
        raise ProfileError(f"index must be 1, 2 or 3, got {i}")
    b = extend_profile(prof, t)
    f, g, h = b.f[i - 1], b.g[i - 1], b.h[i - 1]
    if prof.diagonal:
        if np.any(f <= DET_TOL):
            raise SingularBlockError(f"{prof.space}: f_{i} vanishes")
        z = np.zeros_like(f)
        return 1.0 / f, z, z
    det = f * g - h * h
    if np.any(det <= DET_TOL):
        raise SingularBlockError(f"{prof.space}: block {i} is singular (det <= {DET_TOL})")
    return g / det, f / det, -h / det


# ---------------------------------------------------------------- collapse

@dataclass(frozen=True)
class Collapse:
    index: int
    a: int
    b: int


def collapse_direction(prof: MetricProfile, end: str) -> list[Collapse]:
    """Slope pairs (a, b) of the collapsing circle at an endpoint.

    The index is the block whose plane contains the circle's Lie algebra: the
    axis i, j, k of the circle corresponds to index 1, 2, 3.  At a diagonal S^3
    orbit all three diagonal directions (1, 1) collapse.
    """
    if end not in ("minus", "plus"):
        raise ProfileError(f"end must be 'minus' or 'plus', got {end!r}")
    d = prof.diagram()
    K = d.Kminus if end == "minus" else d.Kplus
    comp = K.identity_component
    if isinstance(comp, groups.Diagonal3Sphere):
        return [Collapse(i, 1, 1) for i in (1, 2, 3)]
    if not isinstance(comp, groups.CircleGroup):
        raise ProfileError("no collapsing circle")
    axis = comp.axisL if comp.p else comp.axisR
    index = 1 + max(range(3), key=lambda a: abs(axis.imag()[a]))
    return [Collapse(index, comp.p, comp.q)]


def collapse_residual(prof: MetricProfile, end: str) -> float:
    """max |a^2 f + 2ab h + b^2 g| over the collapsing directions at the end."""
    t = 0.0 if end == "minus" else prof.L
    blk = eval_profile(prof, t)
    worst = 0.0
    for c in collapse_direction(prof, end):
        f, g, h = (float(x[c.index - 1]) for x in (blk.f, blk.g, blk.h))
        worst = max(worst, abs(c.a * c.a * f + 2 * c.a * c.b * h + c.b * c.b * g))
    return worst


# --------------------------------------------------------------- convexity

@dataclass(frozen=True)
class ConvexityReport:
    space: str
    index: int
    intervals: tuple[tuple[float, float], ...]
    min_eigenvalue: float
    min_entry: tuple[float, float, float]
    n: int

    def passed(self, tol: float = 1e-6) -> bool:
        return self.min_eigenvalue >= -tol


def _singular_seams(prof: MetricProfile, i: int) -> list[float]:
    pts = []
    for m in range(prof.symmetry.span + 1):
        b = extend_profile(prof, m * prof.L)
        f, g, h = (float(x[i - 1]) for x in (b.f, b.g, b.h))
        det = f if prof.diagonal else f * g - h * h
        if det <= 1e-10:
            pts.append(m * prof.L)
    return pts


def inverse_convexity(prof: MetricProfile, i: int = 1, n: int = 1001,
                      margin: float = 0.05) -> ConvexityReport:
    """Second central difference of the inverse block away from collapse points.

    The range [0, T_max] is cut at every multiple of L where block i is
    singular and each piece is shrunk by margin.  Matrix convexity is the
    smallest eigenvalue of the difference matrices divided by dt^2 (for
    diagonal spaces the scalar 1/f_i); entrywise convexity is the minimum per
    entry.  Each piece gets n grid points.
    """
    cuts = sorted(set([0.0, prof.t_max] + _singular_seams(prof, i)))
    pieces = [(a + margin, b - margin) for a, b in zip(cuts[:-1], cuts[1:]) if b - a > 2 * margin]
    lam = math.inf
    ent = [math.inf] * 3
    for a, b in pieces:
        t = np.linspace(a, b, n)
        dt = t[1] - t[0]
        d2 = [(x[2:] - 2 * x[1:-1] + x[:-2]) / dt ** 2 for x in inverse_block(prof, i, t)]
        A, C, B = d2
        if prof.diagonal:
            ev = A
        else:
            ev = 0.5 * (A + C) - np.sqrt(0.25 * (A - C) ** 2 + B * B)
        lam = min(lam, float(np.min(ev)))
        ent = [min(e, float(np.min(x))) for e, x in zip(ent, d2)]
    return ConvexityReport(prof.space, i, tuple(pieces), lam, tuple(ent), n)
