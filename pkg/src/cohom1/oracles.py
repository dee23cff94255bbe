"""Matrix-level recomputation of metric functions from action fields.

Each oracle builds the action fields X_i*, Y_i* along the normal geodesic as
explicit matrices and takes inner products.  Nothing here reads the closed
forms in `profiles`; agreement between the two is what the tests check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import MetricBlocks

__all__ = [
    "OracleError", "sym_traceless_basis", "E", "F", "I_su3", "E_su3",
    "s4_action_norms", "b7_fields", "b7_action_norms", "B7_H",
    "EschenburgResult", "eschenburg_oracle", "vertical_norm_formula",
    "plane_rotation", "b7_gram", "B7_INDEX_MAP", "b7_blocks",
]


class OracleError(ValueError):
    pass


def E(i: int, j: int, n: int = 3) -> np.ndarray:
    """Skew basis matrix: +1 at (i, j), -1 at (j, i) (1-based)."""
    m = np.zeros((n, n))
    m[i - 1, j - 1] = 1.0
    m[j - 1, i - 1] = -1.0
    return m


def F(i: int, j: int) -> np.ndarray:
    return E(i, j, 5)


def plane_rotation(n: int, i: int, j: int, t: float, dtype=float) -> np.ndarray:
    """exp(t * E(i, j)) in closed form: a rotation in the (i, j) plane."""
    r = np.eye(n, dtype=dtype)
    c, s = math.cos(t), math.sin(t)
    a, b = i - 1, j - 1
    r[a, a] = c
    r[b, b] = c
    r[a, b] = s
    r[b, a] = -s
    return r


# ---------------------------------------------------------------- S^4

def sym_traceless_basis() -> list[np.ndarray]:
    """Orthonormal basis e_1..e_5 of symmetric traceless 3x3 matrices under tr(AB)."""
    s2 = math.sqrt(2.0)
    e1 = np.diag([1.0, 1.0, -2.0]) / math.sqrt(6.0)
    e2 = np.diag([1.0, -1.0, 0.0]) / s2
    out = [e1, e2]
    for a, b in ((0, 1), (0, 2), (1, 2)):
        m = np.zeros((3, 3))
        m[a, b] = m[b, a] = 1.0 / s2
        out.append(m)
    return out


def s4_action_norms(t: float) -> tuple[float, float, float]:
    """|[E_ij, gamma(t)]|^2 for (ij) = (12), (23), (13), gamma = cos t e1 + sin t e2."""
    e = sym_traceless_basis()
    gamma = math.cos(t) * e[0] + math.sin(t) * e[1]
    out = []
    for i, j in ((1, 2), (2, 3), (1, 3)):
        x = E(i, j) @ gamma - gamma @ E(i, j)
        out.append(float(np.trace(x @ x)))
    return tuple(out)


def s4_cross_products(t: float) -> np.ndarray:
    """Matrix of tr(A B) between the three action fields (off-diagonals vanish)."""
    e = sym_traceless_basis()
    gamma = math.cos(t) * e[0] + math.sin(t) * e[1]
    xs = [E(i, j) @ gamma - gamma @ E(i, j) for i, j in ((1, 2), (2, 3), (1, 3))]
    return np.array([[np.trace(a @ b) for b in xs] for a in xs])


# ---------------------------------------------------------------- B^7

def _q_so(a: np.ndarray, b: np.ndarray) -> float:
    return float(-0.5 * np.trace(a @ b))


B7_H = (
    2 * F(2, 3) + F(4, 5),
    F(3, 4) + math.sqrt(3.0) * F(1, 5) - F(2, 5),
    F(3, 5) + math.sqrt(3.0) * F(1, 4) + F(2, 4),
)


def _quat_mult_matrix(q: tuple[float, float, float, float], side: str) -> np.ndarray:
    """4x4 real matrix of x -> q x (left) or x -> x q (right) on (1, i, j, k) coordinates."""
    basis = np.eye(4)
    cols = []
    for x in basis:
        cols.append(_qmul(q, x) if side == "left" else _qmul(x, q))
    return np.array(cols).T


def _qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


_UNITS = ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def _so4_lift(u, side: str) -> np.ndarray:
    """so(4) = sp(1) + sp(1) inside so(5) on coordinates e_2..e_5.

    (a, b) acts by x -> a x b^-1; the left generator u maps to -(x -> u x) and
    the right one to -(x -> -x u), which sends X_1 to F23 + F45 and Y_1 to
    -F23 + F45.
    """
    m = _quat_mult_matrix(u, side)
    out = np.zeros((5, 5))
    out[1:, 1:] = -m if side == "left" else m
    return out


def b7_fields(t: float) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Projected action fields X_i*, Y_i* (i = 1..3) at gamma(t)."""
    g = plane_rotation(5, 1, 2, -t)
    xs, ys = [], []
    for u in _UNITS:
        xb = g @ _so4_lift(u, "left") @ g.T
        yb = g @ _so4_lift(u, "right") @ g.T
        xs.append(_proj_h(xb))
        ys.append(_proj_h(yb))
    return xs, ys


def _proj_h(x: np.ndarray) -> np.ndarray:
    for h in B7_H:
        x = x - _q_so(x, h) / _q_so(h, h) * h
    return x


def b7_action_norms(t: float) -> tuple[float, float, float]:
    """(f_1, g_1, h_1) = (|X_1*|^2, |Y_1*|^2, <X_1*, Y_1*>) under Q = -tr/2."""
    xs, ys = b7_fields(t)
    return _q_so(xs[0], xs[0]), _q_so(ys[0], ys[0]), _q_so(xs[0], ys[0])


def b7_gram(t: float) -> np.ndarray:
    """6x6 Gram matrix of (X_1*, X_2*, X_3*, Y_1*, Y_2*, Y_3*)."""
    xs, ys = b7_fields(t)
    v = xs + ys
    return np.array([[_q_so(a, b) for b in v] for a in v])


# The oracle's raw indices (i, j, k) land on profile indices (1, 3, 2): the
# so(4) frame here and the one behind the closed forms differ by swapping the
# last two units.  Fixed once after comparing the Gram matrix at generic t.
B7_INDEX_MAP = (0, 2, 1)


def b7_blocks(t: float) -> tuple[MetricBlocks, float]:
    """(f, g, h) in profile index order, plus the largest cross term declared zero."""
    G = b7_gram(t)
    f, g, h = np.empty(3), np.empty(3), np.empty(3)
    for a in range(3):
        j = B7_INDEX_MAP[a]
        f[a], g[a], h[a] = G[j, j], G[3 + j, 3 + j], G[j, 3 + j]
    mask = np.ones((6, 6), dtype=bool)
    for j in range(3):
        mask[j, j] = mask[3 + j, 3 + j] = mask[j, 3 + j] = mask[3 + j, j] = False
    return MetricBlocks(f, g, h), float(np.max(np.abs(G[mask])))


# ---------------------------------------------------------------- Eschenburg

def E_su3(k: int, l: int) -> np.ndarray:
    return E(k, l).astype(complex)


def I_su3(k: int, l: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[k - 1, l - 1] = 1j
    m[l - 1, k - 1] = 1j
    return m


def _q_su(a: np.ndarray, b: np.ndarray) -> float:
    return float(-0.5 * np.real(np.trace(a @ b)))


def _split_u2(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Component in u(2) = {diag(A, det conj A)} and its Q-orthogonal complement."""
    k = np.zeros_like(x)
    k[:2, :2] = x[:2, :2]
    k[2, 2] = x[2, 2]
    return k, x - k


def _ip_eps(a: np.ndarray, b: np.ndarray, eps: float) -> float:
    ak, ap = _split_u2(a)
    bk, bp = _split_u2(b)
    return eps * _q_su(ak, bk) + _q_su(ap, bp)


def vertical_norm_formula(p: int, eps: float, t):
    c2 = np.cos(t) ** 2
    s2 = np.sin(t) ** 2
    return 3 * eps + (1 - p) ** 2 * (1 - eps) * c2 * s2 + eps * (p + 2) * (p - 1) * s2


@dataclass(frozen=True)
class EschenburgResult:
    blocks: MetricBlocks
    v_norm2: float
    horizontality: float  # max |<Z, v>| over Z in {X2, X3, Y2, Y3} before projection
    cross_max: float  # max |<A*, B*>| over the pairs declared zero


def eschenburg_oracle(p: int, eps: float, t: float) -> EschenburgResult:
    """Action fields on SU(3) projected horizontally for the circle S^1_p."""
    if p < 1 or int(p) != p:
        raise OracleError(f"p must be an integer >= 1, got {p}")
    if not 0 < eps:
        raise OracleError(f"eps must be positive, got {eps}")
    g = plane_rotation(3, 1, 3, -t, complex)
    gi = g.T
    ad = lambda x: g @ x @ gi
    d = np.diag([1j, -1j, 0])
    xb = [ad(d), ad(E_su3(1, 2)), ad(I_su3(1, 2))]
    yb = [-d, -E_su3(1, 2), -I_su3(1, 2)]
    v = ad(1j * np.diag([1.0, 1.0, float(p)])) - 1j * np.diag([0.0, 0.0, p + 2.0])
    vv = _ip_eps(v, v, eps)
    if vv < 1e-12:
        raise OracleError("vertical vector degenerates")
    hor = max(abs(_ip_eps(z, v, eps)) for z in (xb[1], xb[2], yb[1], yb[2]))
    proj = lambda x: x - _ip_eps(x, v, eps) / vv * v
    xs = [proj(x) for x in xb]
    ys = [proj(y) for y in yb]
    f = np.array([_ip_eps(x, x, eps) for x in xs])
    gg = np.array([_ip_eps(y, y, eps) for y in ys])
    h = np.array([_ip_eps(x, y, eps) for x, y in zip(xs, ys)])
    allv = xs + ys
    cross = 0.0
    for a in range(6):
        for b in range(a + 1, 6):
            if b - a == 3:
                continue  # <X_i*, Y_i*> = h_i
            cross = max(cross, abs(_ip_eps(allv[a], allv[b], eps)))
    return EschenburgResult(MetricBlocks(f, gg, h), vv, hor, cross)
