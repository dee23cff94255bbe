"""Quaternion and S^3 x S^3 arithmetic, group diagrams and Weyl groups.

Elements of S^3 x S^3 are pairs of unit quaternions. Isotropy groups are a
connected identity component (a circle, the diagonal S^3, or trivial) times
finitely many coset representatives.  Finite subgroups are restricted to
axis-aligned ones: every component of every element is one of 0, +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "GroupError", "DomainError", "UnsupportedGroupError", "IllFormedDiagramError",
    "Quat", "GElem", "FiniteSubgroup", "CircleGroup", "Diagonal3Sphere", "Trivial",
    "IsotropyGroup", "GroupDiagram", "quat_exp", "in_subgroup", "snap", "catalog",
    "CATALOG_NAMES", "circle_hits", "normal_weight", "weyl_rep", "weyl_reps", "weyl_order",
    "ONE", "QI", "QJ", "QK", "Q8", "DELTA_Q",
]

UNIT_TOL = 1e-12
SNAP_TOL = 1e-9
MEMBER_TOL = 1e-9
WEYL_SEARCH_BOUND = 1000

_GRID = (0.0, 0.5, 1.0 / math.sqrt(2.0), math.sqrt(3.0) / 2.0, 1.0)


class GroupError(ValueError):
    pass


class DomainError(GroupError):
    pass


class UnsupportedGroupError(GroupError):
    pass


class IllFormedDiagramError(GroupError):
    pass


def snap(x: float, tol: float = SNAP_TOL) -> float:
    """Round x onto the grid {0, +-1/2, +-1/sqrt2, +-sqrt3/2, +-1} if within tol."""
    a = abs(x)
    for g in _GRID:
        if abs(a - g) < tol:
            return math.copysign(g, x) if g else 0.0
    return x


@dataclass(frozen=True)
class Quat:
    re: float
    i: float = 0.0
    j: float = 0.0
    k: float = 0.0

    def __mul__(self, o: "Quat") -> "Quat":
        a1, b1, c1, d1 = self.re, self.i, self.j, self.k
        a2, b2, c2, d2 = o.re, o.i, o.j, o.k
        return Quat(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "Quat":
        return Quat(-self.re, -self.i, -self.j, -self.k)

    def __add__(self, o: "Quat") -> "Quat":
        return Quat(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)

    def scale(self, s: float) -> "Quat":
        return Quat(s * self.re, s * self.i, s * self.j, s * self.k)

    def conj(self) -> "Quat":
        return Quat(self.re, -self.i, -self.j, -self.k)

    def norm2(self) -> float:
        return self.re ** 2 + self.i ** 2 + self.j ** 2 + self.k ** 2

    def inverse(self) -> "Quat":
        n = self.norm2()
        if n == 0.0:
            raise DomainError("zero quaternion has no inverse")
        return self.conj().scale(1.0 / n)

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.norm2() - 1.0) <= tol

    def is_imaginary(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.re) <= tol

    def coords(self) -> tuple[float, float, float, float]:
        return (self.re, self.i, self.j, self.k)

    def imag(self) -> tuple[float, float, float]:
        return (self.i, self.j, self.k)

    def dist(self, o: "Quat") -> float:
        return max(abs(x - y) for x, y in zip(self.coords(), o.coords()))

    def snapped(self, tol: float = SNAP_TOL) -> "Quat":
        return Quat(*(snap(x, tol) for x in self.coords()))

    def is_axis_aligned(self, tol: float = SNAP_TOL) -> bool:
        c = self.coords()
        nz = [x for x in c if abs(x) > tol]
        return len(nz) == 1 and abs(abs(nz[0]) - 1.0) <= tol

    def __repr__(self) -> str:
        return f"Quat({self.re:.6g}, {self.i:.6g}, {self.j:.6g}, {self.k:.6g})"


ONE = Quat(1.0)
QI = Quat(0.0, 1.0, 0.0, 0.0)
QJ = Quat(0.0, 0.0, 1.0, 0.0)
QK = Quat(0.0, 0.0, 0.0, 1.0)
Q8 = (ONE, -ONE, QI, -QI, QJ, -QJ, QK, -QK)


def quat_exp(axis: Quat, angle: float) -> Quat:
    """cos(angle) + sin(angle) * axis for a unit imaginary axis."""
    if not axis.is_imaginary() or not axis.is_unit():
        raise DomainError(f"axis must be unit imaginary, got {axis!r}")
    s = math.sin(angle)
    return Quat(math.cos(angle), s * axis.i, s * axis.j, s * axis.k)


@dataclass(frozen=True)
class GElem:
    left: Quat
    right: Quat

    def __mul__(self, o: "GElem") -> "GElem":
        return GElem(self.left * o.left, self.right * o.right)

    def __neg__(self) -> "GElem":
        return GElem(-self.left, -self.right)

    def inverse(self) -> "GElem":
        return GElem(self.left.conj(), self.right.conj())

    def dist(self, o: "GElem") -> float:
        return max(self.left.dist(o.left), self.right.dist(o.right))

    def snapped(self, tol: float = SNAP_TOL) -> "GElem":
        return GElem(self.left.snapped(tol), self.right.snapped(tol))

    def conjugate(self, g: "GElem") -> "GElem":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return self.left.is_unit(tol) and self.right.is_unit(tol)

    def is_axis_aligned(self) -> bool:
        return self.left.is_axis_aligned() and self.right.is_axis_aligned()


IDENTITY = GElem(ONE, ONE)


@dataclass(frozen=True)
class FiniteSubgroup:
    name: str
    elements: tuple[GElem, ...]

    def __post_init__(self):
        if not self.elements:
            raise GroupError(f"{self.name}: empty subgroup")

    @classmethod
    def generated(cls, name: str, gens: Iterable[GElem], limit: int = 512) -> "FiniteSubgroup":
        """Close a generating set under multiplication (with snapping)."""
        elems = [IDENTITY]
        frontier = [IDENTITY]
        gens = [g.snapped() for g in gens]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = (a * g).snapped()
                    if not any(c.dist(e) < MEMBER_TOL for e in elems):
                        elems.append(c)
                        nxt.append(c)
                        if len(elems) > limit:
                            raise GroupError(f"{name}: generated group exceeds {limit} elements")
            frontier = nxt
        return cls(name, tuple(elems))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def contains(self, g: GElem, tol: float = MEMBER_TOL) -> bool:
        return any(g.dist(h) <= tol for h in self.elements)

    def is_axis_aligned(self) -> bool:
        return all(e.is_axis_aligned() for e in self.elements)

    def check_group(self, tol: float = UNIT_TOL) -> None:
        """Raise GroupError unless identity, inverses and products stay inside."""
        if not self.contains(IDENTITY, tol):
            raise GroupError(f"{self.name}: missing identity")
        for a in self.elements:
            if not self.contains(a.inverse().snapped(), tol):
                raise GroupError(f"{self.name}: not closed under inverse at {a}")
            for b in self.elements:
                if not self.contains((a * b).snapped(), tol):
                    raise GroupError(f"{self.name}: not closed under products at {a}, {b}")


def _unit_imaginary(q: Quat, what: str) -> None:
    if not q.is_imaginary() or not q.is_unit():
        raise DomainError(f"{what} must be a unit imaginary quaternion, got {q!r}")


@dataclass(frozen=True)
class CircleGroup:
    """t -> (exp(p*axisL*t), exp(q*axisR*t)); period 2*pi."""

    axisL: Quat
    p: int
    axisR: Quat
    q: int

    def __post_init__(self):
        _unit_imaginary(self.axisL, "axisL")
        _unit_imaginary(self.axisR, "axisR")
        if self.p == 0 and self.q == 0:
            raise DomainError("circle with slopes (0, 0) is a point")
        if self.p and self.q and math.gcd(abs(self.p), abs(self.q)) != 1:
            raise DomainError(f"slopes ({self.p}, {self.q}) are not coprime")

    dim = 1

    def __call__(self, t: float) -> GElem:
        return GElem(quat_exp(self.axisL, self.p * t), quat_exp(self.axisR, self.q * t))

    @property
    def slopes(self) -> tuple[int, int]:
        return (self.p, self.q)

    def contains(self, g: GElem, tol: float = MEMBER_TOL) -> bool:
        for t in _circle_params(self, g, tol):
            if self(t).dist(g) <= tol:
                return True
        return False

    def conjugated_by(self, g: GElem) -> "CircleGroup":
        aL = (g.left * self.axisL * g.left.conj()).snapped()
        aR = (g.right * self.axisR * g.right.conj()).snapped()
        return CircleGroup(aL, self.p, aR, self.q)


@dataclass(frozen=True)
class Diagonal3Sphere:
    """The diagonal {(q, q)} inside S^3 x S^3."""

    dim = 3

    def contains(self, g: GElem, tol: float = MEMBER_TOL) -> bool:
        return g.left.dist(g.right) <= tol


@dataclass(frozen=True)
class Trivial:
    dim = 0

    def contains(self, g: GElem, tol: float = MEMBER_TOL) -> bool:
        return g.dist(IDENTITY) <= tol


def _angle_on_axis(x: Quat, axis: Quat, tol: float) -> float | None:
    """theta with x = exp(theta*axis), or None if x is off that circle."""
    ax = axis.imag()
    xi = x.imag()
    s = sum(a * b for a, b in zip(ax, xi))
    if max(abs(c - s * a) for a, c in zip(ax, xi)) > tol:
        return None
    return math.atan2(s, x.re)


def _circle_params(c: CircleGroup, g: GElem, tol: float) -> list[float]:
    """Candidate t in (0, 2pi] with c(t) possibly equal to g."""
    if c.p != 0:
        theta = _angle_on_axis(g.left, c.axisL, tol)
        n = c.p
    else:
        theta = _angle_on_axis(g.right, c.axisR, tol)
        n = c.q
    if theta is None:
        return []
    out = []
    for m in range(-abs(n) - 1, abs(n) + 2):
        t = (theta + 2.0 * math.pi * m) / n
        if 1e-12 < t <= 2.0 * math.pi + 1e-12:
            out.append(t)
    return sorted(out)


@dataclass(frozen=True)
class IsotropyGroup:
    identity_component: CircleGroup | Diagonal3Sphere | Trivial
    coset_reps: tuple[GElem, ...] = (IDENTITY,)
    weyl_override: GElem | None = None

    def __post_init__(self):
        comp = self.identity_component
        if isinstance(comp, CircleGroup):
            for g in self.coset_reps:
                c = comp.conjugated_by(g)
                # conjugate circle must be the same subgroup (possibly reversed)
                if not all(comp.contains(c(t)) for t in (0.3, 1.1)):
                    raise GroupError(f"coset representative {g} does not normalize {comp}")

    @property
    def dim(self) -> int:
        return self.identity_component.dim

    def contains(self, g: GElem, tol: float = MEMBER_TOL) -> bool:
        comp = self.identity_component
        return any(comp.contains((c.inverse() * g).snapped(), tol) for c in self.coset_reps)


@dataclass(frozen=True)
class GroupDiagram:
    name: str
    H: FiniteSubgroup
    Kminus: IsotropyGroup
    Kplus: IsotropyGroup
    L: float
    params: tuple[tuple[str, float], ...] = ()
    label: str | None = None

    def __post_init__(self):
        if not self.L > 0:
            raise GroupError(f"{self.name}: L must be positive")
        for side, K in (("K-", self.Kminus), ("K+", self.Kplus)):
            for h in self.H:
                if not K.contains(h):
                    raise IllFormedDiagramError(f"{self.name}: H element {h} not in {side}")

    def slice_dims(self) -> tuple[int, int]:
        """(l-, l+) = dim K - dim H + 1 with H finite."""
        return (self.Kminus.dim + 1, self.Kplus.dim + 1)

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)


def in_subgroup(g: GElem, H: FiniteSubgroup, tol: float = MEMBER_TOL) -> bool:
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    return H.contains(g, tol)


def circle_hits(c: CircleGroup, H: FiniteSubgroup) -> list[float]:
    """All t in (0, 2pi] with c(t) in H, sorted."""
    if not H.is_axis_aligned():
        raise UnsupportedGroupError(f"{H.name}: only axis-aligned finite subgroups are supported")
    hits = []
    for h in H:
        for t in _circle_params(c, h, MEMBER_TOL):
            if c(t).snapped().dist(h) <= MEMBER_TOL and not any(abs(t - s) < 1e-9 for s in hits):
                hits.append(t)
    return sorted(hits)


def normal_weight(c: CircleGroup, H: FiniteSubgroup) -> int:
    """Order of H intersected with the circle, i.e. k in H cap K0 = Z_k."""
    return len(circle_hits(c, H))


def weyl_rep(K: IsotropyGroup, H: FiniteSubgroup) -> GElem:
    """Involution w in K with w^2 in H and w not in H (half of the first return)."""
    if K.weyl_override is not None:
        return K.weyl_override
    comp = K.identity_component
    if not isinstance(comp, CircleGroup):
        raise UnsupportedGroupError("Weyl element needs a circle identity component or an override")
    hits = circle_hits(comp, H)
    if not hits:
        raise IllFormedDiagramError(f"circle {comp.slopes} never meets {H.name} within one period")
    w = comp(hits[0] / 2.0).snapped()
    if H.contains(w) or not H.contains((w * w).snapped()):
        raise IllFormedDiagramError(f"half-step element {w} is not an involution modulo {H.name}")
    return w


def weyl_reps(d: GroupDiagram) -> tuple[GElem, GElem]:
    return weyl_rep(d.Kminus, d.H), weyl_rep(d.Kplus, d.H)


def weyl_order(d: GroupDiagram, bound: int = WEYL_SEARCH_BOUND) -> int:
    """|W| = 2n with n minimal such that (w+ w-)^n lies in H."""
    wm, wp = weyl_reps(d)
    a = (wp * wm).snapped()
    x = a
    for n in range(1, bound + 1):
        if d.H.contains(x):
            return 2 * n
        x = (x * a).snapped()
    raise IllFormedDiagramError(f"{d.name}: (w+ w-)^n not in H for n <= {bound}")


# ---------------------------------------------------------------- catalog

DELTA_Q = FiniteSubgroup("DeltaQ", tuple(GElem(q, q) for q in Q8))


def _pm_pairs(name: str, a: Quat) -> FiniteSubgroup:
    """{(+-1, +-1), (+-a, +-a)}."""
    gens = [GElem(-ONE, ONE), GElem(ONE, -ONE), GElem(a, a)]
    return FiniteSubgroup.generated(name, gens)


def _circle(axis: Quat, p: int, q: int, axis_r: Quat | None = None) -> CircleGroup:
    return CircleGroup(axis, p, axis if axis_r is None else axis_r, q)


def _iso(comp, H: FiniteSubgroup, override: GElem | None = None) -> IsotropyGroup:
    return IsotropyGroup(comp, H.elements, override)


def _e_p(name: str, p: int) -> GroupDiagram:
    sgn = GElem(ONE.scale((-1.0) ** (p + 1)), ONE.scale((-1.0) ** p))
    H = FiniteSubgroup(f"Z2[{p}]", (IDENTITY, sgn))
    km = _iso(Diagonal3Sphere(), H, GElem(-ONE, -ONE))
    kp = _iso(_circle(QI, p + 1, p), H)
    return GroupDiagram(name, H, km, kp, math.pi / 2, (("p", p),),
                        "W1" if p == 1 else None)


def _require_int(params: dict, key: str) -> int:
    if key not in params:
        raise GroupError(f"missing parameter {key}")
    v = params[key]
    if int(v) != v or int(v) < 1:
        raise GroupError(f"parameter {key} must be an integer >= 1, got {v}")
    return int(v)


CATALOG_NAMES = ("S4", "CP2", "S7", "B7", "E_p", "W1", "W2", "W2alt", "P_k", "Q_k", "R")


def catalog(name: str, **params) -> GroupDiagram:
    """Group diagram of a named space.  E_p needs p, P_k and Q_k need k."""
    if name == "S4":
        H = FiniteSubgroup("Q", tuple(GElem(q, ONE) for q in Q8))
        return GroupDiagram("S4", H, _iso(_circle(QI, 1, 0), H), _iso(_circle(QJ, 1, 0), H),
                            math.pi / 3)
    if name == "CP2":
        H = FiniteSubgroup("{+-1,+-j}", tuple(GElem(q, ONE) for q in (ONE, -ONE, QJ, -QJ)))
        return GroupDiagram("CP2", H, _iso(_circle(QI, 1, 0), H), _iso(_circle(QJ, 1, 0), H),
                            math.pi / 4)
    if name == "S7":
        H = DELTA_Q
        return GroupDiagram("S7", H, _iso(_circle(QI, -3, 1), H), _iso(_circle(QJ, 1, 1), H),
                            math.pi / 6)
    if name == "B7":
        H = DELTA_Q
        return GroupDiagram("B7", H, _iso(_circle(QI, -3, 1), H), _iso(_circle(QJ, 1, -3), H),
                            math.pi / 3)
    if name == "E_p":
        return _e_p("E_p", _require_int(params, "p"))
    if name == "W1":
        return _e_p("W1", 1)
    if name == "W2":
        H = _pm_pairs("{(+-1,+-1),(+-j,+-j)}", QJ)
        return GroupDiagram("W2", H, _iso(_circle(QI, 1, -2), H), _iso(_circle(QJ, 1, 1), H),
                            math.pi / 4)
    if name == "W2alt":
        H = _pm_pairs("{(+-1,+-1),(+-i,+-i)}", QI)
        return GroupDiagram("W2alt", H, _iso(_circle(QI, 1, 1), H), _iso(_circle(QJ, 1, 2), H),
                            math.pi / 4, (), "W2")
    if name == "P_k":
        k = _require_int(params, "k")
        H = DELTA_Q
        return GroupDiagram("P_k", H, _iso(_circle(QI, 1, 1), H),
                            _iso(_circle(QJ, 1 + 2 * k, 1 - 2 * k), H), 1.0, (("k", k),),
                            "S7" if k == 1 else None)
    if name == "Q_k":
        k = _require_int(params, "k")
        H = _pm_pairs("{(+-1,+-1),(+-i,+-i)}", QI)
        return GroupDiagram("Q_k", H, _iso(_circle(QI, 1, 1), H),
                            _iso(_circle(QJ, k, k + 1), H), 1.0, (("k", k),),
                            "W2" if k == 1 else None)
    if name == "R":
        H = _pm_pairs("{(+-1,+-1),(+-i,+-i)}", QI)
        return GroupDiagram("R", H, _iso(_circle(QI, 1, 2), H), _iso(_circle(QJ, 3, 1), H), 1.0)
    raise GroupError(f"unknown catalog space {name!r}")
