"""Slope arithmetic for S^3 x S^3 diagrams with positive curvature candidates.

A diagram in one of five family templates is described by the slopes of the
circle identity components of K- (axis i) and K+ (axis j, or axis i for the
families whose K- is the diagonal S^3).  The filters are:

* zero slopes and non-coprime slopes (not group primitive / product case),
* the template's congruences,
* the normal-weight conditions of the slope lemma on each circle,
* the min-slope condition for H = DeltaQ or {(+-1,+-1),(+-i,+-i)},
* both circles equal to (+-1, +-1) (not group primitive).

Survivors are grouped into orbits of the normalization moves and labeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from . import groups
from .groups import GElem, ONE, QI, QJ, QK, CircleGroup, FiniteSubgroup

__all__ = [
    "ClassifyError", "SlopePair", "FamilyTemplate", "TEMPLATES", "Survivor",
    "ClassificationResult", "lemma_ab", "lemma_c", "enumerate_template", "orbit",
    "BundleSlopes", "bundle_slopes", "golden",
]

Pair = tuple[int, int]
State = tuple[Optional[Pair], Pair]


class ClassifyError(ValueError):
    pass


SlopePair = Pair


def lemma_ab(p: int, q: int, k: int) -> bool:
    """Normal-weight condition on a circle of slopes (p, q) meeting H in Z_k."""
    if k < 1:
        raise ClassifyError(f"normal weight must be >= 1, got {k}")
    if k == 1:
        return False
    if k == 2:
        return abs(p + q) == 1 or abs(p - q) == 1
    return (abs(p), abs(q)) == (1, 1) or abs(2 * p + 2 * q) == k or abs(2 * p - 2 * q) == k


def lemma_c(pm: int, qm: int, pp: int, qp: int) -> bool:
    return min(abs(pp), abs(pm)) == 1 and min(abs(qp), abs(qm)) == 1


# ---------------------------------------------------------------- templates

def _subgroup(name: str, gens) -> FiniteSubgroup:
    return FiniteSubgroup.generated(name, gens)


@dataclass(frozen=True)
class FamilyTemplate:
    id: str
    H: FiniteSubgroup
    minus_axis: Optional[groups.Quat]  # None: K- is the diagonal S^3
    plus_axis: groups.Quat
    minus_rule: Optional[Callable[[int, int], bool]]
    plus_rule: Callable[[int, int], bool]
    declared_weights: tuple[Optional[int], Optional[int]]  # None: depends on slopes
    uses_lemma_c: bool
    description: str


def _odd(x: int) -> bool:
    return x % 2 == 1


TEMPLATES: dict[str, FamilyTemplate] = {
    "EX1A": FamilyTemplate(
        "EX1A", _subgroup("{e}", []), None, QI, None, lambda p, q: True,
        (None, 1), False, "{e} < {DeltaS3, (e^{ipt}, e^{iqt})}"),
    "EX1B": FamilyTemplate(
        "EX1B", _subgroup("{(1,+-1)}", [GElem(ONE, -ONE)]), None, QI, None,
        lambda p, q: p % 2 == 0 and _odd(q),
        (None, 2), False, "{(1,+-1)} < {DeltaS3 H, (e^{ipt}, e^{iqt})}, p even, q odd"),
    "EX2": FamilyTemplate(
        "EX2", _subgroup("<(i,i)>", [GElem(QI, QI)]), QI, QJ,
        lambda p, q: p % 4 == 1 and q % 4 == 1, lambda p, q: True,
        (4, None), False, "<(i,i)>, p-, q- = 1 mod 4, p+, q+ arbitrary"),
    "EX3": FamilyTemplate(
        "EX3", _subgroup("{(+-1,+-1),(+-i,+-i)}", [GElem(-ONE, ONE), GElem(ONE, -ONE), GElem(QI, QI)]),
        QI, QJ, lambda p, q: _odd(p) and _odd(q), lambda p, q: p % 2 == 0 and _odd(q),
        (4, 2), True, "{(+-1,+-1),(+-i,+-i)}, p-, q- odd, p+ even, q+ odd"),
    "EX4": FamilyTemplate(
        "EX4", groups.DELTA_Q, QI, QJ,
        lambda p, q: p % 4 == 1 and q % 4 == 1, lambda p, q: p % 4 == 1 and q % 4 == 1,
        (4, 4), True, "DeltaQ, all slopes = 1 mod 4"),
}


def _template(tid: str) -> FamilyTemplate:
    key = tid.upper()
    if key not in TEMPLATES:
        raise ClassifyError(f"unknown template {tid!r}; expected one of {sorted(TEMPLATES)}")
    return TEMPLATES[key]


_WEIGHTS: dict[tuple[str, str, int, int], int] = {}


def normal_weight(tid: str, side: str, p: int, q: int) -> int:
    """Order of H meeting the circle of slopes (p, q) on the template's side."""
    tpl = _template(tid)
    # elements of an axis-aligned H have order dividing 4, so the weight only
    # depends on the slopes mod 4; memoize on that
    key = (tpl.id, side, p % 4, q % 4)
    if key not in _WEIGHTS:
        axis = tpl.minus_axis if side == "minus" else tpl.plus_axis
        _WEIGHTS[key] = groups.normal_weight(CircleGroup(axis, p, axis, q), tpl.H)
    return _WEIGHTS[key]


# ---------------------------------------------------------------- filters

def _side_filters(tpl: FamilyTemplate, side: str):
    rule = tpl.minus_rule if side == "minus" else tpl.plus_rule

    def nonzero(p, q):
        return p != 0 and q != 0

    def coprime(p, q):
        return math.gcd(p, q) == 1

    def congruence(p, q):
        return rule(p, q)

    def slope_lemma(p, q):
        if p == 0 or q == 0 or math.gcd(p, q) != 1:
            return False
        return lemma_ab(p, q, normal_weight(tpl.id, side, p, q))

    return [("zero slope (group primitivity / product lemma)", nonzero),
            ("slopes not coprime", coprime),
            ("template congruence", congruence),
            ("slope lemma (a)/(b)", slope_lemma)]


def _pair_filters(tpl: FamilyTemplate):
    def min_slopes(m, p):
        if not tpl.uses_lemma_c or m is None:
            return True
        return lemma_c(m[0], m[1], p[0], p[1])

    def primitive(m, p):
        if m is None:
            return True
        return not ((abs(m[0]), abs(m[1])) == (1, 1) and (abs(p[0]), abs(p[1])) == (1, 1))

    return [("slope lemma min condition", min_slopes), ("not group primitive", primitive)]


def _side_survivors(tpl: FamilyTemplate, side: str, N: int, reverse: bool) -> list[Pair]:
    filters = _side_filters(tpl, side)
    if reverse:
        filters = filters[::-1]
    out = []
    for p in range(-N, N + 1):
        for q in range(-N, N + 1):
            if all(fn(p, q) for _, fn in filters):
                out.append((p, q))
    return out


# ------------------------------------------------------------ normalization

def _axis_sign(q: groups.Quat) -> tuple[str, int]:
    for name, ax in (("i", QI), ("j", QJ), ("k", QK)):
        if q.dist(ax) < 1e-9:
            return name, 1
        if q.dist(-ax) < 1e-9:
            return name, -1
    raise ClassifyError(f"conjugated axis {q} is not a coordinate axis")


def _preserves(H: FiniteSubgroup, g: GElem) -> bool:
    return all(H.contains(h.conjugate(g).snapped()) for h in H)


def _swap_preserves(H: FiniteSubgroup) -> bool:
    return all(H.contains(GElem(h.right, h.left)) for h in H)


_ONESIDED = tuple(GElem(a, ONE) for a in (QI, QJ, QK)) + tuple(GElem(ONE, a) for a in (QI, QJ, QK))
_SIDE_EXCHANGE = GElem(groups.quat_exp(QK, math.pi / 4), groups.quat_exp(QK, math.pi / 4))


@lru_cache(maxsize=None)
def _conj_signs(axis: groups.Quat, g: GElem) -> tuple[str, int, int]:
    """Axis a circle on `axis` is moved to by conjugation with g, and the slope signs."""
    c = CircleGroup(axis, 1, axis, 1).conjugated_by(g)
    nl, sl = _axis_sign(c.axisL)
    nr, sr = _axis_sign(c.axisR)
    if nl != nr:
        raise ClassifyError("conjugation split the circle across axes")
    return nl, sl, sr


def _conj_side(pair: Pair, axis: groups.Quat, g: GElem) -> tuple[str, Pair]:
    name, sl, sr = _conj_signs(axis, g)
    return name, (sl * pair[0], sr * pair[1])


@lru_cache(maxsize=None)
def _moves(tid: str) -> tuple[Callable[[State], State], ...]:
    """Normalization moves available for a template, each checked against H."""
    tpl = TEMPLATES[tid]
    moves: list[Callable[[State], State]] = []
    # reparametrizing a circle by t -> -t
    moves.append(lambda s: (s[0], (-s[1][0], -s[1][1])))
    if tpl.minus_axis is not None:
        moves.append(lambda s: ((-s[0][0], -s[0][1]), s[1]))
    # conjugating one K by an element normalizing H
    for g in _ONESIDED:
        if not _preserves(tpl.H, g):
            continue
        if tpl.minus_axis is not None:
            moves.append(lambda s, g=g: (_conj_side(s[0], tpl.minus_axis, g)[1], s[1]))
        moves.append(lambda s, g=g: (s[0], _conj_side(s[1], tpl.plus_axis, g)[1]))
    # interchanging the two S^3 factors
    if _swap_preserves(tpl.H):
        moves.append(lambda s: (None if s[0] is None else (s[0][1], s[0][0]), (s[1][1], s[1][0])))
    # exchanging the roles of K- and K+ by a diagonal conjugation
    if tpl.minus_axis is not None and _preserves(tpl.H, _SIDE_EXCHANGE):
        am = _conj_signs(tpl.minus_axis, _SIDE_EXCHANGE)[0]
        ap = _conj_signs(tpl.plus_axis, _SIDE_EXCHANGE)[0]
        if (am, ap) != ("j", "i"):
            raise ClassifyError("side exchange did not swap the axes")

        def exch(s):
            return (_conj_side(s[1], tpl.plus_axis, _SIDE_EXCHANGE)[1],
                    _conj_side(s[0], tpl.minus_axis, _SIDE_EXCHANGE)[1])
        moves.append(exch)
    return tuple(moves)


def orbit(tid: str, state: State) -> frozenset:
    moves = _moves(_template(tid).id)
    seen = {state}
    frontier = [state]
    while frontier:
        nxt = []
        for s in frontier:
            for mv in moves:
                t = mv(s)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return frozenset(seen)


def _sort_key(s: State):
    return ((0, 0) if s[0] is None else s[0], s[1])


# ----------------------------------------------------------------- labels

def _match(s: State) -> Optional[tuple[str, Optional[int]]]:
    m, p = s
    if m is None:
        a, b = p
        if a > 0 and b > 0 and abs(a - b) == 1:
            return "E_p", min(a, b)
        return None
    if s == ((1, -3), (-3, 1)):
        return "B7", None
    if s == ((1, 3), (2, 1)):
        return "R", None
    if m == (1, 1):
        a, b = p
        if a + b == 2 and a > 1 and (a - 1) % 2 == 0:
            return "P_k", (a - 1) // 2
        if a >= 1 and b == a + 1:
            return "Q_k", a
    return None


@dataclass(frozen=True)
class Survivor:
    minus: Optional[Pair]
    plus: Pair
    label: str
    param: Optional[int]
    orbit_size: int

    def name(self) -> str:
        if self.param is None:
            return self.label
        return self.label.split("_")[0] + f"_{self.param}"


@dataclass(frozen=True)
class ClassificationResult:
    template: str
    bound: int
    survivors: tuple[Survivor, ...]
    raw_count: int
    exclusions: tuple[tuple[str, int], ...]

    def names(self) -> list[str]:
        return [s.name() for s in self.survivors]

    def pairs(self) -> set[State]:
        return {(s.minus, s.plus) for s in self.survivors}


def _run(tpl: FamilyTemplate, N: int, reverse: bool):
    plus = _side_survivors(tpl, "plus", N, reverse)
    if tpl.minus_axis is None:
        combos = [(None, p) for p in plus]
    else:
        minus = _side_survivors(tpl, "minus", N, reverse)
        combos = [(m, p) for m in minus for p in plus]
    filters = _pair_filters(tpl)
    if reverse:
        filters = filters[::-1]
    return [s for s in combos if all(fn(*s) for _, fn in filters)]


def _exclusion_counts(tpl: FamilyTemplate, N: int) -> list[tuple[str, int]]:
    counts: dict[str, int] = {}
    sides = ["plus"] if tpl.minus_axis is None else ["minus", "plus"]
    for side in sides:
        for p in range(-N, N + 1):
            for q in range(-N, N + 1):
                for reason, fn in _side_filters(tpl, side):
                    if not fn(p, q):
                        key = f"{side}: {reason}"
                        counts[key] = counts.get(key, 0) + 1
                        break
    return sorted(counts.items())


def enumerate_template(template: str, N: int, reverse: bool = False) -> ClassificationResult:
    """All slope choices with |p|, |q| <= N passing every filter, one per orbit."""
    if N < 3:
        raise ClassifyError("bound must be at least 3")
    tpl = _template(template)
    raw = _run(tpl, N, reverse)
    by_orbit: dict[State, list[State]] = {}
    covered: set[State] = set()
    for s in raw:
        if s in covered:
            continue
        orb = orbit(tpl.id, s)
        covered |= orb
        key = min(orb, key=_sort_key)
        by_orbit.setdefault(key, sorted(orb, key=_sort_key))
    out = []
    for key, orb in by_orbit.items():
        shown, label, param = key, "none", None
        for s in orb:
            m = _match(s)
            if m is not None:
                shown, (label, param) = s, m
                break
        out.append(Survivor(shown[0], shown[1], label, param, len(orb)))
    order = {"E_p": 0, "B7": 1, "R": 1, "P_k": 2, "Q_k": 2, "none": 3}
    out.sort(key=lambda s: (order[s.label], s.param or 0, _sort_key((s.minus, s.plus))))
    return ClassificationResult(tpl.id, N, tuple(out), len(raw), tuple(_exclusion_counts(tpl, N)))


def golden(template: str, N: int) -> list[str]:
    """Expected survivor names from the family case analysis."""
    t = template.upper()
    if t in ("EX1A", "EX2"):
        return []
    if t == "EX1B":
        return [f"E_{p}" for p in range(1, N)]
    if t == "EX3":
        return ["R"] + [f"Q_{p}" for p in range(1, N)]
    if t == "EX4":
        return ["B7"] + [f"P_{k}" for k in range(1, (N - 1) // 2 + 1)]
    raise ClassifyError(f"unknown template {template!r}")


# ------------------------------------------------------------ bundle slopes

@dataclass(frozen=True)
class BundleSlopes:
    k: int
    frame: tuple[tuple[int, int, int], tuple[int, int, int]]
    selfdual: tuple[Pair, Pair]
    antiselfdual: tuple[Pair, Pair]


def bundle_slopes(k: int) -> BundleSlopes:
    """Slopes of the singular isotropy circles of the frame bundles over O_k.

    A slope (p, q) in the maximal torus of SO(4) maps to (p + q, -p + q) in
    SO(3)SO(3).  For even k the right-hand circle is divided by 2 to be
    effective.
    """
    if k < 1:
        raise ClassifyError("k must be >= 1")
    left4 = (1, -1, 2)
    right4 = (k, -k, -2)

    def image(s):
        a, p, q = s
        return (a, p + q, -p + q)

    fl = image(left4)
    fr = image(right4)
    div = 2 if k % 2 == 0 else 1
    sd = ((fl[0], fl[1]), (fr[0] // div, fr[1] // div))
    asd = ((fl[0], fl[2]), (fr[0] // div, fr[2] // div))
    return BundleSlopes(k, (fl, fr), sd, asd)
