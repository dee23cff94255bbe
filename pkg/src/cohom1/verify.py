"""Invariant suites shared by the CLI and the acceptance tests.

Each suite returns a list of Check records holding the measured quantity,
the tolerance it was held to and whether a failure should fail the run.
Report-only checks (hard=False) are printed but never change the exit code.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import classify, groups, hitchin, oracles, profiles

__all__ = ["Check", "SUITES", "run_suite", "run_all", "format_check", "hard_failures",
           "hitchin_curvature_checks", "embedding_checks"]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tol: float
    passed: bool
    hard: bool = True


def _le(suite: str, name: str, value: float, tol: float, hard: bool = True) -> Check:
    value = float(value)
    return Check(suite, name, value, tol, bool(value <= tol), hard)


def _ge(suite: str, name: str, value: float, bound: float, hard: bool = True) -> Check:
    value = float(value)
    return Check(suite, name, value, bound, bool(value >= bound), hard)


def _maxdiff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# ------------------------------------------------------------------ collapse

COLLAPSE_CASES: tuple[tuple[str, int | None, float | None], ...] = (
    ("S4", None, None), ("CP2", None, None), ("S7", None, None), ("B7", None, None),
    *(("E_p", p, e) for p in (1, 2, 10) for e in (0.5, 0.9)),
    *((w, None, e) for w in ("W1", "W2") for e in (0.5, 1.0, 2.0)),
)


def _case_name(space, p, eps) -> str:
    out = space
    if p is not None and space == "E_p":
        out += f"[p={p}]"
    if eps is not None:
        out += f"[eps={eps}]"
    return out


def suite_collapse() -> list[Check]:
    out = []
    for space, p, eps in COLLAPSE_CASES:
        prof = profiles.profile(space, p=p, eps=eps)
        for end in ("minus", "plus"):
            res = profiles.collapse_residual(prof, end)
            out.append(_le("collapse", f"{_case_name(space, p, eps)}:{end}", res, 1e-12))
    return out


# --------------------------------------------------------------------- weyl

WEYL_ORDERS = {"S4": 6, "CP2": 4, "S7": 12, "B7": 6, "E_p": 4, "W2": 8}


def _ext(prof, t):
    return profiles.extend_profile(prof, t)


def _cyclic_checks(space: str, n: int) -> list[Check]:
    """f_2(t) = f_1(t + 2L) and f_3(t) = f_1(2L - t) for all three families."""
    prof = profiles.profile(space)
    L = prof.L
    t = np.linspace(0.0, L, n)
    base = profiles.eval_profile(prof, t)
    fwd = _ext(prof, t + 2 * L)
    back = _ext(prof, 2 * L - t)
    same = _ext(prof, t)
    worst = 0.0
    for name in ("f", "g", "h"):
        b, f, k, s = (getattr(x, name) for x in (base, fwd, back, same))
        worst = max(worst, _maxdiff(b[1], f[0]), _maxdiff(b[2], k[0]), _maxdiff(b, s))
    return [_le("weyl", f"{space}:cyclic", worst, 1e-12)]


def _reflect_checks(n: int) -> list[Check]:
    """f_3(t) = f_1(2L - t), f_2(t) = f_2(2L - t); f_2 even at 0."""
    prof = profiles.profile("CP2")
    L = prof.L
    t = np.linspace(0.0, L, n)
    base = profiles.eval_profile(prof, t)
    back = _ext(prof, 2 * L - t)
    worst = max(_maxdiff(base.f[2], back.f[0]), _maxdiff(base.f[1], back.f[1]),
                _maxdiff(base.f[0], back.f[2]))
    out = [_le("weyl", "CP2:reflect", worst, 1e-12)]
    out.append(_le("weyl", "CP2:f2-even-at-0", _even_defect(prof, 0.0, "f", 2), 1e-8))
    return out


def _modified_checks(n: int, eps: float = 0.5) -> list[Check]:
    """W_2: f, g as for CP^2; h_3(t) = -h_1(2L - t) = h_1(t + 2L), h_2(t) = h_2(2L - t)."""
    prof = profiles.profile("W2", eps=eps)
    L = prof.L
    t = np.linspace(0.0, L, n)
    base = profiles.eval_profile(prof, t)
    back = _ext(prof, 2 * L - t)
    fwd = _ext(prof, t + 2 * L)
    fg = 0.0
    for name in ("f", "g"):
        b, k, f = (getattr(x, name) for x in (base, back, fwd))
        fg = max(fg, _maxdiff(b[2], k[0]), _maxdiff(b[2], f[0]), _maxdiff(b[1], k[1]))
    h = max(_maxdiff(base.h[2], -back.h[0]), _maxdiff(base.h[2], fwd.h[0]),
            _maxdiff(base.h[1], back.h[1]))
    # h_2(t) = -h_2(-t): odd at 0 through the analytic closed form
    odd0 = _odd_defect(prof, 0.0, 2)
    return [
        _le("weyl", f"W2[eps={eps}]:f,g-reflect", fg, 1e-12),
        _le("weyl", f"W2[eps={eps}]:h-modified", h, 1e-12),
        _le("weyl", f"W2[eps={eps}]:h2-odd-at-0", odd0, 1e-8),
    ]


_DELTA = 1e-5


def _analytic(prof, t):
    return profiles._blocks(profiles._closed_forms(prof, np.asarray(t, dtype=float)))


def _even_defect(prof, c: float, name: str, i: int) -> float:
    """|X(c + d) - X(c - d)| / (2 d) relative to the scale of X."""
    v = _analytic(prof, np.array([c - _DELTA, c, c + _DELTA]))
    x = getattr(v, name)[i - 1]
    return abs(x[2] - x[0]) / (2 * _DELTA) / max(1.0, abs(x[1]))


def _odd_defect(prof, c: float, i: int) -> float:
    v = _analytic(prof, np.array([c - _DELTA, c, c + _DELTA]))
    x = v.h[i - 1]
    return max(abs(x[1]), abs(x[2] + x[0]) / 2)


def _even2_checks(space: str, p: int | None, eps: float) -> list[Check]:
    prof = profiles.profile(space, p=p, eps=eps)
    tag = _case_name(space, p, eps)
    worst = 0.0
    for c in (0.0, prof.L):
        for name in ("f", "g", "h"):
            for i in (1, 2, 3):
                if name == "h" and i > 1 and c > 0:
                    continue
                worst = max(worst, _even_defect(prof, c, name, i))
    odd = max(_odd_defect(prof, prof.L, i) for i in (2, 3))
    return [
        _le("weyl", f"{tag}:even-at-0-and-L", worst, 1e-8),
        _le("weyl", f"{tag}:h2,h3-odd-at-L", odd, 1e-8),
    ]


def suite_weyl(n: int = 1001) -> list[Check]:
    out = []
    for s in ("S4", "S7", "B7"):
        out += _cyclic_checks(s, n)
    out += _reflect_checks(n)
    for e in (0.5, 1.0, 2.0):
        out += _modified_checks(n, e)
    for p in (1, 2, 10):
        for e in (0.5, 0.9):
            out += _even2_checks("E_p", p, e)
    for e in (0.5, 1.0, 2.0):
        out += _even2_checks("W1", None, e)
    for s in profiles.SPACES:
        prof = profiles.profile(s)
        out.append(_le("weyl", f"{s}:seam-continuity", profiles.seam_defect(prof), profiles.SEAM_TOL))
    for s, expect in WEYL_ORDERS.items():
        d = groups.catalog(s, p=10) if s == "E_p" else groups.catalog(s)
        got = groups.weyl_order(d)
        out.append(Check("weyl", f"{s}:order", got, expect, got == expect))
    return out


# ------------------------------------------------------------------ oracles

def suite_oracle() -> list[Check]:
    out = []
    s4 = profiles.profile("S4")
    t = np.linspace(0.0, s4.L, 1001)
    ref = profiles.eval_profile(s4, t)
    got = np.array([oracles.s4_action_norms(x) for x in t]).T
    cross = max(float(np.max(np.abs(oracles.s4_cross_products(x) - np.diag(np.diag(
        oracles.s4_cross_products(x)))))) for x in t[::10])
    out.append(_le("oracle", "S4:commutator-norms", _maxdiff(got, ref.f), 1e-12))
    out.append(_le("oracle", "S4:cross-terms", cross, 1e-12))

    b7 = profiles.profile("B7")
    t = np.linspace(0.0, b7.L, 201)
    ref = profiles.eval_profile(b7, t)
    idx1 = np.array([oracles.b7_action_norms(x) for x in t]).T
    out.append(_le("oracle", "B7:index-1", _maxdiff(idx1, [ref.f[0], ref.g[0], ref.h[0]]), 1e-12))
    worst = cross = 0.0
    for j, x in enumerate(t):
        blk, c = oracles.b7_blocks(x)
        cross = max(cross, c)
        worst = max(worst, _maxdiff(blk.f, ref.f[:, j]), _maxdiff(blk.g, ref.g[:, j]),
                    _maxdiff(blk.h, ref.h[:, j]))
    out.append(_le("oracle", "B7:indices-2,3", worst, 1e-12))
    out.append(_le("oracle", "B7:cross-terms", cross, 1e-12))

    for p in (1, 2, 10):
        for eps in (0.5, 0.9):
            prof = profiles.profile("E_p", p=p, eps=eps)
            t = np.linspace(0.0, prof.L, 101)
            ref = profiles.eval_profile(prof, t)
            blk = vnorm = hor = cr = 0.0
            for j, x in enumerate(t):
                r = oracles.eschenburg_oracle(p, eps, x)
                blk = max(blk, _maxdiff(r.blocks.f, ref.f[:, j]), _maxdiff(r.blocks.g, ref.g[:, j]),
                          _maxdiff(r.blocks.h, ref.h[:, j]))
                vnorm = max(vnorm, abs(r.v_norm2 - oracles.vertical_norm_formula(p, eps, x)))
                hor = max(hor, r.horizontality)
                cr = max(cr, r.cross_max)
            tag = f"E_p[p={p}][eps={eps}]"
            out.append(_le("oracle", f"{tag}:blocks", blk, 1e-10))
            out.append(_le("oracle", f"{tag}:|v|^2", vnorm, 1e-10))
            out.append(_le("oracle", f"{tag}:horizontality", hor, 1e-10))
            out.append(_le("oracle", f"{tag}:cross-terms", cr, 1e-10))

    for eps in (0.5, 0.9):
        e1 = profiles.profile("E_p", p=1, eps=eps)
        w1 = profiles.profile("W1", eps=eps)
        t = np.linspace(0.0, e1.L, 1001)
        a, b = profiles.eval_profile(e1, t), profiles.eval_profile(w1, t)
        d = max(_maxdiff(a.f, b.f), _maxdiff(a.g, b.g), _maxdiff(a.h, b.h))
        out.append(_le("oracle", f"E_1=W1[eps={eps}]", d, 1e-12))
    return out


# ---------------------------------------------------------------- convexity

def suite_convexity(n: int = 1001) -> list[Check]:
    out = []
    for s in ("S4", "S7", "B7"):
        prof = profiles.profile(s)
        for i in (1, 2, 3):
            rep = profiles.inverse_convexity(prof, i, n=n)
            out.append(_ge("convexity", f"{s}:block-{i}:min-eigenvalue", rep.min_eigenvalue, -1e-6))
    for s, p, e in (("E_p", 10, 0.5), ("E_p", 1, 0.5), ("W1", None, 0.5), ("W2", None, 0.5)):
        prof = profiles.profile(s, p=p, eps=e)
        for i in (1, 2, 3):
            rep = profiles.inverse_convexity(prof, i, n=n)
            tag = f"{_case_name(s, p, e)}:block-{i}"
            out.append(_ge("convexity", f"{tag}:min-eigenvalue", rep.min_eigenvalue, -1e-6, hard=False))
            out.append(_ge("convexity", f"{tag}:min-entry", min(rep.min_entry), -1e-6, hard=False))
    return out


# ------------------------------------------------------------------ hitchin

def _printed_limit(k: int, i: int, u0: float) -> float:
    """Limit of the printed rational form at an end of the u-interval."""
    direction = 1.0 if u0 == 0.0 else -1.0

    def fn(u):
        with np.errstate(all="ignore"):
            return hitchin.printed_forms(k, hitchin.r_of_u(k, u))[i - 1]

    val, _ = hitchin.richardson_limit(fn, u0, direction, 0.05, levels=8, power=1.0)
    return val


def suite_hitchin() -> list[Check]:
    return hitchin_curvature_checks() + embedding_checks()


def hitchin_curvature_checks() -> list[Check]:
    """Endpoint limits, curvature signs, positive fraction, chain rule vs differences."""
    out = []
    for k in hitchin.KS:
        lim = hitchin.endpoint_limits(k)
        out.append(_le("hitchin", f"k={k}:T1-at-smooth-end", abs(lim.smooth[0]), 1e-8))
        n_far = len(lim.collapsing_far)
        out.append(Check("hitchin", f"k={k}:one-of-T2,T3-collapses-at-far-end", n_far, 1,
                         n_far == 1 and lim.collapsing_far[0] in (2, 3)))
        dev = 0.0
        for i in (1, 2, 3):
            dev = max(dev, abs(_printed_limit(k, i, 0.0) - lim.smooth[i - 1]))
            dev = max(dev, abs(_printed_limit(k, i, 1.0) - lim.far[i - 1]))
        out.append(_le("hitchin", f"k={k}:printed-limits-agree", dev, 1e-8))

        rep = hitchin.curvature_report(k)
        out.append(_ge("hitchin", f"k={k}:min-sec1", float(np.min(rep.sec[0])), 1e-12))
        for i in (2, 3):
            neg = int(np.sum(rep.sec[i - 1] < 0))
            out.append(Check("hitchin", f"k={k}:sec{i}-negative-points", neg, 1, neg >= 1))
        out.append(_ge("hitchin", f"k={k}:all-positive-fraction", hitchin.positive_fraction(k), 0.45))

        worst = 0.0
        table = hitchin.arclength_param(k)
        for i in (1, 2, 3):
            t, fd = hitchin.curvature_fd(k, i, table=table)
            ex = hitchin.hitchin_curvature(k, i, t, table)
            worst = max(worst, float(np.max(np.abs(fd - ex) / np.maximum(1.0, np.abs(ex)))))
        out.append(_le("hitchin", f"k={k}:chain-rule-vs-fd", worst, 1e-4))
    return out


def embedding_checks() -> list[Check]:
    out = []
    for k in hitchin.KS:
        out += _embedding_checks(k)
    return out


def _embedding_checks(k: int) -> list[Check]:
    sp = hitchin.sphere_profile(k)
    emb = hitchin.embed_revolution(sp.h, sp.dh, sp.t_end)
    # rho' from a fourth-order difference of rho, z' from the integrand of z
    d = 1e-3
    t = emb.t[(emb.t > 2 * d) & (emb.t < sp.t_end - 2 * d)]
    drho = (-sp.h(t + 2 * d) + 8 * sp.h(t + d) - 8 * sp.h(t - d) + sp.h(t - 2 * d)) / (12 * d)
    dz = np.sqrt(np.maximum(0.0, 1 - sp.dh(t) ** 2))
    unit = float(np.max(np.abs(drho ** 2 + dz ** 2 - 1)))
    s0, s1 = hitchin.pole_slopes(k)
    kdA, bdry = hitchin.total_curvature(k)
    target = 2 * math.pi * (1 + 1 / k)
    return [
        _le("hitchin", f"k={k}:unit-speed-profile", unit, 1e-8),
        _le("hitchin", f"k={k}:h'(0+)-1", abs(s0 - 1), 1e-3),
        _le("hitchin", f"k={k}:h'(3L-)+1/k", abs(s1 + 1 / k), 1e-3),
        _le("hitchin", f"k={k}:integral-K-dA-rel", abs(kdA - target) / target, 1e-2),
        _le("hitchin", f"k={k}:boundary-formula-rel", abs(bdry - target) / target, 1e-2),
    ]


# ----------------------------------------------------------------- classify

def suite_classify(bounds: tuple[int, ...] = (10, 20, 30, 40, 50)) -> list[Check]:
    out = []
    for tid in classify.TEMPLATES:
        for N in bounds:
            got = classify.enumerate_template(tid, N).names()
            want = classify.golden(tid, N)
            out.append(Check("classify", f"{tid}:N={N}", float(len(got)), float(len(want)),
                             sorted(got) == sorted(want)))
        fwd = classify.enumerate_template(tid, 20)
        rev = classify.enumerate_template(tid, 20, reverse=True)
        out.append(Check("classify", f"{tid}:order-independent", float(len(rev.survivors)),
                         float(len(fwd.survivors)), fwd.pairs() == rev.pairs()))
    return out


SUITES: dict[str, Callable[[], list[Check]]] = {
    "collapse": suite_collapse,
    "weyl": suite_weyl,
    "oracle": suite_oracle,
    "convexity": suite_convexity,
    "hitchin": suite_hitchin,
    "classify": suite_classify,
}


def run_suite(name: str) -> tuple[list[Check], float]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)} or 'all'")
    t0 = time.perf_counter()
    checks = SUITES[name]()
    return checks, time.perf_counter() - t0


def run_all() -> tuple[list[Check], float]:
    t0 = time.perf_counter()
    out: list[Check] = []
    for name in SUITES:
        out += SUITES[name]()
    return out, time.perf_counter() - t0


def format_check(c: Check) -> str:
    status = "PASS" if c.passed else ("FAIL" if c.hard else "WARN")
    kind = "hard" if c.hard else "report"
    return f"{status}\t{c.suite}\t{c.name}\tvalue={c.value!r}\ttol={c.tol!r}\t{kind}"


def hard_failures(checks: list[Check]) -> list[Check]:
    return [c for c in checks if c.hard and not c.passed]
