"""Command-line entry point: cohom1 list | sample | verify | classify | hitchin | plot | figure."""

from __future__ import annotations

import argparse
import ast
import io
import math
import operator
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classify, groups, hitchin, profiles, verify

__all__ = ["main", "RunConfig", "FigureSpec", "FIGURES", "parse_range", "write_csv", "read_csv",
           "render_svg", "CLIError"]

BLOCK_HEADER = ("t", "f1", "f2", "f3", "g1", "g2", "g3", "h1", "h2", "h3")
INVERSE_HEADER = ("t", "F1", "G1", "H1", "F2", "G2", "H2", "F3", "G3", "H3")


class CLIError(Exception):
    pass


# ------------------------------------------------------------------- config

@dataclass
class RunConfig:
    grid_n: int = 1001
    tolerances: dict[str, float] = field(default_factory=dict)
    output_dir: Path = Path(".")
    format: str = "both"

    def validate(self) -> "RunConfig":
        if self.grid_n < 65:
            raise CLIError(f"grid_n must be at least 65, got {self.grid_n}")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise CLIError(f"tolerance {k} must be positive, got {v}")
        if self.format not in ("csv", "svg", "both"):
            raise CLIError(f"format must be csv, svg or both, got {self.format!r}")
        return self


def load_config(path: str | None) -> dict[str, str]:
    """key=value lines; blank lines and # comments ignored."""
    if not path:
        return {}
    out = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CLIError(f"{path}:{n}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k] = v
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = load_config(getattr(args, "config", None))
    cfg = RunConfig()
    try:
        if "grid_n" in raw:
            cfg.grid_n = int(raw["grid_n"])
        if "output_dir" in raw:
            cfg.output_dir = Path(raw["output_dir"])
        if "format" in raw:
            cfg.format = raw["format"]
        for k, v in raw.items():
            if k.startswith("tol."):
                cfg.tolerances[k[4:]] = float(v)
    except ValueError as e:
        raise CLIError(f"bad config value: {e}") from None
    # flags win over the file
    if getattr(args, "grid", None) is not None:
        cfg.grid_n = args.grid
    if getattr(args, "out_dir", None) is not None:
        cfg.output_dir = Path(args.out_dir)
    if getattr(args, "format", None) is not None:
        cfg.format = args.format
    return cfg.validate()


# -------------------------------------------------------------------- range

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv}


def _eval_expr(text: str, L: float) -> float:
    src = text.strip()
    if not src:
        raise CLIError("empty range endpoint")
    # "3L" and "2pi" mean 3*L and 2*pi
    src = re.sub(r"(\d)\s*(L|pi)\b", r"\1*\2", src)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError:
        raise CLIError(f"cannot parse range endpoint {text!r}") from None
    names = {"L": L, "pi": math.pi}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in names:
            return names[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise CLIError(f"unsupported token in range endpoint {text!r}")

    return float(ev(tree))


def parse_range(text: str, L: float) -> tuple[float, float]:
    """'0:3L', '0:pi/3', 'L/2:2L' -> (a, b) with a < b."""
    if text.count(":") != 1:
        raise CLIError(f"range must look like a:b, got {text!r}")
    a, b = (_eval_expr(x, L) for x in text.split(":"))
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise CLIError(f"invalid range {text!r}")
    return a, b


# ---------------------------------------------------------------------- csv

def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(header, columns, out) -> None:
    """Header plus rows; floats in shortest round-trip form, LF endings."""
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    if len(header) != len(cols):
        raise CLIError("header and column count differ")
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise CLIError("columns have different lengths")
    buf = io.StringIO(newline="")
    buf.write(",".join(header) + "\n")
    for j in range(n):
        buf.write(",".join(_fmt(c[j]) for c in cols) + "\n")
    data = buf.getvalue().encode("utf-8")
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def read_csv(path) -> dict[str, np.ndarray]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [x for x in text.split("\n") if x.strip()]
    if not lines:
        raise CLIError(f"{path}: empty CSV")
    header = [h.strip() for h in lines[0].split(",")]
    if len(set(header)) != len(header) or not all(header):
        raise CLIError(f"{path}: malformed header")
    rows = []
    for n, line in enumerate(lines[1:], 2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise CLIError(f"{path}:{n}: expected {len(header)} fields, got {len(parts)}")
        try:
            rows.append([float(x) for x in parts])
        except ValueError:
            raise CLIError(f"{path}:{n}: non-numeric field") from None
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {h: data[:, j] for j, h in enumerate(header)}


# ------------------------------------------------------------ data builders

def _profile_from(space: str, p, eps) -> profiles.MetricProfile:
    try:
        return profiles.profile(space, p=p, eps=eps)
    except profiles.ProfileError as e:
        raise CLIError(str(e)) from None


def sample_blocks(prof: profiles.MetricProfile, a: float, b: float, n: int):
    t = np.linspace(a, b, n)
    try:
        blk = profiles.extend_profile(prof, t)
    except profiles.ProfileError as e:
        raise CLIError(str(e)) from None
    return BLOCK_HEADER, [t] + blk.columns()


def sample_inverse(prof: profiles.MetricProfile, a: float, b: float, n: int):
    """F, G, H per index; nan where the block is singular."""
    t = np.linspace(a, b, n)
    try:
        blk = profiles.extend_profile(prof, t)
    except profiles.ProfileError as e:
        raise CLIError(str(e)) from None
    cols = [t]
    for i in range(3):
        f, g, h = blk.f[i], blk.g[i], blk.h[i]
        if prof.diagonal:
            ok = f > profiles.DET_TOL
            F = np.where(ok, 1 / np.where(ok, f, 1.0), np.nan)
            G = np.where(ok, 0.0, np.nan)
            H = G.copy()
        else:
            det = f * g - h * h
            ok = det > profiles.DET_TOL
            d = np.where(ok, det, 1.0)
            F = np.where(ok, g / d, np.nan)
            G = np.where(ok, f / d, np.nan)
            H = np.where(ok, -h / d, np.nan)
        cols += [F, G, H]
    return INVERSE_HEADER, cols


def _check_k(k: int) -> None:
    if k not in hitchin.KS:
        raise CLIError(f"k must be one of {hitchin.KS}, got {k}")


def hitchin_data(k: int, emit: str, n: int):
    _check_k(k)
    table = hitchin.arclength_param(k)
    L = table.L_total
    if emit == "lengths":
        t = np.linspace(0.0, L, n)
        T = hitchin.metric_u(k, table.u_of_t(t))[:3]
        return ("t", "len1", "len2", "len3"), [t] + [np.sqrt(np.maximum(x, 0.0)) for x in T]
    if emit == "curvature":
        t = np.linspace(0.0, L, n + 2)[1:-1]
        return ("t", "sec1", "sec2", "sec3"), [t] + [hitchin.hitchin_curvature(k, i, t, table)
                                                   for i in (1, 2, 3)]
    if emit == "profile":
        sp = hitchin.sphere_profile(k)
        t = np.linspace(0.0, sp.t_end, n)
        return ("t", "h"), [t, sp.h(t)]
    if emit == "embedding":
        sp = hitchin.sphere_profile(k)
        emb = hitchin.embed_revolution(sp.h, sp.dh, sp.t_end, n=n)
        return ("t", "rho", "z"), [emb.t, emb.rho, emb.z]
    raise CLIError(f"unknown emit kind {emit!r}")


# ------------------------------------------------------------------ figures

@dataclass(frozen=True)
class Panel:
    series: tuple[str, ...]
    x: str = "t"
    ylim: tuple[float, float] | None = None
    closed: bool = False  # mirror x -> -x to draw a closed profile


@dataclass(frozen=True)
class FigureSpec:
    id: int
    title: str
    source: str  # "profile" or "hitchin"
    space: str | None = None
    p: int | None = None
    eps: float | None = None
    k: int | None = None
    range_L: tuple[int, int] = (0, 1)
    data: tuple[str, ...] = ("blocks",)  # what to sample: blocks/inverse or hitchin emits
    panels: tuple[Panel, ...] = ()

    def L(self) -> float:
        if self.source == "hitchin":
            return hitchin.arclength_param(self.k).L_total
        return profiles.profile(self.space, p=self.p, eps=self.eps).L


_NINE = BLOCK_HEADER[1:]

FIGURES: dict[int, FigureSpec] = {s.id: s for s in (
    FigureSpec(1, "B7  f1..h3, 0 <= t <= L", "profile", "B7", range_L=(0, 1),
               panels=(Panel(_NINE),)),
    FigureSpec(2, "B7  g1, g2, g3, 0 <= t <= 3L", "profile", "B7", range_L=(0, 3),
               panels=(Panel(("g1", "g2", "g3")),)),
    FigureSpec(3, "B7  f1, g1, h1, 0 <= t <= 3L", "profile", "B7", range_L=(0, 3),
               panels=(Panel(("f1", "g1", "h1")),)),
    FigureSpec(4, "B7  inverse block F1, G1, H1, 0 <= t <= 3L", "profile", "B7", range_L=(0, 3),
               data=("inverse",), panels=(Panel(("F1", "G1", "H1"), ylim=(-2.0, 6.0)),)),
    FigureSpec(5, "E_10 (eps = 0.5)  f1..h3, 0 <= t <= 4L", "profile", "E_p", p=10, eps=0.5,
               range_L=(0, 4), panels=(Panel(_NINE),)),
    FigureSpec(6, "W2 (eps = 0.5)  f1..h3, 0 <= t <= 4L", "profile", "W2", eps=0.5,
               range_L=(0, 4), panels=(Panel(_NINE),)),
    FigureSpec(7, "W2 (eps = 0.5)  inverse block F1, G1, H1, 0 <= t <= 4L", "profile", "W2", eps=0.5,
               range_L=(0, 4), data=("inverse",),
               panels=(Panel(("F1", "G1", "H1"), ylim=(-4.0, 8.0)),)),
    *(FigureSpec(n, f"Hitchin k={k}  sqrt(T_i) and sec(gamma', X_i*) in arc length", "hitchin", k=k,
                 data=("lengths", "curvature"),
                 panels=(Panel(("len1", "len2", "len3")), Panel(("sec1", "sec2", "sec3"))))
      for n, k in ((8, 3), (9, 4), (10, 6))),
    FigureSpec(11, "Hitchin k=3  h = sqrt(T)/2 on the fixed 2-sphere, 0 <= t <= 3L", "hitchin", k=3,
               range_L=(0, 3), data=("profile",), panels=(Panel(("h",)),)),
    FigureSpec(12, "Hitchin k=3  profile curve (rho, z) of the fixed 2-sphere", "hitchin", k=3,
               range_L=(0, 3), data=("embedding",),
               panels=(Panel(("z",), x="rho", closed=True),)),
)}


def figure_data(spec: FigureSpec, n: int) -> list[tuple[tuple[str, ...], list[np.ndarray]]]:
    out = []
    if spec.source == "profile":
        prof = profiles.profile(spec.space, p=spec.p, eps=spec.eps)
        a, b = spec.range_L[0] * prof.L, spec.range_L[1] * prof.L
        for kind in spec.data:
            fn = sample_blocks if kind == "blocks" else sample_inverse
            out.append(fn(prof, a, b, n))
    else:
        for kind in spec.data:
            out.append(hitchin_data(spec.k, kind, n))
    return out


# ---------------------------------------------------------------------- svg

_W, _H = 800, 600
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
            "#8c564b", "#e377c2", "#7f7f7f")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step - 1e-9) * step
    out = []
    x = start
    while x <= hi + 1e-9 * step:
        out.append(0.0 if abs(x) < 1e-12 * step else x)
        x += step
    return out


def _L_label(m: int) -> str:
    return "0" if m == 0 else ("L" if m == 1 else f"{m}L")


def _num(x: float) -> str:
    return f"{x:.2f}"


def render_svg(spec: FigureSpec, tables: list[dict[str, np.ndarray]], L: float | None) -> str:
    """Deterministic SVG text for a figure: one polyline per series."""
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}" width="{_W}" height="{_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{_esc(spec.title)}</text>',
    ]
    npan = len(spec.panels)
    pw = (_W - 40) / npan
    for j, panel in enumerate(spec.panels):
        x0, x1 = 20 + j * pw + 60, 20 + (j + 1) * pw - 20
        y0, y1 = 60, _H - 110
        lines += _panel_svg(panel, tables, L, x0, x1, y0, y1, spec.range_L)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _lookup(tables, name: str, x: str):
    for tb in tables:
        if name in tb and x in tb:
            return tb[x], tb[name]
    raise CLIError(f"series {name!r} (against {x!r}) not found in the input CSV")


def _panel_svg(panel: Panel, tables, L, x0, x1, y0, y1, range_L) -> list[str]:
    series = []
    for name in panel.series:
        xs, ys = _lookup(tables, name, panel.x)
        if panel.closed:
            xs = np.concatenate([xs, -xs[::-1]])
            ys = np.concatenate([ys, ys[::-1]])
        ok = np.isfinite(xs) & np.isfinite(ys)
        if not np.any(ok):
            raise CLIError(f"series {name!r} is empty")
        series.append((name, xs, ys, ok))
    allx = np.concatenate([s[1][s[3]] for s in series])
    ally = np.concatenate([s[2][s[3]] for s in series])
    xlo, xhi = float(allx.min()), float(allx.max())
    if panel.x == "t" and L:
        # interior grids stop short of the ends; keep the axis on the figure range
        xlo, xhi = min(xlo, range_L[0] * L), max(xhi, range_L[1] * L)
    if panel.ylim is not None:
        ylo, yhi = panel.ylim
    else:
        ylo, yhi = float(ally.min()), float(ally.max())
        pad = 0.05 * (yhi - ylo) if yhi > ylo else max(1.0, abs(yhi)) * 0.05
        ylo, yhi = ylo - pad, yhi + pad
    if panel.closed:
        # equal scaling so the surface is not distorted
        cx, cy = 0.5 * (xlo + xhi), 0.5 * (ylo + yhi)
        half = 0.5 * max(xhi - xlo, (yhi - ylo) * (x1 - x0) / (y1 - y0))
        xlo, xhi = cx - half, cx + half
        halfy = half * (y1 - y0) / (x1 - x0)
        ylo, yhi = cy - halfy, cy + halfy
    if not xhi > xlo:
        xhi = xlo + 1.0

    def X(v):
        return x0 + (v - xlo) / (xhi - xlo) * (x1 - x0)

    def Y(v):
        return y1 - (np.clip(v, ylo, yhi) - ylo) / (yhi - ylo) * (y1 - y0)

    out = [f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(x1 - x0)}" height="{_num(y1 - y0)}" '
           f'fill="none" stroke="#000000" stroke-width="1"/>']
    # x ticks: multiples of L on t-axes, round numbers otherwise
    if panel.x == "t" and L:
        m0, m1 = math.ceil(xlo / L - 1e-9), math.floor(xhi / L + 1e-9)
        xt = [(m * L, _L_label(m)) for m in range(m0, m1 + 1)]
    else:
        xt = [(v, f"{v:.3g}") for v in _nice_ticks(xlo, xhi)]
    for v, lab in xt:
        px = _num(X(v))
        out.append(f'<line x1="{px}" y1="{_num(y1)}" x2="{px}" y2="{_num(y1 + 6)}" stroke="#000000"/>')
        out.append(f'<text x="{px}" y="{_num(y1 + 22)}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12">{lab}</text>')
    for v in _nice_ticks(ylo, yhi):
        py = _num(Y(v))
        out.append(f'<line x1="{_num(x0 - 6)}" y1="{py}" x2="{_num(x0)}" y2="{py}" stroke="#000000"/>')
        out.append(f'<text x="{_num(x0 - 9)}" y="{py}" text-anchor="end" dominant-baseline="middle" '
                   f'font-family="sans-serif" font-size="12">{v:.3g}</text>')
    for c, (name, xs, ys, ok) in enumerate(series):
        pts = " ".join(f"{_num(X(a))},{_num(Y(b))}" for a, b in zip(xs[ok], ys[ok]))
        color = _PALETTE[c % len(_PALETTE)]
        out.append(f'<polyline id="series-{name}" fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{pts}"/>')
    for c, (name, *_rest) in enumerate(series):
        lx = x0 + 10 + (c % 5) * 70
        ly = y1 + 45 + (c // 5) * 18
        color = _PALETTE[c % len(_PALETTE)]
        out.append(f'<line x1="{_num(lx)}" y1="{_num(ly)}" x2="{_num(lx + 18)}" y2="{_num(ly)}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{_num(lx + 22)}" y="{_num(ly + 4)}" font-family="sans-serif" '
                   f'font-size="12">{name}</text>')
    return out


# ----------------------------------------------------------------- commands

def cmd_list(args) -> int:
    print("space\tL\tweyl_order\tsymmetry\tdiagram")
    for s in profiles.SPACES:
        d = groups.catalog(s, p=10) if s == "E_p" else groups.catalog(s)
        prof = profiles.profile(s)
        print(f"{s}\t{prof.L!r}\t{groups.weyl_order(d)}\t{prof.symmetry.name}\t{d.name}")
    for s in ("P_k", "Q_k", "R"):
        d = groups.catalog(s, k=1) if s != "R" else groups.catalog(s)
        print(f"{s}\t{d.L!r}\t{groups.weyl_order(d)}\t-\tcandidate")
    print()
    print("template\tdescription")
    for tid, tpl in classify.TEMPLATES.items():
        print(f"{tid}\t{tpl.description}")
    print()
    print("hitchin k\tL")
    for k in hitchin.KS:
        print(f"{k}\t{hitchin.arclength_param(k).L_total!r}")
    return 0


def cmd_sample(args) -> int:
    cfg = build_config(args)
    prof = _profile_from(args.space, args.p, args.eps)
    a, b = parse_range(args.range, prof.L) if args.range else (0.0, prof.t_max)
    fn = sample_inverse if args.quantity == "inverse" else sample_blocks
    header, cols = fn(prof, a, b, cfg.grid_n)
    write_csv(header, cols, args.out)
    return 0


def cmd_verify(args) -> int:
    if args.suite == "all":
        checks, dt = verify.run_all()
    else:
        try:
            checks, dt = verify.run_suite(args.suite)
        except KeyError as e:
            raise CLIError(str(e.args[0])) from None
    for c in checks:
        print(verify.format_check(c))
    bad = verify.hard_failures(checks)
    warn = sum(1 for c in checks if not c.passed and not c.hard)
    print(f"summary\tsuite={args.suite}\tchecks={len(checks)}\thard_failures={len(bad)}"
          f"\treport_warnings={warn}\tseconds={dt:.2f}")
    return 1 if bad else 0


def cmd_classify(args) -> int:
    tid = args.template.upper()
    if tid not in classify.TEMPLATES:
        raise CLIError(f"unknown template {args.template!r}; expected one of {sorted(classify.TEMPLATES)}")
    if args.bound < 1:
        raise CLIError("bound must be positive")
    res = classify.enumerate_template(tid, args.bound)
    print("name,minus_p,minus_q,plus_p,plus_q,orbit_size")
    for s in res.survivors:
        print(f"{s.name()},{s.minus[0]},{s.minus[1]},{s.plus[0]},{s.plus[1]},{s.orbit_size}")
    print(f"# template={tid} bound={args.bound} raw_survivors={res.raw_count} "
          f"classes={len(res.survivors)}", file=sys.stderr)
    for reason, count in res.exclusions:
        print(f"# excluded {reason}: {count}", file=sys.stderr)
    return 0


def cmd_hitchin(args) -> int:
    cfg = build_config(args)
    try:
        header, cols = hitchin_data(args.k, args.emit, cfg.grid_n)
    except hitchin.HitchinError as e:
        raise CLIError(str(e)) from None
    write_csv(header, cols, args.out)
    return 0


def _figure(n: int) -> FigureSpec:
    if n not in FIGURES:
        raise CLIError(f"figure must be one of {sorted(FIGURES)}, got {n}")
    return FIGURES[n]


def cmd_plot(args) -> int:
    spec = _figure(args.figure)
    tables = [read_csv(p) for p in args.inputs]
    svg = render_svg(spec, tables, spec.L())
    _write_text(svg, args.out)
    return 0


def cmd_figure(args) -> int:
    cfg = build_config(args)
    spec = _figure(args.figure)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    data = figure_data(spec, cfg.grid_n)
    tables = []
    for j, (header, cols) in enumerate(data):
        suffix = "" if len(data) == 1 else f"-{spec.data[j]}"
        path = cfg.output_dir / f"figure{spec.id:02d}{suffix}.csv"
        if cfg.format in ("csv", "both"):
            write_csv(header, cols, path)
            print(path)
        tables.append({h: np.asarray(c, dtype=float) for h, c in zip(header, cols)})
    if cfg.format in ("svg", "both"):
        path = cfg.output_dir / f"figure{spec.id:02d}.svg"
        _write_text(render_svg(spec, tables, spec.L()), path)
        print(path)
    return 0


def _write_text(text: str, out) -> None:
    data = text.encode("utf-8")
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cohom1", description="Cohomogeneity one metrics: "
                                 "closed forms, oracles, Hitchin orbifolds and classification.")
    ap.add_argument("--config", help="key=value config file (flags override it)")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="catalog spaces, templates and Hitchin metrics")

    sp = sub.add_parser("sample", help="metric functions on a grid as CSV")
    sp.add_argument("--space", required=True, choices=profiles.SPACES)
    sp.add_argument("--p", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--range", help="a:b with L and pi allowed, e.g. 0:3L (default [0, T_max])")
    sp.add_argument("--grid", type=int)
    sp.add_argument("--quantity", choices=("blocks", "inverse"), default="blocks")
    sp.add_argument("--out", help="output file (default stdout)")

    vp = sub.add_parser("verify", help="run invariant suites")
    vp.add_argument("--suite", default="all", choices=sorted(verify.SUITES) + ["all"])

    cp = sub.add_parser("classify", help="enumerate slope pairs for a family template")
    cp.add_argument("--template", required=True, help="ex1a, ex1b, ex2, ex3 or ex4")
    cp.add_argument("--bound", type=int, default=20)

    hp = sub.add_parser("hitchin", help="Hitchin orbifold data as CSV")
    hp.add_argument("--k", type=int, required=True)
    hp.add_argument("--emit", required=True, choices=("lengths", "curvature", "profile", "embedding"))
    hp.add_argument("--grid", type=int)
    hp.add_argument("--out")

    pp = sub.add_parser("plot", help="render a figure from CSV input")
    pp.add_argument("--in", dest="inputs", action="append", required=True,
                    help="input CSV (repeat for multi-panel figures)")
    pp.add_argument("--figure", type=int, required=True)
    pp.add_argument("--out")

    fp = sub.add_parser("figure", help="sample and render a figure in one step")
    fp.add_argument("--figure", type=int, required=True)
    fp.add_argument("--out-dir", dest="out_dir")
    fp.add_argument("--format", choices=("csv", "svg", "both"))
    fp.add_argument("--grid", type=int)
    return ap


_COMMANDS = {"list": cmd_list, "sample": cmd_sample, "verify": cmd_verify, "classify": cmd_classify,
             "hitchin": cmd_hitchin, "plot": cmd_plot, "figure": cmd_figure}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (CLIError, OSError) as e:
        print(f"cohom1: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
