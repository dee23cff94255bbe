import math
import re
import subprocess
import sys

import numpy as np
import pytest

from cohom1 import cli, profiles


def run(argv, capsysbinary):
    code = cli.main(argv)
    out = capsysbinary.readouterr()
    return code, out.out.decode(), out.err.decode()


def test_parse_range():
    L = 0.5
    assert cli.parse_range("0:3L", L) == (0.0, 1.5)
    assert cli.parse_range("L/2:2*L", L) == (0.25, 1.0)
    a, b = cli.parse_range("0:pi/3", L)
    assert b == pytest.approx(math.pi / 3)
    for bad in ("3L", "1:0", "0:foo", "0:1:2", "0:__import__('os')"):
        with pytest.raises(cli.CLIError):
            cli.parse_range(bad, L)


def test_sample_s4(tmp_path, capsysbinary):
    out = tmp_path / "s4.csv"
    code, _, _ = run(["sample", "--space", "S4", "--range", "0:pi/3", "--grid", "65", "--out", str(out)],
                     capsysbinary)
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "t,f1,f2,f3,g1,g2,g3,h1,h2,h3"
    assert len(lines) == 66
    data = cli.read_csv(out)
    assert data["f1"][0] == 0.0
    assert np.all(np.diff(data["t"]) > 0)


def test_sample_b7_rows_satisfy_relations(tmp_path, capsysbinary):
    out = tmp_path / "b7.csv"
    run(["sample", "--space", "B7", "--range", "0:3L", "--grid", "1001", "--out", str(out)], capsysbinary)
    d = cli.read_csv(out)
    prof = profiles.profile("B7")
    ext = profiles.extend_profile(prof, d["t"])
    for name, col in zip(cli.BLOCK_HEADER[1:], ext.columns()):
        assert np.array_equal(d[name], col)
    # f_2(t) = f_1(t + 2L) row-wise
    t = d["t"]
    first = t <= prof.L
    base = profiles.eval_profile(prof, t[first])
    fwd = profiles.extend_profile(prof, t[first] + 2 * prof.L)
    assert np.max(np.abs(base.f[1] - fwd.f[0])) < 1e-12


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    cols = [np.sort(rng.uniform(0, 1, 50)), rng.normal(size=50) * 1e-7, rng.normal(size=50) * 1e9]
    p = tmp_path / "x.csv"
    cli.write_csv(("t", "a", "b"), cols, p)
    d = cli.read_csv(p)
    for name, c in zip(("t", "a", "b"), cols):
        assert np.array_equal(d[name], c)


def test_malformed_csv(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,f1\n0.0,1.0\n1.0\n")
    with pytest.raises(cli.CLIError):
        cli.read_csv(p)
    p.write_text("t,f1\n0.0,abc\n")
    with pytest.raises(cli.CLIError):
        cli.read_csv(p)


def test_plot_figure3_has_three_polylines(tmp_path, capsysbinary):
    csv = tmp_path / "b7.csv"
    svg = tmp_path / "f3.svg"
    run(["sample", "--space", "B7", "--range", "0:3L", "--grid", "301", "--out", str(csv)], capsysbinary)
    code, _, _ = run(["plot", "--in", str(csv), "--figure", "3", "--out", str(svg)], capsysbinary)
    assert code == 0
    text = svg.read_text()
    assert 'viewBox="0 0 800 600"' in text
    ids = re.findall(r'<polyline id="series-([^"]+)"', text)
    assert ids == ["f1", "g1", "h1"]
    assert ">2L<" in text and ">3L<" in text


def test_plot_missing_series_is_an_error(tmp_path, capsysbinary):
    csv = tmp_path / "x.csv"
    cli.write_csv(("t", "f1"), [np.linspace(0, 1, 5), np.zeros(5)], csv)
    code, _, err = run(["plot", "--in", str(csv), "--figure", "3", "--out", str(tmp_path / "x.svg")],
                       capsysbinary)
    assert code == 2 and "not found" in err


def test_plot_empty_series_is_an_error(tmp_path, capsysbinary):
    csv = tmp_path / "x.csv"
    cli.write_csv(("t", "h"), [np.linspace(0, 1, 5), np.full(5, np.nan)], csv)
    code, _, err = run(["plot", "--in", str(csv), "--figure", "11", "--out", str(tmp_path / "x.svg")],
                       capsysbinary)
    assert code == 2 and "empty" in err


def test_figure12_closed_profile(tmp_path, capsysbinary):
    code, _, _ = run(["figure", "--figure", "12", "--out-dir", str(tmp_path), "--grid", "401"], capsysbinary)
    assert code == 0
    d = cli.read_csv(tmp_path / "figure12.csv")
    assert list(d) == ["t", "rho", "z"]
    text = (tmp_path / "figure12.svg").read_text()
    pts = re.search(r'id="series-z"[^>]*points="([^"]+)"', text).group(1).split()
    assert pts[0] == pts[-1]  # closed curve
    # smooth pole: the curve leaves the axis at a right angle with unit speed
    assert d["rho"][1] / d["t"][1] == pytest.approx(1.0, abs=1e-3)
    assert d["z"][1] / d["rho"][1] < 0.05


def test_figures_deterministic(tmp_path, capsysbinary):
    for n in (4, 8, 11):
        a, b = tmp_path / "a", tmp_path / "b"
        run(["figure", "--figure", str(n), "--out-dir", str(a), "--grid", "257"], capsysbinary)
        run(["figure", "--figure", str(n), "--out-dir", str(b), "--grid", "257"], capsysbinary)
        for f in sorted(a.iterdir()):
            assert f.read_bytes() == (b / f.name).read_bytes()


@pytest.mark.parametrize("emit,header", [
    ("curvature", "t,sec1,sec2,sec3"), ("embedding", "t,rho,z"), ("profile", "t,h"),
    ("lengths", "t,len1,len2,len3"),
])
def test_hitchin_emit(tmp_path, capsysbinary, emit, header):
    out = tmp_path / "h.csv"
    code, _, _ = run(["hitchin", "--k", "4", "--emit", emit, "--grid", "129", "--out", str(out)], capsysbinary)
    assert code == 0
    assert out.read_text().splitlines()[0] == header


def test_hitchin_bad_k(capsysbinary):
    code, _, err = run(["hitchin", "--k", "5", "--emit", "profile"], capsysbinary)
    assert code == 2 and "k must be" in err


def test_classify_command(capsysbinary):
    code, out, _ = run(["classify", "--template", "ex3", "--bound", "10"], capsysbinary)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "name,minus_p,minus_q,plus_p,plus_q,orbit_size"
    assert lines[1].startswith("R,1,3,2,1,")
    assert len(lines) == 11


def test_verify_collapse(capsysbinary):
    code, out, _ = run(["verify", "--suite", "collapse"], capsysbinary)
    assert code == 0
    assert "hard_failures=0" in out


def test_list(capsysbinary):
    code, out, _ = run(["list"], capsysbinary)
    assert code == 0
    assert "S7" in out and "EX4" in out


def test_config_file_and_flag_precedence(tmp_path, capsysbinary):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# grid for sampling\ngrid_n = 70\ntol.collapse = 1e-12\n")
    out = tmp_path / "a.csv"
    run(["--config", str(cfg), "sample", "--space", "S4", "--out", str(out)], capsysbinary)
    assert len(out.read_text().splitlines()) == 71
    run(["--config", str(cfg), "sample", "--space", "S4", "--grid", "80", "--out", str(out)], capsysbinary)
    assert len(out.read_text().splitlines()) == 81
    cfg.write_text("grid_n = 10\n")
    code, _, err = run(["--config", str(cfg), "sample", "--space", "S4", "--out", str(out)], capsysbinary)
    assert code == 2 and "at least 65" in err
    cfg.write_text("tol.x = -1\n")
    code, _, err = run(["--config", str(cfg), "sample", "--space", "S4", "--out", str(out)], capsysbinary)
    assert code == 2


def test_sample_invalid_range(capsysbinary):
    code, _, err = run(["sample", "--space", "S4", "--range", "0:5L"], capsysbinary)
    assert code == 2


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "cohom1.cli", "list"], capture_output=True, text=True)
    assert r.returncode == 0 and "B7" in r.stdout
