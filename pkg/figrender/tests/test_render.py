"""Renderer tests against fabricated schema-exact CSV fixtures."""
import math
import struct
import subprocess
import sys

import numpy as np
import pytest

import figrender
from figrender import CsvFormatError, FigureSpec, cli, render

SCAN_COLUMNS = [
    "index", "tau", "ggm", "ggm_split", "m_ab", "m_bc", "m_ac",
    "b_max", "violating_pair", "tau_slack", "ggm_slack",
]

FAMILY_COLUMNS = [
    "index", "m",
    "tau", "tau_closed", "tau_absdiff",
    "ggm", "ggm_closed", "ggm_absdiff",
    "m_ab", "m_ab_closed", "m_ab_absdiff",
    "m_bc", "m_bc_closed", "m_bc_absdiff",
    "m_ac", "m_ac_closed", "m_ac_absdiff",
    "b_max", "identity_residual",
]


def _fmt(x):
    return format(float(x), ".17g")


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        fh.write("# schema_version=1\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _scan_rows(tau, b_max, ggm=None, dms=None):
    """Schema-exact scan rows; cells the renderer ignores get placeholders."""
    n = len(tau)
    ggm = ggm if ggm is not None else np.zeros(n)
    rows = []
    for i in range(n):
        row = [
            str(i), _fmt(tau[i]), _fmt(ggm[i]), "A:BC",
            _fmt(0.5), _fmt(0.5), _fmt(1.0 + b_max[i]),
            _fmt(b_max[i]), "AC" if b_max[i] > 1e-9 else "none",
            _fmt(1.0 - tau[i] - b_max[i]), _fmt(0.1),
        ]
        if dms is not None:
            row.insert(4, _fmt(dms[i]))
        rows.append(row)
    return rows


def _scan_csv(path, tau, b_max, **kw):
    columns = list(SCAN_COLUMNS)
    if "dms" in kw and kw["dms"] is not None:
        columns.insert(4, "dms")
    _write_csv(path, columns, _scan_rows(tau, b_max, **kw))


def _family_boundary_csv(path, points):
    """Frontier-family sweep: tau = 1 - 4m^2/(1+m^2)^2 and b_max = 1 - tau."""
    rows = []
    for i, m in enumerate(np.linspace(0.0, 1.0, points)):
        b = 4.0 * m * m / (1.0 + m * m) ** 2
        tau = 1.0 - b
        g = 0.5 - m / (1.0 + m * m)
        rows.append([
            str(i), _fmt(m),
            _fmt(tau), _fmt(tau), "0",
            _fmt(g), _fmt(g), "0",
            _fmt(1.0 - b), "", "",
            _fmt(1.0 - b), "", "",
            _fmt(1.0 + b), _fmt(1.0 + b), "0",
            _fmt(b), "0",
        ])
    _write_csv(path, FAMILY_COLUMNS, rows)


def _png_size(path):
    blob = path.read_bytes()
    assert blob[:8] == b"\x89PNG\r\n\x1a\n"
    w, h = struct.unpack(">II", blob[16:24])
    return w, h


def _haar_like(n, seed):
    rng = np.random.default_rng(seed)
    tau = rng.random(n) ** 2
    b = (1.0 - tau) * rng.random(n)
    return tau, b


def test_schema_line_is_enforced(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# schema_version=2\n" + ",".join(SCAN_COLUMNS) + "\n")
    spec = FigureSpec(str(bad), "tangle", str(tmp_path / "x.png"))
    with pytest.raises(CsvFormatError):
        render(spec)


def test_measure_column_is_required(tmp_path):
    src = tmp_path / "noscore.csv"
    tau, b = _haar_like(20, 0)
    _scan_csv(src, tau, b)  # no dms column
    with pytest.raises(CsvFormatError):
        render(FigureSpec(str(src), "dms", str(tmp_path / "x.png")))


def test_fixed_axis_ranges(tmp_path):
    tau, b = _haar_like(200, 1)
    src = tmp_path / "scan.csv"
    _scan_csv(src, tau, b, ggm=np.full(200, 0.2))
    res = render(FigureSpec(str(src), "tangle", str(tmp_path / "t.png")))
    assert res.xlim == (0.0, 1.0) and res.ylim == (0.0, 1.0)
    res = render(FigureSpec(str(src), "ggm", str(tmp_path / "g.png")))
    assert res.xlim == (0.0, 0.5) and res.ylim == (0.0, 1.0)


def test_score_axes_follow_data(tmp_path):
    tau, b = _haar_like(50, 2)
    scores = np.linspace(-0.4, 0.9, 50)
    src = tmp_path / "scores.csv"
    _scan_csv(src, tau, b, dms=scores)
    res = render(FigureSpec(str(src), "dms", str(tmp_path / "d.png")))
    assert res.xlim[0] <= -0.4 and res.xlim[1] >= 0.9
    assert res.xlim[1] - res.xlim[0] < 2.0  # autoscale, not a fixed window
    np.testing.assert_array_equal(res.xs, scores)


def test_downsampling_is_deterministic_stride(tmp_path, monkeypatch):
    monkeypatch.setattr(figrender, "MAX_POINTS", 500)
    tau, b = _haar_like(1600, 3)
    src = tmp_path / "big.csv"
    _scan_csv(src, tau, b)
    boundary = tmp_path / "family.csv"
    _family_boundary_csv(boundary, 101)
    res = render(
        FigureSpec(str(src), "tangle", str(tmp_path / "b.png"), boundary_csv=str(boundary))
    )
    assert res.points_total == 1600
    assert res.points_plotted == 400  # every 4th row
    np.testing.assert_array_equal(res.xs, tau[::4])
    # the boundary polyline never gets thinned
    assert res.boundary_points == 101


def test_empty_data_renders_axes_only(tmp_path):
    src = tmp_path / "empty.csv"
    _write_csv(src, SCAN_COLUMNS, [])
    out = tmp_path / "empty.png"
    rc = cli.main(["--input", str(src), "--measure", "tangle", "--out", str(out)])
    assert rc == 0
    assert _png_size(out) == (960, 720)


def test_family_only_points_sit_on_the_identity_line(tmp_path):
    ms = np.linspace(0.0, 1.0, 101)
    b = 4.0 * ms**2 / (1.0 + ms**2) ** 2
    src = tmp_path / "grid.csv"
    _scan_csv(src, 1.0 - b, b)
    res = render(FigureSpec(str(src), "tangle", str(tmp_path / "line.png")))
    np.testing.assert_allclose(res.ys, 1.0 - res.xs, atol=1e-15)


def test_boundary_polyline_is_sorted_ascending(tmp_path):
    boundary = tmp_path / "family.csv"
    _family_boundary_csv(boundary, 51)  # file itself is ordered by m, not tau
    bx, by = figrender.boundary_polyline(str(boundary), "tangle")
    assert (np.diff(bx) >= 0).all()
    np.testing.assert_allclose(by, 1.0 - bx, atol=1e-15)


def test_binned_frontier_file_works_as_boundary(tmp_path):
    rows = []
    for i in range(10):
        lo, hi = i * 0.2 - 1.0, (i + 1) * 0.2 - 1.0
        empty = i % 4 == 3
        rows.append([
            _fmt(lo), _fmt(hi), "0" if empty else "7",
            "" if empty else _fmt(0.4), _fmt(0.5), "" if empty else _fmt(-0.2),
        ])
    boundary = tmp_path / "frontier.csv"
    _write_csv(boundary, ["bin_lo", "bin_hi", "count", "max_b", "mbv_b", "excess"], rows)
    bx, by = figrender.boundary_polyline(str(boundary), "dms")
    assert bx.size == 10
    np.testing.assert_allclose(bx[0], -0.9)
    np.testing.assert_allclose(by, 0.5)


def test_identical_inputs_give_identical_bytes(tmp_path):
    tau, b = _haar_like(500, 4)
    src = tmp_path / "scan.csv"
    _scan_csv(src, tau, b)
    outs = []
    for name in ("one.png", "two.png"):
        out = tmp_path / name
        render(FigureSpec(str(src), "tangle", str(out)))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_dpi_scales_the_canvas(tmp_path):
    tau, b = _haar_like(10, 5)
    src = tmp_path / "scan.csv"
    _scan_csv(src, tau, b)
    out = tmp_path / "lo.png"
    assert cli.main(
        ["--input", str(src), "--measure", "tangle", "--out", str(out), "--dpi", "80"]
    ) == 0
    assert _png_size(out) == (512, 384)


def test_cli_error_paths(tmp_path, capsys):
    tau, b = _haar_like(5, 6)
    src = tmp_path / "scan.csv"
    _scan_csv(src, tau, b)
    out = str(tmp_path / "x.png")

    rc = cli.main(["--input", str(tmp_path / "missing.csv"), "--measure", "tangle", "--out", out])
    assert rc == 2
    assert "error:" in capsys.readouterr().err

    bad = tmp_path / "bad.csv"
    bad.write_text("not a schema line\n")
    assert cli.main(["--input", str(bad), "--measure", "tangle", "--out", out]) == 2

    with pytest.raises(SystemExit) as exc:
        cli.main(["--input", str(src), "--measure", "entropy", "--out", out])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        cli.main(["--input", str(src), "--measure", "tangle"])
    assert exc.value.code == 64


def test_module_invocation(tmp_path):
    tau, b = _haar_like(5, 7)
    src = tmp_path / "scan.csv"
    _scan_csv(src, tau, b)
    out = tmp_path / "cli.png"
    proc = subprocess.run(
        [sys.executable, "-m", "figrender.cli", "--input", str(src),
         "--measure", "tangle", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    assert "5/5 points" in proc.stdout


def test_full_scale_render(tmp_path):
    """Acceptance-shaped run: 10^5-row cloud plus a 1001-point boundary."""
    n = 100_000
    tau, b = _haar_like(n, 8)
    src = tmp_path / "cloud.csv"
    _scan_csv(src, tau, b)
    boundary = tmp_path / "family.csv"
    _family_boundary_csv(boundary, 1001)

    blobs = []
    results = []
    for name in ("run1.png", "run2.png"):
        out = tmp_path / name
        results.append(
            render(FigureSpec(str(src), "tangle", str(out), boundary_csv=str(boundary)))
        )
        blobs.append(out.read_bytes())

    res = results[0]
    ok = (
        res.points_plotted == n
        and res.boundary_points == 1001
        and res.xlim == (0.0, 1.0)
        and res.ylim == (0.0, 1.0)
        and blobs[0] == blobs[1]
    )
    print(
        f"[{'PASS' if ok else 'FAIL'}] renderer: {res.points_plotted}/{n} points, "
        f"boundary {res.boundary_points}, axes {res.xlim}x{res.ylim}, "
        f"identical bytes {blobs[0] == blobs[1]}"
    )
    assert ok
