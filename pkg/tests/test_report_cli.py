import csv
import filecmp

import pytest

from boxdim import Dyadic, bradley_stage, make_schedule, parse_schedule
from boxdim.cli import main
from boxdim.fracgeo import read_fracgeo
from boxdim.report import compare_meshes, render_report, render_svg, run_compare


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_compare_row_counts_and_files(tmp_path):
    res = run_compare(bradley_stage(8)[0], make_schedule(parse_schedule("dyadic:2:6")), tmp_path)
    assert len(rows(tmp_path / "counts.csv")) == 10
    assert [r["mesh"] for r in rows(tmp_path / "fit.csv")] == ["square", "triangle"]
    assert res.ok
    report = (tmp_path / "report.txt").read_text()
    assert report.count("PASS") == 6 and report.rstrip().endswith("result: PASS")
    svg = (tmp_path / "plot.svg").read_text()
    assert svg.startswith("<svg") and "−log₁₀ δ" in svg and "log₁₀ count" in svg
    assert svg.count("<rect") == 2 + 5 and svg.count("<polygon") == 5


def test_compare_outputs_are_byte_identical(tmp_path):
    g = bradley_stage(6)[0]
    deltas = make_schedule(parse_schedule("paper:3:8"))
    run_compare(g, deltas, tmp_path / "a", schedule_label="paper:3:8")
    run_compare(g, deltas, tmp_path / "b", schedule_label="paper:3:8")
    for name in ("counts.csv", "fit.csv", "report.txt", "plot.svg"):
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)


def test_compare_warnings():
    res = compare_meshes(bradley_stage(4)[0], make_schedule(parse_schedule("paper:3:6")))
    assert any("below the feature size" in w for w in res.warnings)
    assert any("non-dyadic" in w for w in res.warnings)
    assert "warnings:" in render_report(res)
    quiet = compare_meshes(bradley_stage(12)[0], [Dyadic(1, 2), Dyadic(1, 3)])
    assert quiet.warnings == []
    assert render_svg(quiet) == render_svg(quiet)


def test_compare_fails_when_inequality_breaks():
    res = compare_meshes(bradley_stage(2)[0], [Dyadic(1, 1), Dyadic(1, 2)])
    res.checks[0] = (res.checks[0][0], 10, 25, False)
    assert not res.ok and "result: FAIL" in render_report(res)


def test_cli_decompose(tmp_path, capsys):
    out = tmp_path / "d.geo"
    assert main(["decompose", "--depth", "6", "--out", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "193 triangles, area 3/4 + 2^-8, PASS"
    assert len(read_fracgeo(out)) == 193


def test_cli_generate(tmp_path):
    out = tmp_path / "b0.geo"
    assert main(["generate", "--fractal", "bradley", "--depth", "0", "--out", str(out)]) == 0
    assert sum(1 for line in out.read_text().splitlines() if line.startswith("poly")) == 1
    trace = tmp_path / "t.txt"
    assert main(["generate", "--fractal", "bradley", "--depth", "3", "--out", str(out),
                 "--trace", str(trace)]) == 0
    assert "direction SE" in trace.read_text()
    assert main(["generate", "--fractal", "koch", "--depth", "1", "--out", str(out),
                 "--trace", str(trace)]) == 2


def test_cli_count_estimate(tmp_path, capsys, caplog):
    geo, counts, fit = tmp_path / "s.geo", tmp_path / "c.csv", tmp_path / "f.csv"
    main(["generate", "--fractal", "bradley", "--depth", "6", "--out", str(geo)])
    assert main(["count", "--in", str(geo), "--mesh", "triangle", "--schedule", "paper:1:6",
                 "--out", str(counts)]) == 0
    warnings = [r for r in caplog.records if "non-dyadic" in r.getMessage()]
    assert len(warnings) == 1
    data = rows(counts)
    assert len(data) == 6 and data[0]["delta_exact"] == "1/2^1" and data[1]["delta_exact"] == ""
    assert main(["estimate", "--in", str(counts), "--out", str(fit)]) == 0
    assert [r["mesh"] for r in rows(fit)] == ["triangle"]


def test_cli_count_options(tmp_path):
    geo, a, b = tmp_path / "s.geo", tmp_path / "a.csv", tmp_path / "b.csv"
    main(["generate", "--fractal", "filled-square", "--out", str(geo)])
    args = ["count", "--in", str(geo), "--mesh", "square", "--schedule", "dyadic:1:2"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--cells", "half-open", "--offset", "1/2^3,0", "--jobs", "2",
                        "--out", str(b)]) == 0
    assert [r["count"] for r in rows(a)] == ["16", "36"]
    assert [r["count"] for r in rows(b)] == ["9", "25"]  # 5 columns x 5 rows


def test_cli_estimate_needs_two_rows(tmp_path, capsys):
    one = tmp_path / "one.csv"
    one.write_text("mesh,delta,count,delta_exact\nsquare,0.5,16,1/2^1\n")
    assert main(["estimate", "--in", str(one), "--out", str(tmp_path / "f.csv")]) != 0
    assert "at least two" in capsys.readouterr().err


def test_cli_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.geo"
    bad.write_text("fracgeo v1\nset x stage -\npoint 0 0\nwedge 1 2\n")
    assert main(["count", "--in", str(bad), "--mesh", "square", "--schedule", "dyadic:1:2",
                 "--out", str(tmp_path / "c.csv")]) == 2
    assert "line 4" in capsys.readouterr().err


def test_cli_missing_output_dir(tmp_path, capsys):
    assert main(["decompose", "--depth", "2", "--out", str(tmp_path / "no" / "d.geo")]) == 2
    assert "does not exist" in capsys.readouterr().err


def test_cli_compare(tmp_path, capsys):
    out = tmp_path / "cmp"
    assert main(["compare", "--fractal", "bradley", "--schedule", "dyadic:2:4",
                 "--out-dir", str(out)]) == 0
    assert "stage 9," in (out / "report.txt").read_text()  # depth from the delta/2 rule
    assert len(rows(out / "counts.csv")) == 6


def test_cli_ratio(capsys):
    assert main(["ratio", "--tol", "0.1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-2].split()[:2] == ["11", "6145"]
    assert lines[-1].startswith("B = 2.0975")
    assert main(["ratio", "--literal-paper"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3 and lines[1].split()[0] == "1" and "2.8073" in lines[-1]
    assert main(["ratio", "--tol", "0.5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-2].split()[0] == "2" and "2.4669" in lines[-1]


def test_cli_ratio_non_convergence(capsys):
    assert main(["ratio", "--tol", "0.001", "--k-max", "5"]) == 1
    captured = capsys.readouterr()
    assert len(captured.out.strip().splitlines()) == 6
    assert "did not reach" in captured.err


def test_cli_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["count", "--mesh", "square"])
    assert info.value.code == 2
