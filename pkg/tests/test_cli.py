import json

import pytest

from rieszlat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_kernel_rot_paper_value(capsys):
    code, out = run(capsys, "kernel", "--kind", "rot", "--d", "2",
                    "--radius", "1")
    assert code == 0
    rows = dict()
    for line in out.splitlines()[1:]:
        n1, n2, v, e = line.split(",")
        rows[(int(n1), int(n2))] = float(v)
    assert rows[(1, 0)] == pytest.approx(0.1318, abs=5e-5)
    assert rows[(-1, 0)] == -rows[(1, 0)]


def test_kernel_bad_kind_usage_error(capsys):
    code = main(["kernel", "--kind", "nope", "--d", "2"])
    assert code == 2


def test_kernel_cz_spot(capsys):
    code, out = run(capsys, "kernel", "--kind", "cz", "--d", "2",
                    "--radius", "3")
    assert code == 0
    rows = {tuple(map(int, l.split(",")[:2])): float(l.split(",")[2])
            for l in out.splitlines()[1:]}
    assert rows[(3, 2)] == pytest.approx(0.0102, abs=5e-5)


def test_multiplier_rows(capsys):
    code, out = run(capsys, "multiplier", "--points", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("xi,hilbert,hdis,mtilde")
    first = lines[1].split(",")
    assert [float(v) for v in first[:4]] == [0.0, 1.0, 1.0, 1.0]
    last = lines[-1].split(",")
    assert float(last[0]) == 0.5
    assert float(last[1]) == 1.0 and float(last[2]) == 0.0
    assert float(last[3]) == 0.0  # Mtilde(1/2) exactly zero


def test_multiplier_deterministic(capsys):
    _, a = run(capsys, "multiplier", "--points", "11")
    _, b = run(capsys, "multiplier", "--points", "11")
    assert a == b


def test_pkernel_report(capsys):
    code, out = run(capsys, "pkernel", "--grid", "16384", "--radius", "100")
    assert code == 0
    rep = json.loads(out)
    assert abs(rep["sum"] - 1.0) < 1e-8
    assert rep["min_coeff"] > -1e-8


def test_norms_report(capsys):
    code, out = run(capsys, "norms", "--kernel", "hilbert-dis",
                    "--p", "2", "--trials", "5", "--box", "64")
    assert code == 0
    rep = json.loads(out)
    assert rep["ratios"][0]["max_ratio"] <= rep["ratios"][0]["cot_bound"] * 1.01
    assert 0.9 < rep["p2_lower_bound"] <= 1.0 + 1e-9


def test_norms_bad_kernel(capsys):
    assert main(["norms", "--kernel", "bogus"]) == 2


def test_mc_report(capsys):
    code, out = run(capsys, "mc", "--d", "1", "--w", "2", "--paths", "2000",
                    "--seed", "9", "--max-steps", "15000")
    assert code == 0
    rep = json.loads(out)
    assert sum(rep["counts"].values()) == 2000
    assert "chi2" in rep and 0.0 <= rep["chi2"]["p_value"] <= 1.0


def test_output_file(tmp_path, capsys):
    path = tmp_path / "mult.csv"
    code = main(["multiplier", "--points", "5", "--output", str(path)])
    assert code == 0
    assert path.read_text().startswith("xi,hilbert,hdis,mtilde")
