import json
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from isoprofile.cli import EXIT_DOMAIN, EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, main
from isoprofile.io import read_profile
from oracles import cone_profile_closed, s2_profile

PI = math.pi
GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("ISOPROFILE_REGEN_GOLDEN") == "1"

# name -> argv (output goes to the named file); inputs are made by _inputs
GOLDEN_CASES = {
    "profile_disk.csv": ["profile", "--model", "--K", "0", "--N", "2", "--volumes", "3.141592653589793"],
    "profile_cone_half.csv": ["profile", "--cone", "0.5", "--N", "2", "--grid", "4", "--v-max", "4"],
    "profile_sphere16.csv": ["profile", "--model", "--K", "1", "--N", "2", "--grid", "16"],
    "profile_s3_8.json": ["profile", "--model", "--K", "2", "--N", "3", "--grid", "8", "--format", "json"],
    "profile_spindle8.csv": ["profile", "--suspension", "0.7", "--N", "2", "--grid", "8"],
    "tube_ball.csv": ["tube", "--K", "0", "--N", "3", "--c", "2", "--P0", "12.566370614", "--V0", "4.188790205", "--t", "1"],
    "tube_h2.csv": ["tube", "--K", "-1", "--N", "2", "--c", "1.3130352855", "--P0", "7.384057", "--t-range", "-1", "2", "7"],
    "certify_sphere.json": ["certify", "sphere.csv", "--N", "2", "--total-volume", "12.566370614359172", "--levy-gromov", "--concavity", "--senses", "pointwise,viscosity,distributional", "--K", "1"],
}


def _inputs(where: Path) -> None:
    V = np.linspace(0, 4 * PI, 66)[1:-1]
    with open(where / "sphere.csv", "w") as fh:
        fh.write("volume,profile\n")
        for v, y in zip(V, s2_profile(V)):
            fh.write(f"{float(v)!r},{float(y)!r}\n")


def run(argv, cwd: Path, out: str | None = None) -> tuple[int, str]:
    prev = os.getcwd()
    os.chdir(cwd)
    try:
        args = list(argv) + (["-o", out] if out else [])
        code = main(args)
    finally:
        os.chdir(prev)
    return code, (cwd / out).read_text() if out and (cwd / out).exists() else ""


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_files(name, tmp_path):
    _inputs(tmp_path)
    code, first = run(GOLDEN_CASES[name], tmp_path, "a_" + name)
    assert code == EXIT_OK
    _, second = run(GOLDEN_CASES[name], tmp_path, "b_" + name)
    assert first == second  # byte-stable across consecutive runs
    if REGEN:
        (GOLDEN / name).write_text(first)
    assert (GOLDEN / name).read_text() == first


def test_profile_examples(tmp_path):
    _, text = run(GOLDEN_CASES["profile_disk.csv"], tmp_path, "o.csv")
    assert text.splitlines() == ["volume,profile,psi", "3.141592653589793,6.283185307179586,39.47841760435743"]
    assert 39.47841760435743 == 39.478417604357434  # same double, shortest repr
    _, text = run(GOLDEN_CASES["profile_cone_half.csv"], tmp_path, "o.csv")
    rows = [list(map(float, r.split(","))) for r in text.splitlines()[1:]]
    assert len(rows) == 4
    for V, I, psi in rows:
        assert I == pytest.approx(PI * math.sqrt(2) * math.sqrt(V / PI), rel=1e-12)
        assert I == pytest.approx(cone_profile_closed(0.5, 2, V), rel=1e-12)
        assert psi == pytest.approx(I * I, rel=1e-15)
    _, text = run(["profile", "--suspension", "1.0", "--N", "2", "--volumes", repr(2 * PI)], tmp_path, "o.csv")
    assert float(text.splitlines()[1].split(",")[1]) == pytest.approx(2 * PI, rel=1e-13)


def test_tube_examples(tmp_path):
    _, text = run(GOLDEN_CASES["tube_ball.csv"], tmp_path, "o.csv")
    t, P, lo, hi = map(float, text.splitlines()[1].split(","))
    assert P == pytest.approx(16 * PI, rel=1e-9)
    assert P == pytest.approx(50.265482457, abs=1e-8)
    _, text = run(["tube", "--K", "1", "--N", "2", "--c", "0", "--P0", "6.283185307", "--t", "1.5707963"], tmp_path, "o.csv")
    assert abs(float(text.splitlines()[1].split(",")[1])) < 1e-6
    _, text = run(["tube", "--K", "-1", "--N", "2", "--c", "1.3130352855", "--P0", "7.384057", "--t", "1"], tmp_path, "o.csv")
    P = float(text.splitlines()[1].split(",")[1])
    # with these rounded inputs the bound is 7.384057 (cosh 1 + c sinh 1) = 22.7884...
    assert P == pytest.approx(7.384057 * (math.cosh(1) + 1.3130352855 * math.sinh(1)), rel=1e-12)
    assert P == pytest.approx(2 * PI * math.sinh(2), rel=1e-5)
    _, text = run(GOLDEN_CASES["tube_h2.csv"], tmp_path, "o.csv")
    ts = [float(r.split(",")[0]) for r in text.splitlines()[1:]]
    assert ts == sorted(ts) and len(ts) == 7


def test_certify_examples(tmp_path):
    _inputs(tmp_path)
    V = np.linspace(0, 4 * PI, 66)[1:-1]
    code, text = run(["certify", "sphere.csv", "--N", "2", "--total-volume", repr(4 * PI), "--levy-gromov"], tmp_path, "r.json")
    assert code == EXIT_OK and json.loads(text)["pass"]
    with open(tmp_path / "low.csv", "w") as fh:
        fh.write("volume,profile\n" + "".join(f"{float(v)!r},{float(0.9 * y)!r}\n" for v, y in zip(V, s2_profile(V))))
    code, text = run(["certify", "low.csv", "--N", "2", "--total-volume", repr(4 * PI), "--levy-gromov"], tmp_path, "r.json")
    assert code == EXIT_FAIL and not json.loads(text)["pass"]
    run(["profile", "--cone", "0.5", "--N", "2", "--grid", "32", "--v-max", "20"], tmp_path, "cone.csv")
    code, text = run(["certify", "cone.csv", "--N", "2", "--avr", "0.5"], tmp_path, "r.json")
    rep = json.loads(text)
    assert code == EXIT_OK and rep["certificates"]["avr"]["rigidity_flag"]
    assert rep["certificates"]["avr"]["equality_everywhere"]


def test_round_trip_profile_to_certify(tmp_path):
    run(["profile", "--model", "--K", "1", "--N", "2", "--grid", "64"], tmp_path, "s.csv")
    p = read_profile(tmp_path / "s.csv", 2, 4 * PI)
    lines = (tmp_path / "s.csv").read_text().splitlines()[1:]
    for line, v, y in zip(lines, p.volumes, p.values):
        a, b, _ = line.split(",")
        assert float(a) == v and float(b) == y
    assert np.allclose(p.values, s2_profile(p.volumes), rtol=1e-12)
    code, _ = run(["certify", "s.csv", "--N", "2", "--total-volume", repr(4 * PI), "--levy-gromov", "--concavity"], tmp_path, "r.json")
    assert code == EXIT_OK
    run(["profile", "--model", "--K", "2", "--N", "3", "--grid", "64", "--format", "json"], tmp_path, "s3.json")
    code, text = run(["certify", "s3.json", "--levy-gromov", "--senses", "pointwise", "--K", "2"], tmp_path, "r.json")
    assert code == EXIT_OK and json.loads(text)["dimension"] == 3


def test_exit_codes(tmp_path, capsys):
    _inputs(tmp_path)
    bad = tmp_path / "bad.csv"
    bad.write_text("volume,profile\n1,2\n2,oops\n3,4\n")
    assert run(["certify", "bad.csv", "--N", "2", "--concavity"], tmp_path)[0] == EXIT_USAGE
    assert "line 3" in capsys.readouterr().err
    assert run(["certify", "missing.csv", "--N", "2", "--concavity"], tmp_path)[0] == EXIT_USAGE
    assert run(["certify", "sphere.csv", "--N", "2"], tmp_path)[0] == EXIT_USAGE
    assert run(["certify", "sphere.csv", "--N", "2", "--senses", "weird"], tmp_path)[0] == EXIT_USAGE
    assert run(["certify", "sphere.csv", "--N", "2", "--levy-gromov"], tmp_path)[0] == EXIT_USAGE
    assert run(["profile", "--model", "--K", "1", "--N", "2", "--grid", "2"], tmp_path)[0] == EXIT_USAGE
    assert run(["profile", "--model", "--N", "2"], tmp_path)[0] == EXIT_USAGE
    assert run(["profile", "--cone", "1.5", "--N", "2", "--grid", "4"], tmp_path)[0] == EXIT_DOMAIN
    assert run(["profile", "--model", "--K", "1", "--N", "2", "--volumes", "20"], tmp_path)[0] == EXIT_DOMAIN
    assert run(["tube", "--K", "0", "--N", "2", "--c", "1", "--P0", "-1", "--t", "1"], tmp_path)[0] == EXIT_DOMAIN
    assert run(["tube", "--K", "0", "--N", "2", "--c", "1", "--P0", "1"], tmp_path)[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["profile"])
    assert exc.value.code == EXIT_USAGE


def test_tolerance_override(tmp_path, monkeypatch):
    _inputs(tmp_path)
    V = np.linspace(0, 4 * PI, 66)[1:-1]
    with open(tmp_path / "near.csv", "w") as fh:
        fh.write("volume,profile\n" + "".join(f"{float(v)!r},{float(y - 1e-6)!r}\n" for v, y in zip(V, s2_profile(V))))
    argv = ["certify", "near.csv", "--N", "2", "--total-volume", repr(4 * PI), "--levy-gromov"]
    assert run(argv, tmp_path, "r.json")[0] == EXIT_FAIL
    monkeypatch.setenv("ISOPROFILE_TOL", "1e-5")
    code, text = run(argv, tmp_path, "r.json")
    assert code == EXIT_OK and json.loads(text)["tolerance"] == 1e-5
    assert run(argv + ["--tol", "1e-9"], tmp_path, "r.json")[0] == EXIT_FAIL
    monkeypatch.setenv("ISOPROFILE_TOL", "-3")
    assert run(argv, tmp_path)[0] == EXIT_USAGE


def test_run_config_invariants():
    with pytest.raises(UsageError):
        RunConfig("profile", grid_size=2)
    with pytest.raises(UsageError):
        RunConfig("certify", tolerance=0.0)
    with pytest.raises(UsageError):
        RunConfig("profile", N=1)
    assert RunConfig("profile").grid_size == 512


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "isoprofile", "profile", "--model", "--K", "0", "--N", "2", "--volumes", "3.141592653589793"],
        capture_output=True,
        text=True,
        cwd=tmp_path,
        check=True,
    )
    assert out.stdout == (GOLDEN / "profile_disk.csv").read_text()
