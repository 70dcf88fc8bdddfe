import csv
import io
from math import erf, pi

import numpy as np
import pytest

from levy_spectral.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def test_theta_stable_is_constant(capsys):
    code, out, _ = run(capsys, "theta", "stable:alpha=1.5", "--lambda", "0.1:10:100")
    header, data = table(out)
    assert code == 0 and header == ["lambda", "K", "theta"]
    assert data.shape == (100, 3)
    assert np.allclose(data[:, 2], pi / 6, atol=1e-8)


def test_theta_brownian_is_zero(capsys):
    code, out, _ = run(capsys, "theta", "stable:alpha=2", "--lambda", "0.1:10:7:log")
    assert code == 0 and np.all(table(out)[1][:, 2] == 0)


def test_theta_poisson_turns_negative(capsys):
    code, out, _ = run(capsys, "theta", "bmpoisson:rate=9", "--lambda", "4:5:11")
    assert code == 0 and np.min(table(out)[1][:, 2]) < 0


def test_eigfun_brownian_sine(capsys):
    code, out, _ = run(capsys, "eigfun", "stable:alpha=2", "--lambda", "1", "--x", "-10:10:401")
    header, data = table(out)
    assert code == 0 and header == ["x", "F", "G", "sine_envelope"]
    assert np.max(np.abs(data[:, 1] - np.sin(np.abs(data[:, 0])))) <= 1e-8


def test_eigfun_scaling_and_origin(capsys):
    _, out1, _ = run(capsys, "eigfun", "stable:alpha=1.5", "--lambda", "1", "--x", "-4:4:17")
    _, out2, _ = run(capsys, "eigfun", "stable:alpha=1.5", "--lambda", "2", "--x", "-2:2:17")
    f1, f2 = table(out1)[1][:, 1], table(out2)[1][:, 1]
    assert abs(f1[8]) <= 1e-6
    assert np.max(np.abs(f1 - f2)) <= 1e-6


def test_eigfun_fourier_route(capsys):
    code, out, _ = run(capsys, "eigfun", "stable:alpha=1.5", "--lambda", "1", "--x", "0:2:5",
                       "--method", "FourierInversion")
    assert code == 0 and abs(table(out)[1][0, 1]) <= 1e-6


def test_hitting_brownian(capsys):
    code, out, _ = run(capsys, "hitting", "stable:alpha=2", "--t", "1", "--x", "1")
    header, data = table(out)
    assert code == 0 and header == ["t", "x", "tail", "prob_finite"]
    assert data[0, 2] == pytest.approx(erf(0.5), abs=1e-6)
    assert data[0, 3] == pytest.approx(1.0, abs=1e-3)


def test_density_at_origin(capsys):
    code, out, _ = run(capsys, "density", "stable:alpha=1.5", "--t", "1", "--x", "0", "--y", "1")
    header, data = table(out)
    assert code == 0 and header == ["t", "x", "y", "p_killed", "p_free"]
    assert abs(data[0, 3]) <= 1e-8 and data[0, 4] > 0


def test_density_needs_concavity(capsys):
    code, _, err = run(capsys, "density", "bmpoisson:rate=9", "--t", "1", "--x", "1", "--y", "1")
    assert code == 3 and "advisory" in err


def test_transform_brownian(capsys):
    code, out, _ = run(capsys, "transform", "stable:alpha=2", "--lambda", "1", "--f", "exp")
    header, data = table(out)
    assert code == 0 and header == ["lambda", "even", "odd"]
    assert data[0, 1] == pytest.approx(1.0, abs=1e-5)
    assert abs(data[0, 2]) <= 1e-12


def test_transform_signed_exponential(capsys):
    code, out, _ = run(capsys, "transform", "stable:alpha=2", "--lambda", "1", "--f", "signexp")
    assert code == 0 and table(out)[1][0, 2] == pytest.approx(1.0, abs=1e-5)


def test_output_file(tmp_path, capsys):
    path = tmp_path / "theta.csv"
    code, out, _ = run(capsys, "theta", "stable:alpha=1.5", "--lambda", "1", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("lambda,K,theta\n")


@pytest.mark.parametrize("argv", [
    ["theta", "cauchy", "--lambda", "1"],
    ["theta", "stable:alpha=1.5", "--lambda", "1:2"],
    ["theta", "stable:alpha=1.5"],
    ["eigfun", "trunc:alpha=1.5,c=1", "--lambda", "1", "--x", "1", "--method", "LaplaceRoute"],
    ["transform", "stable:alpha=1.5", "--lambda", "1", "--f", "nope"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_bad_subcommand_exits_with_usage_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_validate_stable(capsys):
    code, out, _ = run(capsys, "validate", "stable:alpha=1.5")
    assert code == 0
    assert out.strip().splitlines()[-1] == "RESULT PASS"
    assert "FAIL" not in out
