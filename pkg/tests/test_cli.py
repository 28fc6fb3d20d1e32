import json
import math

import numpy as np
import pytest

from vekua.bergman import DiskQuadrature
from vekua.cli import FIELD_COLUMNS, main
from vekua.config import RunConfig
from vekua.errors import InvalidConfig
from vekua.formal_powers import build_basis, eval_basic_polar
from vekua.radial import RadialProfile
from vekua.suites import run_suite

HELMHOLTZ = {"kind": "constant", "value": [-0.25, 0.0], "radius": 1.0}
LAPLACE = {"kind": "constant", "value": [0.0, 0.0], "radius": 1.0}


def write_config(tmp_path, potential=HELMHOLTZ, name="cfg.json", **extra):
    obj = {"schema": 1, "potential": potential, "n_max": 8, "output_dir": "out", **extra}
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestConfig:
    def test_output_dir_relative_to_config(self, tmp_path):
        cfg = RunConfig.load(write_config(tmp_path))
        assert cfg.output_dir == (tmp_path / "out").resolve()

    @pytest.mark.parametrize(
        "extra",
        [{"n_max": -1}, {"tol": 0}, {"grid": {"r_min": 0.9, "r_max": 0.5}}, {"grid": {"h": 0}}, {"schema": 2}],
    )
    def test_invalid(self, tmp_path, extra):
        with pytest.raises(InvalidConfig):
            RunConfig.load(write_config(tmp_path, **extra))

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        with pytest.raises(InvalidConfig):
            RunConfig.load(path)


class TestBasisCommand:
    def test_helmholtz_files(self, tmp_path, capsys):
        code, out, _ = run(capsys, "basis", "-c", write_config(tmp_path))
        assert code == 0
        summary = json.loads(out)
        assert summary["schema"] == 1 and len(summary["fingerprint"]) == 64
        names = sorted(p.name for p in (tmp_path / "out").iterdir())
        assert names == ["manifest.json"] + [f"profile_{n:03d}.csv" for n in range(9)] + ["quadrature_nodes.csv"]
        nodes = np.loadtxt(tmp_path / "out" / "quadrature_nodes.csv", delimiter=",", skiprows=1)
        assert nodes.shape == (64 * 256, 3)
        assert abs(nodes[:, 2].sum() - math.pi) < 1e-13

    def test_laplace_profiles_are_one(self, tmp_path, capsys):
        run(capsys, "basis", "-c", write_config(tmp_path, LAPLACE, n_max=2))
        data = np.loadtxt(tmp_path / "out" / "profile_002.csv", delimiter=",", skiprows=1)
        header = (tmp_path / "out" / "profile_002.csv").read_text().splitlines()[0].split(",")
        col = {name: i for i, name in enumerate(header)}
        assert np.all(data[:, col["re_phi_f"]] == 1) and np.all(data[:, col["re_phi_inv_f"]] == 1)

    def test_byte_identical_reruns(self, tmp_path, capsys):
        cfg = write_config(tmp_path, n_max=3)
        run(capsys, "basis", "-c", cfg)
        first = {p.name: p.read_bytes() for p in (tmp_path / "out").iterdir()}
        run(capsys, "basis", "-c", cfg)
        assert first == {p.name: p.read_bytes() for p in (tmp_path / "out").iterdir()}

    def test_tabulated_without_origin(self, tmp_path, capsys):
        pot = {"kind": "tabulated", "nodes": [[0.1, [0, 0]], [1.0, [0, 0]]], "radius": 1.0}
        code, out, err = run(capsys, "basis", "-c", write_config(tmp_path, pot))
        assert code == 1 and out == ""
        assert json.loads(err)["error"] == "invalid_potential"

    def test_vanishing_f(self, tmp_path, capsys):
        pot = {"kind": "constant", "value": [-9.0, 0.0], "radius": 1.0}
        code, _, err = run(capsys, "basis", "-c", write_config(tmp_path, pot))
        assert code == 1
        assert json.loads(err)["error"] == "vanishing_f"


class TestVerifyCommand:
    @pytest.mark.parametrize("suite", ["algebra", "ode", "transmutation", "bergman"])
    def test_suite_passes(self, tmp_path, capsys, suite):
        code, out, _ = run(capsys, "verify", "-c", write_config(tmp_path), "--suite", suite)
        assert code == 0
        report = json.loads((tmp_path / "out" / f"report_{suite}.json").read_text())
        assert report["schema"] == 1 and report["passed"] is True
        assert all(c["passed"] for c in report["checks"])
        assert json.loads(out)["n_failed"] == 0

    def test_vekua_suite(self, tmp_path, capsys):
        cfg = write_config(tmp_path, n_max=2, grid={"h": 0.002})
        code, _, _ = run(capsys, "verify", "-c", cfg, "--suite", "vekua")
        assert code == 0

    def test_corrupted_profile_fails(self):
        cfg = RunConfig.from_json({"potential": HELMHOLTZ, "n_max": 2, "grid": {"h": 0.002}})
        basis = build_basis(cfg.potential, 2)
        bad = basis.phi_inv_f[1]
        bad = RadialProfile(bad.grid, bad.values * (1 + 0.01 * bad.grid.nodes), bad.derivs, bad.degree)
        checks = run_suite("vekua", cfg, basis.replace_profile("inv_f", 1, bad))
        failed = {c.name for c in checks if not c.passed}
        assert "vekua_residual_n1_one" in failed
        assert not any("n0" in name or "n2" in name for name in failed)

    def test_corrupted_profile_fails_transmutation(self):
        cfg = RunConfig.from_json({"potential": HELMHOLTZ, "n_max": 3})
        basis = build_basis(cfg.potential, 3)
        swapped = basis.replace_profile("inv_f", 2, basis.phi_f[2])
        assert not all(c.passed for c in run_suite("transmutation", cfg, swapped))

    def test_unknown_suite(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "-c", str(write_config(tmp_path)), "--suite", "everything"])
        assert exc.value.code == 2


class TestEvalCommand:
    def test_kernel_at_origin(self, tmp_path, capsys):
        cfg = write_config(tmp_path, LAPLACE)
        code, out, _ = run(capsys, "eval", "-c", cfg, "--what", "kernel", "--A", "1", "--z", "0,0", "--zeta", "0,0")
        assert code == 0
        value = json.loads(out)["value"]
        assert abs(value["sc"][0] - 1 / math.pi) < 1e-15 and value["vec"] == [0.0, 0.0]

    def test_formal_power(self, tmp_path, capsys, helmholtz):
        cfg = write_config(tmp_path)
        code, out, _ = run(capsys, "eval", "-c", cfg, "--what", "formal_power", "--n", "2", "--z", "0.4,0.69282032302755")
        assert code == 0
        sc = json.loads(out)["value"]["sc"]
        expected = eval_basic_polar(helmholtz, 2, "one", 0.8, math.pi / 3).sc
        assert abs(complex(*sc) - expected) < 1e-13

    def test_formal_power_with_coefficient(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        code, out, _ = run(capsys, "eval", "-c", cfg, "--what", "formal_power", "--n", "0", "--A", "0,1", "--z", "0.5,0")
        assert code == 0
        value = json.loads(out)["value"]
        assert value["sc"] == [0.0, 0.0] and value["vec"][0] > 1

    def test_projection_from_field(self, tmp_path, capsys, helmholtz):
        quad = DiskQuadrature(1.0)
        r, t = np.broadcast_arrays(*quad.mesh())
        w = eval_basic_polar(helmholtz, 3, "j", r, t) * (2 - 1j)
        cols = [r, t, w.sc.real, w.sc.imag, w.vec.real, w.vec.imag]
        path = tmp_path / "field.csv"
        np.savetxt(path, np.column_stack([c.ravel() for c in cols]), delimiter=",", header=",".join(FIELD_COLUMNS),
                   comments="", fmt="%.17g")
        code, out, _ = run(capsys, "eval", "-c", write_config(tmp_path), "--what", "projection", "--field", path, "--N", "4")
        assert code == 0
        terms = json.loads(out)["coefficients"]
        big = [c for c in terms if max(map(abs, c["A"]["sc"] + c["A"]["vec"])) > 1e-10]
        assert len(big) == 1 and big[0]["n"] == 3
        assert np.allclose(big[0]["A"]["vec"], [2, -1], rtol=0, atol=1e-12)

    def test_repeat_is_identical(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        argv = ("eval", "-c", cfg, "--what", "kernel", "--A", "1+2i,0.5", "--z", "0.1,0.2", "--zeta=-0.3,0")
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first

    @pytest.mark.parametrize(
        "argv",
        [
            ("--what", "kernel", "--z", "0.1"),
            ("--what", "kernel", "--z", "0.1,0.2"),
            ("--what", "formal_power", "--z", "0,0"),
            ("--what", "formal_power", "--n", "9", "--z", "0,0"),
            ("--what", "formal_power", "--n", "1", "--z", "2,0"),
            ("--what", "kernel", "--A", "x", "--z", "0,0", "--zeta", "0,0"),
            ("--what", "projection"),
        ],
    )
    def test_usage_errors(self, tmp_path, capsys, argv):
        code, out, err = run(capsys, "eval", "-c", write_config(tmp_path), *argv)
        assert code == 2 and out == ""
        assert "error" in json.loads(err)

    def test_missing_config(self, tmp_path, capsys):
        code, _, err = run(capsys, "eval", "-c", tmp_path / "none.json", "--what", "kernel")
        assert code == 1
        assert json.loads(err)["error"] == "invalid_config"
