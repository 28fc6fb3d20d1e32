"""Command-line front end: ``vekua basis | verify | eval``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bergman import DiskQuadrature, build_kernel, kernel_eval, project
from .bicomplex import Bicomplex, parse_bicomplex
from .config import SCHEMA, RunConfig
from .errors import DegreeOutOfRange, OutsideDomain, VekuaError
from .formal_powers import UNITS, build_basis, eval_basic, eval_formal_power, save_basis
from .suites import SUITES, run_suite

log = logging.getLogger("vekua")

FIELD_COLUMNS = ("r", "theta", "re_sc", "im_sc", "re_vec", "im_vec")
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _point(text: str) -> complex:
    try:
        x, y = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected a point 'x,y', got {text!r}") from exc
    return complex(x, y)


def _load_basis(config: RunConfig):
    return build_basis(config.potential, config.n_max, config.tol, cache_dir=config.output_dir)


def write_quadrature_nodes(path: Path, quad: DiskQuadrature) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("r", "theta", "weight"))
        for i, r in enumerate(quad.r):
            for k, t in enumerate(quad.theta):
                w.writerow((_fmt(r), _fmt(t), _fmt(quad.weights[i, k])))
    return path


def read_field_csv(path: Path, quad: DiskQuadrature) -> Bicomplex:
    """A field sampled at the quadrature nodes, rows in ``quadrature_nodes.csv`` order."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read field CSV {path}: {exc}") from exc
    shape = quad.weights.shape
    if data.shape != (shape[0] * shape[1], len(FIELD_COLUMNS)):
        raise UsageError(f"field CSV must have {shape[0] * shape[1]} rows of {', '.join(FIELD_COLUMNS)}")
    r, t = np.broadcast_arrays(*quad.mesh())
    if not (np.allclose(data[:, 0], r.ravel(), rtol=0, atol=1e-12) and np.allclose(data[:, 1], t.ravel(), rtol=0, atol=1e-12)):
        raise UsageError("field CSV nodes do not match the quadrature nodes")
    sc = (data[:, 2] + 1j * data[:, 3]).reshape(shape)
    vec = (data[:, 4] + 1j * data[:, 5]).reshape(shape)
    return Bicomplex(sc, vec)


def cmd_basis(config: RunConfig) -> int:
    basis = build_basis(config.potential, config.n_max, config.tol)
    files = save_basis(basis, config.output_dir)
    quad = DiskQuadrature(config.radius, config.n_radial, config.n_theta)
    files.append(write_quadrature_nodes(config.output_dir / "quadrature_nodes.csv", quad))
    print(_dump({"schema": SCHEMA, "fingerprint": basis.fingerprint(), "files": [str(p) for p in files]}))
    return 0


def cmd_verify(config: RunConfig, suite: str) -> int:
    checks = run_suite(suite, config)
    passed = all(c.passed for c in checks)
    report = {"schema": SCHEMA, "suite": suite, "passed": passed, "checks": [c.to_json() for c in checks]}
    config.output_dir.mkdir(parents=True, exist_ok=True)
    path = config.output_dir / f"report_{suite}.json"
    path.write_text(_dump(report) + "\n")
    for c in checks:
        if not c.passed:
            log.warning("FAILED %s: measured %.3g, threshold %s", c.name, c.measured, c.threshold)
    print(_dump({"schema": SCHEMA, "suite": suite, "passed": passed, "report": str(path),
                 "n_checks": len(checks), "n_failed": sum(not c.passed for c in checks)}))
    return 0 if passed else EXIT_FAILED


def cmd_eval(config: RunConfig, args) -> int:
    basis = _load_basis(config)
    if args.what == "formal_power":
        if args.n is None or args.z is None:
            raise UsageError("formal_power needs --n and --z")
        z = _point(args.z)
        out = {"n": args.n, "z": [z.real, z.imag]}
        if args.A is not None:
            A = _bicomplex(args.A)
            out["A"] = A.to_json()
            value = eval_formal_power(basis, args.n, A, z)
        else:
            out["unit"] = args.unit
            value = eval_basic(basis, args.n, args.unit, z)
        out["value"] = value.to_json()
    elif args.what == "kernel":
        if args.z is None or args.zeta is None:
            raise UsageError("kernel needs --z and --zeta")
        A = _bicomplex(args.A or "1")
        z, zeta = _point(args.z), _point(args.zeta)
        K = build_kernel(basis, config.n_max if args.N is None else args.N)
        value = kernel_eval(K, A, z, zeta)
        out = {"N": K.N, "A": A.to_json(), "z": [z.real, z.imag], "zeta": [zeta.real, zeta.imag], "value": value.to_json()}
    else:
        if args.field is None:
            raise UsageError("projection needs --field")
        quad = DiskQuadrature(config.radius, config.n_radial, config.n_theta)
        psi = read_field_csv(Path(args.field), quad)
        K = build_kernel(basis, config.n_max if args.N is None else args.N)
        out = {"N": K.N, "coefficients": project(psi, K, quad).to_json()}
    print(_dump({"schema": SCHEMA, "what": args.what, **out}))
    return 0


def _bicomplex(text: str) -> Bicomplex:
    try:
        return parse_bicomplex(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vekua", description="Bicomplex radial formal powers and Bergman kernels.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", help="build the radial profiles and write them as CSV")
    b.add_argument("-c", "--config", required=True)

    v = sub.add_parser("verify", help="run verification suites and write a JSON report")
    v.add_argument("-c", "--config", required=True)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")

    e = sub.add_parser("eval", help="evaluate a formal power, the kernel, or a projection")
    e.add_argument("-c", "--config", required=True)
    e.add_argument("--what", choices=("formal_power", "kernel", "projection"), required=True)
    e.add_argument("--n", type=int)
    e.add_argument("--unit", choices=UNITS, default="one")
    e.add_argument("--A", help="bicomplex 'sc' or 'sc,vec', e.g. '1+2i,0.5'")
    e.add_argument("--z", help="point 'x,y'")
    e.add_argument("--zeta", help="point 'x,y'")
    e.add_argument("--N", type=int, help="kernel truncation degree (default n_max)")
    e.add_argument("--field", help="CSV with columns " + ", ".join(FIELD_COLUMNS))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = RunConfig.load(args.config)
        if args.command == "basis":
            return cmd_basis(config)
        if args.command == "verify":
            return cmd_verify(config, args.suite)
        return cmd_eval(config, args)
    except UsageError as exc:
        print(_dump({"schema": SCHEMA, "error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except VekuaError as exc:
        code = EXIT_USAGE if isinstance(exc, (DegreeOutOfRange, OutsideDomain)) else EXIT_FAILED
        print(_dump({"schema": SCHEMA, "error": exc.code, "message": str(exc)}), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
