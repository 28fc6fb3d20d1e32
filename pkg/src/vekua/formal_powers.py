"""Bicomplex radial formal powers.

For n >= 1, with ``z = r e^{i theta}``::

    Z^(n)(1; z) = r^n (phi_f^(n)(r) cos n theta + j phi_{1/f}^(n)(r) sin n theta)
    Z^(n)(j; z) = r^n (-phi_f^(n)(r) sin n theta + j phi_{1/f}^(n)(r) cos n theta)

and ``Z^(0)(1; z) = f(r)``, ``Z^(0)(j; z) = j / f(r)``.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bicomplex import Bicomplex, BicomplexPolynomial
from .errors import DegreeOutOfRange, OutsideDomain
from .panels import PanelGrid
from .radial import (
    DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
    PotentialSpec,
    RadialProfile,
    build_f,
    darboux_potential,
    regular_profile,
)

log = logging.getLogger(__name__)

SCHEMA = 1
UNITS = ("one", "j")
PROFILE_COLUMNS = (
    "r",
    "re_phi_f", "im_phi_f", "re_dphi_f", "im_dphi_f",
    "re_phi_inv_f", "im_phi_inv_f", "re_dphi_inv_f", "im_dphi_inv_f",
)


@dataclass(frozen=True, eq=False)
class FormalPowerBasis:
    n_max: int
    phi_f: tuple[RadialProfile, ...]
    phi_inv_f: tuple[RadialProfile, ...]
    potential: PotentialSpec | None = None
    darboux: PotentialSpec | None = None
    tol: float = DEFAULT_TOL

    @property
    def f(self) -> RadialProfile:
        return self.phi_f[0]

    @property
    def f_prime(self) -> RadialProfile:
        return RadialProfile.from_values(self.f.grid, self.f.derivs, 0, self.f.derivs)

    @property
    def radius(self) -> float:
        return self.f.radius

    @property
    def grid(self) -> PanelGrid:
        return self.f.grid

    def fingerprint(self) -> str:
        return fingerprint(self.potential, self.n_max, self.tol)

    def replace_profile(self, which: str, n: int, profile: RadialProfile) -> FormalPowerBasis:
        """Copy with one profile swapped (used for negative controls)."""
        profiles = {"f": list(self.phi_f), "inv_f": list(self.phi_inv_f)}
        profiles[which][n] = profile
        return FormalPowerBasis(
            self.n_max, tuple(profiles["f"]), tuple(profiles["inv_f"]), self.potential, self.darboux, self.tol
        )


def fingerprint(potential: PotentialSpec | None, n_max: int, tol: float) -> str:
    payload = json.dumps(
        {"potential": None if potential is None else potential.to_json(), "n_max": int(n_max), "tol": float(tol)},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def build_basis(
    q: PotentialSpec,
    n_max: int,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    grid: PanelGrid | None = None,
    cache_dir: str | Path | None = None,
) -> FormalPowerBasis:
    """Construct phi_f^(n), phi_{1/f}^(n) for n = 0..n_max.

    With ``cache_dir`` the profiles are read from / written to CSV tables
    keyed by the (potential, n_max, tol) fingerprint.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    grid = grid or PanelGrid(q.radius)
    if cache_dir is not None:
        cached = load_basis(cache_dir, expected=fingerprint(q, n_max, tol), grid=grid)
        if cached is not None:
            log.info("loaded cached basis from %s", cache_dir)
            return cached
    f, f_prime = build_f(q, tol, max_terms, grid)
    q_inv = darboux_potential(f, f_prime, q)
    phi_f = [f] + [regular_profile(q, n, tol, max_terms, grid) for n in range(1, n_max + 1)]
    phi_inv_f = [regular_profile(q_inv, n, tol, max_terms, grid) for n in range(n_max + 1)]
    basis = FormalPowerBasis(n_max, tuple(phi_f), tuple(phi_inv_f), q, q_inv, tol)
    if cache_dir is not None:
        save_basis(basis, cache_dir)
    return basis


def _polar(z, radius: float):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(r > radius * (1 + 1e-12)):
        raise OutsideDomain(f"|z| = {float(np.max(r)):.6g} exceeds the disk radius {radius}")
    theta = np.mod(np.arctan2(z.imag, z.real), 2 * np.pi)
    return r, theta


def _unwrap(b: Bicomplex, scalar: bool) -> Bicomplex:
    if scalar:
        return Bicomplex(complex(b.sc), complex(b.vec))
    return b


def eval_basic_polar(basis: FormalPowerBasis, n: int, unit: str, r, theta) -> Bicomplex:
    if not 0 <= n <= basis.n_max:
        raise DegreeOutOfRange(f"degree {n} outside 0..{basis.n_max}")
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {UNITS}, got {unit!r}")
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if n == 0:
        fv = basis.f(r)
        if unit == "one":
            return Bicomplex(fv + 0 * theta, np.zeros(np.broadcast(r, theta).shape, dtype=complex))
        return Bicomplex(np.zeros(np.broadcast(r, theta).shape, dtype=complex), 1.0 / fv + 0 * theta)
    rn = r**n
    a = rn * basis.phi_f[n](r)
    b = rn * basis.phi_inv_f[n](r)
    c, s = np.cos(n * theta), np.sin(n * theta)
    if unit == "one":
        return Bicomplex(a * c, b * s)
    return Bicomplex(-a * s, b * c)


def eval_basic(basis: FormalPowerBasis, n: int, unit: str, z) -> Bicomplex:
    """Z^(n)(1; z) for unit="one", Z^(n)(j; z) for unit="j"."""
    scalar = np.ndim(z) == 0
    r, theta = _polar(z, basis.radius)
    return _unwrap(eval_basic_polar(basis, n, unit, r, theta), scalar)


def eval_formal_power(basis: FormalPowerBasis, n: int, A: Bicomplex, z) -> Bicomplex:
    """Z^(n)(A; z) = Sc(A) Z^(n)(1; z) + Vec(A) Z^(n)(j; z)."""
    A = Bicomplex.coerce(A)
    return eval_basic(basis, n, "one", z) * A.sc + eval_basic(basis, n, "j", z) * A.vec


@dataclass(frozen=True)
class FormalPolynomial:
    """sum over terms of Z^(n)(A_n; z)."""

    terms: tuple[tuple[int, Bicomplex], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(n), Bicomplex.coerce(a)) for n, a in self.terms))

    @property
    def degree(self) -> int:
        return max((n for n, _ in self.terms), default=0)

    def evaluate(self, basis: FormalPowerBasis, z) -> Bicomplex:
        scalar = np.ndim(z) == 0
        r, theta = _polar(z, basis.radius)
        return _unwrap(self.evaluate_polar(basis, r, theta), scalar)

    def evaluate_polar(self, basis: FormalPowerBasis, r, theta) -> Bicomplex:
        shape = np.broadcast(np.asarray(r), np.asarray(theta)).shape
        acc = Bicomplex(np.zeros(shape, dtype=complex), np.zeros(shape, dtype=complex))
        for n, A in self.terms:
            acc = acc + eval_basic_polar(basis, n, "one", r, theta) * A.sc
            acc = acc + eval_basic_polar(basis, n, "j", r, theta) * A.vec
        return acc

    def coefficients(self, n_max: int) -> np.ndarray:
        """Complex coefficient vector ordered (n, unit) as in the Gram matrix."""
        c = np.zeros(2 * n_max + 2, dtype=complex)
        for n, A in self.terms:
            if n > n_max:
                raise DegreeOutOfRange(f"degree {n} exceeds {n_max}")
            c[2 * n] += A.sc
            c[2 * n + 1] += A.vec
        return c

    @classmethod
    def from_coefficients(cls, c: np.ndarray) -> FormalPolynomial:
        c = np.asarray(c, dtype=complex)
        return cls(tuple((n, Bicomplex(c[2 * n], c[2 * n + 1])) for n in range(len(c) // 2)))

    def to_json(self) -> list[dict]:
        return [{"n": n, "A": A.to_json()} for n, A in self.terms]

    @classmethod
    def from_json(cls, obj) -> FormalPolynomial:
        return cls(tuple((int(t["n"]), Bicomplex.from_json(t["A"])) for t in obj))


def transmute_polynomial(P: BicomplexPolynomial, basis: FormalPowerBasis) -> FormalPolynomial:
    """sum A_n z-hat^n  ->  sum Z^(n)(A_n; z)."""
    if P.degree > basis.n_max:
        raise DegreeOutOfRange(f"polynomial degree {P.degree} exceeds basis degree {basis.n_max}")
    return FormalPolynomial(tuple(enumerate(P.coeffs)))


def _series_coefficients(series, n_max: int, radius: float = 0.5, n_points: int = 256) -> np.ndarray:
    if callable(series):
        w = radius * np.exp(2j * np.pi * np.arange(n_points) / n_points)
        c = np.fft.fft(series(w)) / n_points
        return c[: n_max + 1] / radius ** np.arange(n_max + 1)
    c = np.zeros(n_max + 1, dtype=complex)
    vals = np.asarray(series, dtype=complex)[: n_max + 1]
    c[: len(vals)] = vals
    return c


def taylor_coefficients(
    V_plus: Sequence[complex] | Callable,
    V_minus: Sequence[complex] | Callable,
    n_max: int,
) -> BicomplexPolynomial:
    """Bicomplex Taylor coefficients at 0 from the idempotent parts.

    ``V_plus`` gives the coefficients of (z^*)^n in W+ and ``V_minus`` those
    of z^n in W-.  Either may be a coefficient sequence or a holomorphic
    function of one complex variable (coefficients then come from an FFT on
    a circle of radius 1/2).
    """
    cp = _series_coefficients(V_plus, n_max)
    cm = _series_coefficients(V_minus, n_max)
    return BicomplexPolynomial(tuple(Bicomplex.from_idempotent(a, b) for a, b in zip(cp, cm)))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_basis(basis: FormalPowerBasis, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = basis.grid
    r = grid.flat_nodes
    files = []
    degrees = []
    for n in range(basis.n_max + 1):
        pf, pi = basis.phi_f[n], basis.phi_inv_f[n]
        path = out / f"profile_{n:03d}.csv"
        cols = [pf.values.ravel(), pf.derivs.ravel(), pi.values.ravel(), pi.derivs.ravel()]
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(PROFILE_COLUMNS)
            for k in range(len(r)):
                row = [_fmt(r[k])]
                for c in cols:
                    row += [_fmt(c[k].real), _fmt(c[k].imag)]
                w.writerow(row)
        files.append(path)
        degrees.append(
            {
                "n": n,
                "file": path.name,
                "terms_f": pf.n_terms,
                "last_term_f": pf.last_term,
                "terms_inv_f": pi.n_terms,
                "last_term_inv_f": pi.last_term,
            }
        )
    manifest = {
        "schema": SCHEMA,
        "fingerprint": basis.fingerprint(),
        "potential": None if basis.potential is None else basis.potential.to_json(),
        "n_max": basis.n_max,
        "tol": basis.tol,
        "grid": {"radius": grid.radius, "n_panels": grid.n_panels, "order": grid.order},
        "degrees": degrees,
    }
    mpath = out / "manifest.json"
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    files.append(mpath)
    return files


def load_basis(
    out_dir: str | Path, expected: str | None = None, grid: PanelGrid | None = None
) -> FormalPowerBasis | None:
    """Read a basis written by ``save_basis``; None if absent or stale."""
    mpath = Path(out_dir) / "manifest.json"
    if not mpath.exists():
        return None
    manifest = json.loads(mpath.read_text())
    if manifest.get("schema") != SCHEMA:
        return None
    if expected is not None and manifest.get("fingerprint") != expected:
        return None
    g = manifest["grid"]
    stored = PanelGrid(float(g["radius"]), int(g["n_panels"]), int(g["order"]))
    if grid is not None and grid != stored:
        return None
    phi_f, phi_inv_f = [], []
    for entry in manifest["degrees"]:
        path = Path(out_dir) / entry["file"]
        if not path.exists():
            return None
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape != (stored.nodes.size, len(PROFILE_COLUMNS)) or not np.array_equal(data[:, 0], stored.flat_nodes):
            return None
        cplx = data[:, 1::2] + 1j * data[:, 2::2]
        n = int(entry["n"])
        phi_f.append(RadialProfile(stored, cplx[:, 0].reshape(stored.nodes.shape), cplx[:, 1].reshape(stored.nodes.shape), n,
                                   int(entry["terms_f"]), float(entry["last_term_f"])))
        phi_inv_f.append(RadialProfile(stored, cplx[:, 2].reshape(stored.nodes.shape), cplx[:, 3].reshape(stored.nodes.shape), n,
                                       int(entry["terms_inv_f"]), float(entry["last_term_inv_f"])))
    potential = PotentialSpec.from_json(manifest["potential"]) if manifest.get("potential") else None
    darboux = darboux_potential(phi_f[0], None, potential) if potential is not None else None
    return FormalPowerBasis(int(manifest["n_max"]), tuple(phi_f), tuple(phi_inv_f), potential, darboux,
                            float(manifest["tol"]))
