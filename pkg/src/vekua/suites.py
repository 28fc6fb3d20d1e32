"""Verification suites run by ``vekua verify``.

Each suite returns a list of :class:`Check`; a check passes when the
measured value is at most ``threshold`` (or inside ``[lo, hi]`` when the
threshold is an interval).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bergman import DiskQuadrature, build_kernel, gram_matrix, l2_inner, reproduce
from .bicomplex import Bicomplex, bexp, conj_dagger, inverse, norm, polar_hat_pow
from .config import RunConfig
from .formal_powers import UNITS, FormalPolynomial, FormalPowerBasis, build_basis, eval_basic_polar
from .residuals import BicomplexField, PolarGrid, convergence_order, cr_system_residual, schrodinger_residual, vekua_residual
from .transmutation import check_transmutation_relations, t_inv_f_integral

SUITES = ("algebra", "ode", "transmutation", "vekua", "bergman")
SEED = 20240531
EXACT_LEVEL = 1e-11


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    threshold: float | tuple[float, float]

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.measured):
            return False
        if isinstance(self.threshold, tuple):
            lo, hi = self.threshold
            return lo <= self.measured <= hi
        return self.measured <= self.threshold

    def to_json(self) -> dict:
        thr = list(self.threshold) if isinstance(self.threshold, tuple) else self.threshold
        return {"name": self.name, "measured": self.measured, "threshold": thr, "passed": self.passed}


def _rel(a: Bicomplex, b: Bicomplex) -> np.ndarray:
    scale = np.maximum(np.maximum(norm(a), norm(b)), 1e-300)
    return norm(a - b) / scale


def random_bicomplex(rng: np.random.Generator, size: int, scale: float = 1.0) -> Bicomplex:
    x = rng.normal(scale=scale, size=(4, size))
    return Bicomplex(x[0] + 1j * x[1], x[2] + 1j * x[3])


def algebra_checks(n_samples: int = 1000, seed: int = SEED) -> list[Check]:
    rng = np.random.default_rng(seed)
    W, V, U = (random_bicomplex(rng, n_samples) for _ in range(3))
    tol = 1e-12
    checks = [
        Check("commutativity", float(np.max(_rel(W * V, V * W))), tol),
        Check("associativity", float(np.max(_rel((W * V) * U, W * (V * U)))), tol),
        Check("distributivity", float(np.max(_rel(W * (V + U), W * V + W * U))), tol),
        Check("dagger_involution", float(np.max(_rel(conj_dagger(conj_dagger(W)), W))), tol),
        Check("bar_involution", float(np.max(_rel(W.conj_bar().conj_bar(), W))), tol),
        Check("idempotent_round_trip", float(np.max(_rel(Bicomplex.from_idempotent(W.plus, W.minus), W))), tol),
        Check("idempotent_product", float(np.max(np.abs((W * V).plus - W.plus * V.plus) / np.abs(W.plus * V.plus))), tol),
        Check(
            "product_norm_bound",
            float(np.max(norm(W * V) / (math.sqrt(2) * norm(W) * norm(V)))),
            1.0 + tol,
        ),
        Check("exp_additivity", float(np.max(_rel(bexp(W + V), bexp(W) * bexp(V)))), tol),
        Check("inverse", float(np.max(_rel(W * inverse(W), Bicomplex(np.ones(n_samples, complex), np.zeros(n_samples, complex))))), tol),
    ]
    lower = np.maximum(np.abs(W.plus), np.abs(W.minus)) / math.sqrt(2)
    upper = (np.abs(W.plus) + np.abs(W.minus)) / math.sqrt(2)
    nw = norm(W)
    checks.append(Check("equivalent_norms", float(np.max(np.maximum(lower - nw, nw - upper) / nw)), tol))
    return checks


def ode_residual(profile, q, h: float = 1e-4, r_min_frac: float = 0.05, n_samples: int = 400) -> float:
    """Relative residual of u'' + u'/r - q u - n^2 u / r^2 for u = r^n phi.

    u'' is the central difference (step h) of the stored derivative, which
    keeps rounding at eps/h instead of eps/h^2.
    """
    R = profile.radius
    r = np.linspace(r_min_frac * R, R - h, n_samples)
    n = profile.degree
    u0 = profile.u(r)
    d2 = (profile.du(r + h) - profile.du(r - h)) / (2 * h)
    d1 = profile.du(r) / r
    qu = q(r) * u0
    nu = n**2 * u0 / r**2
    res = d2 + d1 - qu - nu
    scale = max(float(np.max(np.abs(d2) + np.abs(d1) + np.abs(qu) + np.abs(nu))), float(np.max(np.abs(u0))) / R**2)
    return float(np.max(np.abs(res)) / scale)


def ode_checks(basis: FormalPowerBasis) -> list[Check]:
    checks = []
    for n in range(basis.n_max + 1):
        checks.append(Check(f"ode_residual_f_n{n}", ode_residual(basis.phi_f[n], basis.potential), 1e-7))
        checks.append(Check(f"ode_residual_inv_f_n{n}", ode_residual(basis.phi_inv_f[n], basis.darboux), 1e-7))
        checks.append(Check(f"normalization_f_n{n}", abs(basis.phi_f[n].at_zero() - 1), 1e-10))
    r = basis.grid.nodes
    checks.append(Check("inv_f_times_f", float(np.max(np.abs(basis.phi_inv_f[0].values * basis.f.values - 1))), 1e-10))
    checks.append(Check("min_abs_f_inverse", float(1 / np.min(np.abs(basis.f.values))), 1e10))
    checks.append(Check("r_fprime_at_origin", float(np.max(np.abs(r[0, :2] * basis.f.derivs[0, :2]))), 1e-6))
    return checks


def transmutation_checks(basis: FormalPowerBasis) -> list[Check]:
    checks = [
        Check(f"{row['relation']}_n{row['degree']}", row["residual"], 1e-7)
        for row in check_transmutation_relations(basis.n_max, basis.f, basis.phi_f, basis.phi_inv_f)
    ]
    profiles = dict(enumerate(basis.phi_f))
    r = np.linspace(0.0, basis.radius, 1001)
    for n in range(basis.n_max + 1):
        psi = t_inv_f_integral([0] * n + [1], basis.f, profiles)
        err = float(np.max(np.abs(psi.u(r) - basis.phi_inv_f[n].u(r))))
        checks.append(Check(f"integral_vs_spectral_n{n}", err, 1e-7))
    return checks


def _field(grid: PolarGrid, basis: FormalPowerBasis, n: int, unit: str) -> BicomplexField:
    return BicomplexField.from_polar(grid, lambda r, t: eval_basic_polar(basis, n, unit, r, t))


def _order_check(name: str, hs, residuals) -> Check:
    # fields the stencil differentiates exactly leave only rounding noise
    if residuals[-1].relative < EXACT_LEVEL:
        return Check(name.replace("order", "exact"), residuals[-1].relative, EXACT_LEVEL)
    return Check(name, convergence_order(hs, [x.sup for x in residuals]), (1.8, 2.2))


def vekua_checks(basis: FormalPowerBasis, config: RunConfig) -> list[Check]:
    hs = (4 * config.h, 2 * config.h, config.h)
    grids = [PolarGrid.uniform(config.r_min, config.r_max, h) for h in hs]
    checks = []
    for n in range(basis.n_max + 1):
        for unit in UNITS:
            res = [vekua_residual(_field(g, basis, n, unit), basis.f, basis.f_prime) for g in grids]
            tag = f"n{n}_{unit}"
            checks.append(Check(f"vekua_residual_{tag}", res[-1].relative, 1e-5))
            checks.append(_order_check(f"vekua_order_{tag}", hs, res))
    n = min(2, basis.n_max)
    g = grids[-1]
    W = _field(g, basis, n, "one")
    cr = cr_system_residual(W, basis.f, basis.f_prime)
    checks.append(Check(f"cr_system_n{n}", max(c.relative for c in cr), 1e-5))
    fields = [_field(gr, basis, n, "one") for gr in grids]
    sc = [schrodinger_residual(W.sc, W.grid, basis.potential) for W in fields]
    vec = [schrodinger_residual(W.vec, W.grid, basis.darboux) for W in fields]
    checks.append(_order_check(f"schrodinger_order_sc_n{n}", hs, sc))
    checks.append(_order_check(f"schrodinger_order_vec_n{n}", hs, vec))
    return checks


def bergman_checks(basis: FormalPowerBasis, config: RunConfig, seed: int = SEED) -> list[Check]:
    R = basis.radius
    quad = DiskQuadrature(R, config.n_radial, config.n_theta)
    mesh = quad.mesh()
    checks = []
    worst = 0.0
    powers = [quad.sample(polar_hat_pow(*mesh, n)) for n in range(11)]
    for n, zn in enumerate(powers):
        for m, zm in enumerate(powers):
            exact = math.pi * R ** (2 * n + 2) / (n + 1) if n == m else 0.0
            scale = 2 * math.pi * R ** (n + m + 2) / (n + m + 2)
            worst = max(worst, abs(l2_inner(zn, zm, quad) - exact) / scale)
    checks.append(Check("monomial_norms", worst, 1e-12))

    N = basis.n_max
    G = gram_matrix(basis, N, quad)
    d = np.real(np.diag(G))
    off = np.abs(G - np.diag(np.diag(G))) / np.sqrt(np.outer(d, d))
    K = build_kernel(basis, N)
    checks.append(Check("gram_off_diagonal", float(off.max()), 1e-8))
    checks.append(Check("gram_diagonal_vs_radial", float(np.max(np.abs(d - K.norms_sq) / K.norms_sq)), 1e-10))

    rng = np.random.default_rng(seed)
    A = random_bicomplex(rng, N + 1)
    P = FormalPolynomial(tuple((n, Bicomplex(A.sc[n], A.vec[n])) for n in range(N + 1)))
    pts = 0.9 * R * np.sqrt(rng.uniform(size=5)) * np.exp(2j * np.pi * rng.uniform(size=5))
    err = 0.0
    for z in pts:
        got, want = reproduce(K, P, z, quad), P.evaluate(basis, z)
        err = max(err, float(norm(got - want)))
    checks.append(Check("reproducing_property", err, 1e-7))
    return checks


def run_suite(suite: str, config: RunConfig, basis: FormalPowerBasis | None = None) -> list[Check]:
    """Checks for one suite (or all); pass ``basis`` to test a prebuilt, possibly corrupted, basis."""
    if suite == "all":
        return [c for s in SUITES for c in run_suite(s, config, basis)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if suite == "algebra":
        return algebra_checks()
    if basis is None:
        basis = build_basis(config.potential, config.n_max, config.tol, cache_dir=config.output_dir)
    if suite == "ode":
        return ode_checks(basis)
    if suite == "transmutation":
        return transmutation_checks(basis)
    if suite == "vekua":
        return vekua_checks(basis, config)
    return bergman_checks(basis, config)
