"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed at the end
of the pytest run, or directly when this file is run as a script.
"""

import math
import time

import numpy as np
import pytest
from oracles import KAPPA, bessel_j_scaled

from vekua.bergman import DiskQuadrature, build_kernel, gram_matrix, kernel_eval, l2_inner, radial_norms, reproduce
from vekua.bicomplex import ONE, Bicomplex, bexp, conj_bar, conj_dagger, hat_pow, inverse, norm, polar_hat_pow
from vekua.formal_powers import UNITS, FormalPolynomial, build_basis, eval_basic_polar
from vekua.radial import PotentialSpec, regular_profile
from vekua.residuals import BicomplexField, PolarGrid, convergence_order, vekua_residual
from vekua.transmutation import check_transmutation_relations, t_inv_f_integral

SEED = 20240531
RESULTS = {}


def record(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    RESULTS[number] = line
    print(line)
    return passed


def random_bicomplex(rng, size):
    x = rng.normal(size=(4, size))
    return Bicomplex(x[0] + 1j * x[1], x[2] + 1j * x[3])


def random_points(rng, size, radius):
    return radius * np.sqrt(rng.uniform(size=size)) * np.exp(2j * np.pi * rng.uniform(size=size))


@pytest.fixture(scope="module")
def helmholtz():
    return build_basis(PotentialSpec.constant(-KAPPA**2, 1.0), 8)


def test_1_monomial_norms():
    start = time.perf_counter()
    worst = 0.0
    for R in (0.5, 1.0):
        quad = DiskQuadrature(R)
        powers = [quad.sample(polar_hat_pow(*quad.mesh(), n)) for n in range(11)]
        for n, zn in enumerate(powers):
            for m, zm in enumerate(powers):
                scale = 2 * math.pi * R ** (n + m + 2) / (n + m + 2)
                exact = scale if n == m else 0.0
                worst = max(worst, abs(l2_inner(zn, zm, quad) - exact) / scale)
            nrm = math.sqrt(l2_inner(zn, zn, quad).real)
            worst = max(worst, abs(nrm / (math.sqrt(math.pi / (n + 1)) * R ** (n + 1)) - 1))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    assert record(1, ok, f"monomial norms max rel err {worst:.2e} (tol 1e-12), {elapsed:.2f} s (limit 1 s)")


def test_2_helmholtz_closed_form():
    start = time.perf_counter()
    q = PotentialSpec.constant(-KAPPA**2, 1.0)
    r = np.linspace(1e-3, 1.0, 1000)
    worst = 0.0
    for n in range(9):
        expected = bessel_j_scaled(n, KAPPA * r)
        worst = max(worst, float(np.max(np.abs(regular_profile(q, n)(r) - expected) / np.abs(expected))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 5.0
    assert record(2, ok, f"profile vs Bessel oracle max rel err {worst:.2e} (tol 1e-8), {elapsed:.2f} s (limit 5 s)")


def test_3_vekua_residuals(helmholtz):
    hs = (4e-3, 2e-3, 1e-3)
    grids = [PolarGrid.uniform(0.05, 0.95, h) for h in hs]

    def series(func):
        return [vekua_residual(BicomplexField.from_polar(g, func), helmholtz.f, helmholtz.f_prime) for g in grids]

    orders, finest = [], []
    for n in range(9):
        for unit in UNITS:
            res = series(lambda r, t: eval_basic_polar(helmholtz, n, unit, r, t))
            orders.append(convergence_order(hs, [x.sup for x in res]))
            finest.append(res[-1].relative)
    good = min(orders) >= 1.8 and max(orders) <= 2.2 and max(finest) <= 1e-5

    bad = series(lambda r, t: eval_basic_polar(helmholtz, 2, "one", r, t) * (1 + 0.01 * r))
    bad_order = convergence_order(hs, [x.sup for x in bad])
    control_passes = 1.8 <= bad_order <= 2.2 and bad[-1].relative <= 1e-5
    ok = good and not control_passes
    assert record(
        3,
        ok,
        f"order in [{min(orders):.3f}, {max(orders):.3f}] (want [1.8, 2.2]), max relative residual "
        f"{max(finest):.2e} at h = 1e-3 (tol 1e-5); perturbed field order {round(bad_order, 2) + 0.0:.2f}, "
        f"residual {bad[-1].relative:.2e} ({'rejected' if not control_passes else 'NOT rejected'})",
    )


def test_4_transmutation_relations(helmholtz):
    rows = check_transmutation_relations(8, helmholtz.f, helmholtz.phi_f, helmholtz.phi_inv_f)
    worst = max(row["residual"] for row in rows)
    assert record(4, worst <= 1e-7, f"max relative residual {worst:.2e} over n <= 8 (tol 1e-7)")


def test_5_integral_vs_spectral(helmholtz):
    r = np.linspace(0.0, 1.0, 1001)
    profiles = dict(enumerate(helmholtz.phi_f))
    worst = 0.0
    for n in range(7):
        psi = t_inv_f_integral([0] * n + [1], helmholtz.f, profiles)
        worst = max(worst, float(np.max(np.abs(psi.u(r) - helmholtz.phi_inv_f[n].u(r)))))
    assert record(5, worst <= 1e-7, f"sup-norm gap {worst:.2e} over n <= 6 (tol 1e-7)")


def test_6_orthogonality(helmholtz):
    G = gram_matrix(helmholtz, 6, DiskQuadrature(1.0))
    d = np.real(np.diag(G))
    off = float(np.max(np.abs(G - np.diag(np.diag(G))) / np.sqrt(np.outer(d, d))))
    diag = float(np.max(np.abs(d - radial_norms(helmholtz, 6)) / d))
    ok = off <= 1e-8 and diag <= 1e-10
    assert record(6, ok, f"off-diagonal ratio {off:.2e} (tol 1e-8), diagonal vs radial {diag:.2e} (tol 1e-10)")


@pytest.fixture(scope="module")
def laplace_kernel():
    return build_kernel(build_basis(PotentialSpec.constant(0.0, 1.0), 40), 40)


def _kernel_gap(K, target, random_coefficient):
    rng = np.random.default_rng(SEED)
    z, zeta = random_points(rng, 20, 0.5), random_points(rng, 20, 0.5)
    A = random_bicomplex(rng, 20) if random_coefficient else ONE
    got = kernel_eval(K, A, z, zeta)
    x = hat_pow(z, 1) * conj_dagger(hat_pow(zeta, 1))
    return float(np.max(norm(got - target(x) * A))), kernel_eval(K, ONE, 0j, 0j).sc


def test_7_analytic_kernel_limit(laplace_kernel):
    one = Bicomplex(np.ones(20, complex), np.zeros(20, complex))
    err, origin = _kernel_gap(laplace_kernel, lambda x: inverse(one - x), False)
    assert record(
        7, err <= 1e-6, f"max |K - (1 - z^ zeta^+)^-1| = {err:.2e} (tol 1e-6); K(1; 0, 0) = {origin.real:.15f}"
    )


def test_7_companion_kernel_closed_form(laplace_kernel):
    # the truncated q = 0 kernel converges to (1/pi) (1 - z^ zeta^+)^-2 A
    one = Bicomplex(np.ones(20, complex), np.zeros(20, complex))
    err, origin = _kernel_gap(laplace_kernel, lambda x: inverse((one - x) * (one - x)) / math.pi, True)
    assert err <= 1e-6
    assert abs(origin - 1 / math.pi) < 1e-15


def test_8_reproducing_property(helmholtz):
    rng = np.random.default_rng(SEED)
    quad = DiskQuadrature(1.0)
    K = build_kernel(helmholtz, 6)
    worst = 0.0
    for _ in range(5):
        A = random_bicomplex(rng, 7)
        P = FormalPolynomial(tuple((n, Bicomplex(A.sc[n], A.vec[n])) for n in range(7)))
        for z in random_points(rng, 4, 0.95):
            worst = max(worst, float(norm(reproduce(K, P, z, quad) - P.evaluate(helmholtz, z))))
    high = FormalPolynomial(((7, Bicomplex(1.0, -0.5j)),))
    leak = max(float(norm(reproduce(K, high, z, quad))) for z in random_points(rng, 4, 0.95))
    ok = worst <= 1e-7 and leak <= 1e-7
    assert record(8, ok, f"reproduction error {worst:.2e}, degree-7 leakage {leak:.2e} (tol 1e-7)")


def test_9_bicomplex_algebra():
    rng = np.random.default_rng(SEED)
    W, V, U = (random_bicomplex(rng, 1000) for _ in range(3))

    def rel(a, b):
        return float(np.max(norm(a - b) / np.maximum(norm(b), 1e-300)))

    # (a + j b)(c + j d) = ac - bd + j (ad + bc), written out by hand
    product = Bicomplex(W.sc * V.sc - W.vec * V.vec, W.sc * V.vec + W.vec * V.sc)
    errors = {
        "product": rel(W * V, product),
        "commutativity": rel(W * V, V * W),
        "associativity": rel((W * V) * U, W * (V * U)),
        "distributivity": rel(W * (V + U), W * V + W * U),
        "dagger involution": rel(conj_dagger(conj_dagger(W)), W),
        "bar involution": rel(conj_bar(conj_bar(W)), W),
        "dagger multiplicative": rel(conj_dagger(W * V), conj_dagger(W) * conj_dagger(V)),
        "idempotent round trip": rel(Bicomplex.from_idempotent(W.plus, W.minus), W),
        "exp additivity": rel(bexp(W + V), bexp(W) * bexp(V)),
    }
    bound = float(np.max(norm(W * V) / (math.sqrt(2) * norm(W) * norm(V))))
    worst = max(errors, key=errors.get)
    ok = max(errors.values()) <= 1e-12 and bound <= 1 + 1e-12
    assert record(
        9, ok, f"1000 samples, worst relation {worst} at {errors[worst]:.2e} (tol 1e-12), "
        f"max |WV| / (sqrt2 |W||V|) = {bound:.4f}"
    )


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
