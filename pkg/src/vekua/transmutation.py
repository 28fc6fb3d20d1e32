"""Transmutation operators T_f, T_{1/f} on the monomial basis and the Darboux operators.

T_f acts diagonally: ``T_f[r**n e^{i n theta}] = phi_f^(n)(r) r**n e^{i n theta}``.
T_{1/f} is also available through the integral representation

    T_{1/f} u(r) = (1/f(r)) * (int_0^r f(s) T_f[s u'(s)] / s ds + u(0)),

which for ``u = r**n`` has the continuous integrand ``n f(s) phi_f^(n)(s) s**(n-1)``.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import MissingProfile, QuadratureFailure
from .radial import RadialProfile, check_nonvanishing


class DarbouxVariant(str, Enum):
    D_F = "D_f"
    D_INV_F = "D_inv_f"
    D_1 = "D_1"


@dataclass(frozen=True)
class HarmonicPolynomial:
    """sum_n r**n (a_n cos n theta + b_n sin n theta)."""

    terms: tuple[tuple[int, complex, complex], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(n), complex(a), complex(b)) for n, a, b in self.terms))

    @property
    def degrees(self) -> set[int]:
        return {n for n, _, _ in self.terms}

    def __call__(self, r, theta):
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        out = np.zeros(r.shape, dtype=complex)
        for n, a, b in self.terms:
            out += r**n * (a * np.cos(n * theta) + b * np.sin(n * theta))
        return out

    def __add__(self, other: HarmonicPolynomial) -> HarmonicPolynomial:
        return HarmonicPolynomial(self.terms + other.terms)

    def scale(self, c: complex) -> HarmonicPolynomial:
        return HarmonicPolynomial(tuple((n, c * a, c * b) for n, a, b in self.terms))


@dataclass(frozen=True, eq=False)
class TransmutedFunction:
    terms: tuple[tuple[int, complex, complex, RadialProfile], ...]

    def __call__(self, r, theta):
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        out = np.zeros(r.shape, dtype=complex)
        for n, a, b, prof in self.terms:
            out += prof(r) * r**n * (a * np.cos(n * theta) + b * np.sin(n * theta))
        return out


def transmute(h: HarmonicPolynomial, profiles: Mapping[int, RadialProfile]) -> TransmutedFunction:
    """Apply T_f term by term: r**n (...) -> phi^(n)(r) r**n (...)."""
    terms = []
    for n, a, b in h.terms:
        if n not in profiles:
            raise MissingProfile(f"no radial profile for degree {n}")
        terms.append((n, a, b, profiles[n]))
    return TransmutedFunction(tuple(terms))


def darboux_D(u: RadialProfile, f: RadialProfile, f_prime: RadialProfile | None, variant) -> RadialProfile:
    """D_f u = r u' + r (f'/f) u,  D_{1/f} u = r u' - r (f'/f) u,  D_1 u = r u'.

    ``u`` stands for ``r**n * phi``; the result is returned in the same
    form, i.e. its values are ``(D u) / r**n``.
    """
    variant = DarbouxVariant(variant)
    grid = u.grid
    r = grid.nodes
    phi = u.values
    out = u.degree * phi + r * u.derivs
    if variant is not DarbouxVariant.D_1:
        check_nonvanishing(f)
        fp = f.derivs if f_prime is None else f_prime.values
        logd = fp / f.values
        sign = 1.0 if variant is DarbouxVariant.D_F else -1.0
        out = out + sign * r * logd * phi
    return RadialProfile.from_values(grid, out, u.degree)


def _monomial_t_inv(n: int, f: RadialProfile, phi_f_n: RadialProfile):
    """T_{1/f}[r**n] / r**n and its derivative at the panel nodes."""
    grid = f.grid
    s = grid.nodes
    fv = f.values
    logd = f.derivs / fv
    if n == 0:
        psi = 1.0 / fv
        return psi, -logd * psi
    integrand = fv * phi_f_n.values
    if not np.all(np.isfinite(integrand)):
        raise QuadratureFailure(f"non-finite integrand for degree {n}")
    # s**-(n-1) int_0^s t**(n-1) f(t) phi_f(t) dt
    J = grid.power_cumulative(integrand, n - 1)
    psi = n * J / (s * fv)
    dpsi = -logd * psi + n * (phi_f_n.values - psi) / s
    if not (np.all(np.isfinite(psi)) and np.all(np.isfinite(dpsi))):
        raise QuadratureFailure(f"non-finite quadrature result for degree {n}")
    return psi, dpsi


def t_inv_f_integral(u, f: RadialProfile, profiles_f: Mapping[int, RadialProfile]) -> RadialProfile:
    """T_{1/f} u via the integral representation, for a polynomial ``u``.

    ``u`` is a coefficient sequence ``[c_0, c_1, ...]`` for ``sum c_n r**n``
    (a ``numpy.polynomial.Polynomial`` also works).  A monomial gives a
    profile of that degree; anything else gives a degree-0 profile holding
    the function values.
    """
    check_nonvanishing(f)
    coeffs = np.asarray(getattr(u, "coef", u), dtype=complex)
    support = [n for n, c in enumerate(coeffs) if c != 0]
    parts = {}
    for n in support:
        if n > 0 and n not in profiles_f:
            raise MissingProfile(f"no radial profile for degree {n}")
        parts[n] = _monomial_t_inv(n, f, profiles_f.get(n))
    grid = f.grid
    if len(support) == 1:
        n = support[0]
        psi, dpsi = parts[n]
        return RadialProfile(grid, coeffs[n] * psi, coeffs[n] * dpsi, n)
    s = grid.nodes
    values = np.zeros(s.shape, dtype=complex)
    derivs = np.zeros(s.shape, dtype=complex)
    for n, (psi, dpsi) in parts.items():
        lead = n * s ** (n - 1) if n > 0 else 0.0
        values += coeffs[n] * s**n * psi
        derivs += coeffs[n] * (lead * psi + s**n * dpsi)
    return RadialProfile(grid, values, derivs, 0)


def check_transmutation_relations(
    n_max: int,
    f: RadialProfile,
    phi_f: Sequence[RadialProfile],
    phi_inv_f: Sequence[RadialProfile],
    r_min_frac: float = 0.05,
    n_samples: int = 1001,
) -> list[dict]:
    """Residuals of D_{1/f} T_f r^n = n T_{1/f} r^n and D_f T_{1/f} r^n = n T_f r^n.

    Each residual is a sup norm over [r_min_frac * R, R] divided by the
    magnitude of the terms involved.
    """
    R = f.radius
    r = np.linspace(r_min_frac * R, R, n_samples)
    logd = f.derivative(r) / f(r)
    report = []
    for n in range(n_max + 1):
        for name, src, dst, sign in (
            ("D1f_Tf", phi_f[n], phi_inv_f[n], -1.0),
            ("Df_T1f", phi_inv_f[n], phi_f[n], 1.0),
        ):
            u, du = src.u(r), src.du(r)
            lhs = r * du + sign * r * logd * u
            rhs = n * dst.u(r)
            scale = max(np.max(np.abs(rhs)), np.max(np.abs(r * du) + np.abs(r * logd * u)))
            resid = float(np.max(np.abs(lhs - rhs)) / scale) if scale > 0 else float(np.max(np.abs(lhs - rhs)))
            report.append({"degree": n, "relation": name, "residual": resid})
    return report
