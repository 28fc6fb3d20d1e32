"""Radial potentials and regular solutions of the perturbed Bessel equation.

The regular solution of ``u'' + u'/r - q u - n**2 u / r**2 = 0`` is written
``u = r**n * g`` where ``g'' + (2n+1) g'/r = q g``, ``g(0) = 1``,
``g'(0) = 0``.  ``g`` is built as the series ``sum_k g_k`` with ``g_0 = 1``
and

    g_k'(r) = r**-(2n+1) * int_0^r t**(2n+1) q(t) g_{k-1}(t) dt,
    g_k(r)  = int_0^r g_k'(s) ds.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidPotential, NoConvergence, VanishingF
from .panels import PanelGrid

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 60
VANISHING_F_THRESHOLD = 1e-10

KINDS = ("constant", "polynomial", "tabulated")


def _complex_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidPotential(f"complex values are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _complex_to_json(c: complex):
    c = complex(c)
    return [c.real, c.imag]


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """A radial potential q(r) on [0, radius].

    ``data`` is the constant value, the polynomial coefficients (ascending
    powers of r), or a pair ``(nodes, values)`` for a tabulated potential.
    """

    kind: str
    radius: float
    data: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidPotential(f"unknown potential kind {self.kind!r}")
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise InvalidPotential("radius must be a positive number")
        if self.kind == "tabulated":
            nodes, values = self.data
            nodes = np.asarray(nodes, dtype=float)
            values = np.asarray(values, dtype=complex)
            if nodes.ndim != 1 or nodes.shape != values.shape or len(nodes) < 2:
                raise InvalidPotential("tabulated potential needs matching node/value lists (>= 2 nodes)")
            if nodes[0] != 0.0:
                raise InvalidPotential("tabulated potential must start at r = 0")
            if np.any(np.diff(nodes) <= 0):
                raise InvalidPotential("tabulated nodes must be strictly increasing")
            if nodes[-1] < self.radius * (1 - 1e-12):
                raise InvalidPotential(f"tabulated potential ends at {nodes[-1]} < radius {self.radius}")
            if not np.all(np.isfinite(values)):
                raise InvalidPotential("tabulated potential has non-finite values")
            object.__setattr__(self, "data", (nodes, values))
        elif self.kind == "polynomial":
            coeffs = np.atleast_1d(np.asarray(self.data, dtype=complex))
            object.__setattr__(self, "data", coeffs)
        else:
            object.__setattr__(self, "data", complex(self.data))

    @classmethod
    def constant(cls, value, radius: float) -> PotentialSpec:
        return cls("constant", float(radius), value)

    @classmethod
    def polynomial(cls, coeffs, radius: float) -> PotentialSpec:
        return cls("polynomial", float(radius), coeffs)

    @classmethod
    def tabulated(cls, nodes, values, radius: float) -> PotentialSpec:
        return cls("tabulated", float(radius), (nodes, values))

    @property
    def is_zero(self) -> bool:
        if self.kind == "constant":
            return self.data == 0
        if self.kind == "polynomial":
            return not np.any(self.data)
        return not np.any(self.data[1])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "constant":
            return np.full(r.shape, self.data, dtype=complex)
        if self.kind == "polynomial":
            return np.polynomial.polynomial.polyval(r, self.data).astype(complex) + 0j
        nodes, values = self.data
        out = self._spline(r)
        # exact lookup at tabulation nodes
        pos = np.clip(np.searchsorted(nodes, r), 0, len(nodes) - 1)
        hit = nodes[pos] == r
        out = np.where(hit, values[pos], out)
        return out

    @property
    def _spline(self):
        sp = self.__dict__.get("_spline_cache")
        if sp is None:
            nodes, values = self.data
            sp = CubicSpline(nodes, values, bc_type="not-a-knot", extrapolate=True)
            object.__setattr__(self, "_spline_cache", sp)
        return sp

    def to_json(self) -> dict:
        obj = {"kind": self.kind, "radius": self.radius}
        if self.kind == "constant":
            obj["value"] = _complex_to_json(self.data)
        elif self.kind == "polynomial":
            obj["coeffs"] = [_complex_to_json(c) for c in self.data]
        else:
            nodes, values = self.data
            obj["nodes"] = [[float(r), _complex_to_json(v)] for r, v in zip(nodes, values)]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> PotentialSpec:
        try:
            kind = obj["kind"]
            radius = float(obj["radius"])
            if kind == "constant":
                return cls.constant(_complex_from_json(obj["value"]), radius)
            if kind == "polynomial":
                return cls.polynomial([_complex_from_json(c) for c in obj["coeffs"]], radius)
            if kind == "tabulated":
                pairs = obj["nodes"]
                return cls.tabulated([float(p[0]) for p in pairs], [_complex_from_json(p[1]) for p in pairs], radius)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidPotential):
                raise
            raise InvalidPotential(f"malformed potential spec: {exc}") from exc
        raise InvalidPotential(f"unknown potential kind {kind!r}")

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """phi(r) on the panel grid; the function it stands for is ``u = r**degree * phi``.

    ``values``/``derivs`` hold phi and phi' at the panel nodes.
    """

    grid: PanelGrid
    values: np.ndarray
    derivs: np.ndarray
    degree: int = 0
    n_terms: int = 0
    last_term: float = 0.0
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, grid: PanelGrid, values, degree: int = 0, derivs=None, **kw) -> RadialProfile:
        values = np.asarray(values, dtype=complex).reshape(grid.nodes.shape)
        if derivs is None:
            derivs = grid.differentiate(values)
        return cls(grid, values, np.asarray(derivs, dtype=complex).reshape(grid.nodes.shape), degree, **kw)

    @classmethod
    def from_function(cls, grid: PanelGrid, func, dfunc=None, degree: int = 0) -> RadialProfile:
        values = func(grid.nodes)
        derivs = None if dfunc is None else dfunc(grid.nodes)
        return cls.from_values(grid, values, degree, derivs)

    @property
    def radius(self) -> float:
        return self.grid.radius

    def __call__(self, r):
        return self.grid.interpolate(self.values, r)

    def derivative(self, r):
        return self.grid.interpolate(self.derivs, r)

    def u(self, r):
        """r**degree * phi(r)."""
        r = np.asarray(r, dtype=float)
        return r**self.degree * self(r)

    def du(self, r):
        r = np.asarray(r, dtype=float)
        n = self.degree
        lead = n * r ** (n - 1) if n > 0 else 0.0
        return lead * self(r) + r**n * self.derivative(r)

    def at_zero(self) -> complex:
        return complex(self(np.array([0.0]))[0])


def regular_profile(
    q: PotentialSpec,
    n: int,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    grid: PanelGrid | None = None,
) -> RadialProfile:
    """phi^(n) with r**n * phi^(n) the regular solution for potential ``q``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if not tol > 0:
        raise ValueError("tol must be positive")
    grid = grid or PanelGrid(q.radius)
    if abs(grid.radius - q.radius) > 1e-14 * q.radius:
        raise InvalidPotential(f"grid radius {grid.radius} does not match potential radius {q.radius}")
    qv = np.asarray(q(grid.nodes), dtype=complex)
    if not np.all(np.isfinite(qv)):
        raise InvalidPotential("potential is not finite on [0, R]")

    m = 2 * n + 1
    g_prev = np.ones(grid.nodes.shape, dtype=complex)
    total = g_prev.copy()
    dtotal = np.zeros_like(total)
    last = 0.0
    for k in range(1, max_terms + 1):
        dg = grid.power_cumulative(qv * g_prev, m)
        g = grid.cumulative(dg)
        total += g
        dtotal += dg
        last = float(np.max(np.abs(g)))
        if last <= tol * float(np.max(np.abs(total))):
            log.debug("degree %d converged after %d terms (last term %.3g)", n, k, last)
            return RadialProfile(grid, total, dtotal, n, n_terms=k, last_term=last)
        g_prev = g
    raise NoConvergence(
        f"series for degree {n} not converged after {max_terms} terms (last term {last:.3g}); "
        "|q| R**2 is too large for the series"
    )


def build_f(q: PotentialSpec, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS, grid=None):
    """f = T_f[1]: the normalized regular solution for n = 0, and its derivative.

    Returns ``(f, f_prime)`` where ``f_prime`` is a profile holding f' (so
    ``f_prime(r)`` evaluates f'(r)).
    """
    f = regular_profile(q, 0, tol, max_terms, grid)
    check_nonvanishing(f)
    f_prime = RadialProfile.from_values(f.grid, f.derivs, 0)
    return f, f_prime


def check_nonvanishing(f: RadialProfile, threshold: float = VANISHING_F_THRESHOLD):
    small = np.abs(f.values) < threshold
    if np.any(small):
        r_bad = f.grid.nodes[small][0]
        raise VanishingF(f"|f| < {threshold:g} at r = {r_bad:.6g}; the Vekua coefficient f'/f is singular")
    # a real f can cross zero between nodes
    v = np.append(f.values.ravel(), f(np.array([f.radius])))
    if np.all(v.imag == 0):
        flip = np.nonzero(np.signbit(v.real[1:]) != np.signbit(v.real[:-1]))[0]
        if flip.size:
            r = np.append(f.grid.flat_nodes, f.radius)
            raise VanishingF(f"f changes sign between r = {r[flip[0]]:.6g} and {r[flip[0] + 1]:.6g}")


def log_derivative(f: RadialProfile, r=None):
    """f'/f at the panel nodes, or at ``r`` when given."""
    if r is None:
        return f.derivs / f.values
    return f.derivative(r) / f(r)


def darboux_potential(f: RadialProfile, f_prime: RadialProfile | None, q: PotentialSpec) -> PotentialSpec:
    """q_{1/f} = 2 (f'/f)**2 - q, tabulated at r = 0 and the panel nodes."""
    check_nonvanishing(f)
    fp = f.derivs if f_prime is None else f_prime.values
    nodes = f.grid.flat_nodes
    ratio = (fp / f.values).reshape(-1)
    values = 2.0 * ratio**2 - q(nodes)
    # f'(0) = 0 for the normalized f
    q0 = -complex(q(np.array([0.0]))[0])
    R = np.array([q.radius])
    fpR = f.derivative(R) if f_prime is None else f_prime(R)
    qR = 2.0 * (fpR / f(R)) ** 2 - q(R)
    return PotentialSpec.tabulated(
        np.concatenate([[0.0], nodes, R]), np.concatenate([[q0], values, qR]), q.radius
    )
