"""Finite-difference checks that sampled fields solve the radial Vekua equation.

Central second-order differences on a polar grid over an annulus
``[r_min, r_max] x [0, 2 pi)``; theta is periodic, the first and last radial
rings are excluded from every sup norm.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bicomplex import Bicomplex, norm
from .errors import GridTooCoarse, NonFinite
from .radial import PotentialSpec, RadialProfile

MIN_NODES = 5


@dataclass(frozen=True)
class PolarGrid:
    r_min: float
    r_max: float
    h_r: float
    h_theta: float

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")
        if self.h_r <= 0 or self.h_theta <= 0:
            raise ValueError("spacings must be positive")
        if self.n_r < MIN_NODES or self.n_theta < MIN_NODES:
            raise GridTooCoarse(f"grid has {self.n_r} x {self.n_theta} nodes; need >= {MIN_NODES} per direction")
        # stencils must stay clear of the coordinate singularity
        if self.r_min < 2 * self.dr * (1 - 1e-12):
            raise ValueError(f"r_min = {self.r_min} < 2 h_r = {2 * self.dr}")

    @classmethod
    def uniform(cls, r_min: float, r_max: float, h: float) -> PolarGrid:
        return cls(r_min, r_max, h, h)

    @property
    def n_r(self) -> int:
        return int(round((self.r_max - self.r_min) / self.h_r)) + 1

    @property
    def n_theta(self) -> int:
        return int(round(2 * np.pi / self.h_theta))

    @property
    def dr(self) -> float:
        """Actual radial spacing (h_r adjusted so the end points are nodes)."""
        return (self.r_max - self.r_min) / (self.n_r - 1)

    @property
    def dtheta(self) -> float:
        return 2 * np.pi / self.n_theta

    @property
    def r_nodes(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_r)

    @property
    def theta_nodes(self) -> np.ndarray:
        return np.arange(self.n_theta) * self.dtheta

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(r, theta) as broadcastable column/row arrays."""
        return self.r_nodes[:, None], self.theta_nodes[None, :]


@dataclass(frozen=True, eq=False)
class BicomplexField:
    grid: PolarGrid
    values: Bicomplex

    def __post_init__(self):
        shape = (self.grid.n_r, self.grid.n_theta)
        sc = np.broadcast_to(np.asarray(self.values.sc, dtype=complex), shape)
        vec = np.broadcast_to(np.asarray(self.values.vec, dtype=complex), shape)
        if not (np.all(np.isfinite(sc)) and np.all(np.isfinite(vec))):
            raise NonFinite("field has non-finite samples")
        object.__setattr__(self, "values", Bicomplex(sc, vec))

    @classmethod
    def from_polar(cls, grid: PolarGrid, func) -> BicomplexField:
        """``func(r, theta) -> Bicomplex`` evaluated on the grid."""
        r, t = grid.mesh()
        return cls(grid, func(r, t))

    @property
    def sc(self) -> np.ndarray:
        return self.values.sc

    @property
    def vec(self) -> np.ndarray:
        return self.values.vec


@dataclass(frozen=True)
class Residual:
    """Sup norm of a discrete residual; ``relative`` divides by the sup of the
    summed magnitudes of the equation's individual terms."""

    sup: float
    scale: float
    field: np.ndarray

    @property
    def relative(self) -> float:
        return self.sup / self.scale if self.scale > 0 else self.sup


def _d_r(a: np.ndarray, h: float) -> np.ndarray:
    return (a[2:] - a[:-2]) / (2 * h)


def _d_theta(a: np.ndarray, h: float) -> np.ndarray:
    a = a[1:-1]
    return (np.roll(a, -1, axis=1) - np.roll(a, 1, axis=1)) / (2 * h)


def _d_rr(a: np.ndarray, h: float) -> np.ndarray:
    return (a[2:] - 2 * a[1:-1] + a[:-2]) / h**2


def _d_tt(a: np.ndarray, h: float) -> np.ndarray:
    a = a[1:-1]
    return (np.roll(a, -1, axis=1) - 2 * a + np.roll(a, 1, axis=1)) / h**2


def _log_derivative(grid: PolarGrid, f: RadialProfile, f_prime: RadialProfile | None) -> np.ndarray:
    r = grid.r_nodes
    fp = f.derivative(r) if f_prime is None else f_prime(r)
    return (fp / f(r))[:, None]


def vekua_residual(W: BicomplexField, f: RadialProfile, f_prime: RadialProfile | None = None) -> Residual:
    """Discrete  dW/dr + (j/r) dW/dtheta - (f'/f) conj_bar(W)."""
    g = W.grid
    r = g.r_nodes[1:-1, None]
    logd = _log_derivative(g, f, f_prime)[1:-1]
    sc, vec = W.sc, W.vec
    r_sc, r_vec = _d_r(sc, g.dr), _d_r(vec, g.dr)
    t_sc, t_vec = _d_theta(sc, g.dtheta), _d_theta(vec, g.dtheta)
    sc_i, vec_i = sc[1:-1], vec[1:-1]
    # j * (a + j b) = -b + j a;  conj_bar(W) = sc - j vec
    res_sc = r_sc - t_vec / r - logd * sc_i
    res_vec = r_vec + t_sc / r + logd * vec_i
    field = np.sqrt(np.abs(res_sc) ** 2 + np.abs(res_vec) ** 2)
    terms = (
        np.sqrt(np.abs(r_sc) ** 2 + np.abs(r_vec) ** 2)
        + np.sqrt(np.abs(t_sc) ** 2 + np.abs(t_vec) ** 2) / r
        + np.abs(logd) * np.sqrt(np.abs(sc_i) ** 2 + np.abs(vec_i) ** 2)
    )
    # floor keeps the ratio meaningful for fields the stencil differentiates exactly
    floor = float(np.max(np.sqrt(np.abs(sc) ** 2 + np.abs(vec) ** 2))) / g.r_max
    return Residual(float(field.max()), max(float(terms.max()), floor), field)


def cr_system_residual(
    W: BicomplexField, f: RadialProfile, f_prime: RadialProfile | None = None
) -> tuple[Residual, Residual]:
    """Residuals of  f d_r(u/f) = (1/r) d_theta v  and  (1/f) d_r(f v) = -(1/r) d_theta u."""
    g = W.grid
    r = g.r_nodes[:, None]
    fr = f(g.r_nodes)[:, None]
    u, v = W.sc, W.vec
    ri = r[1:-1]
    fi = fr[1:-1]
    a = fi * _d_r(u / fr, g.dr)
    b = _d_theta(v, g.dtheta) / ri
    res1 = np.abs(a - b)
    c = _d_r(fr * v, g.dr) / fi
    d = -_d_theta(u, g.dtheta) / ri
    res2 = np.abs(c - d)
    floor = float(max(np.abs(u).max(), np.abs(v).max())) / g.r_max
    first = Residual(float(res1.max()), max(float((np.abs(a) + np.abs(b)).max()), floor), res1)
    second = Residual(float(res2.max()), max(float((np.abs(c) + np.abs(d)).max()), floor), res2)
    return first, second


def schrodinger_residual(u: np.ndarray, grid: PolarGrid, q: PotentialSpec) -> Residual:
    """Sup norm of (Laplacian - q) u with the five-point polar stencil."""
    u = np.broadcast_to(np.asarray(u, dtype=complex), (grid.n_r, grid.n_theta))
    if not np.all(np.isfinite(u)):
        raise NonFinite("field has non-finite samples")
    r = grid.r_nodes[1:-1, None]
    qv = q(grid.r_nodes[1:-1])[:, None]
    urr = _d_rr(u, grid.dr)
    ur = _d_r(u, grid.dr) / r
    utt = _d_tt(u, grid.dtheta) / r**2
    qu = qv * u[1:-1]
    field = np.abs(urr + ur + utt - qu)
    scale = max(float((np.abs(urr) + np.abs(ur) + np.abs(utt) + np.abs(qu)).max()), float(np.abs(u).max()) / grid.r_max**2)
    return Residual(float(field.max()), scale, field)


def convergence_order(hs, residuals) -> float:
    """Least-squares slope of log(residual) against log(h)."""
    return float(np.polyfit(np.log(np.asarray(hs, float)), np.log(np.asarray(residuals, float)), 1)[0])


def write_residual_csv(path: str | Path, grid: PolarGrid, field: np.ndarray) -> Path:
    """CSV (r, theta, |residual|) for the interior nodes a residual was computed on."""
    path = Path(path)
    r = grid.r_nodes[1:-1]
    t = grid.theta_nodes
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("r", "theta", "abs_residual"))
        for i, ri in enumerate(r):
            for k, tk in enumerate(t):
                w.writerow((format(ri, ".17g"), format(tk, ".17g"), format(float(field[i, k]), ".17g")))
    return path


def field_norm(W: BicomplexField) -> float:
    return float(np.max(norm(W.values)))
