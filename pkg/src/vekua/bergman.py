"""L2 inner products on a disk, Gram matrices, and the truncated Bergman kernel.

The basis functions are indexed ``k = 2n + u`` with ``u = 0`` for
Z^(n)(1; .) and ``u = 1`` for Z^(n)(j; .).  Their squared norms are

    k = 0: (M_0^1)^2 = 2 pi int |f|^2 r dr
    k = 1: (M_0^2)^2 = 2 pi int |1/f|^2 r dr
    n >= 1, both units: M_n^2 = pi (|phi_f^(n)|^2 + |phi_{1/f}^(n)|^2) in L2(r^(2n+1) dr)
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .bicomplex import Bicomplex
from .errors import DegreeOutOfRange, NonFinite
from .formal_powers import UNITS, FormalPolynomial, FormalPowerBasis, _polar, eval_basic_polar
from .panels import gauss_legendre


@dataclass(frozen=True)
class DiskQuadrature:
    """Gauss-Legendre in r (weight r folded in) times the trapezoid rule in theta."""

    radius: float
    n_radial: int = 64
    n_theta: int = 256

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.n_radial < 1 or self.n_theta < 1:
            raise ValueError("need at least one node per direction")

    @cached_property
    def r(self) -> np.ndarray:
        x, _ = gauss_legendre(self.n_radial)
        return 0.5 * self.radius * (x + 1.0)

    @cached_property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_theta) / self.n_theta

    @cached_property
    def weights(self) -> np.ndarray:
        """Shape (n_radial, n_theta); sums to the disk area."""
        _, w = gauss_legendre(self.n_radial)
        wr = 0.5 * self.radius * w * self.r
        return np.outer(wr, np.full(self.n_theta, 2 * np.pi / self.n_theta))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return self.r[:, None], self.theta[None, :]

    def points(self) -> np.ndarray:
        r, t = self.mesh()
        return r * np.exp(1j * t)

    def sample(self, func) -> Bicomplex:
        """``func(r, theta)`` at the nodes, broadcast to the full node array."""
        if isinstance(func, Bicomplex):
            values = func
        else:
            values = func(*self.mesh())
        values = Bicomplex.coerce(values)
        shape = self.weights.shape
        sc = np.broadcast_to(np.asarray(values.sc, dtype=complex), shape)
        vec = np.broadcast_to(np.asarray(values.vec, dtype=complex), shape)
        if not (np.all(np.isfinite(sc)) and np.all(np.isfinite(vec))):
            raise NonFinite("non-finite sample at a quadrature node")
        return Bicomplex(sc, vec)


def l2_inner(W, V, quad: DiskQuadrature) -> complex:
    """Integral over the disk of <W(z), V(z)>_B.

    ``W`` and ``V`` are callables ``(r, theta) -> Bicomplex`` or Bicomplex
    arrays already sampled at the quadrature nodes.
    """
    w = quad.sample(W)
    v = quad.sample(V)
    return complex(np.sum(quad.weights * (w.sc * np.conj(v.sc) + w.vec * np.conj(v.vec))))


def _basis_samples(basis: FormalPowerBasis, N: int, r, theta) -> list[Bicomplex]:
    return [eval_basic_polar(basis, n, unit, r, theta) for n in range(N + 1) for unit in UNITS]


def gram_matrix(basis: FormalPowerBasis, N: int, quad: DiskQuadrature) -> np.ndarray:
    """G[a, b] = <Z_a, Z_b> over the disk, indices ordered (n, unit)."""
    if N > basis.n_max:
        raise DegreeOutOfRange(f"N = {N} exceeds basis degree {basis.n_max}")
    samples = [quad.sample(z) for z in _basis_samples(basis, N, *quad.mesh())]
    sc = np.stack([s.sc.ravel() for s in samples])
    vec = np.stack([s.vec.ravel() for s in samples])
    w = quad.weights.ravel()
    return (sc * w) @ sc.conj().T + (vec * w) @ vec.conj().T


def radial_norms(basis: FormalPowerBasis, N: int) -> np.ndarray:
    """Squared norms of the 2N+2 basis functions from 1-D radial quadrature."""
    grid = basis.grid
    r = grid.nodes
    out = np.empty(2 * N + 2)
    out[0] = 2 * np.pi * grid.integrate(np.abs(basis.f.values) ** 2 * r)
    out[1] = 2 * np.pi * grid.integrate(r / np.abs(basis.f.values) ** 2)
    for n in range(1, N + 1):
        w = r ** (2 * n + 1)
        m2 = np.pi * grid.integrate((np.abs(basis.phi_f[n].values) ** 2 + np.abs(basis.phi_inv_f[n].values) ** 2) * w)
        out[2 * n] = out[2 * n + 1] = m2
    return out


@dataclass(frozen=True, eq=False)
class KernelTruncation:
    basis: FormalPowerBasis
    N: int
    norms_sq: np.ndarray

    @property
    def m0_1(self) -> float:
        return float(np.sqrt(self.norms_sq[0]))

    @property
    def m0_2(self) -> float:
        return float(np.sqrt(self.norms_sq[1]))

    @property
    def m(self) -> np.ndarray:
        """M_1..M_N."""
        return np.sqrt(self.norms_sq[2::2][1:])


def build_kernel(basis: FormalPowerBasis, N: int) -> KernelTruncation:
    if not 0 <= N <= basis.n_max:
        raise DegreeOutOfRange(f"N = {N} outside 0..{basis.n_max}")
    return KernelTruncation(basis, N, radial_norms(basis, N))


def _inner_pointwise(A: Bicomplex, Z: Bicomplex):
    return A.sc * np.conj(Z.sc) + A.vec * np.conj(Z.vec)


def kernel_eval(K: KernelTruncation, A, z, zeta) -> Bicomplex:
    """Truncated kernel K(A; z, zeta); broadcasts over A, z and zeta."""
    A = Bicomplex.coerce(A)
    rz, tz = _polar(z, K.basis.radius)
    rw, tw = _polar(zeta, K.basis.radius)
    Zz = _basis_samples(K.basis, K.N, rz, tz)
    Zw = _basis_samples(K.basis, K.N, rw, tw)
    sc = 0j
    vec = 0j
    for k, (a, b) in enumerate(zip(Zz, Zw)):
        c = _inner_pointwise(A, b) / K.norms_sq[k]
        sc = sc + c * a.sc
        vec = vec + c * a.vec
    if np.ndim(sc) == 0:
        return Bicomplex(complex(sc), complex(vec))
    shape = np.broadcast(sc, vec).shape
    return Bicomplex(np.broadcast_to(sc, shape), np.broadcast_to(vec, shape))


def reproduce(K: KernelTruncation, W: FormalPolynomial, z, quad: DiskQuadrature) -> Bicomplex:
    """Quadrature of  K(W(zeta); z, zeta) dA_zeta  at a single point z."""
    r, t = quad.mesh()
    values = quad.sample(W.evaluate_polar(K.basis, r, t))
    zeta = quad.points()
    k = kernel_eval(K, values, complex(z), zeta)
    return Bicomplex(complex(np.sum(quad.weights * k.sc)), complex(np.sum(quad.weights * k.vec)))


def project(Psi, K: KernelTruncation, quad: DiskQuadrature) -> FormalPolynomial:
    """Truncated orthogonal projection onto span{Z^(n)(1), Z^(n)(j) : n <= N}.

    ``Psi`` is a callable ``(r, theta) -> Bicomplex`` or a Bicomplex array
    sampled at the quadrature nodes.
    """
    psi = quad.sample(Psi)
    coeffs = np.array(
        [l2_inner(psi, z, quad) for z in _basis_samples(K.basis, K.N, *quad.mesh())]
    ) / K.norms_sq
    return FormalPolynomial.from_coefficients(coeffs)


def write_gram_csv(path: str | Path, G: np.ndarray) -> Path:
    """Long-format CSV: n_row, unit_row, n_col, unit_col, re, im."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("n_row", "unit_row", "n_col", "unit_col", "re", "im"))
        for a in range(G.shape[0]):
            for b in range(G.shape[1]):
                w.writerow((a // 2, UNITS[a % 2], b // 2, UNITS[b % 2],
                            format(G[a, b].real, ".17g"), format(G[a, b].imag, ".17g")))
    return path
