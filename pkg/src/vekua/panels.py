"""Composite Gauss-Legendre panels on [0, R].

Functions are stored by their values at the panel nodes and interpolated
panel-wise with barycentric Lagrange interpolation.  The cumulative
integrators below are exact for polynomial data of degree < order on each
panel; the power weight ``(t/s)**m`` is treated exactly, never interpolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(n)


def barycentric_weights(x: np.ndarray) -> np.ndarray:
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    return w / np.max(np.abs(w))


def lagrange_matrix(x: np.ndarray, t: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    """Matrix ``L`` with ``L[i, j] = l_j(t[i])`` for the Lagrange basis on ``x``."""
    if w is None:
        w = barycentric_weights(x)
    t = np.asarray(t, dtype=float).reshape(-1)
    diff = t[:, None] - x[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = w[None, :] / diff
    L = terms / terms.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    if rows.any():
        L[rows] = exact[rows].astype(float)
    return L


@dataclass(frozen=True)
class PanelGrid:
    radius: float
    n_panels: int = 32
    order: int = 16

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.n_panels < 1 or self.order < 2:
            raise ValueError("need at least one panel and two nodes per panel")

    @cached_property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, self.radius, self.n_panels + 1)

    @cached_property
    def ref_nodes(self) -> np.ndarray:
        return gauss_legendre(self.order)[0]

    @cached_property
    def ref_bary(self) -> np.ndarray:
        return barycentric_weights(self.ref_nodes)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Shape (n_panels, order)."""
        a, b = self.edges[:-1, None], self.edges[1:, None]
        return 0.5 * (a + b) + 0.5 * (b - a) * self.ref_nodes[None, :]

    @cached_property
    def weights(self) -> np.ndarray:
        h = np.diff(self.edges)[:, None]
        return 0.5 * h * gauss_legendre(self.order)[1][None, :]

    @cached_property
    def flat_nodes(self) -> np.ndarray:
        return self.nodes.reshape(-1)

    @cached_property
    def _cumulative(self) -> np.ndarray:
        """C[i, j] = int_{-1}^{x_i} l_j(t) dt on the reference panel."""
        x = self.ref_nodes
        gx, gw = gauss_legendre(self.order)
        C = np.empty((self.order, self.order))
        for i, xi in enumerate(x):
            t = -1.0 + 0.5 * (xi + 1.0) * (gx + 1.0)
            C[i] = 0.5 * (xi + 1.0) * (gw @ lagrange_matrix(x, t, self.ref_bary))
        return C

    def locate(self, r) -> tuple[np.ndarray, np.ndarray]:
        """Panel index and reference coordinate in [-1, 1] for each point."""
        r = np.asarray(r, dtype=float)
        h = self.radius / self.n_panels
        idx = np.clip(np.floor(r / h).astype(int), 0, self.n_panels - 1)
        a = self.edges[idx]
        return idx, 2.0 * (r - a) / h - 1.0

    def interpolate(self, values: np.ndarray, r) -> np.ndarray:
        """Evaluate panel-wise interpolant of ``values`` (n_panels, order) at ``r``.

        Points slightly outside [0, R] are extrapolated from the end panels.
        """
        r = np.asarray(r, dtype=float)
        idx, xi = self.locate(r.reshape(-1))
        L = lagrange_matrix(self.ref_nodes, xi, self.ref_bary)
        out = np.einsum("ij,ij->i", L, values[idx])
        return out.reshape(r.shape)

    def differentiate(self, values: np.ndarray) -> np.ndarray:
        """Spectral derivative, panel by panel."""
        D = self._diff_matrix
        h = self.radius / self.n_panels
        return (values @ D.T) * (2.0 / h)

    @cached_property
    def _diff_matrix(self) -> np.ndarray:
        x, w = self.ref_nodes, self.ref_bary
        n = len(x)
        D = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                if i != j:
                    D[i, j] = (w[j] / w[i]) / (x[i] - x[j])
            D[i, i] = -D[i].sum()
        return D

    def integrate(self, values: np.ndarray):
        """int_0^R of the interpolant."""
        return np.sum(self.weights * values)

    def cumulative(self, values: np.ndarray) -> np.ndarray:
        """int_0^{r} at every node."""
        h = self.radius / self.n_panels
        within = (values @ self._cumulative.T) * (0.5 * h)
        totals = np.sum(self.weights * values, axis=1)
        offsets = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
        return within + offsets[:, None]

    @lru_cache(maxsize=64)
    def power_weighted(self, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Matrices for  s**(-m) * int_0^s t**m p(t) dt  at the nodes.

        Returns ``(W, E, rho)``: ``W[p, i, j] = int_{a_p}^{s_i} (t/s_i)**m l_j(t) dt``,
        ``E[p, j]`` the same integral over the whole panel scaled by the right
        edge, and ``rho[p, i] = (a_p / s_i)**m`` for carrying the previous
        panels' contribution.  All ratios stay <= 1, so no under/overflow.
        """
        P, n = self.n_panels, self.order
        gx, gw = gauss_legendre(n + (m + 1) // 2 + 2)
        W = np.empty((P, n, n))
        E = np.empty((P, n))
        rho = np.empty((P, n))
        for p in range(P):
            a, b = self.edges[p], self.edges[p + 1]
            half = 0.5 * (b - a)
            for i, s in enumerate(self.nodes[p]):
                t = a + 0.5 * (s - a) * (gx + 1.0)
                xi = (t - a) / half - 1.0
                W[p, i] = 0.5 * (s - a) * ((gw * (t / s) ** m) @ lagrange_matrix(self.ref_nodes, xi, self.ref_bary))
                rho[p, i] = (a / s) ** m
            t = a + half * (gx + 1.0)
            E[p] = half * ((gw * (t / b) ** m) @ lagrange_matrix(self.ref_nodes, gx, self.ref_bary))
        return W, E, rho

    def power_cumulative(self, values: np.ndarray, m: int) -> np.ndarray:
        """s**(-m) * int_0^s t**m p(t) dt at every node, ``p`` given by ``values``."""
        W, E, rho = self.power_weighted(m)
        local = np.einsum("pij,pj->pi", W, values)
        ends = np.einsum("pj,pj->p", E, values)
        out = np.empty_like(local)
        carry = 0.0
        for p in range(self.n_panels):
            out[p] = carry * rho[p] + local[p]
            a, b = self.edges[p], self.edges[p + 1]
            carry = carry * (a / b) ** m + ends[p]
        return out
