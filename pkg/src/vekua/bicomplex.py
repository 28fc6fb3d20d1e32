"""Bicomplex numbers ``W = sc + j*vec`` with ``j**2 = -1`` and ``i*j = j*i``.

Values are stored in (Sc, Vec) form; the idempotent components
``W+ = sc - i*vec`` and ``W- = sc + i*vec`` are computed on demand.  Both
fields may be numpy arrays, in which case every operation acts elementwise,
so a whole sampled field can be handled as one ``Bicomplex``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import ZeroDivisor

ZERO_DIVISOR_EPS = 1e-12


@dataclass(frozen=True)
class Bicomplex:
    sc: complex = 0j
    vec: complex = 0j

    # keep numpy from broadcasting ``ndarray * Bicomplex`` into object arrays
    __array_ufunc__ = None

    @classmethod
    def from_idempotent(cls, plus, minus) -> Bicomplex:
        """Inverse of ``(W.plus, W.minus)``: W = p+ W+ + p- W-."""
        return cls((plus + minus) / 2, 1j * (plus - minus) / 2)

    @classmethod
    def coerce(cls, value) -> Bicomplex:
        if isinstance(value, Bicomplex):
            return value
        return cls(value, 0 * value)

    @property
    def plus(self):
        return self.sc - 1j * self.vec

    @property
    def minus(self):
        return self.sc + 1j * self.vec

    def __add__(self, other):
        if isinstance(other, Bicomplex):
            return Bicomplex(self.sc + other.sc, self.vec + other.vec)
        if _is_scalar_like(other):
            return Bicomplex(self.sc + other, self.vec + 0 * other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Bicomplex(-self.sc, -self.vec)

    def __sub__(self, other):
        if isinstance(other, Bicomplex) or _is_scalar_like(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Bicomplex):
            return mul(self, other)
        if _is_scalar_like(other):
            return Bicomplex(self.sc * other, self.vec * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Bicomplex):
            return mul(self, inverse(other))
        if _is_scalar_like(other):
            return Bicomplex(self.sc / other, self.vec / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar_like(other):
            return inverse(self) * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        if n < 0:
            return inverse(self) ** (-n)
        return Bicomplex.from_idempotent(self.plus**n, self.minus**n)

    def conj_bar(self) -> Bicomplex:
        return conj_bar(self)

    def conj_dagger(self) -> Bicomplex:
        return conj_dagger(self)

    def norm(self):
        return norm(self)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.sc)) and np.all(np.isfinite(self.vec)))

    def to_json(self) -> dict:
        sc, vec = complex(self.sc), complex(self.vec)
        return {"sc": [sc.real, sc.imag], "vec": [vec.real, vec.imag]}

    @classmethod
    def from_json(cls, obj) -> Bicomplex:
        return cls(complex(*obj["sc"]), complex(*obj["vec"]))


def _is_scalar_like(x) -> bool:
    return isinstance(x, (Number, np.ndarray, np.number))


ONE = Bicomplex(1 + 0j, 0j)
J = Bicomplex(0j, 1 + 0j)
K = Bicomplex(0j, 1j)  # k = i*j
P_PLUS = Bicomplex(0.5 + 0j, 0.5j)
P_MINUS = Bicomplex(0.5 + 0j, -0.5j)


def mul(w: Bicomplex, v: Bicomplex) -> Bicomplex:
    return Bicomplex(w.sc * v.sc - w.vec * v.vec, w.sc * v.vec + w.vec * v.sc)


def conj_bar(w: Bicomplex) -> Bicomplex:
    return Bicomplex(w.sc, -w.vec)


def conj_dagger(w: Bicomplex) -> Bicomplex:
    """W^dagger = (Sc W)^* - j (Vec W)^*, i.e. p+ (W+)^* + p- (W-)^*."""
    return Bicomplex(np.conj(w.sc), -np.conj(w.vec))


def inner(w: Bicomplex, v: Bicomplex):
    """Complex inner product Sc(W V^dagger)."""
    return w.sc * np.conj(v.sc) + w.vec * np.conj(v.vec)


def norm(w: Bicomplex):
    return np.hypot(np.abs(w.sc), np.abs(w.vec))


def is_zero_divisor(w: Bicomplex, eps: float = ZERO_DIVISOR_EPS):
    """Scale-free test |W W-bar| <= eps |W|^2 (zero counts as a zero divisor)."""
    return np.abs(w.sc * w.sc + w.vec * w.vec) <= eps * norm(w) ** 2


def inverse(w: Bicomplex, eps: float = ZERO_DIVISOR_EPS) -> Bicomplex:
    if np.any(is_zero_divisor(w, eps)):
        raise ZeroDivisor(f"{w!r} is a zero divisor within eps={eps:g}")
    d = w.sc * w.sc + w.vec * w.vec
    return Bicomplex(w.sc / d, -w.vec / d)


def bexp(w: Bicomplex) -> Bicomplex:
    return Bicomplex.from_idempotent(np.exp(w.plus), np.exp(w.minus))


def hat(z) -> Bicomplex:
    """x + i y  ->  x + j y."""
    z = np.asarray(z, dtype=complex) if not isinstance(z, Number) else complex(z)
    return Bicomplex(np.real(z) + 0j, np.imag(z) + 0j)


def hat_pow(z, n: int) -> Bicomplex:
    """The bicomplex power z-hat**n = p+ (z^*)^n + p- z^n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(z, Number):
        z = complex(z)
    return Bicomplex.from_idempotent(np.conj(z) ** n, z**n)


def polar_hat_pow(r, theta, n: int) -> Bicomplex:
    """r^n (cos n theta + j sin n theta)."""
    rn = r**n
    return Bicomplex(rn * np.cos(n * theta) + 0j, rn * np.sin(n * theta) + 0j)


@dataclass(frozen=True)
class BicomplexPolynomial:
    """sum_n coeffs[n] * z-hat**n."""

    coeffs: tuple[Bicomplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Bicomplex.coerce(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z) -> Bicomplex:
        zh = hat(z)
        acc = Bicomplex.coerce(0j * np.real(zh.sc))
        for a in reversed(self.coeffs):
            acc = acc * zh + a
        return acc

    def eval_idempotent(self, z) -> Bicomplex:
        """Evaluate through p+ sum A_n+ (z^*)^n + p- sum A_n- z^n."""
        z = np.asarray(z, dtype=complex)
        plus = sum(a.plus * np.conj(z) ** n for n, a in enumerate(self.coeffs))
        minus = sum(a.minus * z**n for n, a in enumerate(self.coeffs))
        return Bicomplex.from_idempotent(plus, minus)


def parse_bicomplex(text: str) -> Bicomplex:
    """Parse ``"sc"`` or ``"sc,vec"`` where each part is a Python complex literal."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return Bicomplex(complex(parts[0].replace("i", "j")), 0j)
    if len(parts) == 2:
        sc, vec = (complex(p.replace("i", "j")) for p in parts)
        return Bicomplex(sc, vec)
    raise ValueError(f"cannot parse bicomplex value {text!r}")


def is_close(w: Bicomplex, v: Bicomplex, rel: float = 1e-12, abs_: float = 0.0) -> bool:
    scale = max(float(np.max(norm(w))), float(np.max(norm(v))))
    return float(np.max(norm(w - v))) <= max(rel * scale, abs_)
