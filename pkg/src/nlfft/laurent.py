"""Laurent polynomials with complex coefficients and an explicit lowest degree."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT


def _trim(c, low):
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(0, dtype=complex), 0
    return c[nz[0]:nz[-1] + 1], low + int(nz[0])


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """p(z) = sum_j coeffs[j] z^(low_deg + j).

    Only exact zeros are trimmed from the ends, so tiny numerical
    coefficients keep their degree. The zero polynomial is stored with
    empty coeffs and low_deg 0.
    """

    coeffs: np.ndarray
    low_deg: int = 0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        c, low = _trim(c, int(self.low_deg))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "low_deg", low)

    @classmethod
    def zero(cls):
        return cls(np.zeros(0), 0)

    @classmethod
    def const(cls, c):
        return cls(np.array([c]), 0)

    @classmethod
    def monomial(cls, k, c=1.0):
        return cls(np.array([c]), k)

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def high_deg(self):
        """Exponent of the last stored coefficient (low_deg - 1 for zero)."""
        return self.low_deg + self.coeffs.size - 1

    def coeff(self, k):
        j = k - self.low_deg
        if 0 <= j < self.coeffs.size:
            return complex(self.coeffs[j])
        return 0j

    def dense(self, lo, hi):
        """Coefficients of z^lo .. z^hi as a fresh array, zero-filled."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        if self.is_zero:
            return out
        s, e = max(lo, self.low_deg), min(hi, self.high_deg)
        if s <= e:
            out[s - lo:e - lo + 1] = self.coeffs[s - self.low_deg:e - self.low_deg + 1]
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_zero:
            return np.zeros_like(z)
        return np.polyval(self.coeffs[::-1], z) * z ** self.low_deg

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.low_deg == other.low_deg and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.low_deg, self.coeffs.tobytes()))

    def __repr__(self):
        return f"LaurentPoly(low_deg={self.low_deg}, coeffs={self.coeffs!r})"

    def __add__(self, other):
        return lp_add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return lp_sub(self, _lift(other))

    def __rsub__(self, other):
        return lp_sub(_lift(other), self)

    def __neg__(self):
        return lp_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        return lp_scale(self, other)

    __rmul__ = __mul__

    def to_json(self):
        return {"low_deg": self.low_deg, "re": self.coeffs.real.tolist(), "im": self.coeffs.imag.tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(complex_from_parts(d["re"], d.get("im")), int(d.get("low_deg", 0)))


def complex_from_parts(re, im=None):
    """Assemble a complex array from JSON re/im lists, keeping signed zeros."""
    re = np.asarray(re, dtype=float).ravel()
    im = np.zeros_like(re) if im is None else np.asarray(im, dtype=float).ravel()
    if re.shape != im.shape:
        raise ValueError("re and im must have equal length")
    out = np.empty(re.shape, dtype=complex)
    out.real, out.imag = re, im
    return out


def _lift(x):
    return x if isinstance(x, LaurentPoly) else LaurentPoly.const(x)


def conv(x, y, crossover=None):
    """Linear convolution, via FFT once the result is long enough."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.size == 0 or y.size == 0:
        return np.zeros(0, dtype=complex)
    n = x.size + y.size - 1
    if n < (DEFAULT.fft_crossover if crossover is None else crossover):
        return np.convolve(x, y)
    size = 1 << (n - 1).bit_length()
    return np.fft.ifft(np.fft.fft(x, size) * np.fft.fft(y, size))[:n]


def lp_star(p: LaurentPoly) -> LaurentPoly:
    """p*(z) = conj(p(1/conj z))."""
    if p.is_zero:
        return p
    return LaurentPoly(np.conj(p.coeffs[::-1]), -p.high_deg)


def lp_mul(p: LaurentPoly, q: LaurentPoly, crossover=None) -> LaurentPoly:
    if p.is_zero or q.is_zero:
        return LaurentPoly.zero()
    return LaurentPoly(conv(p.coeffs, q.coeffs, crossover), p.low_deg + q.low_deg)


def lp_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    lo, hi = min(p.low_deg, q.low_deg), max(p.high_deg, q.high_deg)
    return LaurentPoly(p.dense(lo, hi) + q.dense(lo, hi), lo)


def lp_scale(p: LaurentPoly, c) -> LaurentPoly:
    return LaurentPoly(p.coeffs * complex(c), p.low_deg)


def lp_sub(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return lp_add(p, lp_scale(q, -1))


def lp_shift(p: LaurentPoly, k: int) -> LaurentPoly:
    """Multiply by z^k."""
    if p.is_zero:
        return p
    return LaurentPoly(p.coeffs, p.low_deg + k)


def lp_eval_circle(p: LaurentPoly, m: int) -> np.ndarray:
    """Values at the m-th roots of unity exp(2 pi i j / m), j = 0..m-1."""
    if m < 1:
        raise ValueError("grid size must be positive")
    if p.is_zero:
        return np.zeros(m, dtype=complex)
    c = p.coeffs
    if c.size > m:
        # z^m = 1 on the grid, so fold the coefficients modulo m
        pad = np.zeros(-(-c.size // m) * m, dtype=complex)
        pad[:c.size] = c
        c = pad.reshape(-1, m).sum(axis=0)
    vals = np.fft.ifft(c, m) * m
    shift = p.low_deg % m
    if shift:
        vals = vals * np.exp(2j * np.pi * ((shift * np.arange(m)) % m) / m)
    return vals


def sup_on_circle(p: LaurentPoly, m: int) -> float:
    return float(np.max(np.abs(lp_eval_circle(p, m)))) if not p.is_zero else 0.0
