"""NLFT coefficient sequences, SU(2) pairs (a, b) and the forward transform."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import InvalidInput
from .laurent import (
    LaurentPoly,
    complex_from_parts,
    conv,
    lp_eval_circle,
    lp_mul,
    lp_shift,
    lp_star,
    lp_sub,
    lp_add,
)


@dataclass(frozen=True, eq=False)
class ComplexSequence:
    """gamma_k for k = support_offset .. support_offset + len(values) - 1.

    With strict=True the first and last entries must be nonzero. The
    relaxed form is what padded and truncated windows produce.
    """

    values: np.ndarray
    support_offset: int = 0
    strict: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).ravel()
        if not np.all(np.isfinite(v)):
            raise InvalidInput("sequence has non-finite entries")
        if self.strict and v.size and (v[0] == 0 or v[-1] == 0):
            raise InvalidInput("strict support requires nonzero end entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "support_offset", int(self.support_offset))

    def __len__(self):
        return self.values.size

    def to_json(self):
        return {
            "support_offset": self.support_offset,
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }

    @classmethod
    def from_json(cls, d):
        try:
            v = complex_from_parts(d["re"], d.get("im"))
        except ValueError as e:
            raise InvalidInput(str(e)) from e
        return cls(v, int(d.get("support_offset", 0)), bool(d.get("strict", False)))


def as_sequence(g) -> ComplexSequence:
    return g if isinstance(g, ComplexSequence) else ComplexSequence(np.asarray(g))


@dataclass(frozen=True)
class NlftPair:
    """The transfer matrix [[a, b], [-b*, a*]]."""

    a: LaurentPoly
    b: LaurentPoly

    @property
    def a_star(self):
        return lp_star(self.a)

    def arrays(self):
        """(a* coeffs, b coeffs) on degrees 0..n-1 with n = deg b + 1.

        This is the form both inverse solvers consume. b must not have
        negative powers; shift it with shift_support first if it does.
        """
        if self.b.low_deg < 0:
            raise InvalidInput("b has negative powers; normalize with shift_support")
        n = max(self.b.high_deg + 1, 1)
        ast = self.a_star
        if not ast.is_zero and (ast.low_deg < 0 or ast.high_deg > n - 1):
            raise InvalidInput("a* does not fit the degree window of b")
        return ast.dense(0, n - 1), self.b.dense(0, n - 1)

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_json(cls, d):
        return cls(LaurentPoly.from_json(d["a"]), LaurentPoly.from_json(d["b"]))


def pair_from_arrays(a_star_coeffs, b_coeffs, offset=0) -> NlftPair:
    return NlftPair(lp_star(LaurentPoly(a_star_coeffs, 0)), LaurentPoly(b_coeffs, offset))


@dataclass(frozen=True)
class TransferPair:
    """(xi, eta) for a block of `length` consecutive gammas starting at index 0.

    The block's NLFT is [[eta*, xi], [-xi*, eta]].
    """

    xi: LaurentPoly
    eta: LaurentPoly
    length: int

    @property
    def xi_sharp(self):
        return lp_shift(lp_star(self.xi), self.length)

    @property
    def eta_sharp(self):
        return lp_shift(lp_star(self.eta), self.length)

    def to_pair(self, offset=0) -> NlftPair:
        return NlftPair(lp_star(self.eta), lp_shift(self.xi, offset))


def sharp(x):
    """Coefficients of z^len(x) conj(x(1/conj z)), degrees 0..len(x)."""
    out = np.zeros(x.size + 1, dtype=complex)
    out[1:] = np.conj(x[::-1])
    return out


def combine_transfer(xi1, eta1, xi2, eta2):
    """Transfer arrays of the concatenation of two blocks (left block first)."""
    length = xi1.size + xi2.size
    eta = np.zeros(length, dtype=complex)
    xi = np.zeros(length, dtype=complex)
    e = conv(eta1, eta2)
    eta[:e.size] += e
    eta -= conv(sharp(xi1), xi2)[:length]
    xi += conv(sharp(eta1), xi2)[:length]
    x = conv(xi1, eta2)
    xi[:x.size] += x
    return xi, eta


def _transfer_naive(g):
    xi = np.zeros(g.size, dtype=complex)
    eta = np.zeros(g.size, dtype=complex)
    s = 1.0 / np.sqrt(1.0 + abs(g[0]) ** 2)
    xi[0], eta[0] = g[0] * s, s
    for k in range(1, g.size):
        gk = g[k]
        s = 1.0 / np.sqrt(1.0 + abs(gk) ** 2)
        # append gamma_k: eta <- s(eta - gk xi#), xi <- s(xi + gk eta#)
        xs = np.conj(xi[:k][::-1])
        es = np.conj(eta[:k][::-1])
        eta *= s
        xi *= s
        eta[1:k + 1] -= s * gk * xs
        xi[1:k + 1] += s * gk * es
    return xi, eta


def transfer_arrays(g, leaf=8):
    """(xi, eta) coefficient arrays of a sequence starting at index 0."""
    g = np.asarray(g, dtype=complex)
    n = g.size
    if n == 0:
        return np.zeros(0, dtype=complex), np.ones(1, dtype=complex)
    if n == 1:
        s = 1.0 / np.sqrt(1.0 + abs(g[0]) ** 2)
        return np.array([g[0] * s]), np.array([s + 0j])
    if n <= leaf:
        return _transfer_naive(g)
    m = (n + 1) // 2
    xi1, eta1 = transfer_arrays(g[:m], leaf)
    xi2, eta2 = transfer_arrays(g[m:], leaf)
    return combine_transfer(xi1, eta1, xi2, eta2)


def forward_nlft_naive(g) -> NlftPair:
    """Left-to-right product of the SU(2) factors over Laurent polynomials."""
    g = as_sequence(g)
    a, b = LaurentPoly.const(1.0), LaurentPoly.zero()
    for j, gk in enumerate(g.values):
        k = g.support_offset + j
        s = 1.0 / np.sqrt(1.0 + abs(gk) ** 2)
        bt = LaurentPoly.monomial(k, s * gk)
        a, b = lp_sub(a * s, lp_mul(b, lp_star(bt))), lp_add(lp_mul(a, bt), b * s)
    return NlftPair(a, b)


def forward_nlft_fast(g, leaf=8) -> NlftPair:
    """Same value as forward_nlft_naive, via a product tree with FFT products."""
    g = as_sequence(g)
    if len(g) == 0:
        return NlftPair(LaurentPoly.const(1.0), LaurentPoly.zero())
    xi, eta = transfer_arrays(g.values, leaf)
    return NlftPair(lp_star(LaurentPoly(eta)), LaurentPoly(xi, g.support_offset))


def forward_transfer(g, leaf=8) -> TransferPair:
    g = as_sequence(g)
    xi, eta = transfer_arrays(g.values, leaf)
    return TransferPair(LaurentPoly(xi), LaurentPoly(eta), len(g))


def forward_nlft(g, method="fast") -> NlftPair:
    if method == "naive":
        return forward_nlft_naive(g)
    if method == "fast":
        return forward_nlft_fast(g)
    raise InvalidInput(f"unknown forward method {method!r}")


@dataclass(frozen=True)
class PairReport:
    residual: float
    a_star0: complex
    sign_ok: bool
    degree_ok: bool
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol and self.sign_ok and self.degree_ok


def pair_check(p: NlftPair, tol: float = DEFAULT.pair_tol) -> PairReport:
    prod = lp_add(lp_mul(p.a, lp_star(p.a)), lp_mul(p.b, lp_star(p.b)))
    resid = lp_sub(prod, LaurentPoly.const(1.0))
    r = float(np.max(np.abs(resid.coeffs))) if not resid.is_zero else 0.0
    a0 = complex(np.conj(p.a.coeff(0)))
    sign_ok = a0.real > 0 and abs(a0.imag) <= tol
    if p.a.is_zero:
        degree_ok = False
    elif p.b.is_zero:
        degree_ok = p.a.low_deg == 0 and p.a.high_deg == 0
    else:
        lo = p.b.low_deg - p.b.high_deg
        degree_ok = p.a.low_deg >= lo and p.a.high_deg <= 0
    return PairReport(r, a0, bool(sign_ok), bool(degree_ok), tol)


def eta_of(p: NlftPair, grid: int | None = None) -> float:
    """Grid estimate of 1 - sup |b| on the unit circle."""
    if p.b.is_zero:
        return 1.0
    if grid is None:
        grid = DEFAULT.eta_grid_factor * p.b.coeffs.size
    return 1.0 - float(np.max(np.abs(lp_eval_circle(p.b, max(grid, 4)))))


def shift_support(p: NlftPair, k: int) -> NlftPair:
    """Multiply b by z^k; a is unchanged."""
    return NlftPair(p.a, lp_shift(p.b, k))


def transfer_matrix_on_circle(p: NlftPair, m: int):
    """(a, b) values at the m-th roots of unity."""
    return lp_eval_circle(p.a, m), lp_eval_circle(p.b, m)
