"""Inverse NLFT: layer stripping (O(n^2)) and the inverse nonlinear FFT (O(n log^2 n))."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .config import DEFAULT
from .errors import InvalidInput, NumericalFailure
from .laurent import LaurentPoly, conv
from .nlft import ComplexSequence, NlftPair, TransferPair, combine_transfer, sharp, transfer_arrays


@dataclass(frozen=True)
class GivensRotor:
    """Theta(gamma) = (1 + |gamma|^2)^(-1/2) [[1, -gamma], [conj(gamma), 1]]."""

    gamma: complex

    @property
    def matrix(self):
        g = complex(self.gamma)
        s = 1.0 / np.sqrt(1.0 + abs(g) ** 2)
        return s * np.array([[1.0, -g], [np.conj(g), 1.0]])


def givens_apply(rows, r: GivensRotor):
    """Right-multiply an (m, 2) block of rows by Theta(gamma)."""
    rows = np.asarray(rows, dtype=complex)
    return rows @ r.matrix


@dataclass(frozen=True)
class StripState:
    """Coefficient columns of a_k* and b_k before step k."""

    a_vec: np.ndarray
    b_vec: np.ndarray
    step: int


@numba.njit(cache=True)
def _strip_kernel(a, b, steps, gamma, record):
    # a, b are owned work buffers of length >= steps; b is read from offset k
    n = a.size
    rec = record.shape[0] > 0
    for k in range(steps):
        a0 = a[0]
        if not (a0.real > 0.0):
            return k
        g = b[k] / a0
        gamma[k] = g
        s = 1.0 / np.sqrt(1.0 + g.real * g.real + g.imag * g.imag)
        gc = np.conj(g)
        m = n - k
        for j in range(m):
            aj = a[j]
            bj = b[k + j]
            a[j] = s * (aj + gc * bj)
            b[k + j] = s * (bj - g * aj)
        if rec:
            for j in range(m):
                record[k + j, k] = a[j]
    return steps


def _prepare(a_star_coeffs, b_coeffs, steps=None):
    a = np.array(a_star_coeffs, dtype=complex).ravel()
    b = np.array(b_coeffs, dtype=complex).ravel()
    if steps is None:
        steps = b.size
    n = max(a.size, b.size, steps)
    aw = np.zeros(n, dtype=complex)
    bw = np.zeros(n, dtype=complex)
    aw[:a.size] = a
    bw[:b.size] = b
    return aw, bw, steps


def _run_strip(a, b, steps, record):
    gamma = np.zeros(steps, dtype=complex)
    done = _strip_kernel(a, b, steps, gamma, record)
    if done < steps:
        raise NumericalFailure(f"a_0 lost positivity at step {done}", step=done)
    return gamma


def layer_strip_general(a_star_coeffs, b_coeffs, steps: int) -> ComplexSequence:
    """Rotate-and-shift for `steps` iterations without assuming (a, b) is in S.

    The trailing entry of the a column is dropped after each step even
    when it is not zero.
    """
    a, b, steps = _prepare(a_star_coeffs, b_coeffs, steps)
    if steps and not a[0].real > 0:
        raise NumericalFailure("a*(0) must be positive", step=0)
    return ComplexSequence(_run_strip(a, b, steps, np.zeros((0, 0), dtype=complex)))


def layer_strip(p: NlftPair) -> ComplexSequence:
    """gamma_k = b_k(0) / a_k*(0), one layer at a time."""
    if p.b.is_zero:
        return ComplexSequence(np.zeros(0))
    a, b = p.arrays()
    return layer_strip_general(a, b, b.size)


def strip_record(a_star_coeffs, b_coeffs):
    """gamma together with the lower-triangular U whose column k is the rotated a column at step k."""
    a, b, steps = _prepare(a_star_coeffs, b_coeffs)
    if steps and not a[0].real > 0:
        raise NumericalFailure("a*(0) must be positive", step=0)
    U = np.zeros((steps, steps), dtype=complex)
    gamma = _run_strip(a, b, steps, U)
    return gamma, U


def iter_strip_states(a_star_coeffs, b_coeffs):
    """Yield G_0, G_1, ..., G_n as StripState, in plain numpy."""
    a = np.array(a_star_coeffs, dtype=complex)
    b = np.array(b_coeffs, dtype=complex)
    k = 0
    while True:
        yield StripState(a.copy(), b.copy(), k)
        if b.size == 0:
            return
        if not a[0].real > 0:
            raise NumericalFailure(f"a_0 lost positivity at step {k}", step=k)
        rows = givens_apply(np.stack([a, b], axis=1), GivensRotor(b[0] / a[0]))
        a, b = rows[:-1, 0], rows[1:, 1]
        k += 1


def _base(a0, b0):
    if not a0.real > 0:
        raise NumericalFailure("a_0 lost positivity in a base case")
    g = b0 / a0
    s = 1.0 / np.sqrt(1.0 + abs(g) ** 2)
    return g, g * s, s


def _inlfft_rec(a, b, start, limit, leaf):
    n = a.size
    if start >= limit:
        # padded slots carry gamma = 0, so the block is the identity
        eta = np.zeros(n, dtype=complex)
        eta[0] = 1.0
        return np.zeros(n, dtype=complex), np.zeros(n, dtype=complex), eta
    if n == 1:
        g, x, e = _base(a[0], b[0])
        return np.array([g]), np.array([x]), np.array([e])
    if n <= leaf:
        g = layer_strip_general(a, b, n).values.copy()
        g[max(limit - start, 0):] = 0
        xi, eta = transfer_arrays(g)
        return g, xi, eta
    m = (n + 1) // 2
    g1, xi1, eta1 = _inlfft_rec(a[:m], b[:m], start, limit, leaf)
    # strip the first m layers from the window; the z^-m is an index offset
    an = (conv(sharp(eta1), a) + conv(sharp(xi1), b))[m:n]
    bn = (conv(eta1, b) - conv(xi1, a))[m:n]
    g2, xi2, eta2 = _inlfft_rec(an, bn, start + m, limit, leaf)
    xi, eta = combine_transfer(xi1, eta1, xi2, eta2)
    return np.concatenate([g1, g2]), xi, eta


def inlfft(a_star_coeffs, b_coeffs, leaf_size: int | None = None):
    """Inverse nonlinear FFT on equal-length coefficient vectors.

    Returns (gamma, TransferPair). The input is zero-padded to a power of
    two and the padded gammas are removed from the output.
    """
    a = np.asarray(a_star_coeffs, dtype=complex).ravel()
    b = np.asarray(b_coeffs, dtype=complex).ravel()
    if a.size != b.size:
        raise InvalidInput("a* and b coefficient vectors must have equal length")
    n = a.size
    if n == 0:
        return ComplexSequence(np.zeros(0)), TransferPair(LaurentPoly.zero(), LaurentPoly.const(1.0), 0)
    if not a[0].real > 0:
        raise NumericalFailure("a*(0) must be positive", step=0)
    leaf = DEFAULT.leaf_size if leaf_size is None else leaf_size
    size = 1 << (n - 1).bit_length()
    ap = np.zeros(size, dtype=complex)
    bp = np.zeros(size, dtype=complex)
    ap[:n], bp[:n] = a, b
    g, xi, eta = _inlfft_rec(ap, bp, 0, n, leaf)
    return ComplexSequence(g[:n]), TransferPair(LaurentPoly(xi[:n]), LaurentPoly(eta[:n]), n)


def invert(p: NlftPair, method: str = "fast") -> ComplexSequence:
    """Recover gamma from a pair whose b has no negative powers."""
    if method == "layer":
        return layer_strip(p)
    if method == "fast":
        if p.b.is_zero:
            return ComplexSequence(np.zeros(0))
        a, b = p.arrays()
        return inlfft(a, b)[0]
    raise InvalidInput(f"unknown method {method!r}; expected 'layer' or 'fast'")


def warmup():
    """Compile the stripping kernel so timings exclude JIT cost."""
    layer_strip_general(np.array([1.0]), np.array([0.5]), 1)
