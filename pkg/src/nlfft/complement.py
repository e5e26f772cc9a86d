"""Complementary polynomials: given b, find a with a a* + b b* = 1.

Completion goes through the roots of z^N (1 - b b*), which come in pairs
alpha, 1/conj(alpha). Picking one root from every pair fixes a* up to a
scalar, and the scalar is pinned by the coefficient norm and a*(0) > 0.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import DEFAULT
from .errors import InvalidInput, NumericalFailure
from .laurent import LaurentPoly, complex_from_parts, conv, lp_star
from .nlft import NlftPair


@dataclass(frozen=True, eq=False)
class RootMultiset:
    roots: np.ndarray
    mult: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.roots, dtype=complex).ravel()
        m = np.asarray(self.mult, dtype=int).ravel()
        if r.shape != m.shape:
            raise InvalidInput("roots and multiplicities differ in length")
        if np.any(r == 0):
            raise InvalidInput("a root multiset lives in C*, zero is not allowed")
        if np.any(m < 1):
            raise InvalidInput("multiplicities must be positive")
        object.__setattr__(self, "roots", r)
        object.__setattr__(self, "mult", m)

    @classmethod
    def from_roots(cls, values, tol=DEFAULT.pairing_tol):
        """Group nearly equal values into (root, multiplicity)."""
        vals = list(np.asarray(values, dtype=complex).ravel())
        groups = []
        for v in vals:
            for g in groups:
                if abs(v - g[0]) <= tol * max(1.0, abs(v)):
                    g.append(v)
                    break
            else:
                groups.append([v])
        return cls(np.array([np.mean(g) for g in groups], dtype=complex), np.array([len(g) for g in groups]))

    def expand(self):
        return np.repeat(self.roots, self.mult)

    @property
    def size(self):
        return int(self.mult.sum())

    def to_json(self):
        return {"re": self.roots.real.tolist(), "im": self.roots.imag.tolist(), "mult": self.mult.tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(complex_from_parts(d["re"], d.get("im")), d.get("mult", [1] * len(d["re"])))


class Outerness(str, enum.Enum):
    OUTER_CLOSED_DISK = "outer_closed_disk"
    OUTER = "outer"
    NOT_OUTER = "not_outer"


def _trimmed_b(b: LaurentPoly):
    return np.asarray(b.coeffs, dtype=complex)


def complement_poly(b: LaurentPoly) -> np.ndarray:
    """Ascending coefficients of z^N (1 - b b*), N = length of b minus one."""
    c = _trimmed_b(b)
    out = -conv(c, np.conj(c[::-1]))
    out[c.size - 1] += 1.0
    return out


def complement_roots(b: LaurentPoly) -> np.ndarray:
    c = complement_poly(b)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1])


def backward_error(c, z):
    """|p(z)| / sum_k |c_k| |z|^k, evaluated through the reversed polynomial when |z| > 1."""
    P = np.polynomial.polynomial
    c = np.asarray(c, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape)
    big = np.abs(z) > 1
    zs = z[~big]
    out[~big] = np.abs(P.polyval(zs, c)) / P.polyval(np.abs(zs), np.abs(c))
    w = 1 / z[big]
    out[big] = np.abs(P.polyval(w, c[::-1])) / P.polyval(np.abs(w), np.abs(c[::-1]))
    return out


def check_in_B(b: LaurentPoly, slack=1e-12):
    """Require |b| <= 1 on a fine grid of the circle."""
    if b.is_zero:
        return
    from .laurent import lp_eval_circle

    grid = max(DEFAULT.eta_grid_factor * b.coeffs.size, 16)
    m = float(np.max(np.abs(lp_eval_circle(b, grid))))
    if m > 1.0 + slack:
        raise InvalidInput(f"sup |b| on the circle is {m:.6g} > 1")
    if np.sum(np.abs(b.coeffs) ** 2) >= 1.0:
        raise InvalidInput("b has unit coefficient norm, no complement with a*(0) > 0 exists")


@dataclass
class _RootClasses:
    circle: list  # (root on T, half multiplicity)
    pairs: list  # (outer root, [inner partners]) grouped by equal outer roots


def _cluster_pairs(o, out, inn, cfg):
    """Compare the centroid of the root cluster around o with that of the reflected inner cluster.

    A split cluster of k nearly equal roots has individual errors near
    eps^(1/k) but a centroid accurate to about eps times its condition.
    """
    refl = 1 / np.conj(inn)
    rad = cfg.cluster_tol * abs(o)
    co = out[np.abs(out - o) <= rad]
    ci = refl[np.abs(refl - o) <= rad]
    if co.size != ci.size:
        return False
    return abs(co.mean() - ci.mean()) <= cfg.pairing_tol * abs(co.mean())


def _classify(roots, poly, cfg=DEFAULT):
    if roots.size == 0:
        return _RootClasses([], [])
    mods = np.abs(roots)
    on = np.abs(mods - 1.0) <= cfg.circle_snap_tol
    circle = []
    if np.any(on):
        ms = RootMultiset.from_roots(roots[on], cfg.pairing_tol)
        for r, m in zip(ms.roots, ms.mult):
            if m % 2:
                raise NumericalFailure(f"root {r:.6g} on the unit circle has odd multiplicity {m}")
            circle.append((r / abs(r), m // 2))
    out = roots[~on & (mods > 1)]
    inn = roots[~on & (mods < 1)]
    if out.size != inn.size:
        raise NumericalFailure("roots of 1 - b b* do not pair up across the unit circle")
    pairs = []
    if out.size:
        cost = np.abs(out[:, None] * np.conj(inn[None, :]) - 1.0)
        ri, ci = linear_sum_assignment(cost)
        err = cost[ri, ci]
        bad = err > cfg.pairing_tol
        if np.any(bad):
            # nearly repeated roots are only accurate to about sqrt(eps); accept the
            # pair when each reflection is a root of the polynomial in the backward sense
            be = np.maximum(backward_error(poly, 1 / np.conj(out[ri[bad]])),
                            backward_error(poly, 1 / np.conj(inn[ci[bad]])))
            for o in out[ri[bad]][be > cfg.pairing_backward_tol]:
                if not _cluster_pairs(o, out, inn, cfg):
                    raise NumericalFailure(f"root pairing error {err.max():.3g} exceeds tolerance")
        partner = {int(i): inn[j] for i, j in zip(ri, ci)}
        used = np.zeros(out.size, dtype=bool)
        for i in range(out.size):
            if used[i]:
                continue
            group = [i]
            used[i] = True
            for j in range(i + 1, out.size):
                if not used[j] and abs(out[j] - out[i]) <= cfg.pairing_tol * abs(out[i]):
                    group.append(j)
                    used[j] = True
            pairs.append((out[i], [partner[j] for j in group], [out[j] for j in group]))
    return _RootClasses(circle, pairs)


def poly_from_roots(roots, grid=None) -> np.ndarray:
    """Coefficients of a polynomial with the given roots, up to a scalar.

    The product is evaluated on a grid of the circle in log space and
    transformed back. Multiplying the linear factors one at a time loses
    everything to cancellation once the degree reaches a few dozen.
    """
    roots = np.asarray(roots, dtype=complex)
    d = roots.size
    if d == 0:
        return np.ones(1, dtype=complex)
    M = grid or 1 << int(np.ceil(np.log2(4 * (d + 1))))
    w = np.exp(2j * np.pi * np.arange(M) / M)
    big = np.abs(roots) > 1
    with np.errstate(divide="ignore"):
        # |1 - z/r| for roots outside, |z - r| inside: both stay below 2
        logs = np.zeros(M, dtype=complex)
        if np.any(big):
            logs += np.sum(np.log(1.0 - w[:, None] / roots[big][None, :]), axis=1)
        if np.any(~big):
            logs += np.sum(np.log(w[:, None] - roots[~big][None, :]), axis=1)
    vals = np.exp(logs)
    return np.fft.fft(vals)[:d + 1] / M


def _normalize(p, b_norm2, real):
    if abs(p[0]) == 0:
        raise NumericalFailure("completed a*(0) vanished")
    lam = np.conj(p[0]) / abs(p[0]) * np.sqrt((1.0 - b_norm2) / np.sum(np.abs(p) ** 2))
    a = p * lam
    if real:
        a = a.real.astype(complex)
    return a


def _assemble(a_star, b):
    return NlftPair(lp_star(LaurentPoly(a_star)), b)


def complete_b_outer(b: LaurentPoly, cfg=DEFAULT) -> NlftPair:
    """The unique (a, b) in S with a* outer."""
    if b.is_zero:
        return NlftPair(LaurentPoly.const(1.0), b)
    check_in_B(b, cfg.admissibility_slack)
    roots = complement_roots(b)
    cls = _classify(roots, complement_poly(b), cfg)
    sel = [r for r, k in cls.circle for _ in range(k)]
    for _, _, outs in cls.pairs:
        sel.extend(outs)
    p = poly_from_roots(np.array(sel, dtype=complex))
    real = bool(np.all(b.coeffs.imag == 0))
    return _assemble(_normalize(p, float(np.sum(np.abs(b.coeffs) ** 2)), real), b)


def enumerate_complements(b: LaurentPoly, cfg=DEFAULT) -> list:
    """Every a with (a, b) in S, one per admissible root selection."""
    if not b.is_zero and b.coeffs.size - 1 > cfg.enumerate_max_degree:
        raise InvalidInput(f"enumeration is capped at degree {cfg.enumerate_max_degree}")
    if b.is_zero:
        return [NlftPair(LaurentPoly.const(1.0), b)]
    check_in_B(b, cfg.admissibility_slack)
    cls = _classify(complement_roots(b), complement_poly(b), cfg)
    fixed = [r for r, k in cls.circle for _ in range(k)]
    options = []
    for _, inners, outs in cls.pairs:
        k = len(outs)
        options.append([outs[:j] + inners[:k - j] for j in range(k, -1, -1)])
    nb2 = float(np.sum(np.abs(b.coeffs) ** 2))
    real = bool(np.all(b.coeffs.imag == 0))
    result = []
    for choice in itertools.product(*options):
        sel = list(fixed)
        for part in choice:
            sel.extend(part)
        p = poly_from_roots(np.array(sel, dtype=complex))
        # a non-real root choice gives a non-real a even for real b
        is_real = real and _conj_closed(sel)
        result.append(_assemble(_normalize(p, nb2, is_real), b))
    return result


def _conj_closed(sel, tol=1e-8):
    s = np.array(sel, dtype=complex)
    if s.size == 0:
        return True
    c = np.conj(s)
    return all(np.min(np.abs(s - x)) <= tol * max(1.0, abs(x)) for x in c)


def counting_N(R, tol=DEFAULT.pairing_tol, snap=DEFAULT.circle_snap_tol) -> int:
    """Number of complements for a root multiset: product over classes of #(y)."""
    if not isinstance(R, RootMultiset):
        R = RootMultiset.from_roots(R, tol)
    n = R.roots.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            x, y = R.roots[i], R.roots[j]
            if abs(x - y) <= tol * max(1.0, abs(x)) or abs(x * np.conj(y) - 1.0) <= tol:
                parent[find(i)] = find(j)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    total = 1
    for members in classes.values():
        size = int(sum(R.mult[i] for i in members))
        if size % 2:
            raise InvalidInput(f"root class of odd size {size}")
        if any(abs(abs(R.roots[i]) - 1.0) <= snap for i in members):
            continue
        total *= 1 + size // 2
    return total


def _winding(c, r, cap=1 << 22):
    """Zeros of the polynomial inside |z| < r by the argument principle, or None."""
    d = c.size - 1
    scaled = c * r ** np.arange(c.size)
    M = 1 << int(np.ceil(np.log2(8 * (d + 1))))
    while M <= cap:
        v = np.fft.ifft(scaled, M) * M
        lo, hi = np.min(np.abs(v)), np.max(np.abs(v))
        if lo == 0:
            return None
        # Bernstein: |d arg p / d theta| <= d * max|p| / min|p|; keep each step below pi/4
        if M >= 8 * d * (2.0 * hi / lo):
            steps = np.angle(np.roll(v, -1) / v)
            return int(np.rint(np.sum(steps) / (2 * np.pi)))
        M *= 2
    return None


def is_outer_poly(p: LaurentPoly, margin: float = DEFAULT.outer_margin, cfg=DEFAULT) -> Outerness:
    """Classify a polynomial by where its zeros lie relative to the unit circle."""
    if p.is_zero:
        raise InvalidInput("the zero polynomial has no outerness class")
    if p.low_deg < 0:
        raise InvalidInput("is_outer_poly expects a polynomial without negative powers")
    if p.low_deg > 0:
        return Outerness.NOT_OUTER
    c = p.coeffs
    d = c.size - 1
    if d == 0:
        return Outerness.OUTER_CLOSED_DISK
    if d > cfg.root_degree_cap:
        inside = _winding(c, 1.0 + margin)
        if inside == 0:
            return Outerness.OUTER_CLOSED_DISK
        if inside is not None:
            inner = _winding(c, 1.0 - margin)
            if inner is not None:
                return Outerness.OUTER if inner == 0 else Outerness.NOT_OUTER
    mods = np.abs(np.roots(c[::-1]))
    if np.all(mods > 1.0 + margin):
        return Outerness.OUTER_CLOSED_DISK
    if np.all(mods >= 1.0 - margin):
        return Outerness.OUTER
    return Outerness.NOT_OUTER


def flip_to_antiouter(p: NlftPair) -> NlftPair:
    """Reflect every zero of a* into the disk: a_no = w z^-d a_o*(z)."""
    b = p.b
    if not b.is_zero and np.any(b.coeffs.imag != 0):
        raise InvalidInput("the flip is defined for real-coefficient b only")
    A = lp_star(p.a)
    if A.low_deg < 0:
        raise InvalidInput("a* must be a polynomial")
    d = A.high_deg
    lead = A.coeff(d)
    omega = 1.0 if lead.real > 0 else -1.0
    return NlftPair(LaurentPoly(omega * A.dense(0, d), -d), b)
