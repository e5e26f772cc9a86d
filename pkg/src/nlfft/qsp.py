"""QSP and GQSP phase factors from NLFT sequences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from .complement import complete_b_outer
from .config import DEFAULT
from .errors import InvalidInput
from .inverse import inlfft
from .laurent import LaurentPoly, complex_from_parts
from .nlft import ComplexSequence, as_sequence


@dataclass(frozen=True, eq=False)
class PhaseFactorSet:
    kind: str
    psi: np.ndarray
    phi: np.ndarray | None = None
    residual: float | None = None

    def __post_init__(self):
        if self.kind not in ("qsp", "gqsp"):
            raise InvalidInput(f"unknown phase kind {self.kind!r}")
        psi = np.asarray(self.psi, dtype=float).ravel()
        phi = None if self.phi is None else np.asarray(self.phi, dtype=float).ravel()
        if self.kind == "qsp" and phi is not None:
            raise InvalidInput("QSP phases carry no phi")
        if self.kind == "gqsp" and (phi is None or phi.shape != psi.shape):
            raise InvalidInput("GQSP phases need phi of the same length as psi")
        if not np.all(np.isfinite(psi)) or (phi is not None and not np.all(np.isfinite(phi))):
            raise InvalidInput("phases must be finite")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "phi", phi)

    def to_json(self):
        return {
            "kind": self.kind,
            "psi": self.psi.tolist(),
            "phi": None if self.phi is None else self.phi.tolist(),
            "residual": self.residual,
        }

    @classmethod
    def from_json(cls, d):
        return cls(d["kind"], d["psi"], d.get("phi"), d.get("residual"))


@dataclass(frozen=True, eq=False)
class TargetPoly:
    """QSP: real Chebyshev coefficients of f. GQSP: complex monomial coefficients of Q."""

    kind: str
    coeffs: np.ndarray

    def __post_init__(self):
        if self.kind not in ("qsp", "gqsp"):
            raise InvalidInput(f"unknown target kind {self.kind!r}")
        c = np.asarray(self.coeffs, dtype=float if self.kind == "qsp" else complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=c.dtype)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def to_json(self):
        c = np.asarray(self.coeffs, dtype=complex)
        d = {"kind": self.kind, "re": c.real.tolist()}
        if self.kind == "gqsp":
            d["im"] = c.imag.tolist()
        return d

    @classmethod
    def from_json(cls, d, kind=None):
        kind = d.get("kind", kind)
        re = d.get("re", d.get("coeffs"))
        if kind == "gqsp":
            return cls(kind, complex_from_parts(re, d.get("im")))
        if np.any(np.asarray(d.get("im", [0.0])) != 0):
            raise InvalidInput("QSP targets have real Chebyshev coefficients")
        return cls(kind, re)


def chebyshev_grid(m):
    return np.cos((2 * np.arange(m) + 1) * np.pi / (2 * m))


def _parity_ok(c, n):
    return not np.any(c[(n + 1) % 2::2])


def chebyshev_to_b(f: TargetPoly, n: int | None = None, check=True) -> LaurentPoly:
    """b(z) of degree n with Re[b(e^{2i t}) e^{-i n t}] = f(cos t)."""
    c = np.asarray(f.coeffs, dtype=float)
    if n is None:
        n = c.size - 1
    if c.size - 1 > n:
        if np.any(c[n + 1:]):
            raise InvalidInput("target degree exceeds n")
        c = c[:n + 1]
    if not _parity_ok(c, n):
        raise InvalidInput(f"target parity does not match n = {n}")
    if check:
        xs = chebyshev_grid(max(4 * n, 8))
        m = np.max(np.abs(C.chebval(xs, c)))
        if m > 1 + DEFAULT.admissibility_slack:
            raise InvalidInput(f"target exceeds 1 in modulus ({m:.6g}) on the check grid")
    b = np.zeros(n + 1)
    for k, ck in enumerate(c):
        if ck:
            b[(n + k) // 2] += ck / 2
            b[(n - k) // 2] += ck / 2
    return LaurentPoly(b)


def qsp_phases_from_gamma(g, gate=DEFAULT.real_gate) -> PhaseFactorSet:
    g = as_sequence(g).values
    if g.size and np.max(np.abs(g.imag)) > gate:
        raise InvalidInput(f"gamma has imaginary parts up to {np.max(np.abs(g.imag)):.3g}")
    return PhaseFactorSet("qsp", np.arctan(g.real))


def gqsp_phases_from_gamma(g) -> PhaseFactorSet:
    g = as_sequence(g).values
    phi = np.where(g == 0, 0.0, np.angle(g))
    return PhaseFactorSet("gqsp", np.arctan(np.abs(g)), phi)


def qsp_evaluate(phases: PhaseFactorSet, xs, with_v=False):
    """Top-left entry u of e^{i psi_0 Z} prod_k W(x) e^{i psi_k Z} per x; v is the top-right over i."""
    if phases.kind != "qsp":
        raise InvalidInput("qsp_evaluate needs QSP phases")
    x = np.asarray(xs, dtype=float)
    if np.any(np.abs(x) > 1):
        raise InvalidInput("signal values must lie in [-1, 1]")
    sq = np.sqrt(1 - x ** 2)
    psi = phases.psi
    e = np.exp(1j * psi[0])
    # row (u, w) of the running product; w = i v
    u = np.full(x.shape, e, dtype=complex)
    w = np.zeros(x.shape, dtype=complex)
    for p in psi[1:]:
        # right-multiply by W(x) then diag(e^{ip}, e^{-ip})
        u, w = (u * x + w * 1j * sq) * np.exp(1j * p), (u * 1j * sq + w * x) * np.exp(-1j * p)
    if with_v:
        return u, w / 1j
    return u


def _rot(psi, phi):
    c, s = np.cos(psi), np.sin(psi)
    return c, np.exp(1j * phi) * s, -np.exp(-1j * phi) * s, c


def gqsp_evaluate(phases: PhaseFactorSet, zs, corner="upper_right"):
    """Entry of R(psi_0, phi_0) prod_k [diag(z, 1) R(psi_k, phi_k)] per z.

    corner="upper_left" returns the top-left entry instead, for the
    convention where the target sits there.
    """
    if phases.kind != "gqsp":
        raise InvalidInput("gqsp_evaluate needs GQSP phases")
    z = np.asarray(zs, dtype=complex)
    if np.any(np.abs(np.abs(z) - 1) > 1e-12):
        raise InvalidInput("sample points must lie on the unit circle")
    r00, r01, r10, r11 = _rot(phases.psi[0], phases.phi[0])
    m00 = np.full(z.shape, r00, dtype=complex)
    m01 = np.full(z.shape, r01, dtype=complex)
    for p, f in zip(phases.psi[1:], phases.phi[1:]):
        q00, q01, q10, q11 = _rot(p, f)
        # top row times diag(z, 1) times R
        t0, t1 = m00 * z, m01
        m00, m01 = t0 * q00 + t1 * q10, t0 * q01 + t1 * q11
    if corner == "upper_right":
        return m01
    if corner == "upper_left":
        return m00
    raise InvalidInput(f"unknown corner {corner!r}")


def qsp_residual(phases, f: TargetPoly, m=1024):
    xs = chebyshev_grid(m)
    return float(np.max(np.abs(qsp_evaluate(phases, xs).imag - C.chebval(xs, f.coeffs))))


def gqsp_residual(phases, Q: TargetPoly, m=1024):
    z = np.exp(2j * np.pi * np.arange(m) / m)
    return float(np.max(np.abs(gqsp_evaluate(phases, z) - np.polyval(Q.coeffs[::-1], z))))


def _padded(pair, n):
    a = pair.a_star.dense(0, n - 1)
    return a, pair.b.dense(0, n - 1)


def solve_qsp(f: TargetPoly, cfg=DEFAULT) -> PhaseFactorSet:
    """Phases with Im u_n(Psi, x) = f(x)."""
    if f.kind != "qsp":
        raise InvalidInput("solve_qsp needs a QSP target")
    n = f.degree
    b = chebyshev_to_b(f, n)
    pair = complete_b_outer(b, cfg)
    a, bb = _padded(pair, n + 1)
    g, _ = inlfft(a, bb)
    phases = qsp_phases_from_gamma(g, cfg.real_gate)
    return PhaseFactorSet("qsp", phases.psi, None, qsp_residual(phases, f))


def solve_gqsp(Q: TargetPoly, cfg=DEFAULT) -> PhaseFactorSet:
    """Phases whose protocol has Q(z) in the upper-right corner."""
    if Q.kind != "gqsp":
        raise InvalidInput("solve_gqsp needs a GQSP target")
    n = Q.degree
    b = LaurentPoly(Q.coeffs)
    pair = complete_b_outer(b, cfg)
    a, bb = _padded(pair, n + 1)
    g, _ = inlfft(a, bb)
    phases = gqsp_phases_from_gamma(g)
    return PhaseFactorSet("gqsp", phases.psi, phases.phi, gqsp_residual(phases, Q))
