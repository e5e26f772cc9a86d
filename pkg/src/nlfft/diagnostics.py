"""Structured-matrix view of layer stripping, stability experiments and Lipschitz checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.linalg import solve_triangular, toeplitz

from .complement import Outerness, complete_b_outer, flip_to_antiouter, is_outer_poly
from .config import DEFAULT
from .errors import InvalidInput
from .inverse import GivensRotor, layer_strip, strip_record
from .laurent import LaurentPoly, lp_eval_circle
from .nlft import ComplexSequence, NlftPair, as_sequence, eta_of, forward_nlft_fast


def _lower_toeplitz(c):
    c = np.asarray(c, dtype=complex)
    return toeplitz(c, np.zeros(c.size))


def build_K(a_star_coeffs, b_coeffs):
    """K = T(a) T(a)^* + T(b) T(b)^* with T the lower-triangular Toeplitz matrix."""
    a = np.asarray(a_star_coeffs, dtype=complex)
    b = np.asarray(b_coeffs, dtype=complex)
    if a.size != b.size:
        raise InvalidInput("coefficient vectors must have equal length")
    if a.size > DEFAULT.dense_cap:
        raise InvalidInput(f"dense diagnostics are capped at n = {DEFAULT.dense_cap}")
    Ta, Tb = _lower_toeplitz(a), _lower_toeplitz(b)
    return Ta @ Ta.conj().T + Tb @ Tb.conj().T


def displacement_residual(K, a_star_coeffs, b_coeffs):
    """max |K - Z K Z^* - a a^* - b b^*| with Z the down-shift."""
    a = np.asarray(a_star_coeffs, dtype=complex)
    b = np.asarray(b_coeffs, dtype=complex)
    ZKZ = np.zeros_like(K)
    ZKZ[1:, 1:] = K[:-1, :-1]
    R = K - ZKZ - np.outer(a, a.conj()) - np.outer(b, b.conj())
    return float(np.max(np.abs(R))) if R.size else 0.0


@dataclass(frozen=True, eq=False)
class StripMatrices:
    L: np.ndarray
    D: np.ndarray
    U: np.ndarray
    H: np.ndarray
    K: np.ndarray
    gamma: np.ndarray
    a0: np.ndarray
    b0: np.ndarray

    def ldl_residual(self):
        """||K - L D L^*||_F / ||K||_F."""
        R = self.K - (self.L * self.D) @ self.L.conj().T
        return float(np.linalg.norm(R) / np.linalg.norm(self.K))

    def displacement_residual(self):
        return displacement_residual(self.K, self.a0, self.b0)


def build_strip_matrices(p: NlftPair) -> StripMatrices:
    """Run layer stripping and assemble L, D, U, H alongside K.

    Column k of U is the full rotated a column after step k, including the
    entry that the shift discards; L = U H^-1 with H = diag(U).
    """
    a, b = p.arrays()
    if a.size > DEFAULT.dense_cap:
        raise InvalidInput(f"dense diagnostics are capped at n = {DEFAULT.dense_cap}")
    gamma, U = strip_record(a, b)
    h = np.real(np.diag(U)).copy()
    L = U / np.diag(U)[None, :]
    return StripMatrices(L, h ** 2, U, np.diag(h), build_K(a, b), gamma, a, b)


@dataclass(frozen=True)
class LSystemReport:
    residual: float
    n: int


def verify_L_system(p: NlftPair) -> LSystemReport:
    """Plug the stripped gamma into L gamma = b0 / a00."""
    if p.b.is_zero:
        return LSystemReport(0.0, 0)
    S = build_strip_matrices(p)
    r = S.L @ S.gamma - S.b0 / S.a0[0]
    return LSystemReport(float(np.max(np.abs(r))), S.gamma.size)


@dataclass
class NormBoundsReport:
    eta: float
    lam_min: float
    lam_max: float
    norm_L: float
    norm_Linv: float
    norm_DLinv: float
    slack: float
    windows: list = field(default_factory=list)

    def checks(self):
        e, s = self.eta, self.slack
        return {
            "lam_min >= eta(2-eta)": self.lam_min >= e * (2 - e) - s,
            "lam_max <= 2-eta": self.lam_max <= 2 - e + s,
            "lam_min <= lam_max": self.lam_min <= self.lam_max + s,
            "1 <= |L| <= eta^-1/2": 1 - s <= self.norm_L <= e ** -0.5 + s,
            "1 <= |L^-1| <= eta^-1/2": 1 - s <= self.norm_Linv <= e ** -0.5 + s,
            "|(DL*)^-1| <= 1/(eta(2-eta))": self.norm_DLinv <= 1 / (e * (2 - e)) + s,
        }

    def window_checks(self):
        e, s = self.eta, self.slack
        out = []
        for (i, j, nl, nli, nd) in self.windows:
            out.append(
                1 - s <= nl <= e ** -0.5 + s
                and 1 - s <= nli <= e ** -0.5 + s
                and nd <= 1 / (e * (2 - e)) + s
            )
        return out

    @property
    def passed(self):
        return all(self.checks().values()) and all(self.window_checks())

    def margins(self):
        """Distance to each bound; small or negative values flag a tight or violated bound."""
        e = self.eta
        return {
            "lam_min": self.lam_min - e * (2 - e),
            "lam_max": 2 - e - self.lam_max,
            "norm_L": e ** -0.5 - self.norm_L,
            "norm_Linv": e ** -0.5 - self.norm_Linv,
            "norm_DLinv": 1 / (e * (2 - e)) - self.norm_DLinv,
        }


def _spec_norm(M):
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def norm_bounds_report(p: NlftPair, eta=None, windows=0, rng=None, slack=1e-8, S=None) -> NormBoundsReport:
    """Dense spectral quantities of K, L, L^-1 and (D L^*)^-1 with their bounds.

    Needs a* without zeros in the closed disk. `windows` random contiguous
    index intervals are checked for the submatrix bounds as well.
    """
    if is_outer_poly(p.a_star) is not Outerness.OUTER_CLOSED_DISK:
        raise InvalidInput("norm bounds need a* certified free of zeros in the closed disk")
    if eta is None:
        eta = eta_of(p)
    if S is None:
        S = build_strip_matrices(p)
    n = S.gamma.size
    lam = np.linalg.eigvalsh(S.K)
    I = np.eye(n)
    Linv = solve_triangular(S.L, I, lower=True, unit_diagonal=True)
    DL = S.D[:, None] * S.L.conj().T
    DLinv = solve_triangular(DL, I, lower=False)
    rep = NormBoundsReport(
        float(eta), float(lam[0]), float(lam[-1]),
        _spec_norm(S.L), _spec_norm(Linv), _spec_norm(DLinv), slack,
    )
    rng = np.random.default_rng(rng)
    for _ in range(windows):
        i = int(rng.integers(0, n))
        j = int(rng.integers(i + 1, n + 1))
        Lk = S.L[i:j, i:j]
        DLk = DL[i:j, i:j]
        nli = _spec_norm(solve_triangular(Lk, np.eye(j - i), lower=True, unit_diagonal=True))
        nd = _spec_norm(solve_triangular(DLk, np.eye(j - i), lower=False))
        rep.windows.append((i, j, _spec_norm(Lk), nli, nd))
    return rep


def residual_on_circle(p: NlftPair, g, grid=None) -> float:
    """sup over the grid of the 2-norm of the difference of the two transfer matrices.

    For matrices of the form [[x, y], [-y*, x*]] on the circle both singular
    values equal sqrt(|x|^2 + |y|^2), so the norm is read off directly.
    """
    g = as_sequence(g)
    q = forward_nlft_fast(g)
    if grid is None:
        span = max(p.a.coeffs.size, p.b.coeffs.size, len(g), 1)
        grid = 8 * span
    da = lp_eval_circle(p.a, grid) - lp_eval_circle(q.a, grid)
    db = lp_eval_circle(p.b, grid) - lp_eval_circle(q.b, grid)
    return float(np.max(np.sqrt(np.abs(da) ** 2 + np.abs(db) ** 2)))


def random_real_b(n, rng, sup=0.5):
    """Real b of degree n-1 with i.i.d. uniform coefficients, scaled so the 4n-grid max is `sup`."""
    c = rng.uniform(-1.0, 1.0, n)
    m = np.max(np.abs(lp_eval_circle(LaurentPoly(c), 4 * n)))
    return LaurentPoly(c * (sup / m))


def mp_layer_strip(a_star_coeffs, b_coeffs, dps=None):
    """Layer stripping in mpmath arithmetic, as a reference for the double-precision run."""
    a_in = np.asarray(a_star_coeffs, dtype=complex)
    b_in = np.asarray(b_coeffs, dtype=complex)
    n = b_in.size
    if dps is None:
        dps = 40 + n
    with mpmath.workdps(dps):
        A = [mpmath.mpc(complex(x)) for x in a_in]
        B = [mpmath.mpc(complex(x)) for x in b_in]
        out = []
        for _ in range(n):
            g = B[0] / A[0]
            out.append(complex(g))
            s = 1 / mpmath.sqrt(1 + abs(g) ** 2)
            gc = mpmath.conj(g)
            A, B = [s * (x + gc * y) for x, y in zip(A, B)], [s * (y - g * x) for x, y in zip(A, B)]
            A, B = A[:-1], B[1:]
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class InstabilityRow:
    n: int
    seed: int
    residual_outer: float
    residual_flipped: float


@dataclass(frozen=True, eq=False)
class InstabilityRun:
    row: InstabilityRow
    outer: NlftPair
    flipped: NlftPair
    gamma_outer: np.ndarray
    gamma_flipped: np.ndarray


def instability_run(n: int, seed: int) -> InstabilityRun:
    """Strip the outer completion of a random real b and its anti-outer flip."""
    if n < 4:
        raise InvalidInput("the instability experiment needs n >= 4")
    rng = np.random.default_rng(seed)
    b = random_real_b(n, rng)
    po = complete_b_outer(b)
    pf = flip_to_antiouter(po)
    go = layer_strip(po)
    gf = layer_strip(pf)
    row = InstabilityRow(n, seed, residual_on_circle(po, go), residual_on_circle(pf, gf))
    return InstabilityRun(row, po, pf, go.values, gf.values)


def instability_experiment(n: int, seed: int) -> list:
    """Table of (n, residual_outer, residual_flipped) rows."""
    return [instability_run(n, seed).row]


def entry_error_profile(pair: NlftPair, gamma_hat, dps=None):
    """|gamma_hat_k - gamma_k| against a high-precision strip of the same coefficients."""
    a, b = pair.arrays()
    ref = mp_layer_strip(a, b, dps)
    return np.abs(np.asarray(gamma_hat) - ref)


def log_linear_slope(err, floor=1e-17):
    """Slope of log10(err_k) against k; errors below `floor` (about one ulp of O(1) data) are clamped."""
    err = np.asarray(err, dtype=float)
    k = np.arange(err.size)
    return float(np.polyfit(k, np.log10(np.maximum(err, floor)), 1)[0])


def _mat_norm(M, p):
    return float(np.linalg.norm(M, p))


@dataclass
class LipschitzReport:
    n: int
    p: float
    q: float
    r: float
    lhs: float
    rhs: float
    theta_pairs: list = field(default_factory=list)

    @property
    def holds(self):
        return self.lhs <= self.rhs


def nlft_vectors(g):
    """Coefficient vectors (a_k of z^-k, b_k of z^k), k = 0..n-1, for gamma on 0..n-1."""
    g = as_sequence(g)
    n = len(g)
    p = forward_nlft_fast(ComplexSequence(g.values))
    return p.a.dense(-(n - 1), 0)[::-1], p.b.dense(0, n - 1)


def _vnorm(v, p):
    return float(np.linalg.norm(v, ord=p)) if v.size else 0.0


def lipschitz_checks(g, g2, pqr=(2, 2, 2)) -> LipschitzReport:
    """Both sides of n^-1/p |da|_p + n^-1/q |db|_q <= 6 n^(1/2-1/r) |dgamma|_r."""
    g, g2 = as_sequence(g), as_sequence(g2)
    if len(g) != len(g2):
        raise InvalidInput("sequences must have the same support length")
    n = len(g)
    p, q, r = (float(x) for x in pqr)
    a1, b1 = nlft_vectors(g)
    a2, b2 = nlft_vectors(g2)
    lhs = n ** (-1 / p) * _vnorm(a1 - a2, p) + n ** (-1 / q) * _vnorm(b1 - b2, q)
    rhs = 6 * n ** (0.5 - 1 / r) * _vnorm(g.values - g2.values, r)
    return LipschitzReport(n, p, q, r, lhs, rhs)


@dataclass(frozen=True)
class ThetaBound:
    diff: float
    norm2: float
    norm1: float

    @property
    def holds(self):
        ok2 = self.norm2 <= np.sqrt(10) * self.diff
        ok1 = self.norm1 < 3 * self.diff if self.diff > 0 else self.norm1 == 0
        return ok2 and ok1


def theta_bound(g1, g2) -> ThetaBound:
    """||Theta(g1) - Theta(g2)|| in the 2- and 1-norms next to |g1 - g2|."""
    M = GivensRotor(g1).matrix - GivensRotor(g2).matrix
    return ThetaBound(abs(complex(g1) - complex(g2)), _mat_norm(M, 2), _mat_norm(M, 1))


@dataclass(frozen=True)
class WitnessRow:
    k: int
    gamma0: float
    gamma0_expected: float
    dgamma2: float
    pair_dist2: float

    @property
    def holds(self):
        return self.dgamma2 >= 1 / np.sqrt(2) and self.pair_dist2 <= 10 / self.k ** 4


def witness_pair(k, n=4):
    """(a, b) with a = (1/k, 0, .., 0, c), b = (c, 0, .., 0, -1/k), c = sqrt(1/2 - 1/k^2)."""
    c = np.sqrt(0.5 - 1.0 / k ** 2)
    a = np.zeros(n)
    b = np.zeros(n)
    a[0], a[-1] = 1.0 / k, c
    b[0], b[-1] = c, -1.0 / k
    return a, b


def witness_rows(ks=range(2, 41), n=4):
    """Inverse NLFT jumps by >= 1/sqrt 2 between pairs that are O(k^-2) apart."""
    from .inverse import layer_strip_general

    rows = []
    for k in ks:
        a1, b1 = witness_pair(k, n)
        a2, b2 = witness_pair(k + 1, n)
        # a holds coefficients of z^-j, so conj(a) are the coefficients of a*
        g1 = layer_strip_general(np.conj(a1), b1, n).values
        g2 = layer_strip_general(np.conj(a2), b2, n).values
        d2 = float(np.sum((a1 - a2) ** 2) + np.sum((b1 - b2) ** 2))
        rows.append(WitnessRow(k, float(g1[0].real), float(np.sqrt(k * k / 2 - 1)),
                               float(np.linalg.norm(g2 - g1)), d2))
    return rows


@dataclass(frozen=True)
class LocalLipschitzCheck:
    n: int
    eps: float
    delta: float
    dgamma1: float
    bound: float

    @property
    def holds(self):
        return self.dgamma1 < self.bound


def local_lipschitz_check(g, g2) -> LocalLipschitzCheck:
    """|dgamma|_1 < eps (3n)^n (1 + 1/delta)^(2n) with eps the coefficient sup-distance."""
    g, g2 = as_sequence(g), as_sequence(g2)
    n = len(g)
    a1, b1 = nlft_vectors(g)
    a2, b2 = nlft_vectors(g2)
    eps = max(_vnorm(a1 - a2, np.inf), _vnorm(b1 - b2, np.inf))
    delta = min(a1[0].real, a2[0].real)
    bound = eps * (3 * n) ** n * (1 + 1 / delta) ** (2 * n)
    return LocalLipschitzCheck(n, eps, delta, _vnorm(g.values - g2.values, 1), bound)


def random_gamma(rng, n, norm=0.4, real=False):
    """Gaussian gamma rescaled to a given 2-norm."""
    g = rng.normal(size=n)
    if not real:
        g = g + 1j * rng.normal(size=n)
    return g * (norm / np.linalg.norm(g))


@dataclass(frozen=True, eq=False)
class AdmissibleSample:
    gamma: np.ndarray
    pair: NlftPair
    eta: float


def admissible_sample(rng, n, eta=None, norm=0.4, real=False, tol=2e-3, max_tries=20):
    """Random gamma whose pair has a* free of zeros in the closed disk.

    With `eta` given, the 2-norm of gamma is tuned by bisection so that
    eta_of hits the target to within `tol`.
    """
    for _ in range(max_tries):
        d = random_gamma(rng, n, 1.0, real)
        if eta is None:
            g = d * norm
            p = forward_nlft_fast(g)
        else:
            lo, hi = 0.0, 1.0
            while eta_of(forward_nlft_fast(d * hi)) > eta:
                hi *= 2
                if hi > 1e3:
                    raise InvalidInput("cannot reach the requested eta")
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                p = forward_nlft_fast(d * mid)
                e = eta_of(p)
                if abs(e - eta) <= tol:
                    break
                lo, hi = (mid, hi) if e > eta else (lo, mid)
            g = d * mid
        if is_outer_poly(p.a_star) is Outerness.OUTER_CLOSED_DISK:
            return AdmissibleSample(g, p, eta_of(p))
    raise InvalidInput("no admissible sample found")
