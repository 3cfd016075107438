"""Principal series of PGL2(C) in the SU(2)-isotypic basis phi_n, and the local torus integral.

An element is a finite sum of phi_n(nu_n) with nu_n in V(2n).  On SU(2),

    phi_n(nu)(alpha, beta) = nu((alpha y - beta x)^(n + lam) (-conj(beta) y - conj(alpha) x)^(n - lam)),

and every integral over SU(2) of such polynomials is exact through the moments
in ``su2_moment``.  The weight pair (k_id, k_c) gives lam = (k_id - k_c)/2 and
M = (k_id + k_c - 4)/2; the dual series uses the weights 2 - k in their place.

Polynomials on SU(2) are dictionaries keyed by exponents
(alpha, conj(alpha), beta, conj(beta)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import mpmath
import numpy as np

from . import quadrature
from .polyrep import (
    DualVec,
    HomPoly,
    TensorDual,
    det,
    linear_power_product,
    make_mu_m,
    make_upsilon,
    pair_prime,
    poly_to_dual,
)
from .quadrature import QuadConfig
from .scalars import (
    ONE,
    ZERO,
    GaussianRational,
    Number,
    PiScaled,
    binomial,
    sign_power,
)

CHI_K = "chi_k"
CHI_DUAL = "chi_2-k"

S3Poly = dict[tuple[int, int, int, int], GaussianRational]


def _check_weights(kpair: tuple[int, int]) -> tuple[int, int]:
    k_id, k_c = kpair
    for k in (k_id, k_c):
        if not isinstance(k, int) or k < 2 or k % 2:
            raise ValueError(f"weights must be even integers >= 2, got {kpair!r}")
    return k_id, k_c


def lam_of(kpair: tuple[int, int]) -> int:
    return (kpair[0] - kpair[1]) // 2


def M_of(kpair: tuple[int, int]) -> int:
    return (kpair[0] + kpair[1] - 4) // 2


def _char_weights(kpair: tuple[int, int], kind: str) -> tuple[int, int]:
    if kind == CHI_K:
        return kpair
    return 2 - kpair[0], 2 - kpair[1]


def _lam_M(w: tuple[int, int]) -> tuple[int, int]:
    """(lam, M) read off from the character weights (w_id, w_c)."""
    return (w[0] - w[1]) // 2, (w[0] + w[1] - 4) // 2


# --- moments ------------------------------------------------------------------------


def su2_moment(n1: int, n2: int, m1: int, m2: int) -> GaussianRational:
    """Integral over SU(2), Haar mass 1, of alpha^n1 conj(alpha)^n2 beta^m1 conj(beta)^m2."""
    if min(n1, n2, m1, m2) < 0:
        raise ValueError("exponents must be nonnegative")
    if n1 != n2 or m1 != m2:
        return ZERO
    return GaussianRational(Fraction(1, (n1 + m1 + 1) * binomial(n1 + m1, n1)))


def s3_integral(p: S3Poly) -> GaussianRational:
    total = ZERO
    for (a, ab, b, bb), c in p.items():
        if a == ab and b == bb:
            total = total + c * su2_moment(a, ab, b, bb)
    return total


def _s3_mul(p: S3Poly, q: S3Poly) -> S3Poly:
    out: S3Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
            out[e] = out.get(e, ZERO) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _s3_add_into(acc: S3Poly, p: S3Poly, scale: GaussianRational = ONE) -> None:
    for e, c in p.items():
        v = acc.get(e, ZERO) + scale * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _s3_pair(p: S3Poly, q: S3Poly) -> GaussianRational:
    """Integral of p q without forming the product: only exponent-balanced pairs survive."""
    by_key: dict[tuple[int, int], list] = {}
    for e, c in q.items():
        by_key.setdefault((e[0] - e[1], e[2] - e[3]), []).append((e, c))
    total = ZERO
    for e1, c1 in p.items():
        for e2, c2 in by_key.get((e1[1] - e1[0], e1[3] - e1[2]), ()):
            total = total + c1 * c2 * su2_moment(
                e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]
            )
    return total


# polynomials in (x, y) with S3Poly coefficients, index = power of x


def _xy_mul(p: list[S3Poly], q: list[S3Poly]) -> list[S3Poly]:
    out: list[S3Poly] = [{} for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            if a and b:
                _s3_add_into(out[i + j], _s3_mul(a, b))
    return out


def _xy_pow(p: list[S3Poly], e: int) -> list[S3Poly]:
    out: list[S3Poly] = [{(0, 0, 0, 0): ONE}]
    for _ in range(e):
        out = _xy_mul(out, p)
    return out


_NEG = GaussianRational(-1)
# alpha y - beta x and -conj(alpha) x - conj(beta) y
_FIRST = [{(1, 0, 0, 0): ONE}, {(0, 0, 1, 0): _NEG}]
_SECOND = [{(0, 0, 0, 1): _NEG}, {(0, 1, 0, 0): _NEG}]


@lru_cache(maxsize=None)
def _phi_polys(p: int, q: int) -> tuple[tuple[tuple[tuple[int, int, int, int], GaussianRational], ...], ...]:
    """Coefficient of x^a y^(p+q-a) in (alpha y - beta x)^p (-conj(alpha) x - conj(beta) y)^q."""
    prod = _xy_mul(_xy_pow(_FIRST, p), _xy_pow(_SECOND, q))
    return tuple(tuple(sorted(c.items())) for c in prod)


def phi_on_s3(n: int, nu: DualVec, lam: int) -> S3Poly:
    """phi_n(nu) restricted to SU(2), as a polynomial in alpha, beta and conjugates."""
    if nu.degree != 2 * n:
        raise ValueError(f"phi_{n} takes a dual vector of degree {2 * n}")
    if n < abs(lam):
        raise ValueError(f"phi_n needs n >= |lam| = {abs(lam)}")
    coeffs = _phi_polys(n + lam, n - lam)
    out: S3Poly = {}
    for a, v in enumerate(nu.values):
        if v:
            _s3_add_into(out, dict(coeffs[a]), v)
    return out


# --- elements -------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexCharacter:
    """The unitary character r e^{i theta} -> e^{i l theta} of C^x."""

    circle_mode: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.circle_mode, int):
            raise ValueError("circle_mode must be an integer")

    @property
    def trivial(self) -> bool:
        return self.circle_mode == 0


@dataclass(frozen=True)
class ComplexSeriesElem:
    weights: tuple[int, int]
    harmonics: Mapping[int, DualVec] = field(default_factory=dict)
    kind: str = CHI_K

    def __post_init__(self) -> None:
        kpair = _check_weights(tuple(self.weights))
        object.__setattr__(self, "weights", kpair)
        if self.kind not in (CHI_K, CHI_DUAL):
            raise ValueError(f"unknown series kind {self.kind!r}")
        lam = abs(lam_of(kpair))
        clean = {}
        for n, nu in self.harmonics.items():
            if nu.degree != 2 * n:
                raise ValueError(f"harmonic {n} needs a dual vector of degree {2 * n}")
            if nu.is_zero():
                continue
            if n < lam:
                raise ValueError(f"harmonic {n} is below |lam| = {lam}")
            clean[int(n)] = nu
        object.__setattr__(self, "harmonics", dict(sorted(clean.items())))

    @property
    def lam(self) -> int:
        return lam_of(self.weights)

    @property
    def M(self) -> int:
        return M_of(self.weights)

    @property
    def char_weights(self) -> tuple[int, int]:
        return _char_weights(self.weights, self.kind)

    def _like(self, harmonics: Mapping[int, DualVec]) -> ComplexSeriesElem:
        return ComplexSeriesElem(self.weights, harmonics, self.kind)

    def __add__(self, other: ComplexSeriesElem) -> ComplexSeriesElem:
        if (self.weights, self.kind) != (other.weights, other.kind):
            raise ValueError("series elements live in different modules")
        out = dict(self.harmonics)
        for n, nu in other.harmonics.items():
            out[n] = out[n] + nu if n in out else nu
        return self._like(out)

    def __sub__(self, other: ComplexSeriesElem) -> ComplexSeriesElem:
        return self + other.scale(-1)

    def scale(self, c: Number) -> ComplexSeriesElem:
        return self._like({n: nu.scale(c) for n, nu in self.harmonics.items()})

    def is_zero(self) -> bool:
        return not self.harmonics

    def support(self) -> set[int]:
        return set(self.harmonics)

    def in_discrete_series(self) -> bool:
        return all(n >= self.M + 1 for n in self.harmonics)

    def on_s3(self) -> S3Poly:
        lam, _ = _lam_M(self.char_weights)
        out: S3Poly = {}
        for n, nu in self.harmonics.items():
            _s3_add_into(out, phi_on_s3(n, nu, lam))
        return out


def phi_elem(kpair: tuple[int, int], n: int, nu: DualVec, kind: str = CHI_K) -> ComplexSeriesElem:
    return ComplexSeriesElem(kpair, {n: nu}, kind)


# --- evaluation at arbitrary matrices ----------------------------------------------------


def _is_exact_matrix(g) -> bool:
    return all(isinstance(x, GaussianRational) for row in g for x in row)


def eval_phi_n(
    kpair: tuple[int, int],
    n: int,
    nu: DualVec,
    g,
    exact: bool | None = None,
    kind: str = CHI_K,
):
    """phi_n(nu) at g with bottom row (r, s) and determinant D:

    D^(w_id/2) conj(D)^(w_c/2) nu(P_n(r, s)) / (|r|^2 + |s|^2)^(M + n + 2),
    P_n(r, s) = (conj(r) x + conj(s) y)^(n + lam) (r y - s x)^(n - lam).
    """
    w = _char_weights(_check_weights(kpair), kind)
    lam, M = _lam_M(w)
    if nu.degree != 2 * n or n < abs(lam):
        raise ValueError("phi_n needs nu of degree 2n and n >= |lam|")
    if exact is None:
        exact = _is_exact_matrix(g)
    if exact:
        D = det(g)
        if not D:
            raise ValueError("singular matrix")
        r, s = g[1][0], g[1][1]
        P = _lpp((r.conjugate(), s.conjugate()), n + lam, (-s, r), n - lam)
        val = ZERO
        for v, c in zip(nu.values, P):
            if v and c:
                val = val + v * c
        norm = (r * r.conjugate() + s * s.conjugate()).re
        return (
            D ** (w[0] // 2)
            * D.conjugate() ** (w[1] // 2)
            * val
            * GaussianRational(Fraction(1) / norm ** (M + n + 2))
        )
    ga = np.asarray(g, dtype=complex)
    D = ga[0, 0] * ga[1, 1] - ga[0, 1] * ga[1, 0]
    if D == 0:
        raise ValueError("singular matrix")
    r, s = ga[1, 0], ga[1, 1]
    P = _lpp_float(np.conj(r), np.conj(s), n + lam, -s, r, n - lam)
    val = sum(complex(v) * c for v, c in zip(nu.values, P) if v)
    norm = abs(r) ** 2 + abs(s) ** 2
    return D ** (w[0] // 2) * np.conj(D) ** (w[1] // 2) * val / norm ** (M + n + 2)


def _lpp(first, e1, second, e2) -> list[GaussianRational]:
    """Coefficients of (u X + v Y)^e1 (u' X + v' Y)^e2 by power of X (exact)."""
    return linear_power_product(first, e1, second, e2)


def _lpp_float(u1, v1, e1: int, u2, v2, e2: int) -> list:
    """Float version of ``_lpp`` whose entries may be numpy arrays."""
    out = [0j] * (e1 + e2 + 1)
    for i in range(e1 + 1):
        ci = math.comb(e1, i) * u1**i * v1 ** (e1 - i)
        for j in range(e2 + 1):
            out[i + j] = out[i + j] + ci * (math.comb(e2, j) * u2**j * v2 ** (e2 - j))
    return out


def eval_series(f: ComplexSeriesElem, g, exact: bool | None = None):
    if exact is None:
        exact = _is_exact_matrix(g)
    total = ZERO if exact else 0j
    for n, nu in f.harmonics.items():
        total = total + eval_phi_n(f.weights, n, nu, g, exact, f.kind)
    return total


# --- projection, Clebsch-Gordan maps, section ----------------------------------------------


def rho_complex(f: ComplexSeriesElem) -> TensorDual:
    """rho(f)(X_id^a Y_id^(d1-a) X_c^b Y_c^(d2-b)) = int f (-conj beta)^a conj(alpha)^(d1-a) (-beta)^b alpha^(d2-b)."""
    if f.kind != CHI_K:
        raise ValueError("rho is defined on the weight-k series")
    d1, d2 = f.weights[0] - 2, f.weights[1] - 2
    fp = f.on_s3()
    rows = []
    for a in range(d1 + 1):
        row = []
        for b in range(d2 + 1):
            mono = {(d2 - b, d1 - a, b, a): GaussianRational(sign_power(a + b))}
            row.append(_s3_pair(fp, mono))
        rows.append(tuple(row))
    return TensorDual((d1, d2), tuple(rows))


def _check_tensor(kpair: tuple[int, int], mu: TensorDual) -> None:
    if mu.degrees != (kpair[0] - 2, kpair[1] - 2):
        raise ValueError(f"expected a tensor of degrees {(kpair[0] - 2, kpair[1] - 2)}")


@lru_cache(maxsize=None)
def _cg_table(kpair: tuple[int, int], n: int) -> tuple:
    """Coefficients of Delta_n: entry [c][a][b] is the coefficient of x^c y^(2n-c) X_id^a Y_id^(d1-a) X_c^b Y_c^(d2-b).

    Delta_n = (X_id y - Y_id x)^(n+lam) (-Y_c y - X_c x)^(n-lam) (X_id X_c + Y_id Y_c)^(M-n).
    """
    lam, M = lam_of(kpair), M_of(kpair)
    r1, r2, r3 = n + lam, n - lam, M - n
    d1, d2 = kpair[0] - 2, kpair[1] - 2
    table = [[[0] * (d2 + 1) for _ in range(d1 + 1)] for _ in range(2 * n + 1)]
    for i in range(r1 + 1):
        # (X_id y)^(r1-i) (-Y_id x)^i
        c1 = binomial(r1, i) * sign_power(i)
        for j in range(r2 + 1):
            # (-X_c x)^j (-Y_c y)^(r2-j)
            c2 = c1 * binomial(r2, j) * sign_power(r2)
            for s in range(r3 + 1):
                # (X_id X_c)^s (Y_id Y_c)^(r3-s)
                c = c2 * binomial(r3, s)
                a = r1 - i + s
                b = j + s
                table[i + j][a][b] += c
    return tuple(tuple(tuple(row) for row in block) for block in table)


def clebsch_gordan_tn(kpair: tuple[int, int], n: int, mu: TensorDual) -> DualVec:
    """t_n(mu) = mu(Delta_n) in P(2n), returned in V(2n) through ``poly_to_dual``."""
    kpair = _check_weights(kpair)
    _check_tensor(kpair, mu)
    lam, M = lam_of(kpair), M_of(kpair)
    if not abs(lam) <= n <= M:
        raise ValueError(f"n={n} is not balanced for weights {kpair}")
    table = _cg_table(kpair, n)
    coeffs = []
    for c in range(2 * n + 1):
        total = ZERO
        for a, b, v in mu.entries():
            x = table[c][a][b]
            if x:
                total = total + v * x
        coeffs.append(total)
    return poly_to_dual(HomPoly(2 * n, tuple(coeffs)))


def section_s_complex(kpair: tuple[int, int], mu: TensorDual) -> ComplexSeriesElem:
    """The SU(2)-equivariant section: sum over |lam| <= n <= M of (2n+1) binom(2n, n+lam) phi_n(t_n(mu))."""
    kpair = _check_weights(kpair)
    _check_tensor(kpair, mu)
    lam, M = lam_of(kpair), M_of(kpair)
    out = {}
    for n in range(abs(lam), M + 1):
        c = (2 * n + 1) * binomial(2 * n, n + lam)
        out[n] = clebsch_gordan_tn(kpair, n, mu).scale(c)
    return ComplexSeriesElem(kpair, out, CHI_K)


def star_op(nu: DualVec) -> DualVec:
    """nu*(P) = nu(d^2 P / dx dy), from V(2M) to V(2M+2)."""
    N = nu.degree + 2
    vals = [ZERO] * (N + 1)
    for a in range(1, N):
        vals[a] = nu.values[a - 1] * (a * (N - a))
    return DualVec(N, tuple(vals))


# --- Lie algebra ----------------------------------------------------------------------


def lie_delta_complex(f: ComplexSeriesElem) -> ComplexSeriesElem:
    """Derivative along diag(e^t, 1), harmonic by harmonic:

    d phi_n(nu) = phi_n(nu_0) + phi_(n+1)(nu_1) + phi_(n-1)(nu_-1), with
    nu_0(P) = lam (M+1) / (2n(n+1)) nu(y P_y - x P_x),
    nu_1(P) = -(M+n+2) / ((n+1)(2n+1)) nu(P_xy),
    nu_-1(P) = (n+lam)(n-lam)/n (n-M-1)/(2n+1) nu(x y P).
    """
    lam, M = _lam_M(f.char_weights)
    out: dict[int, DualVec] = {}

    def add(n: int, nu: DualVec) -> None:
        out[n] = out[n] + nu if n in out else nu

    for n, nu in f.harmonics.items():
        N = 2 * n
        if lam != 0:
            if n == 0:
                raise AssertionError("harmonic 0 with nonzero lam")
            c0 = Fraction(lam * (M + 1), 2 * n * (n + 1))
            add(n, DualVec(N, tuple(v * (c0 * (N - 2 * a)) for a, v in enumerate(nu.values))))
        c1 = Fraction(-(M + n + 2), (n + 1) * (2 * n + 1))
        add(n + 1, star_op(nu).scale(c1))
        if n >= 1 and (n + lam) * (n - lam) != 0:
            cm = Fraction((n + lam) * (n - lam) * (n - M - 1), n * (2 * n + 1))
            add(n - 1, DualVec(N - 2, tuple(nu.values[a + 1] * cm for a in range(N - 1))))
    return f._like(out)


def lie_delta_tensor(mu: TensorDual) -> TensorDual:
    """diag(e^t, 1) acts on both factors (the conjugate of a real scalar is itself)."""
    d1, d2 = mu.degrees
    rows = tuple(
        tuple(v * (Fraction(d1, 2) - a + Fraction(d2, 2) - b) for b, v in enumerate(row))
        for a, row in enumerate(mu.values)
    )
    return TensorDual(mu.degrees, rows)


def delta_s_complex(kpair: tuple[int, int], mu: TensorDual) -> ComplexSeriesElem:
    """delta(s(mu)) - s(delta mu), which lies in the discrete-series part."""
    kpair = _check_weights(kpair)
    out = lie_delta_complex(section_s_complex(kpair, mu)) - section_s_complex(kpair, lie_delta_tensor(mu))
    if not out.in_discrete_series():
        raise AssertionError(f"delta s leaked outside n = M+1: support {sorted(out.support())}")
    return out


def delta_s_complex_closed_form(kpair: tuple[int, int], mu: TensorDual) -> ComplexSeriesElem:
    """-2 binom(2M, k_id - 2) phi_(M+1)(t_M(mu)*)."""
    kpair = _check_weights(kpair)
    M = M_of(kpair)
    nu = star_op(clebsch_gordan_tn(kpair, M, mu)).scale(-2 * binomial(2 * M, kpair[0] - 2))
    return ComplexSeriesElem(kpair, {M + 1: nu}, CHI_K)


def make_mu_m_complex(kpair: tuple[int, int], m: tuple[int, int]) -> TensorDual:
    """mu_m = mu_(m_id) (x) mu_(m_c)."""
    kpair = _check_weights(kpair)
    return TensorDual.outer(make_mu_m(kpair[0], m[0]), make_mu_m(kpair[1], m[1]))


def _check_m(kpair: tuple[int, int], m: tuple[int, int]) -> None:
    for k, mm in zip(kpair, m):
        if abs(mm) > (k - 2) // 2:
            raise ValueError(f"m={m} out of range for weights {kpair}")


# --- pairings ---------------------------------------------------------------------------


def pair_B_complex(f: ComplexSeriesElem, h: ComplexSeriesElem) -> GaussianRational:
    """Integral over SU(2) of f h, exact through the moments."""
    if f.kind == h.kind:
        raise ValueError("the pairing needs one element from each series")
    if f.weights != h.weights:
        raise ValueError("weight mismatch")
    return _s3_pair(f.on_s3(), h.on_s3())


def s_prime_complex(h: ComplexSeriesElem) -> ComplexSeriesElem:
    """The dual section on the minimal K-type: phi_(M+1)(nu) -> phi_(M+1)(nu) in the dual series."""
    if h.kind != CHI_K:
        raise ValueError("s' takes elements of the weight-k side")
    if not h.support() <= {h.M + 1}:
        raise ValueError(f"s' is only fixed on harmonic {h.M + 1}; support {sorted(h.support())}")
    return ComplexSeriesElem(h.weights, h.harmonics, CHI_DUAL)


def pair_discrete_complex(f: ComplexSeriesElem, h: ComplexSeriesElem) -> GaussianRational:
    return pair_B_complex(f, s_prime_complex(h))


def rho_dual_on_s3(kpair: tuple[int, int], mu: TensorDual) -> S3Poly:
    """rho^v(mu) on SU(2): mu((X_id conj(alpha) + Y_id conj(beta))^(d1) (X_c alpha + Y_c beta)^(d2))."""
    kpair = _check_weights(kpair)
    _check_tensor(kpair, mu)
    d1, d2 = mu.degrees
    out: S3Poly = {}
    for a, b, v in mu.entries():
        c = v * (binomial(d1, a) * binomial(d2, b))
        _s3_add_into(out, {(b, a, d2 - b, d1 - a): c})
    return out


def pair_V_complex(mu1: TensorDual, mu2: TensorDual, kpair: tuple[int, int] | None = None) -> GaussianRational:
    """<s(mu1), rho^v(mu2)>_B."""
    if mu1.degrees != mu2.degrees:
        raise ValueError("degree mismatch")
    if kpair is None:
        kpair = (mu1.degrees[0] + 2, mu1.degrees[1] + 2)
    return _s3_pair(section_s_complex(kpair, mu1).on_s3(), rho_dual_on_s3(kpair, mu2))


def pair_prime_complex(mu1: TensorDual, mu2: TensorDual) -> GaussianRational:
    """The pairing induced by V = P on each factor: product of ``pair_prime`` over the two places."""
    if mu1.degrees != mu2.degrees:
        raise ValueError("degree mismatch")
    d1, d2 = mu1.degrees
    total = ZERO
    for a, b, v in mu1.entries():
        for a2, b2, w in mu2.entries():
            x = pair_prime(DualVec.basis(d1, a), DualVec.basis(d1, a2))
            if not x:
                continue
            y = pair_prime(DualVec.basis(d2, b), DualVec.basis(d2, b2))
            if y:
                total = total + v * w * x * y
    return total


def pairmum_closed(kpair: tuple[int, int], m: tuple[int, int], m2: tuple[int, int]) -> GaussianRational:
    """<mu_m, mu_m'> = (-1)^(M+m) / (binom(d1, d1/2 - m_id) binom(d2, d2/2 - m_c)) if m' = -m, else 0."""
    if (m2[0], m2[1]) != (-m[0], -m[1]):
        return ZERO
    d1, d2 = kpair[0] - 2, kpair[1] - 2
    M = M_of(kpair)
    return GaussianRational(
        Fraction(sign_power(M + m[0] + m[1]), binomial(d1, d1 // 2 - m[0]) * binomial(d2, d2 // 2 - m[1]))
    )


# --- limits and the local integral -----------------------------------------------------------


def _binom_factor(kpair: tuple[int, int], m: tuple[int, int]) -> int:
    d1, d2 = kpair[0] - 2, kpair[1] - 2
    return binomial(d1, d1 // 2 - m[0]) * binomial(d2, d2 // 2 - m[1])


def vandermonde_check(kpair: tuple[int, int], m: tuple[int, int]) -> bool:
    """sum_i binom(k_c - 1, i) binom(k_id - 1, lam - mbar + i) = binom(2M+2, M - mbar + 1)."""
    k_id, k_c = kpair
    lam, M = lam_of(kpair), M_of(kpair)
    mbar = m[0] - m[1]
    lhs = sum(
        binomial(k_c - 1, i) * (binomial(k_id - 1, lam - mbar + i) if lam - mbar + i >= 0 else 0)
        for i in range(k_c)
    )
    return lhs == binomial(2 * M + 2, M - mbar + 1)


def f_limits_complex(kpair: tuple[int, int], m: tuple[int, int]) -> PiScaled:
    """F(inf) - F(0) in closed form; also checks the binomial identity used to reach it."""
    kpair = _check_weights(kpair)
    _check_m(kpair, m)
    if not vandermonde_check(kpair, m):
        raise AssertionError(f"binomial identity fails at {kpair}, {m}")
    M = M_of(kpair)
    num = sign_power(m[0] + m[1] + M) * 2 * (2 * M + 1) * (2 * M + 2) * binomial(2 * M, kpair[0] - 2)
    return PiScaled.rational(Fraction(num, _binom_factor(kpair, m)))


def integral_complex_closed(kpair: tuple[int, int], chi: ComplexCharacter, m: tuple[int, int]) -> PiScaled:
    kpair = _check_weights(kpair)
    _check_m(kpair, m)
    if not chi.trivial:
        return PiScaled()
    return f_limits_complex(kpair, m) * 4


# A monomial of the pairing integrand: exponents of (|alpha|^2, |beta|^2, |t|), the power p
# of the denominator |beta|^2 |t|^2 + |alpha|^2, and its coefficient.
_PairTerm = tuple[int, int, int, int, GaussianRational]


def _pairing_terms(X: ComplexSeriesElem, Y: ComplexSeriesElem, shift: int) -> list[_PairTerm]:
    """Terms of t^shift-weighted circle means of <i(t) X, Y>, with every angle averaged exactly.

    On kappa(alpha, beta) diag(t, 1) the bottom row is (-conj(beta) t, conj(alpha)), so X is
    its S^3 polynomial with beta -> beta conj(t) and conj(beta) -> conj(beta) t, times
    t^(w_id/2) conj(t)^(w_c/2), over (|beta|^2 |t|^2 + |alpha|^2)^(M+n+2).  Averaging over the
    angles of alpha, beta and t keeps the monomials with matching exponents; ``shift`` is the
    extra power of t/|t| carried by the character and t^m.
    """
    w = X.char_weights
    lam, M = _lam_M(w)
    y_poly = Y.on_s3()
    y_by_key: dict[tuple[int, int], list] = {}
    for e, c in y_poly.items():
        y_by_key.setdefault((e[0] - e[1], e[2] - e[3]), []).append((e, c))
    acc: dict[tuple[int, int, int, int], GaussianRational] = {}
    for n, nu in X.harmonics.items():
        p = M + n + 2
        for e1, c1 in phi_on_s3(n, nu, lam).items():
            # t from conj(beta), conj(t) from beta
            et, etb = e1[3] + w[0] // 2, e1[2] + w[1] // 2
            if et - etb + shift != 0:
                continue
            for e2, c2 in y_by_key.get((e1[1] - e1[0], e1[3] - e1[2]), ()):
                key = (e1[0] + e2[0], e1[2] + e2[2], et + etb, p)
                v = acc.get(key, ZERO) + c1 * c2
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)
    return [(*k, c) for k, c in sorted(acc.items())]


def _polar_integral(a: int, b: int, p: int, rho: Fraction) -> tuple[Fraction, Fraction]:
    """(A, B) with int_0^1 (1-x)^a x^b (1 + (rho-1) x)^-p dx = A + B log(rho), exactly.

    With y = 1 + (rho-1) x the integrand becomes (y-1)^b (rho-y)^a y^-p over [1, rho],
    a Laurent polynomial in y whose only non-polynomial primitive is log y.
    """
    c = rho - 1
    if c == 0:
        return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 1)), Fraction(0)
    A = Fraction(0)
    B = Fraction(0)
    for i in range(b + 1):
        ci = binomial(b, i) * sign_power(b - i)
        for l in range(a + 1):
            q = ci * binomial(a, l) * sign_power(l) * rho ** (a - l)
            e = i + l - p + 1
            if e == 0:
                B += q
            else:
                A += q * (rho**e - 1) / e
    scale = c ** (a + b + 1)
    return A / scale, B / scale


def pairing_circle_mean(terms: list[_PairTerm], radius: float) -> complex:
    """Evaluate the exactly averaged pairing at |t| = radius.

    The radius is taken as the exact rational value of the float, so the pairing is
    A + B log(radius^2) with Gaussian-rational A, B.  The two parts cancel by many
    orders of magnitude once |log radius| is large; the logarithm is therefore taken
    with 20 digits to spare beyond the observed cancellation.
    """
    R = Fraction(radius)
    rho = R * R
    polar: dict[tuple[int, int, int], tuple[Fraction, Fraction]] = {}
    A = ZERO
    B = ZERO
    for a, b, e, p, coeff in terms:
        key = (a, b, p)
        if key not in polar:
            polar[key] = _polar_integral(a, b, p, rho)
        pa, pb = polar[key]
        w = coeff * R**e
        A = A + w * pa
        B = B + w * pb
    if not B:
        return complex(A)
    dps = 30
    while True:
        with mpmath.workdps(dps):
            log_rho = 2 * mpmath.log(mpmath.mpf(R.numerator) / R.denominator)
            parts = []
            for x in (A, B):
                parts.append(mpmath.mpc(
                    mpmath.mpf(x.re.numerator) / x.re.denominator,
                    mpmath.mpf(x.im.numerator) / x.im.denominator,
                ))
            total = parts[0] + parts[1] * log_rho
            size = max(abs(parts[0]), abs(parts[1] * log_rho))
            if total == 0:
                lost = float(dps)
            else:
                lost = float(mpmath.log10(size / abs(total)))
        if lost + 20 <= dps:
            return complex(total)
        if dps >= 4000:
            # the exact sum vanishes to beyond 4000 digits
            return 0j
        dps = max(2 * dps, int(lost) + 40)


def integral_complex_numeric(
    kpair: tuple[int, int],
    chi: ComplexCharacter,
    m: tuple[int, int],
    cfg: QuadConfig | None = None,
) -> quadrature.RadialResult:
    """(2/pi) int chi(t) t^m <i(t) ds(mu_m), s' ds(mu_-m)>_B dtheta dr/r, with t^m = t^m_id conj(t)^m_c.

    The angular integrals (over the circle in t and the torus in SU(2)) are exact mode
    selections; the remaining SU(2) polar integral is evaluated exactly as a rational part
    plus a logarithmic part (``_polar_integral``), and the radial integral is quadrature in log r.
    """
    cfg = cfg or quadrature.DEFAULT
    kpair = _check_weights(kpair)
    _check_m(kpair, m)
    X = delta_s_complex(kpair, make_mu_m_complex(kpair, m))
    Y = s_prime_complex(delta_s_complex(kpair, make_mu_m_complex(kpair, (-m[0], -m[1]))))
    terms = _pairing_terms(X, Y, chi.circle_mode + m[0] - m[1])
    shift_r = m[0] + m[1]

    def radial(r: float) -> complex:
        # (2/pi) * 2pi * mean over the circle
        return 4 * r**shift_r * pairing_circle_mean(terms, r)

    return quadrature.radial_quad(radial, cfg, detail=True)


def integral_complex(
    kpair: tuple[int, int],
    chi: ComplexCharacter,
    m: tuple[int, int],
    mode: str = "closed",
    cfg: QuadConfig | None = None,
):
    if mode == "closed":
        return integral_complex_closed(kpair, chi, m)
    if mode == "numeric":
        return integral_complex_numeric(kpair, chi, m, cfg).value
    raise ValueError(f"unknown mode {mode!r}")


# --- canonical-section constants ----------------------------------------------------------


def upsilon_terms(kpair: tuple[int, int]) -> Iterable[tuple[TensorDual, TensorDual, GaussianRational]]:
    """Upsilon = Upsilon_id (x) Upsilon_c as a sum of coeff * e_(a,b) (x) e_(a',b')."""
    kpair = _check_weights(kpair)
    d1, d2 = kpair[0] - 2, kpair[1] - 2
    U1, U2 = make_upsilon(kpair[0]), make_upsilon(kpair[1])
    for a, a2, v in U1.entries():
        for b, b2, w in U2.entries():
            yield TensorDual.basis(d1, d2, a, b), TensorDual.basis(d1, d2, a2, b2), v * w


def upsilon_pair_complex_pipeline(kpair: tuple[int, int]) -> PiScaled:
    """<ds(Upsilon)> through the algebraic pipeline."""
    cache: dict[tuple, ComplexSeriesElem] = {}

    def ds(mu: TensorDual) -> ComplexSeriesElem:
        key = mu.values
        if key not in cache:
            cache[key] = delta_s_complex(kpair, mu)
        return cache[key]

    total = ZERO
    for e1, e2, c in upsilon_terms(kpair):
        total = total + c * pair_discrete_complex(ds(e1), ds(e2))
    return PiScaled.rational(total)


def upsilon_pair_complex_closed(kpair: tuple[int, int]) -> PiScaled:
    """(2/3) binom(2M, k_id-2)^2 binom(2M+2, k_id-1)^-1 (2M+2)^2 (2M+1)^2."""
    kpair = _check_weights(kpair)
    M = M_of(kpair)
    v = Fraction(2, 3) * binomial(2 * M, kpair[0] - 2) ** 2 * (2 * M + 2) ** 2 * (2 * M + 1) ** 2
    return PiScaled.rational(v / binomial(2 * M + 2, kpair[0] - 1))


def upsilon_pair_complex(kpair: tuple[int, int]) -> PiScaled:
    """Pipeline value, asserted equal to the closed form."""
    pipe = upsilon_pair_complex_pipeline(kpair)
    closed = upsilon_pair_complex_closed(kpair)
    if pipe != closed:
        raise AssertionError(f"<ds(Upsilon)> pipeline {pipe} != closed {closed} at {kpair}")
    return pipe


def mu0_pair_complex_pipeline(kpair: tuple[int, int]) -> PiScaled:
    X = delta_s_complex(kpair, make_mu_m_complex(kpair, (0, 0)))
    return PiScaled.rational(pair_discrete_complex(X, X))


def mu0_pair_complex_closed(kpair: tuple[int, int]) -> PiScaled:
    """4 (-1)^M (2M+2)^2 (2M+1)^2 / ((2M+3) binom(2M+2, k_id-1) binom(2M+2, M+1)) binom(2M, k_id-2)^2."""
    kpair = _check_weights(kpair)
    M = M_of(kpair)
    num = 4 * sign_power(M) * (2 * M + 2) ** 2 * (2 * M + 1) ** 2 * binomial(2 * M, kpair[0] - 2) ** 2
    den = (2 * M + 3) * binomial(2 * M + 2, kpair[0] - 1) * binomial(2 * M + 2, M + 1)
    return PiScaled.rational(Fraction(num, den))


def mu0_pair_complex(kpair: tuple[int, int]) -> PiScaled:
    pipe = mu0_pair_complex_pipeline(kpair)
    closed = mu0_pair_complex_closed(kpair)
    if pipe != closed:
        raise AssertionError(f"<ds(mu_0), ds(mu_0)> pipeline {pipe} != closed {closed} at {kpair}")
    return pipe
