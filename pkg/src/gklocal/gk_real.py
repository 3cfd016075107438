"""Principal series of PGL2(R) in the K-finite basis f_n, and the local torus integral.

Elements are finite sums c_n f_n with f_n(u [[y, x], [0, 1/y]] kappa(theta)) = y^w e^{2 i n theta},
where w = k for the series of weight k and w = 2 - k for its dual.  The finite
quotient V(k-2) is reached through the basis P_m = (Y + iX)^m (Y - iX)^(k-2-m),
on which f_n integrates to 1 exactly when n = m - (k-2)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import quadrature
from .polyrep import (
    DualVec,
    det,
    linear_power_product,
    lie_delta_dual,
    make_mu_m,
    make_upsilon,
    pair_prime,
)
from .quadrature import QuadConfig
from .scalars import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    Number,
    PiScaled,
    binomial,
    i_power,
    sign_power,
)

CHI_K = "chi_k"
CHI_DUAL = "chi_2-k"


@dataclass(frozen=True)
class RealSeriesElem:
    weight: int
    parity: int
    coeffs: Mapping[int, GaussianRational] = field(default_factory=dict)
    kind: str = CHI_K

    def __post_init__(self) -> None:
        if self.weight < 2 or self.weight % 2:
            raise ValueError("weight must be even and at least 2")
        if self.parity not in (1, -1):
            raise ValueError("parity must be +1 or -1")
        if self.kind not in (CHI_K, CHI_DUAL):
            raise ValueError(f"unknown series kind {self.kind!r}")
        clean = {}
        for n, c in self.coeffs.items():
            g = GaussianRational.coerce(c)
            if g:
                clean[int(n)] = g
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @property
    def char_weight(self) -> int:
        return self.weight if self.kind == CHI_K else 2 - self.weight

    def _like(self, coeffs: Mapping[int, GaussianRational]) -> RealSeriesElem:
        return RealSeriesElem(self.weight, self.parity, coeffs, self.kind)

    def __add__(self, other: RealSeriesElem) -> RealSeriesElem:
        self._check_compatible(other)
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, ZERO) + c
        return self._like(out)

    def __sub__(self, other: RealSeriesElem) -> RealSeriesElem:
        return self + other.scale(-1)

    def scale(self, c: Number) -> RealSeriesElem:
        c = GaussianRational.coerce(c)
        return self._like({n: c * v for n, v in self.coeffs.items()})

    def _check_compatible(self, other: RealSeriesElem) -> None:
        if (self.weight, self.parity, self.kind) != (other.weight, other.parity, other.kind):
            raise ValueError("series elements live in different modules")

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> set[int]:
        return set(self.coeffs)

    def in_discrete_series(self) -> bool:
        return all(abs(n) >= self.weight // 2 for n in self.coeffs)


@dataclass(frozen=True)
class RealCharacter:
    sign_at_minus_one: int

    def __post_init__(self) -> None:
        if self.sign_at_minus_one not in (1, -1):
            raise ValueError("a character of R^x / R_+ takes the value +1 or -1 at -1")


def basis_elem(k: int, n: int, parity: int = 1, kind: str = CHI_K, coeff: Number = 1) -> RealSeriesElem:
    return RealSeriesElem(k, parity, {n: GaussianRational.coerce(coeff)}, kind)


# --- evaluation -----------------------------------------------------------------


def _is_exact_matrix(g) -> bool:
    return all(isinstance(x, GaussianRational) for row in g for x in row)


def eval_f_n(k: int, n: int, g, exact: bool | None = None, kind: str = CHI_K):
    """f_n at a matrix of positive determinant.

    With bottom row (r, s) and determinant D the value is
    D^(w/2) (r^2 + s^2)^(n - w/2) / (s + r i)^(2n); exact for Gaussian-rational entries.
    """
    w = k if kind == CHI_K else 2 - k
    if exact is None:
        exact = _is_exact_matrix(g)
    if exact:
        D = det(g)
        if D.im != 0 or D.re <= 0:
            raise ValueError("f_n is evaluated on matrices of positive determinant")
        r, s = g[1][0], g[1][1]
        return D ** (w // 2) * (r * r + s * s) ** (n - w // 2) * (s + r * I) ** (-2 * n)
    ga = np.asarray(g, dtype=complex)
    D = ga[0, 0] * ga[1, 1] - ga[0, 1] * ga[1, 0]
    if abs(D.imag) > 1e-12 * max(1.0, abs(D)) or D.real <= 0:
        raise ValueError("f_n is evaluated on matrices of positive determinant")
    D = D.real
    r, s = ga[1, 0].real, ga[1, 1].real
    return D ** (w / 2) * (r * r + s * s) ** (n - w / 2) / complex(s, r) ** (2 * n)


def eval_series(f: RealSeriesElem, g, exact: bool | None = None):
    if exact is None:
        exact = _is_exact_matrix(g)
    total = ZERO if exact else 0j
    for n, c in f.coeffs.items():
        v = eval_f_n(f.weight, n, g, exact, f.kind)
        total = total + (c * v if exact else complex(c) * v)
    return total


def eval_on_translates(f: RealSeriesElem, theta: np.ndarray, t: float) -> np.ndarray:
    """Values of f at kappa(theta) diag(t, 1), t > 0, continued to complex theta.

    With A = cos - i t sin and B = cos + i t sin one has
    f_n = t^(w/2) B^(n - w/2) A^(-n - w/2), holomorphic in theta away from the
    zeros of A (all below the real axis) and of B (all above it).
    """
    w = f.char_weight
    cos, sin = np.cos(theta), np.sin(theta)
    if t > 1:
        # divide A and B by t so large t neither overflows nor underflows
        A = cos / t - 1j * sin
        B = cos / t + 1j * sin
        pref = t ** (-w / 2)
    else:
        A = cos - 1j * t * sin
        B = cos + 1j * t * sin
        pref = t ** (w / 2)
    out = np.zeros(np.shape(theta), dtype=complex)
    for n, c in f.coeffs.items():
        out += complex(c) * pref * B ** (n - w // 2) * A ** (-n - w // 2)
    return out


def _contour_side(f: RealSeriesElem, n: int) -> int:
    """+1 if the translated f_n has poles only below the real axis, -1 if only above, 0 if both."""
    w = f.char_weight
    a_pole = -n - w // 2 < 0
    b_pole = n - w // 2 < 0
    if a_pole and b_pole:
        return 0
    return -1 if b_pole else 1


# --- the quotient map and its section ---------------------------------------------


def _pm_poly(d: int, m: int) -> list[GaussianRational]:
    """Coefficients of (Y + iX)^m (Y - iX)^(d-m) by power of X."""
    return linear_power_product((I, ONE), m, (-I, ONE), d - m)


def _monomial_in_pm(d: int, a: int) -> list[GaussianRational]:
    """X^a Y^(d-a) written in the basis P_m: entry m is the coefficient of P_m."""
    # X = (u - v)/(2i), Y = (u + v)/2 with u = Y + iX, v = Y - iX, P_m = u^m v^(d-m)
    coeffs = linear_power_product((1, -1), a, (1, 1), d - a)
    scale = (GaussianRational(0, 2) ** (-a)) * Fraction(1, 2 ** (d - a))
    return [scale * c for c in coeffs]


def section_s(k: int, parity: int, mu: DualVec) -> RealSeriesElem:
    """The SO(2)-equivariant section: sum over |n| <= (k-2)/2 of mu(P_{n+(k-2)/2}) f_n."""
    d = k - 2
    if mu.degree != d:
        raise ValueError(f"expected a dual vector of degree {d}")
    coeffs = {}
    for m in range(d + 1):
        coeffs[m - d // 2] = _apply(mu, _pm_poly(d, m))
    return RealSeriesElem(k, parity, coeffs, CHI_K)


def _apply(mu: DualVec, coeffs: list[GaussianRational]) -> GaussianRational:
    total = ZERO
    for v, c in zip(mu.values, coeffs):
        if v and c:
            total = total + v * c
    return total


def rho_real(f: RealSeriesElem) -> DualVec:
    """Projection to V(k-2): integrate against P(-sin, cos), read off via the P_m basis."""
    if f.kind != CHI_K:
        raise ValueError("rho is defined on the weight-k series")
    d = f.weight - 2
    on_pm = [f.coeffs.get(m - d // 2, ZERO) for m in range(d + 1)]
    values = []
    for a in range(d + 1):
        values.append(_apply_list(_monomial_in_pm(d, a), on_pm))
    return DualVec(d, tuple(values))


def _apply_list(xs: list[GaussianRational], ys: list[GaussianRational]) -> GaussianRational:
    total = ZERO
    for x, y in zip(xs, ys):
        if x and y:
            total = total + x * y
    return total


# --- Lie algebra ------------------------------------------------------------------


def lie_delta_real(f: RealSeriesElem) -> RealSeriesElem:
    """Derivative along diag(e^t, 1): f_n -> (w/2 + n)/2 f_{n+1} + (w/2 - n)/2 f_{n-1}."""
    w = f.char_weight
    out: dict[int, GaussianRational] = {}
    for n, c in f.coeffs.items():
        up = c * Fraction(w + 2 * n, 4)
        down = c * Fraction(w - 2 * n, 4)
        out[n + 1] = out.get(n + 1, ZERO) + up
        out[n - 1] = out.get(n - 1, ZERO) + down
    return f._like(out)


def delta_s_real(k: int, parity: int, mu: DualVec) -> RealSeriesElem:
    """delta(s(mu)) - s(delta mu), the defect of the section from being Lie-equivariant.

    The result is returned as an element of the weight-k series itself, i.e.
    before identifying it with the discrete series; ``untwist`` performs that step.
    """
    s_mu = section_s(k, parity, mu)
    out = lie_delta_real(s_mu) - section_s(k, parity, lie_delta_dual(mu))
    if not out.in_discrete_series():
        raise AssertionError(f"delta s leaked outside the discrete series: support {sorted(out.support())}")
    return out


def delta_s_real_closed_form(k: int, parity: int, m: int) -> RealSeriesElem:
    """(k-1)/2 ((-i)^((k-2)/2+m) f_{k/2} + i^((k-2)/2+m) f_{-k/2})."""
    e = (k - 2) // 2 + m
    c = Fraction(k - 1, 2)
    return RealSeriesElem(k, parity, {k // 2: i_power(-e) * c, -k // 2: i_power(e) * c}, CHI_K)


def untwist(f: RealSeriesElem) -> RealSeriesElem:
    """Inverse of the embedding of the discrete series: f_n -> parity^[n<0] f_n."""
    return f._like({n: (c * f.parity if n < 0 else c) for n, c in f.coeffs.items()})


def w_action(f: RealSeriesElem) -> RealSeriesElem:
    """The extension to O(2): w f_n = parity (-1)^((k-2)/2) f_{-n}."""
    if f.kind != CHI_K:
        raise ValueError("w is fixed only on the weight-k series")
    c = f.parity * sign_power((f.weight - 2) // 2)
    return f._like({-n: v * c for n, v in f.coeffs.items()})


def rotate(f: RealSeriesElem, cos: Number, sin: Number) -> RealSeriesElem:
    """Right translation by kappa(phi) given rational cos(phi), sin(phi)."""
    e = GaussianRational.coerce(cos) + GaussianRational.coerce(sin) * I
    return f._like({n: c * e ** (2 * n) for n, c in f.coeffs.items()})


# --- pairings -----------------------------------------------------------------------


def pair_B_real(f: RealSeriesElem, h: RealSeriesElem) -> GaussianRational:
    """Integral over the circle (mass 1) of f h; f_n and f_{n'} pair to 1 iff n + n' = 0."""
    if f.kind == h.kind:
        raise ValueError("the pairing needs one element from each series")
    if f.weight != h.weight:
        raise ValueError("weight mismatch")
    total = ZERO
    for n, c in f.coeffs.items():
        other = h.coeffs.get(-n)
        if other is not None:
            total = total + c * other
    return total


def s_prime_real(h: RealSeriesElem) -> RealSeriesElem:
    """The dual section on the minimal K-types, normalized to f_{+-k/2} -> f_{+-k/2}."""
    k = h.weight
    if h.kind != CHI_K:
        raise ValueError("s' takes elements of the weight-k side")
    if not h.support() <= {k // 2, -k // 2}:
        raise ValueError(f"s' is only fixed on f_(+-{k // 2}); support {sorted(h.support())}")
    return RealSeriesElem(k, h.parity, h.coeffs, CHI_DUAL)


def _laurent_mul(p: dict[int, GaussianRational], q: dict[int, GaussianRational]) -> dict[int, GaussianRational]:
    out: dict[int, GaussianRational] = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, ZERO) + a * b
    return out


def _laurent_pow(p: dict[int, GaussianRational], e: int) -> dict[int, GaussianRational]:
    out = {0: ONE}
    for _ in range(e):
        out = _laurent_mul(out, p)
    return out


_COS = {1: GaussianRational(Fraction(1, 2)), -1: GaussianRational(Fraction(1, 2))}
_SIN = {1: GaussianRational(0, Fraction(-1, 2)), -1: GaussianRational(0, Fraction(1, 2))}


def rho_dual_real(mu: DualVec, parity: int = 1) -> RealSeriesElem:
    """mu((X cos + Y sin)^(k-2)) on the circle, expanded into modes e^{2 i n theta}."""
    d = mu.degree
    k = d + 2
    total: dict[int, GaussianRational] = {}
    for a, v in enumerate(mu.values):
        if not v:
            continue
        term = _laurent_mul(_laurent_pow(_COS, a), _laurent_pow(_SIN, d - a))
        c = v * binomial(d, a)
        for e, x in term.items():
            total[e] = total.get(e, ZERO) + c * x
    if any(e % 2 for e, x in total.items() if x):
        raise AssertionError("odd Fourier mode in an even-degree expansion")
    return RealSeriesElem(k, parity, {e // 2: x for e, x in total.items()}, CHI_DUAL)


def pair_V_real(mu1: DualVec, mu2: DualVec, parity: int = 1) -> GaussianRational:
    if mu1.degree != mu2.degree:
        raise ValueError("degree mismatch")
    k = mu1.degree + 2
    return pair_B_real(section_s(k, parity, mu1), rho_dual_real(mu2, parity))


def pair_discrete(f: RealSeriesElem, h: RealSeriesElem) -> GaussianRational:
    """<f, s'(h)>_B for two elements of the weight-k series supported on the minimal K-types."""
    return pair_B_real(f, s_prime_real(h))


# --- limits and the local integral ---------------------------------------------------


@dataclass(frozen=True)
class RealLimits:
    at_zero: Fraction
    at_infinity: Fraction
    closed_form: PiScaled


def f_limits_real_parts(k: int, m: int) -> RealLimits:
    """The two one-sided limits from their binomial sums, and the closed difference."""
    d = k - 2
    if abs(m) > d // 2:
        raise ValueError(f"|m| must be at most {d // 2}")
    B = binomial(d, d // 2 - m)
    lower = sum(binomial(k, d // 2 - m - 2 * s) for s in range(k + 1))
    upper = sum(binomial(k, d // 2 - m + 2 * s + 2) for s in range(k + 1))
    at_zero = Fraction(sign_power(m - 1) * (k - 1) * lower, B)
    at_inf = Fraction(sign_power(m) * (k - 1) * upper, B)
    closed = PiScaled.rational(Fraction(sign_power(m) * 2 ** (k - 1) * (k - 1), B))
    return RealLimits(at_zero, at_inf, closed)


def f_limits_real(k: int, m: int) -> PiScaled:
    """F(inf) - F(0+) = (-1)^m 2^(k-1) (k-1) / binom(k-2, (k-2)/2 - m), checked against the sums."""
    parts = f_limits_real_parts(k, m)
    if PiScaled.rational(parts.at_infinity - parts.at_zero) != parts.closed_form:
        raise AssertionError(f"binomial-sum route disagrees with the closed form at k={k}, m={m}")
    return parts.closed_form


def integral_real_closed(k: int, parity: int, chi: RealCharacter, m: int) -> PiScaled:
    d = k - 2
    if abs(m) > d // 2:
        raise ValueError(f"|m| must be at most {d // 2}")
    if chi.sign_at_minus_one != parity:
        return PiScaled()
    return PiScaled.rational(
        Fraction(sign_power(m) * 2**k * (k - 1), binomial(d, d // 2 - m))
    )


_CONTOUR_SHIFT = 1.0


def integral_real_numeric(
    k: int, parity: int, chi: RealCharacter, m: int, cfg: QuadConfig | None = None
) -> quadrature.RadialResult:
    """Quadrature of chi(t) t^m <i(t) ds(mu_m), s' ds(mu_-m)>_B over R^x with dt/|t|.

    Negative t are reached as diag(|t|, 1) times diag(-1, 1), and the latter acts
    through the O(2)-extension w.  Each circle integral is taken on a line shifted
    off the real axis (see ``circle_quad``), away from the poles of the translate.
    """
    cfg = cfg or quadrature.DEFAULT
    d = k - 2
    if abs(m) > d // 2:
        raise ValueError(f"|m| must be at most {d // 2}")
    X = delta_s_real(k, parity, make_mu_m(k, m))
    Xw = w_action(X)
    Y = s_prime_real(delta_s_real(k, parity, make_mu_m(k, -m)))
    sign = chi.sign_at_minus_one * sign_power(m)

    def pairing(elem: RealSeriesElem, t: float) -> complex:
        total = 0j
        for n, c in elem.coeffs.items():
            term = RealSeriesElem(k, parity, {n: c}, CHI_K)

            def integrand(theta: np.ndarray, term=term) -> np.ndarray:
                return eval_on_translates(term, theta, t) * eval_on_translates(Y, theta, 1.0)

            total += quadrature.circle_quad(integrand, cfg, shift=_CONTOUR_SHIFT * _contour_side(term, n))
        return total

    def radial(t: float) -> complex:
        return t**m * (pairing(X, t) + sign * pairing(Xw, t))

    return quadrature.radial_quad(radial, cfg, detail=True)


def integral_real(
    k: int,
    parity: int,
    chi: RealCharacter,
    m: int,
    mode: str = "closed",
    cfg: QuadConfig | None = None,
):
    if mode == "closed":
        return integral_real_closed(k, parity, chi, m)
    if mode == "numeric":
        return integral_real_numeric(k, parity, chi, m, cfg).value
    raise ValueError(f"unknown mode {mode!r}")


# --- canonical-section constants ------------------------------------------------------


@dataclass(frozen=True)
class UpsilonPairing:
    delta_pairing: PiScaled
    prime_pairing: PiScaled
    ratio: PiScaled
    closed_delta_pairing: PiScaled
    closed_prime_pairing: PiScaled
    closed_ratio: PiScaled


def upsilon_pair_real(k: int, parity: int = 1) -> UpsilonPairing:
    """<ds(Upsilon)> and <Upsilon>' from the pipeline, beside the closed values."""
    if k < 2 or k % 2:
        raise ValueError("weight must be even and at least 2")
    d = k - 2
    U = make_upsilon(k)
    images = [delta_s_real(k, parity, DualVec.basis(d, a)) for a in range(d + 1)]
    delta_total = ZERO
    prime_total = ZERO
    for a, b, v in U.entries():
        delta_total = delta_total + v * pair_discrete(images[a], images[b])
        prime_total = prime_total + v * pair_prime(DualVec.basis(d, a), DualVec.basis(d, b))
    closed_delta = PiScaled.rational((k - 1) ** 2 * Fraction(2) ** (k - 3))
    closed_prime = PiScaled.rational(k - 1)
    return UpsilonPairing(
        PiScaled.rational(delta_total),
        PiScaled.rational(prime_total),
        PiScaled.rational(delta_total / prime_total),
        closed_delta,
        closed_prime,
        closed_delta / closed_prime,
    )


def mu0_pair_real(k: int, parity: int = 1) -> PiScaled:
    """<ds(mu_0), ds(mu_0)> by the pipeline."""
    X = delta_s_real(k, parity, make_mu_m(k, 0))
    return PiScaled.rational(pair_discrete(X, X))


def mu0_pair_real_closed(k: int) -> PiScaled:
    return PiScaled.rational(Fraction((k - 1) ** 2, 2))
