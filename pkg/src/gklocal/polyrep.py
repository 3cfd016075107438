"""Homogeneous polynomials in two variables, their duals, and the GL2 actions on both.

A ``HomPoly`` of degree k stores the coefficient of X^a Y^(k-a) at index a; a
``DualVec`` stores mu(X^a Y^(k-a)) at index a.  Dual vectors are identified
with polynomials in a second pair of variables (x, y) through
mu -> mu((X y - Y x)^k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .scalars import ONE, ZERO, GaussianRational, Number, binomial, sign_power

Matrix = tuple[tuple[GaussianRational, GaussianRational], tuple[GaussianRational, GaussianRational]]


def _gr(x: Number) -> GaussianRational:
    return GaussianRational.coerce(x)


def _check_even(k: int) -> None:
    if not isinstance(k, int) or k < 0 or k % 2:
        raise ValueError(f"degree must be a nonnegative even integer, got {k!r}")


@dataclass(frozen=True)
class HomPoly:
    degree: int
    coeffs: tuple[GaussianRational, ...]

    def __post_init__(self) -> None:
        _check_even(self.degree)
        coeffs = tuple(_gr(c) for c in self.coeffs)
        if len(coeffs) != self.degree + 1:
            raise ValueError("HomPoly needs degree+1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, k: int) -> HomPoly:
        return cls(k, (ZERO,) * (k + 1))

    @classmethod
    def monomial(cls, k: int, a: int, coeff: Number = 1) -> HomPoly:
        c = [ZERO] * (k + 1)
        c[a] = _gr(coeff)
        return cls(k, tuple(c))

    def __add__(self, other: HomPoly) -> HomPoly:
        _same_degree(self.degree, other.degree)
        return HomPoly(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: HomPoly) -> HomPoly:
        _same_degree(self.degree, other.degree)
        return HomPoly(self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: Number) -> HomPoly:
        c = _gr(c)
        return HomPoly(self.degree, tuple(c * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class DualVec:
    degree: int
    values: tuple[GaussianRational, ...]

    def __post_init__(self) -> None:
        _check_even(self.degree)
        values = tuple(_gr(c) for c in self.values)
        if len(values) != self.degree + 1:
            raise ValueError("DualVec needs degree+1 values")
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, k: int) -> DualVec:
        return cls(k, (ZERO,) * (k + 1))

    @classmethod
    def basis(cls, k: int, a: int, coeff: Number = 1) -> DualVec:
        """The functional dual to X^a Y^(k-a)."""
        v = [ZERO] * (k + 1)
        v[a] = _gr(coeff)
        return cls(k, tuple(v))

    def __add__(self, other: DualVec) -> DualVec:
        _same_degree(self.degree, other.degree)
        return DualVec(self.degree, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: DualVec) -> DualVec:
        _same_degree(self.degree, other.degree)
        return DualVec(self.degree, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c: Number) -> DualVec:
        c = _gr(c)
        return DualVec(self.degree, tuple(c * a for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def apply(self, P: HomPoly) -> GaussianRational:
        _same_degree(self.degree, P.degree)
        total = ZERO
        for v, c in zip(self.values, P.coeffs):
            if v and c:
                total = total + v * c
        return total

    def to_json(self) -> list:
        return [[[c.re.numerator, c.re.denominator], [c.im.numerator, c.im.denominator]] for c in self.values]


@dataclass(frozen=True)
class TensorDual:
    """Element of V(k1) (x) V(k2); values[a][b] = mu(X1^a Y1^(k1-a) X2^b Y2^(k2-b))."""

    degrees: tuple[int, int]
    values: tuple[tuple[GaussianRational, ...], ...]

    def __post_init__(self) -> None:
        k1, k2 = self.degrees
        _check_even(k1)
        _check_even(k2)
        rows = tuple(tuple(_gr(c) for c in row) for row in self.values)
        if len(rows) != k1 + 1 or any(len(r) != k2 + 1 for r in rows):
            raise ValueError("TensorDual shape does not match its degrees")
        object.__setattr__(self, "values", rows)

    @classmethod
    def zero(cls, k1: int, k2: int) -> TensorDual:
        return cls((k1, k2), tuple((ZERO,) * (k2 + 1) for _ in range(k1 + 1)))

    @classmethod
    def basis(cls, k1: int, k2: int, a: int, b: int, coeff: Number = 1) -> TensorDual:
        rows = [[ZERO] * (k2 + 1) for _ in range(k1 + 1)]
        rows[a][b] = _gr(coeff)
        return cls((k1, k2), tuple(tuple(r) for r in rows))

    @classmethod
    def outer(cls, mu1: DualVec, mu2: DualVec) -> TensorDual:
        return cls(
            (mu1.degree, mu2.degree),
            tuple(tuple(a * b for b in mu2.values) for a in mu1.values),
        )

    def __add__(self, other: TensorDual) -> TensorDual:
        if self.degrees != other.degrees:
            raise ValueError("degree mismatch")
        return TensorDual(
            self.degrees,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.values, other.values)),
        )

    def __sub__(self, other: TensorDual) -> TensorDual:
        return self + other.scale(-1)

    def scale(self, c: Number) -> TensorDual:
        c = _gr(c)
        return TensorDual(self.degrees, tuple(tuple(c * a for a in r) for r in self.values))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.values)

    def entries(self):
        """Nonzero entries as (a, b, value)."""
        for a, row in enumerate(self.values):
            for b, v in enumerate(row):
                if v:
                    yield a, b, v


def _same_degree(k1: int, k2: int) -> None:
    if k1 != k2:
        raise ValueError(f"degree mismatch: {k1} vs {k2}")


# --- matrices -------------------------------------------------------------


def matrix(a: Number, b: Number, c: Number, d: Number) -> Matrix:
    return ((_gr(a), _gr(b)), (_gr(c), _gr(d)))


def det(g: Matrix) -> GaussianRational:
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def mat_mul(g: Matrix, h: Matrix) -> Matrix:
    return tuple(
        tuple(g[i][0] * h[0][j] + g[i][1] * h[1][j] for j in range(2)) for i in range(2)
    )  # type: ignore[return-value]


def mat_inv(g: Matrix) -> Matrix:
    D = det(g)
    if not D:
        raise ValueError("singular matrix")
    return matrix(g[1][1] / D, -g[0][1] / D, -g[1][0] / D, g[0][0] / D)


def mat_conj(g: Matrix) -> Matrix:
    return matrix(*(g[i][j].conjugate() for i in range(2) for j in range(2)))


def su2(alpha: Number, beta: Number) -> Matrix:
    """The unitary matrix [[alpha, beta], [-conj(beta), conj(alpha)]]."""
    a, b = _gr(alpha), _gr(beta)
    return matrix(a, b, -b.conjugate(), a.conjugate())


# --- polynomial helpers on coefficient lists (index = power of the first variable)


def _mul_lists(p: Sequence[GaussianRational], q: Sequence[GaussianRational]) -> list[GaussianRational]:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return out


def _pow_list(p: Sequence[GaussianRational], e: int) -> list[GaussianRational]:
    out: list[GaussianRational] = [ONE]
    for _ in range(e):
        out = _mul_lists(out, p)
    return out


def linear_power_product(
    first: tuple[Number, Number], e1: int, second: tuple[Number, Number], e2: int
) -> list[GaussianRational]:
    """Coefficients of (u X + v Y)^e1 (u' X + v' Y)^e2, index = power of X."""
    u1, v1 = (_gr(z) for z in first)
    u2, v2 = (_gr(z) for z in second)
    return _mul_lists(_pow_list([v1, u1], e1), _pow_list([v2, u2], e2))


def _action_matrix(g: Matrix, k: int) -> list[list[GaussianRational]]:
    """Column a holds the coefficients of g acting on X^a Y^(k-a)."""
    _check_even(k)
    D = det(g)
    if not D:
        raise ValueError("singular matrix")
    (a, b), (c, d) = g
    scale = D ** (-(k // 2))
    cols = []
    for e in range(k + 1):
        col = linear_power_product((a, c), e, (b, d), k - e)
        cols.append([scale * x for x in col])
    return cols


def act_matrix(g: Matrix, P: HomPoly) -> HomPoly:
    """det(g)^(-k/2) P(aX + cY, bX + dY)."""
    cols = _action_matrix(g, P.degree)
    out = [ZERO] * (P.degree + 1)
    for e, p in enumerate(P.coeffs):
        if not p:
            continue
        for j, x in enumerate(cols[e]):
            if x:
                out[j] = out[j] + p * x
    return HomPoly(P.degree, tuple(out))


def act_dual(g: Matrix, mu: DualVec) -> DualVec:
    """(g mu)(P) = mu(g^-1 P)."""
    cols = _action_matrix(mat_inv(g), mu.degree)
    return DualVec(
        mu.degree,
        tuple(
            _dot(cols[j], mu.values) for j in range(mu.degree + 1)
        ),
    )


def _dot(xs: Sequence[GaussianRational], ys: Sequence[GaussianRational]) -> GaussianRational:
    total = ZERO
    for x, y in zip(xs, ys):
        if x and y:
            total = total + x * y
    return total


def act_tensor(g1: Matrix, g2: Matrix, T: TensorDual) -> TensorDual:
    """(g1 (x) g2) applied to a tensor of dual vectors."""
    k1, k2 = T.degrees
    c1 = _action_matrix(mat_inv(g1), k1)
    c2 = _action_matrix(mat_inv(g2), k2)
    rows = []
    for i in range(k1 + 1):
        row = []
        for j in range(k2 + 1):
            total = ZERO
            for a, b, v in T.entries():
                x = c1[i][a]
                y = c2[j][b]
                if x and y:
                    total = total + v * x * y
            row.append(total)
        rows.append(tuple(row))
    return TensorDual((k1, k2), tuple(rows))


# --- the isomorphism V(k) -> P(k) ----------------------------------------------


def dual_to_poly(mu: DualVec) -> HomPoly:
    """mu((X y - Y x)^k) as a polynomial in (x, y)."""
    k = mu.degree
    return HomPoly(
        k, tuple(binomial(k, a) * sign_power(a) * mu.values[k - a] for a in range(k + 1))
    )


def poly_to_dual(P: HomPoly) -> DualVec:
    """Inverse of ``dual_to_poly``."""
    k = P.degree
    return DualVec(
        k,
        tuple(P.coeffs[k - j] * Fraction(sign_power(k - j), binomial(k, k - j)) for j in range(k + 1)),
    )


def make_mu_m(k: int, m: int) -> DualVec:
    """The weight vector in V(k-2) sent to x^((k-2)/2-m) y^((k-2)/2+m) by ``dual_to_poly``."""
    _check_even(k)
    if k < 2:
        raise ValueError("weight must be at least 2")
    d = k - 2
    if abs(m) > d // 2:
        raise ValueError(f"|m| must be at most {d // 2}, got {m}")
    return poly_to_dual(HomPoly.monomial(d, d // 2 - m))


def pair_prime(mu1: DualVec, mu2: DualVec) -> GaussianRational:
    """mu2 mu1 applied to (X1 Y2 - Y1 X2)^k."""
    _same_degree(mu1.degree, mu2.degree)
    k = mu1.degree
    total = ZERO
    for j in range(k + 1):
        a, b = mu1.values[j], mu2.values[k - j]
        if a and b:
            total = total + a * b * (binomial(k, j) * sign_power(k - j))
    return total


def pair_P(P1: HomPoly, P2: HomPoly) -> GaussianRational:
    """The invariant pairing on P(k): x^i y^(k-i) against x^(k-i) y^i gives (-1)^i / binom(k, i)."""
    _same_degree(P1.degree, P2.degree)
    k = P1.degree
    total = ZERO
    for i in range(k + 1):
        a, b = P1.coeffs[i], P2.coeffs[k - i]
        if a and b:
            total = total + a * b * Fraction(sign_power(i), binomial(k, i))
    return total


def make_upsilon(k1: int, k2: int | None = None) -> TensorDual:
    """Preimage of (x1 y2 - y1 x2)^(k-2) in V(k-2) (x) V(k-2).

    Weights are given as k (the tensor lives in degree k-2).  Unequal weights
    carry no invariant tensor and give zero.
    """
    if k2 is None:
        k2 = k1
    _check_even(k1)
    _check_even(k2)
    d1, d2 = k1 - 2, k2 - 2
    if d1 != d2:
        return TensorDual.zero(d1, d2)
    d = d1
    rows = [[ZERO] * (d + 1) for _ in range(d + 1)]
    # (x1 y2 - y1 x2)^d = sum_j binom(d,j) (-1)^(d-j) x1^j y1^(d-j) x2^(d-j) y2^j,
    # and x^a y^(d-a) pulls back to (-1)^a / binom(d, a) at dual index d-a.
    for j in range(d + 1):
        c1 = Fraction(sign_power(j), binomial(d, j))
        c2 = Fraction(sign_power(d - j), binomial(d, d - j))
        rows[d - j][j] = _gr(binomial(d, j) * sign_power(d - j) * c1 * c2)
    return TensorDual((d, d), tuple(tuple(r) for r in rows))


def pair_tensor(T: TensorDual, form: Callable[[DualVec, DualVec], GaussianRational]) -> GaussianRational:
    """Apply a bilinear form to a tensor by linearity on basis pairs."""
    k1, k2 = T.degrees
    total = ZERO
    for a, b, v in T.entries():
        total = total + v * form(DualVec.basis(k1, a), DualVec.basis(k2, b))
    return total


def lie_delta_dual(mu: DualVec) -> DualVec:
    """Derivative at t=0 of diag(e^t, 1) acting on V(k): index a scales by (k/2 - a)."""
    k = mu.degree
    return DualVec(k, tuple(v * (Fraction(k, 2) - a) for a, v in enumerate(mu.values)))
