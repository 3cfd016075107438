"""Exact scalars: Gaussian rationals and finite sums of half-integer powers of pi."""

from __future__ import annotations

import decimal
import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

import mpmath

Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """A number re + i*im with re, im rational. Stored reduced, so equality is structural."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x: Number) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        if isinstance(x, complex):
            raise TypeError("floating complex values cannot be coerced exactly")
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def __add__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Number) -> GaussianRational:
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: Number) -> GaussianRational:
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: Number) -> GaussianRational:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational(self.re / other, self.im / other)
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> GaussianRational:
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> GaussianRational:
        if not isinstance(e, int):
            raise TypeError("only integer powers are exact")
        base = self if e >= 0 else self.inverse()
        result = ONE
        e = abs(e)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def i_power(e: int) -> GaussianRational:
    """i**e for any integer e."""
    return (ONE, I, -ONE, -I)[e % 4]


def sign_power(e: int) -> int:
    """(-1)**e for any integer e."""
    return -1 if e % 2 else 1


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError("binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


class PiScaled:
    """Finite sum of GaussianRational * pi**(e/2), keyed by the doubled exponent e.

    Zero coefficients are never stored, so the empty map is the only zero and
    equal values compare equal term by term.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Number] | None = None) -> None:
        clean: dict[int, GaussianRational] = {}
        for e, c in (terms or {}).items():
            if not isinstance(e, int):
                raise TypeError("pi exponents are integers (doubled)")
            g = GaussianRational.coerce(c)
            if g:
                clean[e] = g
        self._terms = clean

    @classmethod
    def rational(cls, c: Number) -> PiScaled:
        return cls({0: c})

    @classmethod
    def pi_power(cls, twice_exp: int, coeff: Number = 1) -> PiScaled:
        return cls({twice_exp: coeff})

    @staticmethod
    def coerce(x: Number | PiScaled) -> PiScaled:
        if isinstance(x, PiScaled):
            return x
        return PiScaled.rational(x)

    @property
    def terms(self) -> dict[int, GaussianRational]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: Number | PiScaled) -> PiScaled:
        o = PiScaled.coerce(other)
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, ZERO) + c
        return PiScaled(out)

    __radd__ = __add__

    def __neg__(self) -> PiScaled:
        return PiScaled({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Number | PiScaled) -> PiScaled:
        return self + (-PiScaled.coerce(other))

    def __rsub__(self, other: Number | PiScaled) -> PiScaled:
        return PiScaled.coerce(other) - self

    def __mul__(self, other: Number | PiScaled) -> PiScaled:
        o = PiScaled.coerce(other)
        out: dict[int, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                out[e1 + e2] = out.get(e1 + e2, ZERO) + c1 * c2
        return PiScaled(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Number | PiScaled) -> PiScaled:
        o = PiScaled.coerce(other)
        if len(o._terms) != 1:
            raise ValueError("division only by a single-term PiScaled")
        (e, c), = o._terms.items()
        inv = c.inverse()
        return PiScaled({e1 - e: c1 * inv for e1, c1 in self._terms.items()})

    def __pow__(self, n: int) -> PiScaled:
        if n < 0:
            return PiScaled.rational(1) / (self ** (-n))
        result = PiScaled.rational(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PiScaled):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self._terms == PiScaled.rational(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._terms.items())))

    def __repr__(self) -> str:
        return f"PiScaled({self.to_string()})"

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            coeff = f"({c})" if c.im != 0 else str(c)
            if e == 0:
                parts.append(coeff)
            elif e == 2:
                parts.append(f"{coeff}*pi")
            elif e % 2 == 0:
                parts.append(f"{coeff}*pi^{e // 2}")
            else:
                parts.append(f"{coeff}*pi^({e}/2)")
        return " + ".join(parts)

    def as_rational(self) -> GaussianRational:
        """The value when it has no pi part; raises otherwise."""
        if not self._terms:
            return ZERO
        if set(self._terms) != {0}:
            raise ValueError(f"{self.to_string()} is not a pure Gaussian rational")
        return self._terms[0]

    def to_json(self) -> dict:
        return {
            "terms": [
                {
                    "twice_pi_exp": e,
                    "re": [c.re.numerator, c.re.denominator],
                    "im": [c.im.numerator, c.im.denominator],
                }
                for e, c in sorted(self._terms.items())
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PiScaled:
        terms: dict[int, GaussianRational] = {}
        for t in data["terms"]:
            re = Fraction(t["re"][0], t["re"][1])
            im = Fraction(t["im"][0], t["im"][1])
            terms[int(t["twice_pi_exp"])] = GaussianRational(re, im)
        return cls(terms)


def to_float(x: PiScaled | Number) -> complex:
    x = PiScaled.coerce(x)
    total = 0j
    for e in sorted(x._terms):
        c = x._terms[e]
        total += complex(c) * math.pi ** (e / 2)
    return total


def gamma_exact(twice_s: int) -> PiScaled:
    """Gamma(twice_s / 2) for a positive integer twice_s."""
    if not isinstance(twice_s, int) or twice_s < 1:
        raise ValueError("gamma_exact needs a positive integer twice_s")
    if twice_s % 2 == 0:
        return PiScaled.rational(math.factorial(twice_s // 2 - 1))
    n = (twice_s - 1) // 2
    return PiScaled.pi_power(
        1, Fraction(math.factorial(2 * n), 4**n * math.factorial(n))
    )


def sum_scalars(values: Iterable[GaussianRational]) -> GaussianRational:
    total = ZERO
    for v in values:
        total = total + v
    return total


def to_decimal_string(x: PiScaled | Number, digits: int = 15) -> str:
    """Decimal rendering with ``digits`` significant digits, rounded half to even.

    The value is first computed with 25 guard digits, so the rounding is that of the
    exact value except within 10^-25 relative of a tie.
    """
    x = PiScaled.coerce(x)
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    with mpmath.workdps(digits + 25):
        re = mpmath.mpf(0)
        im = mpmath.mpf(0)
        for e, c in x._terms.items():
            scale = mpmath.pi ** (mpmath.mpf(e) / 2)
            re += mpmath.mpf(c.re.numerator) / c.re.denominator * scale
            im += mpmath.mpf(c.im.numerator) / c.im.denominator * scale
        parts = [ctx.plus(decimal.Decimal(mpmath.nstr(v, digits + 20, strip_zeros=False))) for v in (re, im)]
    re_s, im_s = (_format_decimal(p) for p in parts)
    if parts[1] == 0:
        return re_s
    if parts[0] == 0:
        return f"{im_s}i"
    sign = "-" if parts[1] < 0 else "+"
    return f"{re_s}{sign}{_format_decimal(abs(parts[1]))}i"


def _format_decimal(d) -> str:
    if d == 0:
        return "0"
    return f"{d:g}" if -7 <= d.adjusted() < 16 else f"{d:E}"
