"""Archimedean constants: zeta factors, Whittaker norms, per-place and global constants, volumes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .scalars import PiScaled, gamma_exact, sign_power


class PlaceKind(str, Enum):
    REAL_SPLIT = "real-split"
    COMPLEX_SPLIT = "complex-split"
    NONSPLIT = "nonsplit"


def _pi_pow(e: Fraction | int, coeff: Fraction | int = 1) -> PiScaled:
    """coeff * pi**e for e in (1/2)Z."""
    twice = Fraction(e) * 2
    if twice.denominator != 1:
        raise ValueError(f"pi exponent {e} is not a half-integer")
    return PiScaled.pi_power(int(twice), coeff)


def _two_pi_pow(e: int) -> PiScaled:
    """(2 pi)**e for an integer e."""
    return _pi_pow(e, Fraction(2) ** e)


def _gamma(x: Fraction | int) -> PiScaled:
    x = Fraction(x)
    if x <= 0 or (2 * x).denominator != 1:
        raise ValueError(f"Gamma({x}) is a pole or not a half-integer argument")
    return gamma_exact(int(2 * x))


def zeta_arch(kind: str, s: Fraction | int) -> PiScaled:
    """pi^(-s/2) Gamma(s/2) for a real place, 2 (2 pi)^(-s) Gamma(s) for a complex one.

    Only integer s keep the value inside PiScaled: a half-integer s would need
    Gamma at a quarter-integer (real) or a power of sqrt(2) (complex).
    """
    s = Fraction(s)
    if s.denominator != 1:
        raise ValueError(f"s = {s} leaves the exact domain; use an integer")
    if s <= 0:
        raise ValueError(f"Gamma has a pole at s = {s}")
    if kind == "real":
        return _pi_pow(-s / 2) * _gamma(s / 2)
    if kind == "complex":
        return _two_pi_pow(-int(s)) * 2 * _gamma(s)
    raise ValueError(f"unknown place kind {kind!r}")


def _check_even(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or k < 2 or k % 2:
        raise ValueError(f"weight must be an even integer >= 2, got {k!r}")
    return k


def whittaker_norm(kind: str, weights: int | tuple[int, int]) -> PiScaled:
    """<W, W^-> for the normalized newform at a real or complex place."""
    if kind == "real":
        k = _check_even(weights)  # type: ignore[arg-type]
        return _pi_pow(-k, Fraction(2, 4**k)) * _gamma(k)
    if kind == "complex":
        k1, k2 = (_check_even(k) for k in weights)  # type: ignore[union-attr]
        ratio = Fraction(math.factorial(k1 - 1) * math.factorial(k2 - 1), math.factorial(k1 + k2 - 1))
        return _two_pi_pow(1 - k1 - k2) * 8 * _gamma((k1 + k2) // 2) ** 2 * ratio
    raise ValueError(f"unknown place kind {kind!r}")


@dataclass(frozen=True)
class PlaceSpec:
    """One archimedean place: the torus type there, weights, and the character data."""

    kind: PlaceKind
    weights: int | tuple[int, int]
    m: int | tuple[int, int]
    lambda_sign: int = 1
    chi_matches: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PlaceKind(self.kind))
        if self.kind is PlaceKind.COMPLEX_SPLIT:
            if not (isinstance(self.weights, tuple) and isinstance(self.m, tuple)):
                raise ValueError("a complex split place carries weight and m pairs")
            if len(self.weights) != 2 or len(self.m) != 2:
                raise ValueError("a complex split place carries weight and m pairs")
            pairs = list(zip(self.weights, self.m))
        else:
            if isinstance(self.weights, tuple) or isinstance(self.m, tuple):
                raise ValueError(f"a {self.kind.value} place carries a single weight and m")
            pairs = [(self.weights, self.m)]
        for k, m in pairs:
            _check_even(k)
            if not isinstance(m, int) or abs(m) > (k - 2) // 2:
                raise ValueError(f"m = {m!r} is outside |m| <= {(k - 2) // 2}")
        if self.lambda_sign not in (1, -1):
            raise ValueError("lambda_sign must be +1 or -1")
        if self.lambda_sign != 1 and self.kind is not PlaceKind.REAL_SPLIT:
            raise ValueError("lambda_sign is only carried by real split places")

    def pairs(self) -> list[tuple[int, int]]:
        """(k, m) for each embedding above this place."""
        if self.kind is PlaceKind.COMPLEX_SPLIT:
            return list(zip(self.weights, self.m))  # type: ignore[arg-type]
        return [(self.weights, self.m)]  # type: ignore[list-item]

    @property
    def split(self) -> bool:
        return self.kind is not PlaceKind.NONSPLIT

    def negated(self) -> PlaceSpec:
        """The same place with m replaced by -m."""
        m = tuple(-x for x in self.m) if isinstance(self.m, tuple) else -self.m
        return PlaceSpec(self.kind, self.weights, m, self.lambda_sign, self.chi_matches)

    def to_string(self) -> str:
        if self.kind is PlaceKind.COMPLEX_SPLIT:
            (k1, k2), (m1, m2) = self.weights, self.m  # type: ignore[misc]
            body = f"kid={k1},kc={k2},mid={m1},mc={m2}"
        else:
            body = f"k={self.weights},m={self.m}"
        if self.kind is PlaceKind.REAL_SPLIT and self.lambda_sign != 1:
            body += f",lambda={self.lambda_sign}"
        if self.split and self.chi_matches:
            body += ",match"
        return f"{self.kind.value}:{body}"

    @classmethod
    def parse(cls, text: str) -> PlaceSpec:
        """Parse e.g. ``real-split:k=2,m=0,match`` or ``complex-split:kid=4,kc=2,mid=1,mc=0``."""
        kind_text, sep, body = text.partition(":")
        if not sep:
            raise ValueError(f"place {text!r} needs the form kind:key=value,...")
        try:
            kind = PlaceKind(kind_text.strip())
        except ValueError:
            raise ValueError(f"unknown place kind {kind_text!r}") from None
        values: dict[str, int] = {}
        matches = False
        for item in filter(None, (p.strip() for p in body.split(","))):
            if item == "match":
                matches = True
                continue
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"malformed item {item!r} in place {text!r}")
            try:
                values[key.strip()] = int(val)
            except ValueError:
                raise ValueError(f"{key.strip()} must be an integer, got {val!r}") from None
        if kind is PlaceKind.COMPLEX_SPLIT:
            needed, allowed = ("kid", "kc"), {"kid", "kc", "mid", "mc"}
        elif kind is PlaceKind.REAL_SPLIT:
            needed, allowed = ("k",), {"k", "m", "lambda"}
        else:
            needed, allowed = ("k",), {"k", "m"}
        missing = [k for k in needed if k not in values]
        if missing:
            raise ValueError(f"place {text!r} is missing {', '.join(missing)}")
        unknown = sorted(set(values) - allowed)
        if unknown:
            raise ValueError(f"place {text!r} has unknown keys {', '.join(unknown)}")
        if kind is PlaceKind.NONSPLIT and matches:
            raise ValueError("'match' only applies to split places")
        if kind is PlaceKind.COMPLEX_SPLIT:
            return cls(
                kind,
                (values["kid"], values["kc"]),
                (values.get("mid", 0), values.get("mc", 0)),
                chi_matches=matches,
            )
        return cls(
            kind,
            values["k"],
            values.get("m", 0),
            lambda_sign=values.get("lambda", 1),
            chi_matches=matches if kind is PlaceKind.REAL_SPLIT else True,
        )


@dataclass(frozen=True)
class GlobalSpec:
    places: tuple[PlaceSpec, ...]

    def __post_init__(self) -> None:
        places = tuple(self.places)
        if not places:
            raise ValueError("a global specification needs at least one place")
        object.__setattr__(self, "places", places)

    def negated(self) -> GlobalSpec:
        return GlobalSpec(tuple(p.negated() for p in self.places))


def _gamma_pair(k: int, m: int) -> PiScaled:
    """Gamma(k/2 - m) Gamma(k/2 + m)."""
    return _gamma(k // 2 - m) * _gamma(k // 2 + m)


def c_sigma(p: PlaceSpec) -> PiScaled:
    """The local constant C_sigma of one archimedean place.

    At a nonsplit place the factor L(1, eta) zeta(1)^-1 = 1/pi is already inside the
    displayed value; at split places it equals 1.
    """
    if p.kind is PlaceKind.NONSPLIT:
        (k, m), = p.pairs()
        return _two_pi_pow(-k - 1) * 2 * _gamma_pair(k, m) * sign_power(m + (k - 2) // 2)
    if not p.chi_matches:
        return PiScaled()
    if p.kind is PlaceKind.REAL_SPLIT:
        (k, m), = p.pairs()
        return _two_pi_pow(-k) * 4 * sign_power(m) * _gamma_pair(k, m)
    (k1, m1), (k2, m2) = p.pairs()
    return (
        _two_pi_pow(1 - k1 - k2) * 16 * sign_power(m1 + m2) * _gamma_pair(k1, m1) * _gamma_pair(k2, m2)
    )


def vanishing_predicate(g: GlobalSpec) -> bool:
    """True when no archimedean place forces the period to vanish."""
    return all(p.chi_matches for p in g.places if p.split)


def c_global(g: GlobalSpec) -> PiScaled:
    """C(k, m) assembled from counts of place types and one Gamma quotient per embedding.

    This is the closed product, evaluated whatever the character data; the period
    itself vanishes when ``vanishing_predicate`` is false.
    """
    n_real = sum(p.kind is PlaceKind.REAL_SPLIT for p in g.places)
    n_complex = sum(p.kind is PlaceKind.COMPLEX_SPLIT for p in g.places)
    nonsplit = [p for p in g.places if p.kind is PlaceKind.NONSPLIT]
    sign = sign_power(sum((p.weights - 2) // 2 for p in nonsplit))  # type: ignore[operator]
    out = PiScaled.rational(sign * 4**n_real) * _pi_pow(n_complex, 32**n_complex) * _pi_pow(-len(nonsplit))
    for p in g.places:
        for k, m in p.pairs():
            out = out * _gamma_pair(k, m) * sign_power(m) * _two_pi_pow(-k)
    return out


def product_c_sigma(places: Sequence[PlaceSpec]) -> PiScaled:
    out = PiScaled.rational(1)
    for p in places:
        out = out * c_sigma(p)
    return out


def _exact_sqrt(x: Fraction) -> Fraction:
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num != x.numerator or den * den != x.denominator:
        raise ValueError(f"|d| = {x} must be the square of a rational for an exact half-integer power")
    return Fraction(num, den)


VOLUME_ENTRIES = ("archimedean-ramified", "pgl2-o", "o-b", "o-f-units", "hat-o-e")


def volume_table(entry: str, q: int | None = None, d: Fraction | int = 1) -> PiScaled:
    """Measure volumes for the self-dual Tamagawa normalization.

    ``archimedean-ramified``: B_sigma^x / F_sigma^x at a ramified archimedean place.
    ``pgl2-o``: PGL2(O_v), zeta_v(2)^-1 |d|^(3/2).
    ``o-b``: O_B^x / O_F^x at a ramified finite place, zeta_v(2)^-1 (q-1)^-1 |d|^(3/2).
    ``o-f-units``: O_F^x at a finite place, |d|^(1/2).
    ``hat-o-e``: hat O_E^x / hat O_F^x, |d_F D|^(-1/2), with d the product |d_F D|.

    q is the residue field size and d the absolute norm of the local different (or,
    for ``hat-o-e``, of d_F D), supplied by the caller.
    """
    d = Fraction(d)
    if d <= 0:
        raise ValueError("|d| must be positive")
    if entry == "archimedean-ramified":
        return _pi_pow(2, 2)
    if entry in ("pgl2-o", "o-b"):
        if q is None or not isinstance(q, int) or q < 2:
            raise ValueError(f"entry {entry!r} needs a residue field size q >= 2")
        root = _exact_sqrt(d)
        value = (1 - Fraction(1, q * q)) * root**3
        if entry == "o-b":
            value /= q - 1
        return PiScaled.rational(value)
    if entry == "o-f-units":
        return PiScaled.rational(_exact_sqrt(d))
    if entry == "hat-o-e":
        return PiScaled.rational(1 / _exact_sqrt(d))
    raise ValueError(f"unknown volume entry {entry!r}; expected one of {', '.join(VOLUME_ENTRIES)}")
