from __future__ import annotations

import math
from fractions import Fraction

import pytest
from conftest import gaussian, pi_scaled
from hypothesis import given

from gklocal.scalars import (
    GaussianRational,
    PiScaled,
    binomial,
    gamma_exact,
    i_power,
    to_decimal_string,
    to_float,
)


def pascal(n: int, k: int) -> int:
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0, *row], [*row, 0])]
    return row[k] if 0 <= k <= n else 0


@pytest.mark.parametrize(("n", "k", "want"), [(4, 2, 6), (4, -1, 0), (4, 5, 0), (0, 0, 1)])
def test_binomial_small(n: int, k: int, want: int) -> None:
    assert binomial(n, k) == want


@pytest.mark.parametrize(("n", "k"), [(10, 5), (16, 7), (12, 0)])
def test_binomial_matches_pascal(n: int, k: int) -> None:
    assert binomial(n, k) == pascal(n, k)


def test_binomial_10_5_frozen() -> None:
    assert pascal(10, 5) == 252
    assert binomial(10, 5) == 252


def test_binomial_rejects_negative_n() -> None:
    with pytest.raises(ValueError):
        binomial(-1, 0)


@pytest.mark.parametrize(
    ("twice_s", "want"),
    [
        (6, PiScaled.rational(2)),
        (1, PiScaled.pi_power(1)),
        (2, PiScaled.rational(1)),
    ],
)
def test_gamma_exact_values(twice_s: int, want: PiScaled) -> None:
    assert gamma_exact(twice_s) == want


def test_gamma_five_halves_by_recurrence() -> None:
    oracle = PiScaled.pi_power(1) * Fraction(1, 2) * Fraction(3, 2)
    assert oracle == PiScaled.pi_power(1, Fraction(3, 4))
    assert gamma_exact(5) == oracle


@pytest.mark.parametrize("twice_s", range(1, 41))
def test_gamma_recurrence(twice_s: int) -> None:
    assert gamma_exact(twice_s + 2) == gamma_exact(twice_s) * Fraction(twice_s, 2)


@pytest.mark.parametrize("twice_s", [1, 3, 5, 9, 14])
def test_gamma_float(twice_s: int) -> None:
    assert to_float(gamma_exact(twice_s)).real == pytest.approx(math.gamma(twice_s / 2), rel=1e-14)


def test_to_float_values() -> None:
    assert to_float(PiScaled()) == 0.0
    assert to_float(PiScaled.pi_power(2)).real == pytest.approx(3.14159265358979, rel=1e-14)
    assert to_float(PiScaled.pi_power(-2, 2)).real == pytest.approx(2 / math.pi, rel=1e-15)


def test_zero_is_canonical() -> None:
    z = PiScaled({0: 0, 2: GaussianRational(0, 0)})
    assert z.is_zero()
    assert z.terms == {}
    assert PiScaled.pi_power(2, 3) - PiScaled.pi_power(2, 3) == PiScaled()


def test_multiplication_adds_exponents() -> None:
    a = PiScaled.pi_power(1, 2)
    b = PiScaled.pi_power(-3, Fraction(1, 3))
    assert (a * b).terms == {-2: GaussianRational(Fraction(2, 3))}


def test_i_power_cycle() -> None:
    i = GaussianRational(0, 1)
    for e in range(-8, 9):
        assert i_power(e) == i**e


@pytest.mark.parametrize(
    ("x", "want"),
    [
        (PiScaled.pi_power(-2), "0.318309886183791"),
        (PiScaled.rational(24), "24.0000000000000"),
        (PiScaled(), "0"),
        (PiScaled.rational(GaussianRational(1, -2)), "1.00000000000000-2.00000000000000i"),
    ],
)
def test_decimal_rendering(x: PiScaled, want: str) -> None:
    assert to_decimal_string(x) == want


def test_decimal_rounds_half_even() -> None:
    assert to_decimal_string(Fraction(1, 8), digits=2) == "0.12"
    assert to_decimal_string(Fraction(3, 8), digits=2) == "0.38"


def test_json_round_trip_example() -> None:
    x = PiScaled({-4: Fraction(1, 8), 1: GaussianRational(2, -3)})
    assert PiScaled.from_json(x.to_json()) == x


@given(pi_scaled, pi_scaled, pi_scaled)
def test_ring_axioms(a: PiScaled, b: PiScaled, c: PiScaled) -> None:
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(pi_scaled, pi_scaled)
def test_to_float_is_multiplicative(a: PiScaled, b: PiScaled) -> None:
    got, want = to_float(a * b), to_float(a) * to_float(b)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want), abs(to_float(a)) * abs(to_float(b)))


@given(pi_scaled)
def test_json_round_trip(a: PiScaled) -> None:
    assert PiScaled.from_json(a.to_json()) == a


@given(gaussian, gaussian.filter(bool))
def test_gaussian_division_inverts_multiplication(a: GaussianRational, b: GaussianRational) -> None:
    assert (a * b) / b == a


@given(pi_scaled)
def test_decimal_agrees_with_float(a: PiScaled) -> None:
    text = to_decimal_string(a)
    value = to_float(a)
    parsed = complex(text.replace("i", "j")) if "i" in text else complex(float(text))
    assert abs(parsed - value) <= 1e-13 * max(1.0, abs(value))
