from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gklocal import constants as C
from gklocal import verify
from gklocal.scalars import PiScaled, to_float

pi = PiScaled.pi_power
P = C.PlaceSpec.parse


def c_sigma_float(p: C.PlaceSpec) -> float:
    """The per-place constant in floating point, straight from the Gamma function."""
    gg = [math.gamma(k / 2 - m) * math.gamma(k / 2 + m) for k, m in p.pairs()]
    if p.kind is C.PlaceKind.NONSPLIT:
        (k, m), = p.pairs()
        return 2 * (-1) ** (m + (k - 2) // 2) * gg[0] / (2 * math.pi) ** (k + 1)
    if not p.chi_matches:
        return 0.0
    if p.kind is C.PlaceKind.REAL_SPLIT:
        (k, m), = p.pairs()
        return 4 * (-1) ** m * gg[0] / (2 * math.pi) ** k
    (k1, m1), (k2, m2) = p.pairs()
    return 16 * (-1) ** (m1 + m2) * gg[0] * gg[1] / (2 * math.pi) ** (k1 + k2 - 1)


places = st.builds(lambda seed, k: verify.random_place(random.Random(seed), k), st.integers(0, 10**6), st.sampled_from([2, 4, 6, 8]))


# --- zeta factors and Whittaker norms ----------------------------------------------------


@pytest.mark.parametrize(
    ("kind", "s", "want"),
    [("real", 2, pi(-2)), ("complex", 1, pi(-2)), ("real", 1, PiScaled.rational(1)), ("real", 3, pi(-3) * pi(1, Fraction(1, 2)))],
)
def test_zeta_examples(kind: str, s: int, want: PiScaled) -> None:
    assert C.zeta_arch(kind, s) == want


@pytest.mark.parametrize("s", range(1, 12))
def test_zeta_float(s: int) -> None:
    real = math.pi ** (-s / 2) * math.gamma(s / 2)
    cplx = 2 * (2 * math.pi) ** (-s) * math.gamma(s)
    assert to_float(C.zeta_arch("real", s)).real == pytest.approx(real, rel=1e-13)
    assert to_float(C.zeta_arch("complex", s)).real == pytest.approx(cplx, rel=1e-13)


@pytest.mark.parametrize(("kind", "s"), [("real", Fraction(1, 2)), ("real", 0), ("p-adic", 2)])
def test_zeta_rejects(kind: str, s) -> None:
    with pytest.raises(ValueError):
        C.zeta_arch(kind, s)


def test_whittaker_examples() -> None:
    assert C.whittaker_norm("real", 2) == pi(-4, Fraction(1, 8))
    # 8 (2 pi)^-3 Gamma(2)^2 Gamma(2) Gamma(2) / Gamma(4)
    oracle = 8 * (2 * math.pi) ** -3 * math.gamma(2) ** 2 * math.gamma(2) ** 2 / math.gamma(4)
    got = C.whittaker_norm("complex", (2, 2))
    assert got == pi(-6, Fraction(1, 6))
    assert to_float(got).real == pytest.approx(oracle, rel=1e-14)


@pytest.mark.parametrize("weights", [2, 4, 6, 8, (2, 2), (4, 2), (6, 4)])
def test_whittaker_positive(weights) -> None:
    kind = "complex" if isinstance(weights, tuple) else "real"
    terms = C.whittaker_norm(kind, weights).terms
    assert len(terms) == 1
    (c,) = terms.values()
    assert c.im == 0 and c.re > 0


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10])
def test_whittaker_from_zeta(k: int) -> None:
    assert C.whittaker_norm("real", k) == C.zeta_arch("real", 2 * k) * Fraction(2, 4**k)


# --- per-place and global constants ------------------------------------------------------


@pytest.mark.parametrize(
    ("spec", "want"),
    [
        ("real-split:k=2,m=0,match", pi(-4)),
        ("real-split:k=2,m=0", PiScaled()),
        ("nonsplit:k=2,m=0", pi(-6, Fraction(1, 4))),
        ("complex-split:kid=4,kc=2,mid=1,mc=0,match", pi(-10, -1)),
    ],
)
def test_c_sigma_examples(spec: str, want: PiScaled) -> None:
    assert C.c_sigma(P(spec)) == want


def test_c_global_examples() -> None:
    assert C.c_global(C.GlobalSpec((P("real-split:k=2,m=0,match"),))) == pi(-4)
    # -pi^-1 Gamma(1) Gamma(3) / (-(2 pi)^4) = 2 pi^-1 (2 pi)^-4
    assert C.c_global(C.GlobalSpec((P("nonsplit:k=4,m=1"),))) == pi(-10, Fraction(1, 8))


@given(places)
def test_c_sigma_against_float_gamma(p: C.PlaceSpec) -> None:
    assert to_float(C.c_sigma(p)).real == pytest.approx(c_sigma_float(p), rel=1e-12, abs=1e-300)


@given(st.lists(places, min_size=1, max_size=4))
def test_factorization(ps: list) -> None:
    g = C.GlobalSpec(tuple(ps))
    assert C.vanishing_predicate(g)
    assert C.c_global(g) == C.product_c_sigma(g.places)


@given(st.lists(places, min_size=1, max_size=4))
def test_m_symmetry(ps: list) -> None:
    g = C.GlobalSpec(tuple(ps))
    assert C.c_global(g.negated()) == C.c_global(g)


def test_vanishing_predicate() -> None:
    assert C.vanishing_predicate(C.GlobalSpec((P("real-split:k=2,m=0,match"), P("complex-split:kid=2,kc=2,match"))))
    assert not C.vanishing_predicate(C.GlobalSpec((P("real-split:k=2,m=0,match"), P("real-split:k=4,m=1"))))
    assert C.vanishing_predicate(C.GlobalSpec((P("nonsplit:k=2,m=0"),)))


def test_mismatched_place_zeroes_the_product() -> None:
    places = (P("real-split:k=4,m=0"), P("nonsplit:k=2,m=0"))
    assert C.product_c_sigma(places).is_zero()
    assert not C.c_global(C.GlobalSpec(places)).is_zero()


# --- parsing ------------------------------------------------------------------------------


@given(places)
def test_place_round_trip(p: C.PlaceSpec) -> None:
    assert P(p.to_string()) == p


@pytest.mark.parametrize(
    "text",
    [
        "nonsplit:m=1",
        "real-split",
        "quaternion:k=2",
        "real-split:k=3,m=0",
        "real-split:k=4,m=2",
        "real-split:k=4,q=2",
        "nonsplit:k=4,match",
        "complex-split:kid=4,mid=1",
        "real-split:k=two",
        "real-split:k=4,lambda=0",
        "real-split:k=4,m",
    ],
)
def test_parse_rejects(text: str) -> None:
    with pytest.raises(ValueError):
        P(text)


def test_global_spec_needs_places() -> None:
    with pytest.raises(ValueError):
        C.GlobalSpec(())


# --- volumes ------------------------------------------------------------------------------


@pytest.mark.parametrize(
    ("entry", "q", "d", "want"),
    [
        ("archimedean-ramified", None, 1, pi(4, 2)),
        ("pgl2-o", 2, 1, PiScaled.rational(Fraction(3, 4))),
        ("o-b", 3, 1, PiScaled.rational(Fraction(4, 9))),
        ("pgl2-o", 3, 4, PiScaled.rational(Fraction(8, 9) * 8)),
        ("o-f-units", None, Fraction(9, 4), PiScaled.rational(Fraction(3, 2))),
        ("hat-o-e", None, 16, PiScaled.rational(Fraction(1, 4))),
    ],
)
def test_volume_table(entry: str, q, d, want: PiScaled) -> None:
    assert C.volume_table(entry, q, d) == want


@pytest.mark.parametrize(
    ("entry", "q", "d"),
    [("pgl2-o", None, 1), ("o-b", 1, 1), ("o-f-units", None, 2), ("bogus", None, 1), ("hat-o-e", None, 0)],
)
def test_volume_table_rejects(entry: str, q, d) -> None:
    with pytest.raises(ValueError):
        C.volume_table(entry, q, d)
