from __future__ import annotations

import math
from fractions import Fraction

import pytest
from conftest import dual_vectors, gaussian
from hypothesis import given
from hypothesis import strategies as st

from gklocal.polyrep import (
    DualVec,
    HomPoly,
    TensorDual,
    act_dual,
    act_matrix,
    act_tensor,
    det,
    dual_to_poly,
    lie_delta_dual,
    make_mu_m,
    make_upsilon,
    mat_mul,
    matrix,
    pair_P,
    pair_prime,
    poly_to_dual,
)
from gklocal.scalars import ZERO, GaussianRational, binomial

# Independent oracle: sparse polynomials as {exponent tuple: coefficient}.


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_pow(p: dict, n: int, nvars: int) -> dict:
    out = {(0,) * nvars: 1}
    for _ in range(n):
        out = _poly_mul(out, p)
    return out


def det_power(k: int) -> dict:
    """(X y - Y x)^k over the variables (X, Y, x, y)."""
    return _poly_pow({(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}, k, 4)


def oracle_dual_to_poly(mu: DualVec) -> dict:
    """mu applied to the (X, Y) part of (X y - Y x)^k, as {(i, j): coeff of x^i y^j}."""
    out: dict = {}
    for (eX, eY, ex, ey), c in det_power(mu.degree).items():
        v = mu.values[eX] * c
        if v:
            out[(ex, ey)] = out.get((ex, ey), ZERO) + v
    return {e: c for e, c in out.items() if c}


def oracle_pair_prime(mu1: DualVec, mu2: DualVec) -> GaussianRational:
    """mu1 on (X1, Y1) and mu2 on (X2, Y2) applied to (X1 Y2 - Y1 X2)^k."""
    total = ZERO
    for (eX1, eY1, eX2, eY2), c in det_power(mu1.degree).items():
        # the oracle polynomial reads (X y - Y x); rename X -> X1, Y -> Y1, y -> Y2, x -> X2
        total = total + mu1.values[eX1] * mu2.values[eX2] * c
    return total


def as_xy(P: HomPoly) -> dict:
    return {(a, P.degree - a): c for a, c in enumerate(P.coeffs) if c}


rational_matrices = st.tuples(gaussian, gaussian, gaussian, gaussian).map(lambda t: matrix(*t)).filter(
    lambda g: bool(det(g))
)
ROTATION = matrix(Fraction(3, 5), Fraction(4, 5), Fraction(-4, 5), Fraction(3, 5))


# --- actions ------------------------------------------------------------------------------


def test_identity_acts_trivially() -> None:
    P = HomPoly(4, (1, 2, 3, 4, 5))
    assert act_matrix(matrix(1, 0, 0, 1), P) == P


def test_central_normalization_at_middle_monomial() -> None:
    assert act_matrix(matrix(7, 0, 0, 1), HomPoly.monomial(2, 1)) == HomPoly.monomial(2, 1)


def test_diag_four_on_x_squared() -> None:
    # 4^-1 * (4X)^2 = 4 X^2
    assert act_matrix(matrix(4, 0, 0, 1), HomPoly.monomial(2, 2)) == HomPoly.monomial(2, 2, 4)


def test_odd_degree_rejected() -> None:
    with pytest.raises(ValueError):
        HomPoly(3, (1, 2, 3, 4))


@given(rational_matrices, rational_matrices, st.lists(gaussian, min_size=5, max_size=5))
def test_act_matrix_is_an_action(g1, g2, cs) -> None:
    P = HomPoly(4, tuple(cs))
    assert act_matrix(mat_mul(g1, g2), P) == act_matrix(g1, act_matrix(g2, P))


@given(rational_matrices, dual_vectors(4))
def test_dual_to_poly_intertwines(g, mu: DualVec) -> None:
    assert dual_to_poly(act_dual(g, mu)) == act_matrix(g, dual_to_poly(mu))


# --- the isomorphism V(k) -> P(k) ---------------------------------------------------------


def test_dual_to_poly_zero_and_constant() -> None:
    assert dual_to_poly(DualVec.zero(4)).is_zero()
    assert dual_to_poly(DualVec(0, (1,))) == HomPoly(0, (1,))


def test_dual_of_xy_expansion() -> None:
    mu = DualVec.basis(2, 1)
    assert oracle_dual_to_poly(mu) == {(1, 1): GaussianRational(-2)}
    assert dual_to_poly(mu) == HomPoly.monomial(2, 1, -2)


@pytest.mark.parametrize("k", [0, 2, 4, 6, 8])
def test_dual_to_poly_matches_oracle(k: int) -> None:
    for a in range(k + 1):
        mu = DualVec.basis(k, a, GaussianRational(a + 1, -a))
        assert as_xy(dual_to_poly(mu)) == oracle_dual_to_poly(mu)


@given(dual_vectors(6))
def test_poly_to_dual_inverts(mu: DualVec) -> None:
    assert poly_to_dual(dual_to_poly(mu)) == mu


# --- weight vectors and pairings ---------------------------------------------------------


def test_mu_zero_weight_two() -> None:
    assert make_mu_m(2, 0) == DualVec(0, (1,))


def test_mu_one_weight_four_by_expansion() -> None:
    # mu_1 is sent to y^2; only X^2 y^2 in (X y - Y x)^2 carries y^2, with coefficient 1
    assert oracle_dual_to_poly(DualVec.basis(2, 2)) == {(0, 2): GaussianRational(1)}
    assert make_mu_m(4, 1) == DualVec.basis(2, 2)


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10])
def test_mu_m_is_torus_eigenvector(k: int) -> None:
    t = Fraction(3, 7)
    for m in range(-(k - 2) // 2, (k - 2) // 2 + 1):
        mu = make_mu_m(k, m)
        assert act_dual(matrix(t, 0, 0, 1), mu) == mu.scale(t ** (-m))


def test_mu_m_out_of_range() -> None:
    with pytest.raises(ValueError):
        make_mu_m(4, 2)


def test_pair_prime_weight_two_by_expansion() -> None:
    mu = make_mu_m(2, 0)
    assert oracle_pair_prime(mu, mu) == 1
    assert pair_prime(mu, mu) == 1


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12])
def test_pair_prime_on_weight_vectors(k: int) -> None:
    h = (k - 2) // 2
    for m in range(-h, h + 1):
        for m2 in range(-h, h + 1):
            got = pair_prime(make_mu_m(k, m), make_mu_m(k, m2))
            want = Fraction((-1) ** (m + h), binomial(k - 2, h - m)) if m2 == -m else 0
            assert got == want


@given(dual_vectors(4), dual_vectors(4))
def test_pair_prime_matches_oracle(mu1: DualVec, mu2: DualVec) -> None:
    assert pair_prime(mu1, mu2) == oracle_pair_prime(mu1, mu2)


@given(rational_matrices, dual_vectors(4), dual_vectors(4))
def test_pair_prime_invariant_for_square_determinant(g, mu1: DualVec, mu2: DualVec) -> None:
    D = det(g)
    # rescale so the determinant is the square D^2
    g2 = matrix(g[0][0] * D, g[0][1] * D, g[1][0], g[1][1])
    assert det(g2) == D * D
    assert pair_prime(act_dual(g2, mu1), act_dual(g2, mu2)) == pair_prime(mu1, mu2)


@pytest.mark.parametrize(
    ("p1", "p2", "want"),
    [
        (HomPoly.monomial(2, 2), HomPoly.monomial(2, 0), 1),
        (HomPoly.monomial(2, 2), HomPoly.monomial(2, 2), 0),
        (HomPoly.monomial(2, 1), HomPoly.monomial(2, 1), Fraction(-1, 2)),
    ],
)
def test_pair_P_examples(p1: HomPoly, p2: HomPoly, want) -> None:
    assert pair_P(p1, p2) == want


@given(st.lists(gaussian, min_size=5, max_size=5), st.lists(gaussian, min_size=5, max_size=5))
def test_pair_P_is_dual_application(c1, c2) -> None:
    P1, P2 = HomPoly(4, tuple(c1)), HomPoly(4, tuple(c2))
    assert pair_P(P1, P2) == poly_to_dual(P1).apply(P2)


# --- the invariant tensor ---------------------------------------------------------------


def test_upsilon_weight_two() -> None:
    assert make_upsilon(2) == TensorDual((0, 0), ((GaussianRational(1),),))


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_upsilon_maps_to_determinant_power(k: int) -> None:
    d = k - 2
    T = make_upsilon(k)
    got: dict = {}
    for a, b, v in T.entries():
        for (i1, j1), c1 in as_xy(dual_to_poly(DualVec.basis(d, a))).items():
            for (i2, j2), c2 in as_xy(dual_to_poly(DualVec.basis(d, b))).items():
                key = (i1, j1, i2, j2)
                got[key] = got.get(key, ZERO) + v * c1 * c2
    got = {e: c for e, c in got.items() if c}
    # (x1 y2 - y1 x2)^d over (x1, y1, x2, y2)
    want = _poly_pow({(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}, d, 4)
    assert got == {e: GaussianRational(c) for e, c in want.items()}


@pytest.mark.parametrize("k", [2, 4, 6])
@pytest.mark.parametrize("g", [matrix(2, 0, 0, 1), ROTATION, matrix(1, Fraction(1, 3), 0, 1)])
def test_upsilon_invariance(k: int, g) -> None:
    T = make_upsilon(k)
    assert act_tensor(g, g, T) == T


# --- Lie derivative --------------------------------------------------------------------


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_lie_delta_on_weight_vectors(k: int) -> None:
    for m in range(-(k - 2) // 2, (k - 2) // 2 + 1):
        assert lie_delta_dual(make_mu_m(k, m)) == make_mu_m(k, m).scale(-m)


def test_lie_delta_zero() -> None:
    assert lie_delta_dual(DualVec.zero(4)).is_zero()


@given(dual_vectors(4))
def test_lie_delta_matches_finite_difference(mu: DualVec) -> None:
    h = 1e-5
    plus = act_dual(matrix(Fraction(math.exp(h)), 0, 0, 1), mu)
    minus = act_dual(matrix(Fraction(math.exp(-h)), 0, 0, 1), mu)
    alg = lie_delta_dual(mu)
    for p, q, a in zip(plus.values, minus.values, alg.values):
        fd = (complex(p) - complex(q)) / (2 * h)
        assert abs(fd - complex(a)) <= 1e-6 * max(1.0, abs(complex(a)))
