from __future__ import annotations

import math

import numpy as np
import pytest

from gklocal import gk_real as gr
from gklocal.gk_complex import su2_moment
from gklocal.quadrature import (
    DEFAULT,
    ConvergenceError,
    QuadConfig,
    assert_close,
    circle_quad,
    fd_lie_derivative,
    radial_quad,
    s3_quad,
)
from gklocal.scalars import PiScaled


def test_config_validation() -> None:
    with pytest.raises(ValueError):
        QuadConfig(circle_points=2)
    with pytest.raises(ValueError):
        QuadConfig(rtol=0)
    assert DEFAULT.with_(rtol=1e-6).rtol == 1e-6


# --- circle -----------------------------------------------------------------------------


def test_circle_constant() -> None:
    assert circle_quad(lambda th: np.ones_like(th)) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", [n for n in range(-63, 64) if n])
def test_circle_orthogonality(n: int) -> None:
    assert abs(circle_quad(lambda th: np.exp(1j * n * th))) <= 1e-13


def test_circle_shift_leaves_trig_polynomials_alone() -> None:
    f = lambda th: 2 + np.exp(4j * th) - 3 * np.exp(-6j * th)  # noqa: E731
    assert abs(circle_quad(f, shift=0.7) - 2) <= 1e-12


# --- S^3 --------------------------------------------------------------------------------


def test_s3_mass_and_second_moment() -> None:
    assert s3_quad(lambda a, b: np.ones_like(a)) == pytest.approx(1.0, abs=1e-13)
    assert s3_quad(lambda a, b: np.abs(a) ** 2) == pytest.approx(0.5, abs=1e-13)


def test_s3_unbalanced_monomial_vanishes() -> None:
    assert abs(s3_quad(lambda a, b: a**2 * np.conj(b) ** 2)) <= 1e-10


@pytest.mark.parametrize(("n", "m"), [(n, m) for n in range(7) for m in range(7) if n + m <= 6])
def test_s3_reproduces_moments(n: int, m: int) -> None:
    got = s3_quad(lambda a, b: np.abs(a) ** (2 * n) * np.abs(b) ** (2 * m))
    assert abs(got - complex(su2_moment(n, n, m, m))) <= 1e-9


# --- radial -----------------------------------------------------------------------------


def test_radial_gaussian() -> None:
    got = radial_quad(lambda t: math.exp(-math.log(t) ** 2))
    assert abs(got - math.sqrt(math.pi)) <= 1e-10


def test_radial_zero() -> None:
    assert radial_quad(lambda t: 0.0) == 0


def test_radial_real_integrand() -> None:
    res = gr.integral_real_numeric(4, 1, gr.RealCharacter(1), 0)
    assert abs(res.value - 24) <= 1e-8 * 24


@pytest.mark.parametrize(
    "f",
    [
        lambda t: math.exp(-math.log(t) ** 2),
        lambda t: 1 / (t + 1 / t) ** 2,
        lambda t: t / (1 + t) ** 4,
    ],
)
def test_radial_errors_decrease(f) -> None:
    res = radial_quad(f, detail=True)
    assert all(b <= a for a, b in zip(res.errors, res.errors[1:]))


def test_radial_reports_nonconvergence() -> None:
    cfg = DEFAULT.with_(max_refinements=2)
    with pytest.raises(ConvergenceError) as info:
        radial_quad(lambda t: 1 / (1 + abs(math.log(t))), cfg)
    assert len(info.value.estimates) >= 2


def test_radial_slowly_decaying_tail() -> None:
    # integral of 1/(1+u^2)^2 du over R is pi/2
    got = radial_quad(lambda t: 1 / (1 + math.log(t) ** 2) ** 2, DEFAULT.with_(rtol=1e-6))
    assert abs(got - math.pi / 2) <= 1e-5


# --- finite differences and comparison --------------------------------------------------


def test_fd_of_constant() -> None:
    assert fd_lie_derivative(lambda g: 5.0, np.eye(2)) == 0


def test_fd_of_determinant() -> None:
    # det(g diag(e^t, 1)) = e^t det g
    g0 = np.array([[2.0, 1.0], [0.5, 3.0]])
    got = fd_lie_derivative(lambda g: np.linalg.det(g), g0)
    assert abs(got - np.linalg.det(g0)) <= 1e-8


def test_assert_close_pass_and_fail() -> None:
    assert assert_close(1.0, PiScaled.rational(1)).passed
    report = assert_close(1.0 + 1e-3, PiScaled.rational(1), DEFAULT.with_(rtol=1e-6))
    assert not report.passed
    assert report.abs_error == pytest.approx(1e-3, rel=1e-9)
    assert report.to_json()["passed"] is False
