"""Floating-point quadrature used as an independent check on the exact layer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .scalars import PiScaled, to_float


@dataclass(frozen=True)
class QuadConfig:
    circle_points: int = 64
    s3_grid: tuple[int, int, int] = (32, 32, 32)
    radial_halfwidth: float = 3.0
    radial_panels: int = 16
    rtol: float = 1e-8
    atol: float = 1e-12
    max_refinements: int = 60
    radial_order: int = 6
    # outward growth of the radial window per refinement, in units of log t
    radial_step: float = 1.5

    def __post_init__(self) -> None:
        counts = [self.circle_points, *self.s3_grid, self.radial_panels]
        if any(c < 4 for c in counts):
            raise ValueError("quadrature counts must be at least 4")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("rtol and atol must be positive")

    def with_(self, **changes) -> QuadConfig:
        return replace(self, **changes)


DEFAULT = QuadConfig()


class ConvergenceError(RuntimeError):
    """Raised when refinement stops before two estimates agree."""

    def __init__(self, message: str, estimates: list[complex]) -> None:
        super().__init__(message)
        self.estimates = estimates


def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def circle_quad(
    f: Callable[[np.ndarray], np.ndarray], cfg: QuadConfig = DEFAULT, shift: float = 0.0
) -> complex:
    """Normalized trapezoid rule on [0, 2pi); exact for e^{in theta} with |n| < N.

    A nonzero ``shift`` evaluates f on the line theta + i*shift instead.  For f
    periodic and holomorphic between the two lines the integral is unchanged,
    and moving away from nearby poles removes cancellation between large values.
    """
    N = cfg.circle_points
    theta = 2 * np.pi * np.arange(N) / N
    if shift:
        theta = theta + 1j * shift
    vals = np.asarray(f(theta), dtype=complex)
    return complex(np.sum(vals) / N)


def s3_nodes(cfg: QuadConfig = DEFAULT):
    """Nodes (alpha, beta) and weights of the product rule on S^3, total mass 1."""
    Nt, Na, Nb = cfg.s3_grid
    x, w = _gauss(Nt)
    theta = (x + 1) * np.pi / 4
    wt = w * np.pi / 4 * np.sin(2 * theta)
    a = 2 * np.pi * np.arange(Na) / Na
    b = 2 * np.pi * np.arange(Nb) / Nb
    T, A, B = np.meshgrid(theta, a, b, indexing="ij")
    alpha = np.cos(T) * np.exp(1j * A)
    beta = np.sin(T) * np.exp(1j * B)
    weights = np.broadcast_to(wt[:, None, None], T.shape) / (Na * Nb)
    return alpha, beta, weights


def s3_quad(f: Callable[[np.ndarray, np.ndarray], np.ndarray], cfg: QuadConfig = DEFAULT) -> complex:
    """Integral over SU(2) of f(alpha, beta) for the Haar measure of mass 1."""
    alpha, beta, weights = s3_nodes(cfg)
    vals = np.asarray(f(alpha, beta), dtype=complex)
    # fixed traversal order keeps the sum reproducible
    return complex(np.sum(vals * weights))


@dataclass
class RadialResult:
    value: complex
    estimates: list[complex] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)
    halfwidth: tuple[float, float] = (0.0, 0.0)
    panels: int = 0


_MAX_LOG = 700.0


def radial_quad(
    f: Callable[[float], complex], cfg: QuadConfig = DEFAULT, *, detail: bool = False
) -> complex | RadialResult:
    """Integral of f(t) dt/t over (0, inf) via t = e^u and Gauss-Legendre panels in u.

    The window starts at [-U, U] and grows outward by ``radial_step`` on each side
    whose last block still contributes more than max(rtol/10 |estimate|, atol).
    Panels keep a fixed width, so a side stops growing as soon as the integrand
    has decayed there; no evaluations are spent far out where the integrand is
    below rounding level.
    """
    x, w = _gauss(cfg.radial_order)
    width = 2 * cfg.radial_halfwidth / cfg.radial_panels
    per_step = max(1, round(cfg.radial_step / width))

    def block(start: float, npanels: int) -> complex:
        total = 0j
        for p in range(npanels):
            a = start + p * width
            for xi, wi in zip(x, w):
                u = float(a + (xi + 1) * width / 2)
                total += wi * width / 2 * complex(f(math.exp(u)))
        return total

    lo, hi = -cfg.radial_halfwidth, cfg.radial_halfwidth
    panels = cfg.radial_panels
    value = block(lo, panels)
    estimates = [value]
    errors: list[float] = []
    open_lo = open_hi = True
    step = per_step * width
    for _ in range(cfg.max_refinements):
        if not (open_lo or open_hi):
            break
        if max(-lo, hi) + step > _MAX_LOG:
            break
        contrib = []
        if open_lo:
            c = block(lo - step, per_step)
            lo -= step
            contrib.append(("lo", c))
        if open_hi:
            c = block(hi, per_step)
            hi += step
            contrib.append(("hi", c))
        panels += per_step * len(contrib)
        for _, c in contrib:
            value += c
        estimates.append(value)
        errors.append(max(abs(c) for _, c in contrib))
        tol = max(cfg.rtol / 10 * abs(value), cfg.atol)
        for side, c in contrib:
            if abs(c) <= tol:
                if side == "lo":
                    open_lo = False
                else:
                    open_hi = False
    if not (open_lo or open_hi):
        result = RadialResult(value, estimates, errors, (lo, hi), panels)
        return result if detail else result.value
    raise ConvergenceError(
        f"radial quadrature did not converge on [{lo}, {hi}]; last estimates {estimates[-2:]!r}",
        estimates,
    )


def fd_lie_derivative(
    evaluate: Callable[[np.ndarray], complex], g0, h: float = 1e-5
) -> complex:
    """Central difference of evaluate along the right translate g0 diag(e^t, 1) at t = 0."""
    g0 = np.asarray(g0, dtype=complex)
    plus = g0 @ np.diag([math.exp(h), 1.0])
    minus = g0 @ np.diag([math.exp(-h), 1.0])
    return (complex(evaluate(plus)) - complex(evaluate(minus))) / (2 * h)


@dataclass(frozen=True)
class CloseReport:
    passed: bool
    numeric: complex
    exact: complex
    abs_error: float
    rel_error: float

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "numeric": [self.numeric.real, self.numeric.imag],
            "exact": [self.exact.real, self.exact.imag],
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
        }


def assert_close(a: complex, b: PiScaled, cfg: QuadConfig = DEFAULT) -> CloseReport:
    """Compare a float to an exact value; failures are returned, not raised."""
    exact = to_float(b)
    err = abs(complex(a) - exact)
    rel = err / abs(exact) if exact != 0 else (0.0 if err == 0 else math.inf)
    ok = err <= cfg.atol + cfg.rtol * abs(exact)
    return CloseReport(ok, complex(a), exact, err, rel)
