"""Verification suites: every exact identity and every closed form against its independent route.

A suite is a list of tasks; each task is a module-level function name plus keyword
arguments, so the list can be shipped to worker processes and the report keeps the
order of the task list whatever the scheduling.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import constants as C
from . import gk_complex as gc
from . import gk_real as gr
from . import quadrature
from .polyrep import DualVec, TensorDual, make_mu_m, su2
from .scalars import GaussianRational, PiScaled, to_decimal_string, to_float

SCHEMA = "gk-local/1"
SUITES = ("real", "complex", "constants", "all")
STATUSES = ("pass", "fail", "skipped")

Task = tuple[str, dict[str, Any]]


@dataclass(frozen=True)
class SuiteOptions:
    max_k: int = 6
    tol: float = 1e-8
    seed: int = 0
    numeric_max_k: int = 6
    random_specs: int = 50

    def to_json(self) -> dict:
        return {
            "max_k": self.max_k,
            "tol": self.tol,
            "seed": self.seed,
            "numeric_max_k": self.numeric_max_k,
            "random_specs": self.random_specs,
        }


def _case(
    case_id: str,
    inputs: dict,
    passed: bool,
    exact: PiScaled | None = None,
    numeric: complex | None = None,
    detail: str | None = None,
) -> dict:
    out: dict[str, Any] = {
        "id": case_id,
        "inputs": inputs,
        "status": "pass" if passed else "fail",
        "exact": exact.to_json() if exact is not None else None,
        "exact_decimal": to_decimal_string(exact) if exact is not None else None,
        "numeric": [numeric.real, numeric.imag] if numeric is not None else None,
        "abs_error": None,
        "rel_error": None,
    }
    if exact is not None and numeric is not None:
        ref = to_float(exact)
        err = abs(numeric - ref)
        out["abs_error"] = err
        out["rel_error"] = err / abs(ref) if ref != 0 else None
    if detail:
        out["detail"] = detail
    return out


def _skipped(case_id: str, inputs: dict, reason: str) -> dict:
    return {
        "id": case_id,
        "inputs": inputs,
        "status": "skipped",
        "exact": None,
        "exact_decimal": None,
        "numeric": None,
        "abs_error": None,
        "rel_error": None,
        "detail": reason,
    }


def _close(numeric: complex, exact: PiScaled, rtol: float, zero_atol: float = 1e-10) -> bool:
    ref = to_float(exact)
    if ref == 0:
        return abs(numeric) <= zero_atol
    return abs(numeric - ref) <= rtol * abs(ref)


# --- real place ---------------------------------------------------------------------------


def real_delta_s(k: int, parity: int, m: int) -> dict:
    got = gr.delta_s_real(k, parity, make_mu_m(k, m))
    want = gr.delta_s_real_closed_form(k, parity, m)
    return _case(f"real/delta_s/k={k}/parity={parity}/m={m}", {"k": k, "parity": parity, "m": m}, got == want)


def real_section(k: int, parity: int) -> dict:
    d = k - 2
    ok = True
    for a in range(d + 1):
        e = DualVec.basis(d, a)
        ok &= gr.rho_real(gr.section_s(k, parity, e)) == e
        ok &= gr.rho_real(gr.delta_s_real(k, parity, e)).is_zero()
    return _case(f"real/section/k={k}/parity={parity}", {"k": k, "parity": parity}, ok)


def real_integral(k: int, parity: int, chi_sign: int, m: int, numeric: bool, tol: float) -> dict:
    chi = gr.RealCharacter(chi_sign)
    exact = gr.integral_real_closed(k, parity, chi, m)
    case_id = f"real/integral/k={k}/parity={parity}/chi={chi_sign}/m={m}"
    inputs = {"k": k, "parity": parity, "chi_sign": chi_sign, "m": m}
    if not numeric:
        return _skipped(case_id, inputs, "above the numeric weight bound")
    try:
        value = gr.integral_real_numeric(k, parity, chi, m, quadrature.DEFAULT.with_(rtol=tol)).value
    except quadrature.ConvergenceError as exc:
        return _case(case_id, inputs, False, exact, detail=str(exc))
    return _case(case_id, inputs, _close(value, exact, tol), exact, value)


def real_upsilon(k: int) -> dict:
    u = gr.upsilon_pair_real(k)
    want = PiScaled.rational((k - 1) * Fraction(2) ** (k - 3))
    return _case(
        f"real/upsilon_ratio/k={k}",
        {"k": k},
        u.ratio == want,
        want,
        to_float(u.ratio),
        detail=f"pipeline ratio {u.ratio.to_string()}",
    )


def real_mu0(k: int) -> dict:
    got = gr.mu0_pair_real(k)
    want = gr.mu0_pair_real_closed(k)
    return _case(f"real/mu0_pair/k={k}", {"k": k}, got == want, want, to_float(got))


def real_limits(k: int, m: int) -> dict:
    parts = gr.f_limits_real_parts(k, m)
    got = PiScaled.rational(parts.at_infinity - parts.at_zero)
    return _case(f"real/limits/k={k}/m={m}", {"k": k, "m": m}, got == parts.closed_form, parts.closed_form, to_float(got))


def _random_angles(seed: int, count: int) -> list[float]:
    rng = np.random.default_rng(seed)
    return [float(x) for x in rng.uniform(0.0, 2 * math.pi, count)]


def real_fd(k: int, n: int, seed: int, points: int = 6) -> dict:
    f = gr.basis_elem(k, n)
    df = gr.lie_delta_real(f)
    worst = 0.0
    for theta in _random_angles(seed, points):
        c, s = math.cos(theta), math.sin(theta)
        g0 = np.array([[c, s], [-s, c]])
        fd = quadrature.fd_lie_derivative(lambda g: gr.eval_series(f, g, exact=False), g0)
        alg = complex(gr.eval_series(df, g0, exact=False))
        worst = max(worst, abs(fd - alg))
    return _case(f"real/fd/k={k}/n={n}", {"k": k, "n": n, "seed": seed}, worst <= 1e-6, detail=f"max deviation {worst:.3e}")


# --- complex place -----------------------------------------------------------------------


def _m_pairs(kpair: tuple[int, int]) -> list[tuple[int, int]]:
    b1, b2 = (kpair[0] - 2) // 2, (kpair[1] - 2) // 2
    return [(a, b) for a in range(-b1, b1 + 1) for b in range(-b2, b2 + 1)]


def complex_delta_s(kpair: tuple[int, int], m: tuple[int, int]) -> dict:
    kpair = tuple(kpair)
    m = tuple(m)
    mu = gc.make_mu_m_complex(kpair, m)
    got = gc.delta_s_complex(kpair, mu)
    want = gc.delta_s_complex_closed_form(kpair, mu)
    return _case(f"complex/delta_s/k={kpair}/m={m}", {"k": list(kpair), "m": list(m)}, got == want)


def complex_section(kpair: tuple[int, int]) -> dict:
    kpair = tuple(kpair)
    d1, d2 = kpair[0] - 2, kpair[1] - 2
    ok = True
    for a in range(d1 + 1):
        for b in range(d2 + 1):
            e = TensorDual.outer(DualVec.basis(d1, a), DualVec.basis(d2, b))
            ok &= gc.rho_complex(gc.section_s_complex(kpair, e)) == e
            ok &= gc.rho_complex(gc.delta_s_complex(kpair, e)).is_zero()
    return _case(f"complex/section/k={kpair}", {"k": list(kpair)}, ok)


def complex_integral(kpair: tuple[int, int], mode: int, m: tuple[int, int], numeric: bool, tol: float) -> dict:
    kpair, m = tuple(kpair), tuple(m)
    chi = gc.ComplexCharacter(mode)
    exact = gc.integral_complex_closed(kpair, chi, m)
    case_id = f"complex/integral/k={kpair}/mode={mode}/m={m}"
    inputs = {"k": list(kpair), "circle_mode": mode, "m": list(m)}
    if not numeric:
        return _skipped(case_id, inputs, "above the numeric weight bound")
    try:
        value = gc.integral_complex_numeric(kpair, chi, m, quadrature.DEFAULT.with_(rtol=tol)).value
    except quadrature.ConvergenceError as exc:
        return _case(case_id, inputs, False, exact, detail=str(exc))
    return _case(case_id, inputs, _close(value, exact, max(tol, 1e-6), 1e-8), exact, value)


def complex_upsilon(kpair: tuple[int, int]) -> dict:
    kpair = tuple(kpair)
    got = gc.upsilon_pair_complex_pipeline(kpair)
    want = gc.upsilon_pair_complex_closed(kpair)
    return _case(f"complex/upsilon_pair/k={kpair}", {"k": list(kpair)}, got == want, want, to_float(got))


def complex_mu0(kpair: tuple[int, int]) -> dict:
    kpair = tuple(kpair)
    got = gc.mu0_pair_complex_pipeline(kpair)
    want = gc.mu0_pair_complex_closed(kpair)
    return _case(f"complex/mu0_pair/k={kpair}", {"k": list(kpair)}, got == want, want, to_float(got))


def complex_limits(kpair: tuple[int, int], m: tuple[int, int]) -> dict:
    kpair, m = tuple(kpair), tuple(m)
    return _case(
        f"complex/vandermonde/k={kpair}/m={m}",
        {"k": list(kpair), "m": list(m)},
        gc.vandermonde_check(kpair, m),
    )


def rational_su2_point(rng: random.Random, bound: int = 5) -> tuple[GaussianRational, GaussianRational]:
    """A point of SU(2) with Gaussian-rational entries, by inverse stereographic projection."""
    u = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(3)]
    norm = sum(x * x for x in u)
    den = norm + 1
    alpha = GaussianRational(2 * u[0] / den, 2 * u[1] / den)
    beta = GaussianRational(2 * u[2] / den, (norm - 1) / den)
    return alpha, beta


def complex_fd(kpair: tuple[int, int], n: int, seed: int, points: int = 6) -> dict:
    kpair = tuple(kpair)
    rng = random.Random(seed)
    nu = DualVec(2 * n, tuple(GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(2 * n + 1)))
    f = gc.phi_elem(kpair, n, nu)
    df = gc.lie_delta_complex(f)
    worst = 0.0
    for _ in range(points):
        alpha, beta = rational_su2_point(rng)
        g_exact = su2(alpha, beta)
        g0 = np.array([[complex(x) for x in row] for row in g_exact])
        fd = quadrature.fd_lie_derivative(lambda g: gc.eval_series(f, g, exact=False), g0)
        alg = complex(gc.eval_series(df, g_exact, exact=True))
        worst = max(worst, abs(fd - alg) / max(1.0, abs(alg)))
    return _case(
        f"complex/fd/k={kpair}/n={n}", {"k": list(kpair), "n": n, "seed": seed}, worst <= 1e-6,
        detail=f"max deviation {worst:.3e}",
    )


# --- constants -------------------------------------------------------------------------


def _value_case(case_id: str, got: PiScaled, want: PiScaled) -> dict:
    return _case(case_id, {}, got == want, want, to_float(got), detail=f"computed {got.to_string()}")


def constants_examples() -> list[dict]:
    pi = PiScaled.pi_power
    P = C.PlaceSpec.parse
    return [
        _value_case("constants/zeta/real/s=2", C.zeta_arch("real", 2), pi(-2)),
        _value_case("constants/zeta/complex/s=1", C.zeta_arch("complex", 1), pi(-2)),
        _value_case("constants/zeta/real/s=1", C.zeta_arch("real", 1), PiScaled.rational(1)),
        _value_case("constants/whittaker/real/k=2", C.whittaker_norm("real", 2), pi(-4, Fraction(1, 8))),
        _value_case("constants/c_sigma/real-split/k=2/m=0", C.c_sigma(P("real-split:k=2,m=0,match")), pi(-4)),
        _value_case("constants/c_sigma/real-split/mismatch", C.c_sigma(P("real-split:k=2,m=0")), PiScaled()),
        _value_case("constants/c_sigma/nonsplit/k=2/m=0", C.c_sigma(P("nonsplit:k=2,m=0")), pi(-6, Fraction(1, 4))),
        _value_case(
            "constants/c_global/real-split/k=2/m=0",
            C.c_global(C.GlobalSpec((P("real-split:k=2,m=0,match"),))),
            pi(-4),
        ),
        _value_case(
            "constants/c_global/nonsplit/k=4/m=1",
            C.c_global(C.GlobalSpec((P("nonsplit:k=4,m=1"),))),
            pi(-2, 2) * pi(-8, Fraction(1, 16)),
        ),
        _value_case("constants/volume/archimedean-ramified", C.volume_table("archimedean-ramified"), pi(4, 2)),
        _value_case("constants/volume/pgl2-o/q=2", C.volume_table("pgl2-o", 2, 1), PiScaled.rational(Fraction(3, 4))),
        _value_case("constants/volume/o-b/q=3", C.volume_table("o-b", 3, 1), PiScaled.rational(Fraction(4, 9))),
    ]


def random_place(rng: random.Random, max_k: int, matching: bool = True) -> C.PlaceSpec:
    kind = rng.choice(list(C.PlaceKind))
    ks = list(range(2, max_k + 1, 2))
    if kind is C.PlaceKind.COMPLEX_SPLIT:
        k = (rng.choice(ks), rng.choice(ks))
        m = tuple(rng.randint(-(x - 2) // 2, (x - 2) // 2) for x in k)
        return C.PlaceSpec(kind, k, m, chi_matches=matching)
    k = rng.choice(ks)
    m = rng.randint(-(k - 2) // 2, (k - 2) // 2)
    if kind is C.PlaceKind.NONSPLIT:
        return C.PlaceSpec(kind, k, m)
    return C.PlaceSpec(kind, k, m, lambda_sign=rng.choice((1, -1)), chi_matches=matching)


def random_global_spec(rng: random.Random, max_k: int, max_places: int = 4) -> C.GlobalSpec:
    return C.GlobalSpec(tuple(random_place(rng, max_k) for _ in range(rng.randint(1, max_places))))


def constants_factorization(seed: int, count: int, max_k: int) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        g = random_global_spec(rng, max(max_k, 2))
        glob = C.c_global(g)
        prod = C.product_c_sigma(g.places)
        inputs = {"places": [p.to_string() for p in g.places]}
        out.append(_case(f"constants/factorization/{i}", inputs, glob == prod and C.vanishing_predicate(g), glob, to_float(prod)))
        neg = C.c_global(g.negated())
        out.append(_case(f"constants/m_symmetry/{i}", inputs, neg == glob, glob, to_float(neg)))
    return out


def constants_whittaker(max_k: int) -> list[dict]:
    out = []
    for k in range(2, max_k + 1, 2):
        rebuilt = C.zeta_arch("real", 2 * k) * PiScaled.rational(Fraction(2, 4**k))
        out.append(_value_case(f"constants/whittaker_vs_zeta/k={k}", C.whittaker_norm("real", k), rebuilt))
    return out


def constants_cases(seed: int, count: int, max_k: int) -> list[dict]:
    return constants_examples() + constants_factorization(seed, count, max_k) + constants_whittaker(max_k)


# --- suite assembly --------------------------------------------------------------------


def real_tasks(opts: SuiteOptions) -> list[Task]:
    tasks: list[Task] = []
    for k in range(2, opts.max_k + 1, 2):
        ms = range(-(k - 2) // 2, (k - 2) // 2 + 1)
        for parity in (1, -1):
            tasks.append(("real_section", {"k": k, "parity": parity}))
            for m in ms:
                tasks.append(("real_delta_s", {"k": k, "parity": parity, "m": m}))
        for parity in (1, -1):
            for chi_sign in (1, -1):
                for m in ms:
                    numeric = k <= opts.numeric_max_k
                    args = {"k": k, "parity": parity, "chi_sign": chi_sign, "m": m, "numeric": numeric, "tol": opts.tol}
                    tasks.append(("real_integral", args))
        tasks.append(("real_upsilon", {"k": k}))
        tasks.append(("real_mu0", {"k": k}))
        for m in ms:
            tasks.append(("real_limits", {"k": k, "m": m}))
        for n in (-(k // 2), 0, k // 2):
            tasks.append(("real_fd", {"k": k, "n": n, "seed": opts.seed}))
    return tasks


def complex_tasks(opts: SuiteOptions) -> list[Task]:
    tasks: list[Task] = []
    ks = range(2, opts.max_k + 1, 2)
    for kpair in ((a, b) for a in ks for b in ks):
        tasks.append(("complex_section", {"kpair": kpair}))
        for m in _m_pairs(kpair):
            tasks.append(("complex_delta_s", {"kpair": kpair, "m": m}))
            tasks.append(("complex_limits", {"kpair": kpair, "m": m}))
        numeric = max(kpair) <= opts.numeric_max_k
        for mode in (0, 1):
            for m in _m_pairs(kpair):
                args = {"kpair": kpair, "mode": mode, "m": m, "numeric": numeric, "tol": opts.tol}
                tasks.append(("complex_integral", args))
        tasks.append(("complex_upsilon", {"kpair": kpair}))
        tasks.append(("complex_mu0", {"kpair": kpair}))
        lam = abs(kpair[0] - kpair[1]) // 2
        M = (kpair[0] + kpair[1] - 4) // 2
        for n in sorted({lam, M + 1}):
            tasks.append(("complex_fd", {"kpair": kpair, "n": n, "seed": opts.seed}))
    return tasks


def constants_tasks(opts: SuiteOptions) -> list[Task]:
    return [("constants_cases", {"seed": opts.seed, "count": opts.random_specs, "max_k": opts.max_k})]


_TASKS: dict[str, Callable[..., Any]] = {
    f.__name__: f
    for f in (
        real_delta_s,
        real_section,
        real_integral,
        real_upsilon,
        real_mu0,
        real_limits,
        real_fd,
        complex_delta_s,
        complex_section,
        complex_integral,
        complex_upsilon,
        complex_mu0,
        complex_limits,
        complex_fd,
        constants_cases,
    )
}


def run_task(task: Task) -> list[dict]:
    name, kwargs = task
    result = _TASKS[name](**kwargs)
    return result if isinstance(result, list) else [result]


def suite_tasks(suite: str, opts: SuiteOptions) -> list[Task]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    builders = {"real": real_tasks, "complex": complex_tasks, "constants": constants_tasks}
    names = ("real", "complex", "constants") if suite == "all" else (suite,)
    return [t for name in names for t in builders[name](opts)]


def run_suite(suite: str, opts: SuiteOptions, jobs: int = 1) -> dict:
    """Run a suite and return the report as a JSON-ready dictionary."""
    if opts.max_k < 2 or opts.max_k % 2:
        raise ValueError(f"max-k must be an even integer >= 2, got {opts.max_k}")
    tasks = suite_tasks(suite, opts)
    start = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_task, tasks))
    else:
        chunks = [run_task(t) for t in tasks]
    cases = [c for chunk in chunks for c in chunk]
    summary = {s: sum(c["status"] == s for c in cases) for s in STATUSES}
    summary["total"] = len(cases)
    return {
        "schema": SCHEMA,
        "suite": suite,
        "seed": opts.seed,
        "config": opts.to_json(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "elapsed_seconds": round(time.perf_counter() - start, 3),
        "cases": cases,
        "summary": summary,
    }


def canonical_json(obj: Any) -> str:
    """Serialization with sorted keys and fixed separators; parsing and re-dumping is the identity."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
