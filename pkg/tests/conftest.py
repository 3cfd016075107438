from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gklocal.polyrep import DualVec
from gklocal.scalars import GaussianRational, PiScaled

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussian = st.builds(GaussianRational, fractions, fractions)
pi_scaled = st.dictionaries(st.integers(-6, 6), gaussian, max_size=3).map(PiScaled)
even_weights = st.sampled_from([2, 4, 6, 8])


def dual_vectors(degree: int):
    return st.lists(gaussian, min_size=degree + 1, max_size=degree + 1).map(
        lambda cs: DualVec(degree, tuple(cs))
    )


def half(x: int) -> Fraction:
    return Fraction(x, 2)


# --- acceptance summary ----------------------------------------------------------------

ACCEPTANCE_TITLES = {
    1: "exact delta-s identity, real, k <= 12",
    2: "exact delta-s identity, complex, (2,4,6)^2",
    3: "real local integral by quadrature",
    4: "complex local integral by quadrature",
    5: "exact pairing constants",
    6: "moment and orthogonality oracles",
    7: "constant factorization on 50 seeded specs",
    8: "section and kernel properties",
    9: "finite-difference consistency",
    10: "binomial-identity layer",
}

# criterion -> list of (passed, detail)
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((passed, detail))


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in ACCEPTANCE_TITLES.items():
        entries = ACCEPTANCE.get(n)
        if not entries:
            terminalreporter.write_line(f"NOT RUN criterion {n}: {title}")
            continue
        ok = all(p for p, _ in entries)
        notes = "; ".join(d for p, d in entries if not p) or "; ".join(d for _, d in entries)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title} ({notes})")
