from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fibseq import exactla as xla
from fibseq.sequences import SequenceWindow, Tail

settings.register_profile(
    "fibseq", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("fibseq")

rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
gaussians = st.builds(xla.gauss, rationals, rationals)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, scalars=rationals):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    return [[draw(scalars) for _ in range(cols)] for _ in range(rows)]


@st.composite
def windows(draw, min_n=1, max_n=7, max_dim=5, tail=Tail.ZERO, scalars=rationals):
    d = draw(st.integers(1, max_dim))
    n = draw(st.integers(min_n, max_n))
    vecs = [tuple(draw(scalars) for _ in range(d)) for _ in range(n)]
    # plant an exact relation now and then
    if n >= 2 and draw(st.booleans()):
        j = draw(st.integers(1, n - 1))
        a = draw(rationals)
        vecs[j] = tuple(a * x for x in vecs[j - 1])
    return SequenceWindow(d, tuple(vecs), tail, "hypothesis")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
