from fractions import Fraction

from hypothesis import settings, strategies as st

from twistk.cohomology import BaseClass, IntersectionData, SurfaceClass

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def surface_classes(draw, r=None, with_B=True):
    return SurfaceClass(
        r=draw(small_q) if r is None else Fraction(r),
        a_h=draw(small_q),
        a_B=draw(small_q) if with_B else Fraction(0),
        s=draw(small_q),
    )


@st.composite
def base_classes(draw):
    return BaseClass(draw(small_q), draw(small_q), draw(small_q))


intersection_data = st.builds(
    IntersectionData,
    two_Bh=st.integers(-20, 20),
    four_Bsq=st.integers(-20, 20),
    h_squared=st.integers(-4, 8),
)


def pytest_terminal_summary(terminalreporter):
    from acceptance_registry import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, title = RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title}")
