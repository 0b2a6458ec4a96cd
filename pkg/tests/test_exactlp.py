from fractions import Fraction

from hypothesis import given, strategies as st

from arbortile.exactlp import check_packing_certificate, solve_packing_lp
from oracles import scipy_packing_value


def test_small_known_lp():
    # both items share the first row, so the optimum puts everything on the dearer one
    res = solve_packing_lp([[1, 1], [1, 0], [0, 1]], [1, 1, 1], [1, 2])
    assert res.value == 2
    assert res.certificate_problems([[1, 1], [1, 0], [0, 1]], [1, 1, 1], [1, 2]) == []


def test_fractional_optimum():
    a = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]  # odd cycle of pairs
    res = solve_packing_lp(a, [1, 1, 1], [1, 1, 1])
    assert res.value == Fraction(3, 2)
    assert res.x == [Fraction(1, 2)] * 3


def test_tampered_certificate_is_caught():
    a, b, c = [[1, 1]], [1], [1, 1]
    assert "strong duality" in check_packing_certificate(a, b, c, [Fraction(1, 2), 0], [1])
    assert "dual feasibility" in check_packing_certificate(a, b, c, [1, 0], [Fraction(1, 2)])


@st.composite
def packing_lps(draw):
    m = draw(st.integers(1, 5))
    n = draw(st.integers(1, 6))
    a = [[draw(st.integers(0, 3)) for _ in range(n)] for _ in range(m)]
    b = [draw(st.integers(0, 4)) for _ in range(m)]
    c = [draw(st.integers(0, 5)) for _ in range(n)]
    # keep the LP bounded: every profitable column must use some resource
    for j in range(n):
        if c[j] and not any(a[i][j] for i in range(m)):
            a[0][j] = 1
    return a, b, c


@given(packing_lps())
def test_exact_lp_certifies_itself_and_matches_scipy(lp):
    a, b, c = lp
    res = solve_packing_lp(a, b, c)
    assert res.certificate_problems(a, b, c) == []
    assert abs(float(res.value) - scipy_packing_value(a, b, c)) < 1e-7
