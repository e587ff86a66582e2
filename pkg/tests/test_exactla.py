from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fibseq import exactla as xla
from fibseq.errors import DimMismatch, ExactOnlyError

from conftest import gaussians, matrices, rationals


def test_gauss_collapses_to_fraction():
    i = xla.Gauss(0, 1)
    assert i * i == -1
    assert isinstance(i * i, F)
    assert isinstance((1 + i) * (1 - i), F)
    assert (1 + i) * (1 - i) == 2


def test_gauss_division_both_sides():
    i = xla.Gauss(0, 1)
    assert 1 / i == xla.Gauss(0, -1)
    assert (2 + 2 * i) / (1 + i) == 2
    with pytest.raises(ZeroDivisionError):
        i / 0


@given(gaussians, gaussians)
def test_field_axioms(a, b):
    assert a + b == b + a
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a
    assert xla.conj(xla.conj(a)) == a
    assert xla.abs2(a * b) == xla.abs2(a) * xla.abs2(b)


@given(st.one_of(rationals, gaussians))
def test_format_parse_round_trip(x):
    assert xla.parse_scalar(xla.format_scalar(x)) == x


def test_scalar_grammar():
    assert xla.parse_scalar("3/4") == F(3, 4)
    assert xla.parse_scalar("-1/2+3/1 i") == xla.Gauss(F(-1, 2), 3)
    assert xla.parse_scalar("1/1-1/1 i") == xla.Gauss(1, -1)
    assert xla.parse_scalar("0.5") == 0.5
    assert xla.format_scalar(xla.Gauss(1, -2)) == "1/1-2/1 i"
    with pytest.raises(ValueError):
        xla.parse_scalar("three")


def test_rref_and_pivots():
    m = [[F(0), F(2), F(4)], [F(1), F(1), F(1)], [F(1), F(2), F(3)]]
    r, piv = xla.rref(m)
    assert piv == [0, 1]
    assert r == [[1, 0, -1], [0, 1, 2], [0, 0, 0]]


def test_rref_rejects_floats():
    with pytest.raises(ExactOnlyError):
        xla.rref([[1.0, 2.0]])


def test_kernel_canonical_scaling():
    # columns e1, e2, e1, e3, e4 (the five-vector counterexample window in R^4)
    cols = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    m = xla.from_columns([[F(x) for x in c] for c in cols])
    assert xla.kernel_basis(m) == [[1, 0, -1, 0, 0]]
    m2 = xla.from_columns([[F(1), F(0)], [F(1), F(0)], [F(0), F(1)]])
    assert xla.kernel_basis(m2) == [[1, -1, 0]]


def test_solve_inconsistent_and_free_zero():
    m = [[F(1), F(1)], [F(2), F(2)]]
    assert xla.solve(m, [F(1), F(3)]) is None
    assert xla.solve(m, [F(1), F(2)]) == [1, 0]
    with pytest.raises(DimMismatch):
        xla.solve(m, [F(1)])


def test_matmul_shape_error():
    with pytest.raises(DimMismatch):
        xla.matmul([[F(1), F(2)]], [[F(1), F(2)]])


@given(matrices())
def test_rank_nullity_and_kernel(m):
    cols = len(m[0])
    ker = xla.kernel_basis(m)
    assert xla.rank(m) + len(ker) == cols
    for v in ker:
        assert xla.is_zero(xla.matvec(m, v))
        assert next(x for x in v if x != 0) == 1


@given(matrices())
def test_rank_matches_sympy(m):
    assert xla.rank(m) == sympy.Matrix(m).rank()


def _sym(x):
    if isinstance(x, xla.Gauss):
        return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)
    return sympy.Rational(x.numerator, x.denominator)


@given(matrices(scalars=gaussians))
def test_rank_matches_sympy_complex(m):
    assert xla.rank(m) == sympy.Matrix([[_sym(x) for x in row] for row in m]).rank()


@given(matrices(), st.data())
def test_solve_consistent_rhs(m, data):
    x = [data.draw(rationals) for _ in range(len(m[0]))]
    b = xla.matvec(m, x)
    y = xla.solve(m, b)
    assert y is not None and xla.matvec(m, y) == b
    many = xla.solve_many(m, [b, b])
    assert many[0] == y and many[1] == y


@given(matrices())
def test_adjoint_inner(m):
    rows, cols = xla.shape(m)
    u = [F(k + 1) for k in range(cols)]
    v = [F(2 * k - 1) for k in range(rows)]
    assert xla.inner(xla.matvec(m, u), v) == xla.inner(u, xla.matvec(xla.adjoint(m), v))


def test_span_helpers():
    a = [[F(1), F(0), F(0)], [F(0), F(1), F(0)]]
    b = [[F(1), F(1), F(0)], [F(1), F(-1), F(0)]]
    assert xla.same_span(a, b, 3)
    assert xla.in_span(a, [F(3), F(4), F(0)])
    assert not xla.in_span(a, [F(0), F(0), F(1)])
    assert xla.span_rank([], 3) == 0
