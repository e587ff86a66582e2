"""Exact linear algebra over the Gaussian rationals.

Real scalars are plain :class:`fractions.Fraction` (or ``int``); scalars with a
nonzero imaginary part are :class:`Gauss`.  Arithmetic between the two mixes
freely, and a :class:`Gauss` whose imaginary part cancels collapses back to a
``Fraction``, so every exact value has exactly one representation.

Matrices are lists of rows, vectors are lists.  Nothing here mutates its
inputs.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

from .errors import DimMismatch, ExactOnlyError


class Gauss:
    """Complex number with rational real and imaginary parts (im != 0)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _parts(x):
        if isinstance(x, Gauss):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gauss(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gauss(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gauss(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return gauss(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b = self.re, self.im
        return gauss((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        n = self.re * self.re + self.im * self.im
        return gauss(p[0], p[1]) * Gauss(self.re / n, -self.im / n)

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True  # im != 0 by construction

    def conjugate(self):
        return Gauss(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Gauss({self.re!s}, {self.im!s})"


Scalar = Union[int, Fraction, Gauss]
Matrix = list  # list of rows


def gauss(re, im=0) -> Scalar:
    """Canonical exact scalar: a Fraction when the imaginary part vanishes."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return Gauss(re, im)


def is_exact(x) -> bool:
    return isinstance(x, (Gauss, Rational)) and not isinstance(x, bool)


def conj(x):
    if isinstance(x, Gauss):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def abs2(x):
    """|x|^2, exact for exact scalars."""
    if isinstance(x, Gauss):
        return x.re * x.re + x.im * x.im
    if isinstance(x, complex):
        return x.real * x.real + x.imag * x.imag
    return x * x


def to_complex(x) -> complex:
    if isinstance(x, (Gauss, complex)):
        return complex(x)
    return complex(float(x))


# ---------------------------------------------------------------------------
# scalar strings

_NUM = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(rf"^\s*([+-]?{_NUM})\s*(?:([+-])\s*({_NUM})\s*i)?\s*$")
_DEC = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_FLOAT_RE = re.compile(rf"^\s*([+-]?{_DEC})\s*(?:([+-])\s*({_DEC})\s*i)?\s*$")


def format_scalar(x) -> str:
    """Render a scalar in the ``p/q`` / ``p/q+r/s i`` grammar (decimals for floats)."""
    if isinstance(x, (float, complex)):
        z = complex(x)
        if z.imag == 0:
            return repr(z.real)
        sign = "-" if z.imag < 0 else "+"
        return f"{z.real!r}{sign}{abs(z.imag)!r} i"
    if isinstance(x, Gauss):
        re_, im = x.re, x.im
    else:
        re_, im = Fraction(x), Fraction(0)
    s = f"{re_.numerator}/{re_.denominator}"
    if im:
        sign = "-" if im < 0 else "+"
        s += f"{sign}{abs(im.numerator)}/{im.denominator} i"
    return s


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`.  Raises ValueError on malformed input."""
    m = _SCALAR_RE.match(text)
    if m:
        re_ = Fraction(m.group(1))
        im = Fraction(0)
        if m.group(2):
            im = Fraction(m.group(3))
            if m.group(2) == "-":
                im = -im
        return gauss(re_, im)
    m = _FLOAT_RE.match(text)
    if m:
        im = 0.0
        if m.group(2):
            im = float(m.group(3)) * (-1.0 if m.group(2) == "-" else 1.0)
        re_ = float(m.group(1))
        return complex(re_, im) if im else re_
    raise ValueError(f"malformed scalar {text!r}")


# ---------------------------------------------------------------------------
# matrix helpers


def _require_exact(m: Matrix) -> None:
    for row in m:
        for x in row:
            if not is_exact(x):
                raise ExactOnlyError(f"exact scalar expected, got {type(x).__name__}")


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def from_columns(cols: Sequence[Sequence], rows: int | None = None) -> Matrix:
    if rows is None:
        rows = len(cols[0]) if cols else 0
    return [[c[i] for c in cols] for i in range(rows)]


def columns(m: Matrix) -> list[list]:
    r, c = shape(m)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def transpose(m: Matrix) -> Matrix:
    return columns(m)


def adjoint(m: Matrix) -> Matrix:
    r, c = shape(m)
    return [[conj(m[i][j]) for i in range(r)] for j in range(c)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise DimMismatch(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = columns(b)
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    r, c = shape(a)
    if c != len(v):
        raise DimMismatch(f"cannot apply {r}x{c} matrix to vector of length {len(v)}")
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def vadd(u: Sequence, v: Sequence) -> list:
    return [x + y for x, y in zip(u, v, strict=True)]


def vsub(u: Sequence, v: Sequence) -> list:
    return [x - y for x, y in zip(u, v, strict=True)]


def vscale(a, v: Sequence) -> list:
    return [a * x for x in v]


def inner(u: Sequence, v: Sequence):
    """<u, v>, linear in the first slot."""
    return sum((x * conj(y) for x, y in zip(u, v, strict=True)), Fraction(0))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# elimination


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot search scans columns left to right and takes the first row with a
    nonzero entry; pivot rows are normalized to a leading 1 and cleared above
    and below.
    """
    _require_exact(m)
    a = [list(row) for row in m]
    rows, cols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        pivot_row = a[r]
        for i in range(rows):
            if i != r:
                f = a[i][c]
                if f != 0:
                    a[i] = [x - f * y if y else x for x, y in zip(a[i], pivot_row)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: Matrix, cols: int | None = None) -> list[list]:
    """Exact basis of {c : m c = 0}.

    One vector per free column, in increasing free-column order; each vector
    is scaled so that its first nonzero entry is 1.  ``cols`` gives the column
    count when ``m`` has no rows.
    """
    if not m:
        n = cols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(m)
    n = len(m[0])
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row][free]
        lead = next(x for x in v if x != 0)
        if lead != 1:
            v = [x / lead for x in v]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence) -> list | None:
    """Particular solution of ``m x = b`` with free variables set to 0.

    Returns ``None`` when ``b`` is outside the column span.
    """
    rows, cols = shape(m)
    if len(b) != rows:
        raise DimMismatch(f"rhs length {len(b)} != {rows} rows")
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for row, pc in enumerate(pivots):
        x[pc] = r[row][cols]
    return x


def solve_many(m: Matrix, rhs: Sequence[Sequence]) -> list[list] | None:
    """Solve ``m x = b`` for every ``b`` in ``rhs`` with one elimination."""
    rows, cols = shape(m)
    k = len(rhs)
    aug = [list(row) + [b[i] for b in rhs] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if any(pc >= cols for pc in pivots):
        return None
    out = []
    for j in range(k):
        x = [Fraction(0)] * cols
        for row, pc in enumerate(pivots):
            x[pc] = r[row][cols + j]
        out.append(x)
    return out


def in_span(vectors: Sequence[Sequence], v: Sequence, dim: int | None = None) -> bool:
    if is_zero(v):
        return True
    if not vectors:
        return False
    return solve(from_columns(vectors, len(v)), v) is not None


def span_rank(vectors: Sequence[Sequence], dim: int) -> int:
    if not vectors:
        return 0
    return rank(from_columns(vectors, dim))


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> bool:
    ra, rb = span_rank(a, dim), span_rank(b, dim)
    return ra == rb == span_rank(list(a) + list(b), dim)
