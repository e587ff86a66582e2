"""Explicit operators for the named example windows.

Each operator is given by its action on the standard basis, e_k -> dict of
{index: coefficient}.  On a finite window an image that needs a basis vector
beyond the ambient dimension is dropped (its column is zero); verification
only ever touches columns whose formula stays inside the window.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from . import exactla as xla
from .fibrep import FibOperator, Method, construct_half_f3, from_ambient
from .errors import WindowTooShort
from .sequences import SequenceWindow, canonical

Image = dict[int, Fraction]
HALF = Fraction(1, 2)


def _combine(*terms: tuple[Fraction, Image]) -> Image:
    out: Image = {}
    for c, img in terms:
        for k, v in img.items():
            out[k] = out.get(k, Fraction(0)) + c * v
    return {k: v for k, v in out.items() if v}


def _e(k: int) -> Image:
    return {k: Fraction(1)}


def ambient_matrix(d: int, image: Callable[[int], Image]) -> list:
    cols = []
    for k in range(1, d + 1):
        img = image(k)
        col = [Fraction(0)] * d
        if all(i <= d for i in img):
            for i, v in img.items():
                col[i - 1] = v
        cols.append(col)
    return xla.from_columns(cols, d)


def _alt_tail(n: int, lo: int) -> Image:
    """sum_(i=0..n-lo) (-1)^i e_(n+1-i): e_(n+1) - e_n + ... down to e_(lo+1)."""
    return {n + 1 - i: Fraction((-1) ** i) for i in range(n - lo + 1)}


def image_e1e1(k: int) -> Image:
    if k == 1:
        return {2: HALF}
    return _combine((Fraction(1), _alt_tail(k, 2)), (Fraction((-1) ** (k + 1)), {2: HALF}))


def image_e123e1(k: int) -> Image:
    base = {
        1: {4: HALF, 3: HALF, 1: -HALF},
        2: {4: -HALF, 3: HALF, 1: HALF},
        3: {4: HALF, 3: -HALF, 1: HALF},
    }
    if k in base:
        return base[k]
    if k == 4:
        return _combine((Fraction(1), _e(5)), (Fraction(-1), base[1]))
    return _combine((Fraction(1), _e(k + 1)), (Fraction(-1), image_e123e1(k - 1)))


def image_onb_t(k: int) -> Image:
    """T e_1 = T e_2 = e_3/2, T e_n = (-1)^n e_3/2 - sum_(i=4..n+1) (-1)^(n+i) e_i (n >= 3)."""
    if k <= 2:
        return {3: HALF}
    out = {i: Fraction(-((-1) ** (k + i))) for i in range(4, k + 2)}
    return _combine((Fraction(1), out), (Fraction((-1) ** k), {3: HALF}))


def image_onb_s(k: int) -> Image:
    """S e_1 = 0, S e_2 = e_3, S e_3 = e_4 - e_3, S e_n = (-1)^n e_3 - sum_(i=4..n+1) (-1)^(n+i) e_i."""
    if k == 1:
        return {}
    if k == 2:
        return _e(3)
    if k == 3:
        return {4: Fraction(1), 3: Fraction(-1)}
    out = {i: Fraction(-((-1) ** (k + i))) for i in range(4, k + 2)}
    return _combine((Fraction(1), out), (Fraction((-1) ** k), _e(3)))


def image_e2e2(k: int) -> Image:
    fixed = {
        1: {3: Fraction(1), 4: -HALF},
        2: {4: HALF},
        3: {2: Fraction(1), 4: -HALF},
    }
    if k in fixed:
        return fixed[k]
    return _combine((Fraction(1), _alt_tail(k, 4)), (Fraction((-1) ** (k - 3)), {4: HALF}))


# operator name -> (window name, dimension for length n, images, shortest window)
_EXAMPLES = {
    "ex_e1e1": ("ex_e1e1", lambda n: n - 1, image_e1e1, 3),
    "ex_e123e1": ("ex_e123e1", lambda n: n - 1, image_e123e1, 5),
    "onb_t": ("onb", lambda n: n, image_onb_t, 3),
    "onb_s": ("onb", lambda n: n, image_onb_s, 3),
    "ex_e2e2": ("ex_e2e2", lambda n: n - 2, image_e2e2, 6),  # T e_1 already needs e_4 = f_6
}

EXAMPLE_OPERATORS = tuple(_EXAMPLES) + ("half_f3",)


def example_operator(name: str, n: int = 10) -> tuple[SequenceWindow, FibOperator]:
    """A named example window of length n with its explicit representation."""
    if name == "half_f3":
        w = canonical("onb", n, n)
        return w, construct_half_f3(w)
    window_name, dim, image, shortest = _EXAMPLES[name]
    if n < shortest:
        raise WindowTooShort(f"{name} needs a window of length >= {shortest}")
    d = dim(n)
    w = canonical(window_name, n, d)
    return w, from_ambient(w, ambient_matrix(d, image), Method.EXPLICIT)
