"""Finite windows f_1..f_N of sequences, and the sequences derived from them."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import exactla as xla
from .errors import DimTooSmall, EmptyWindow, OutOfRange, UnknownName


class Tail(enum.Enum):
    ZERO = "zero"        # f_n = 0 for n > N
    UNKNOWN = "unknown"  # nothing is known past f_N


@dataclass(frozen=True)
class SequenceWindow:
    dim: int
    vectors: tuple[tuple, ...]
    tail: Tail = Tail.ZERO
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        vecs = tuple(tuple(v) for v in self.vectors)
        for v in vecs:
            if len(v) != self.dim:
                raise ValueError(f"vector of length {len(v)} in a dimension-{self.dim} window")
        object.__setattr__(self, "vectors", vecs)

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, n: int) -> tuple:
        """1-based access, f_n."""
        if not 1 <= n <= len(self.vectors):
            if self.tail is Tail.ZERO and n > len(self.vectors):
                return tuple(Fraction(0) for _ in range(self.dim))
            raise OutOfRange(f"f_{n} is outside the window")
        return self.vectors[n - 1]

    @property
    def exact(self) -> bool:
        return all(xla.is_exact(x) for v in self.vectors for x in v)

    def synthesis(self) -> list:
        """d x N matrix with columns f_n."""
        return xla.from_columns([list(v) for v in self.vectors], self.dim)

    def float_synthesis(self) -> np.ndarray:
        if not self.vectors:
            return np.zeros((self.dim, 0))
        return _float_cols(self.vectors, self.dim)

    def with_tail(self, tail: Tail) -> "SequenceWindow":
        return replace(self, tail=tail)


def _float_cols(vectors, dim) -> np.ndarray:
    a = np.array([[complex(x) for x in v] for v in vectors], dtype=complex).T.reshape(dim, len(vectors))
    return a.real.copy() if not np.any(a.imag) else a


@dataclass(frozen=True)
class DerivedSpec:
    alpha: object = Fraction(1)
    beta: object = Fraction(1)
    sign: int = 1

    @property
    def mu(self):
        """max(|alpha|^2, |beta|^2)."""
        return max(xla.abs2(self.alpha), xla.abs2(self.beta))

    def describe(self) -> str:
        op = "+" if self.sign > 0 else "-"
        return f"{xla.format_scalar(self.alpha)}*f_n {op} {xla.format_scalar(self.beta)}*f_(n+1)"


def unit(d: int, k: int) -> tuple:
    """e_k in dimension d (1-based)."""
    return tuple(Fraction(int(i == k - 1)) for i in range(d))


def _index_list(name: str, n: int) -> list[int]:
    if name == "onb":
        return list(range(1, n + 1))
    if name == "ex_e1e1":
        head = [1, 1]
        nxt = 2
    elif name == "ex_e123e1":
        head = [1, 2, 3, 1]
        nxt = 4
    elif name == "ex_norep":
        head = [1, 2, 1]
        nxt = 3
    elif name == "ex_e2e2":
        head = [1, 2, 3, 2, 2]
        nxt = 4
    else:
        raise UnknownName(name)
    out = head[:n]
    while len(out) < n:
        out.append(nxt)
        nxt += 1
    return out


CANONICAL_NAMES = ("onb", "ex_e1e1", "ex_e123e1", "ex_norep", "ex_e2e2", "sum_pairs")


def canonical(name: str, n: int, d: int) -> SequenceWindow:
    """Named example windows built from the standard basis e_1, e_2, ...

    ``sum_pairs`` is {e_k + e_(k+1)}_{k=1..n}, the standard complete Bessel
    sequence without a lower frame bound; it needs ``d >= n + 1``.
    """
    if n < 1:
        raise EmptyWindow("window length must be positive")
    if name == "sum_pairs":
        if d < n + 1:
            raise DimTooSmall(f"sum_pairs with n={n} needs dim >= {n + 1}")
        vecs = [xla.vadd(unit(d, k), unit(d, k + 1)) for k in range(1, n + 1)]
        return SequenceWindow(d, tuple(map(tuple, vecs)), Tail.UNKNOWN, f"sum_pairs n={n} d={d}")
    idx = _index_list(name, n)
    if max(idx) > d:
        raise DimTooSmall(f"{name} with n={n} needs dim >= {max(idx)}")
    return SequenceWindow(d, tuple(unit(d, k) for k in idx), Tail.ZERO, f"{name} n={n} d={d}")


def derive(w: SequenceWindow, spec: DerivedSpec) -> SequenceWindow:
    """{alpha f_n + sign * beta f_(n+1)} over the window.

    With a zero tail f_(N+1) = 0, so the result keeps N vectors; with an
    unknown tail the last vector cannot be formed and N - 1 remain.
    """
    if not len(w):
        raise EmptyWindow("cannot derive from an empty window")
    b = spec.beta if spec.sign > 0 else -spec.beta
    count = len(w) if w.tail is Tail.ZERO else len(w) - 1
    vecs = []
    for n in range(1, count + 1):
        vecs.append(tuple(xla.vadd(xla.vscale(spec.alpha, w[n]), xla.vscale(b, w[n + 1]))))
    return SequenceWindow(w.dim, tuple(vecs), w.tail, f"derived[{spec.describe()}] of {w.label}")


def sum_window(w: SequenceWindow) -> SequenceWindow:
    """{f_n + f_(n+1)} with the window's tail convention."""
    return derive(w, DerivedSpec())


def shift(w: SequenceWindow, k: int) -> SequenceWindow:
    """Drop the first k vectors: {f_(k+1), ..., f_N}."""
    if not 0 <= k < len(w):
        raise OutOfRange(f"shift {k} outside 0..{len(w) - 1}")
    return SequenceWindow(w.dim, w.vectors[k:], w.tail, f"shift {k} of {w.label}")


def sub_window(w: SequenceWindow, start: int, stop: int, tail: Tail = Tail.UNKNOWN) -> SequenceWindow:
    """f_start..f_stop (1-based, inclusive)."""
    return SequenceWindow(w.dim, w.vectors[start - 1:stop], tail, f"{w.label}[{start}..{stop}]")


def _random_scalar(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))


def random_vector(rng: random.Random, d: int) -> tuple:
    return tuple(_random_scalar(rng) for _ in range(d))


def random_window(n: int, d: int, seed: int, kind: str = "independent") -> SequenceWindow:
    """Seeded random window with small rational entries.

    ``independent`` resamples until the N vectors have rank N (needs N <= d).
    ``dependent`` replaces one vector f_j (j >= 2) by a random combination of
    its predecessors, so at least one exact relation is planted.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    rng = random.Random(f"fibseq:{kind}:{n}:{d}:{seed}")
    label = f"random {kind} n={n} d={d} seed={seed}"
    if kind == "independent":
        if n > d:
            raise ValueError("independent window needs n <= d")
        while True:
            vecs = [random_vector(rng, d) for _ in range(n)]
            if xla.span_rank(vecs, d) == n:
                return SequenceWindow(d, tuple(vecs), Tail.ZERO, label)
    if kind != "dependent":
        raise ValueError(f"unknown kind {kind!r}")
    vecs = [random_vector(rng, d) for _ in range(n)]
    if n >= 2:
        j = rng.randint(2, n)
        combo = [Fraction(0)] * d
        for i in range(j - 1):
            combo = xla.vadd(combo, xla.vscale(_random_scalar(rng), vecs[i]))
        vecs[j - 1] = tuple(combo)
    return SequenceWindow(d, tuple(vecs), Tail.ZERO, label)


# ---------------------------------------------------------------------------
# file format


def window_to_dict(w: SequenceWindow) -> dict:
    return {
        "dim": w.dim,
        "tail": w.tail.value,
        "label": w.label,
        "vectors": [[xla.format_scalar(x) for x in v] for v in w.vectors],
    }


def window_from_dict(obj: dict) -> SequenceWindow:
    try:
        dim = int(obj["dim"])
        tail = Tail(obj.get("tail", "zero"))
        vecs = tuple(tuple(xla.parse_scalar(str(s)) for s in v) for v in obj["vectors"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed sequence file: {exc}") from exc
    return SequenceWindow(dim, vecs, tail, str(obj.get("label", "")))


def dumps(w: SequenceWindow) -> str:
    return json.dumps(window_to_dict(w), indent=2) + "\n"


def loads(text: str) -> SequenceWindow:
    return window_from_dict(json.loads(text))


def save(w: SequenceWindow, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(w))


def load(path) -> SequenceWindow:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
