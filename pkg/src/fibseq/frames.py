"""Frame-theoretic analysis of windows and the sum/difference sequence identities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactla as xla
from . import spectral
from .errors import DimMismatch, ExactOnlyError, WindowTooShort, ZeroFirstVector, ZeroScalar
from .sequences import DerivedSpec, SequenceWindow, Tail, canonical, derive, shift, sub_window

REL_SLACK = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    exact: bool = True
    residual: float = 0.0
    witness: object = None
    skipped: bool = False
    detail: str = ""
    data: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "passed": self.passed,
            "exact": self.exact,
            "residual": self.residual,
        }
        if self.witness is not None:
            out["witness"] = to_jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        if self.data:
            out["data"] = to_jsonable(self.data)
        return out


def to_jsonable(obj):
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, xla.Gauss, complex)):
        return xla.format_scalar(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def vec_norm(v) -> float:
    return math.sqrt(sum(float(xla.abs2(x)) for x in v))


def _exact_result(name: str, residual_vec, witness=None, **data) -> CheckResult:
    ok = xla.is_zero(residual_vec)
    return CheckResult(
        name,
        ok,
        exact=True,
        residual=0.0 if ok else vec_norm(residual_vec),
        witness=None if ok else (witness if witness is not None else list(residual_vec)),
        data=data,
    )


def _le(a: float, b: float, rel: float = REL_SLACK) -> bool:
    return a <= b + rel * max(abs(a), abs(b)) + 1e-15


def _require_exact(w: SequenceWindow) -> None:
    if not w.exact:
        raise ExactOnlyError("this operation needs an exact window")


def _require_zero_tail(w: SequenceWindow, what: str) -> None:
    if w.tail is not Tail.ZERO:
        raise ValueError(f"{what} holds exactly only for zero-tail windows")


@dataclass(frozen=True)
class KernelSpace:
    ambient_len: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, c) -> bool:
        if len(c) != self.ambient_len:
            raise DimMismatch("coefficient vector has wrong length")
        return xla.in_span([list(b) for b in self.basis], list(c))

    def same_as(self, other: "KernelSpace") -> bool:
        if self.ambient_len != other.ambient_len:
            return False
        if self.dim != other.dim:
            return False
        if not self.dim:
            return True
        return xla.same_span(self.basis, other.basis, self.ambient_len)

    def to_dict(self):
        return {"ambient_len": self.ambient_len, "basis": to_jsonable([list(b) for b in self.basis])}


def kernel_of(vectors, dim: int) -> KernelSpace:
    """Kernel of the synthesis map c -> sum c_n v_n."""
    n = len(vectors)
    if n == 0:
        return KernelSpace(0, ())
    m = xla.from_columns([list(v) for v in vectors], dim)
    return KernelSpace(n, tuple(tuple(b) for b in xla.kernel_basis(m)))


def synthesis_kernel(w: SequenceWindow) -> KernelSpace:
    _require_exact(w)
    return kernel_of(w.vectors, w.dim)


@dataclass(frozen=True)
class FrameReport:
    n: int
    d: int
    rank: int
    complete: bool
    linearly_independent: bool
    kernel_dim: int
    bounds: spectral.SpectralSummary
    is_frame_for_h: bool

    def to_dict(self):
        return {
            "N": self.n,
            "d": self.d,
            "rank": self.rank,
            "complete": self.complete,
            "linearly_independent": self.linearly_independent,
            "kernel_dim": self.kernel_dim,
            "bounds": self.bounds.to_dict(),
            "is_frame_for_H": self.is_frame_for_h,
        }


def analyze(w: SequenceWindow, tolerance: float = 1e-9) -> FrameReport:
    """Rank, completeness and independence exactly; optimal bounds in floating point."""
    _require_exact(w)
    r = xla.span_rank([list(v) for v in w.vectors], w.dim)
    bounds = spectral.frame_bounds(w, tolerance)
    complete = r == w.dim
    return FrameReport(
        n=len(w),
        d=w.dim,
        rank=r,
        complete=complete,
        linearly_independent=r == len(w),
        kernel_dim=len(w) - r,
        bounds=bounds,
        is_frame_for_h=complete and bounds.lambda_min > tolerance,
    )


def frame_operator_apply(w: SequenceWindow, f) -> list:
    """S_F f = sum_n <f, f_n> f_n."""
    if len(f) != w.dim:
        raise DimMismatch(f"vector of length {len(f)} for a dimension-{w.dim} window")
    out = [Fraction(0)] * w.dim if all(xla.is_exact(x) for x in f) else [0.0] * w.dim
    for v in w.vectors:
        c = xla.inner(f, v)
        if c != 0:
            out = xla.vadd(out, xla.vscale(c, v))
    return out


def frame_operator_matrix(w: SequenceWindow) -> list:
    """S_F = F F^* as an exact d x d matrix."""
    f = w.synthesis()
    if not w.vectors:
        return xla.zeros(w.dim, w.dim)
    return xla.matmul(f, xla.adjoint(f))


def _sum_diff(w: SequenceWindow, spec: DerivedSpec | None = None):
    spec = spec or DerivedSpec()
    plus = derive(w, DerivedSpec(spec.alpha, spec.beta, 1))
    minus = derive(w, DerivedSpec(spec.alpha, spec.beta, -1))
    return plus, minus


def check_sf_identity(w: SequenceWindow, f) -> CheckResult:
    """4 S_F f = S_M f + S_N f + 2 <f, f_1> f_1 with M, N the sum and difference sequences."""
    _require_zero_tail(w, "the frame-operator identity")
    if not len(w):
        return _exact_result("sf_identity", [Fraction(0)] * w.dim)
    m, n = _sum_diff(w)
    lhs = xla.vscale(4, frame_operator_apply(w, f))
    rhs = xla.vadd(frame_operator_apply(m, f), frame_operator_apply(n, f))
    rhs = xla.vadd(rhs, xla.vscale(2 * xla.inner(f, w[1]), w[1]))
    return _exact_result("sf_identity", xla.vsub(lhs, rhs))


def _nonzero_spec(spec: DerivedSpec, need_beta: bool) -> None:
    if spec.alpha == 0 or (need_beta and spec.beta == 0):
        raise ZeroScalar("alpha and beta must be nonzero" if need_beta else "alpha must be nonzero")


def _union(a: SequenceWindow, b: SequenceWindow) -> SequenceWindow:
    return SequenceWindow(a.dim, a.vectors + b.vectors, a.tail, f"{a.label} U {b.label}")


def check_bessel_transfer(w: SequenceWindow, spec: DerivedSpec) -> CheckResult:
    """Bessel bounds of F against those of M = {a f_n + b f_(n+1)} and N = {a f_n - b f_(n+1)}.

    Verified, with optimal bounds: B_M, B_N and B_(M u N) are at most
    4 mu B_F, and 2|a|^2 B_F <= B_(M u N) <= B_M + B_N.
    """
    _nonzero_spec(spec, need_beta=True)
    _require_zero_tail(w, "Bessel transfer")
    m, n = _sum_diff(w, spec)
    bf = spectral.frame_bounds(w).lambda_max
    bm = spectral.frame_bounds(m).lambda_max
    bn = spectral.frame_bounds(n).lambda_max
    bu = spectral.frame_bounds(_union(m, n)).lambda_max
    mu = float(spec.mu)
    a2 = float(xla.abs2(spec.alpha))
    pairs = {
        "B_M <= 4 mu B_F": (bm, 4 * mu * bf),
        "B_N <= 4 mu B_F": (bn, 4 * mu * bf),
        "B_MuN <= 4 mu B_F": (bu, 4 * mu * bf),
        "2|a|^2 B_F <= B_MuN": (2 * a2 * bf, bu),
        "B_MuN <= B_M + B_N": (bu, bm + bn),
    }
    failed = [k for k, (x, y) in pairs.items() if not _le(x, y)]
    residual = max((x - y for x, y in pairs.values()), default=0.0)
    return CheckResult(
        "bessel_transfer",
        not failed,
        exact=False,
        residual=max(residual, 0.0),
        witness=failed or None,
        data={"B_F": bf, "B_M": bm, "B_N": bn, "B_MuN": bu, "mu": mu},
    )


def check_union_frame(w: SequenceWindow, spec: DerivedSpec) -> CheckResult:
    """F against M u N: the exact frame-operator identity and both bound inequalities."""
    _nonzero_spec(spec, need_beta=False)
    _require_zero_tail(w, "the union frame identity")
    m, n = _sum_diff(w, spec)
    mn = _union(m, n)
    data = {}
    witness = None
    exact_ok = True
    if w.exact and len(w):
        lhs = frame_operator_matrix(mn)
        a2, b2 = xla.abs2(spec.alpha), xla.abs2(spec.beta)
        rhs = [[2 * a2 * x for x in row] for row in frame_operator_matrix(w)]
        if len(w) > 1:
            s1 = frame_operator_matrix(shift(w, 1))
            rhs = [[x + 2 * b2 * y for x, y in zip(r1, r2)] for r1, r2 in zip(rhs, s1)]
        diff = [x - y for r1, r2 in zip(lhs, rhs) for x, y in zip(r1, r2)]
        exact_ok = xla.is_zero(diff)
        if not exact_ok:
            witness = {"operator_identity_residual": diff}
        data["operator_identity"] = exact_ok
    bf = spectral.frame_bounds(w)
    bu = spectral.frame_bounds(mn)
    mu = float(spec.mu)
    a2f = float(xla.abs2(spec.alpha))
    lower_ok = _le(a2f * bf.lambda_min, bu.lambda_min)
    upper_ok = _le(bu.lambda_max, 4 * mu * bf.lambda_max)
    data.update(A_F=bf.lambda_min, B_F=bf.lambda_max, A_MuN=bu.lambda_min, B_MuN=bu.lambda_max, mu=mu)
    passed = exact_ok and lower_ok and upper_ok
    if not passed and witness is None:
        witness = {"lower_bound": lower_ok, "upper_bound": upper_ok}
    residual = max(0.0, a2f * bf.lambda_min - bu.lambda_min, bu.lambda_max - 4 * mu * bf.lambda_max)
    return CheckResult("union_frame", passed, exact=False, residual=residual, witness=witness, data=data)


def check_kernel_identity(w: SequenceWindow) -> CheckResult:
    """ker T_F = ker T_M intersect ker T_N, gated on windowed shift invariance.

    Coefficient vectors live on n = 1..N-1 (the indices where f_n + f_(n+1)
    and f_n - f_(n+1) are known).  The hypothesis is that every c with
    sum_(n<N) c_n f_n = 0 stays in ker T_F after a right shift.
    """
    _require_exact(w)
    n = len(w)
    if n < 2:
        return CheckResult("kernel_identity", True, detail="window too short; all kernels trivial")
    head = [list(v) for v in w.vectors[:-1]]
    k0 = kernel_of(head, w.dim)
    for c in k0.basis:
        shifted = [Fraction(0)] + list(c)
        image = [Fraction(0)] * w.dim
        for coef, v in zip(shifted, w.vectors):
            if coef:
                image = xla.vadd(image, xla.vscale(coef, v))
        if not xla.is_zero(image):
            return CheckResult(
                "kernel_identity",
                False,
                skipped=True,
                witness=list(c) + [Fraction(0)],
                detail="ker T_F is not invariant under the right shift",
                data={"shift_image": image},
            )
    m = sub_window(w, 1, n).with_tail(Tail.UNKNOWN)
    plus, minus = _sum_diff(m)
    stacked = [list(p) + list(q) for p, q in zip(plus.vectors, minus.vectors)]
    kmn = kernel_of(stacked, 2 * w.dim)
    ok = k0.same_as(kmn)
    return CheckResult(
        "kernel_identity",
        ok,
        witness=None if ok else {"ker_F": k0.to_dict(), "ker_M_cap_ker_N": kmn.to_dict()},
        data={"kernel_dim": k0.dim},
    )


def prefix_ranks(w: SequenceWindow) -> list[int]:
    """ranks[k] = rank(f_1..f_k), ranks[0] = 0."""
    _require_exact(w)
    out = [0]
    for k in range(1, len(w) + 1):
        out.append(xla.span_rank([list(v) for v in w.vectors[:k]], w.dim))
    return out


def find_breakpoint(w: SequenceWindow) -> int | None:
    """Smallest m >= 2 with f_m in span{f_1..f_(m-1)} and f_(m+1) outside span{f_1..f_m}."""
    if len(w) < 3:
        raise WindowTooShort("breakpoint search needs N >= 3")
    if xla.is_zero(w[1]):
        raise ZeroFirstVector("f_1 must be nonzero")
    ranks = prefix_ranks(w)
    for m in range(2, len(w)):
        if ranks[m] == ranks[m - 1] and ranks[m + 1] > ranks[m]:
            return m
    return None


def tail_independence_index(w: SequenceWindow) -> int | None:
    """Smallest m >= 0 with {f_(m+n) + f_(m+n+1)} independent over the rest of the window.

    Only m <= N - 3 is searched, so at least two sums are compared.
    """
    if len(w) < 4:
        raise WindowTooShort("needs N >= 4")
    _require_exact(w)
    n = len(w)
    for m in range(0, n - 2):
        sums = [xla.vadd(w[m + k], w[m + k + 1]) for k in range(1, n - m)]
        if xla.span_rank(sums, w.dim) == len(sums):
            return m
    return None


def completeness_decay(alpha, beta, sizes) -> list[tuple[int, float]]:
    """Lower frame bound of {alpha e_n + beta e_(n+1)}_(n<=N) inside span{e_1..e_N}.

    The zero-tail window is square and invertible, so its smallest singular
    value is 1 / ||F^-1||; the inverse is formed exactly so the decay can be
    followed well below double-precision resolution of the Gram matrix.
    """
    out = []
    spec = DerivedSpec(alpha, beta, 1)
    for n in sizes:
        f = derive(canonical("onb", n, n), spec).synthesis()
        inv_cols = xla.solve_many(f, xla.identity(n))
        inv = xla.from_columns(inv_cols, n)
        out.append((n, 1.0 / spectral.operator_norm(inv)))
    return out


# ---------------------------------------------------------------------------
# identities for the sum sequence {f_n + f_(n+1)}


def check_alternating_expansion(w: SequenceWindow) -> CheckResult:
    """f_n = sum_(i<m) (-1)^i (f_(n-i-1) + f_(n-i)) + (-1)^m f_(n-m) for 1 <= m < n <= N."""
    _require_exact(w)
    for n in range(2, len(w) + 1):
        for m in range(1, n):
            acc = [Fraction(0)] * w.dim
            for i in range(m):
                term = xla.vadd(w[n - i - 1], w[n - i])
                acc = xla.vadd(acc, term) if i % 2 == 0 else xla.vsub(acc, term)
            tail = w[n - m]
            acc = xla.vadd(acc, tail) if m % 2 == 0 else xla.vsub(acc, tail)
            diff = xla.vsub(acc, w[n])
            if not xla.is_zero(diff):
                return _exact_result("alternating_expansion", diff, witness={"n": n, "m": m})
    return CheckResult("alternating_expansion", True)


def _sums(w: SequenceWindow) -> list:
    return [list(v) for v in derive(w.with_tail(Tail.UNKNOWN), DerivedSpec()).vectors] if len(w) > 1 else []


def check_span_identity(w: SequenceWindow) -> CheckResult:
    """span{f_n} = span({f_1} u {f_n + f_(n+1)})."""
    _require_exact(w)
    if not len(w):
        return CheckResult("span_identity", True)
    lhs = [list(v) for v in w.vectors]
    rhs = [list(w[1])] + _sums(w)
    ok = xla.same_span(lhs, rhs, w.dim)
    return CheckResult("span_identity", ok, witness=None if ok else {
        "rank_F": xla.span_rank(lhs, w.dim), "rank_rhs": xla.span_rank(rhs, w.dim)})


def check_sum_independence(w: SequenceWindow) -> CheckResult:
    """F independent implies {f_n + f_(n+1)} independent."""
    _require_exact(w)
    vecs = [list(v) for v in w.vectors]
    if xla.span_rank(vecs, w.dim) != len(vecs):
        return CheckResult("sum_independence", False, skipped=True, detail="F is dependent")
    sums = _sums(w)
    ok = xla.span_rank(sums, w.dim) == len(sums)
    return CheckResult("sum_independence", ok,
                       witness=None if ok else kernel_of(sums, w.dim).basis[0])


def check_reverse_independence(w: SequenceWindow) -> CheckResult:
    """{f_1} u {f_n + f_(n+1)} independent implies F independent."""
    _require_exact(w)
    vecs = [list(w[1])] + _sums(w) if len(w) else []
    if xla.span_rank(vecs, w.dim) != len(vecs):
        return CheckResult("reverse_independence", False, skipped=True,
                           detail="{f_1} u M is dependent")
    ker = synthesis_kernel(w)
    ok = ker.dim == 0
    return CheckResult("reverse_independence", ok, witness=None if ok else ker.basis[0])


def check_rank_transfer(w: SequenceWindow, spec: DerivedSpec) -> CheckResult:
    """rank{a f_n + b f_(n+1)} = rank{f_n} for zero-tail windows and a != 0."""
    _nonzero_spec(spec, need_beta=False)
    _require_zero_tail(w, "rank transfer")
    _require_exact(w)
    m = derive(w, DerivedSpec(spec.alpha, spec.beta, spec.sign))
    rf = xla.span_rank([list(v) for v in w.vectors], w.dim)
    rm = xla.span_rank([list(v) for v in m.vectors], w.dim)
    return CheckResult("rank_transfer", rf == rm, witness=None if rf == rm else {"rank_F": rf, "rank_M": rm})
