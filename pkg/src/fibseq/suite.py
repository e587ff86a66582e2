"""Seeded randomized checks of the exact identities and operator properties.

Every family draws its instances from ``random.Random`` seeded by a string
that names the family and the seed, so a report is reproducible from its
flags alone.  Each family returns a :class:`FamilyReport`; a family passes
when none of its instances fails (skipped instances are counted, not failed).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import exactla as xla
from . import fibrep, frames
from .errors import NoRepresentation
from .frames import CheckResult
from .sequences import (
    DerivedSpec,
    SequenceWindow,
    Tail,
    random_vector,
    random_window,
    sum_window,
)

PlanFn = Callable[[int], fibrep.BinomialPlan]


@dataclass
class FamilyReport:
    name: str
    instances: int = 0
    failures: int = 0
    skipped: int = 0
    first_failure: dict | None = None
    counters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, result: CheckResult, where: dict) -> None:
        if result.skipped:
            self.skipped += 1
        elif not result.passed:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = {**where, "check": result.to_dict()}

    def bump(self, key: str, by: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + by

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "instances": self.instances,
            "failures": self.failures,
            "skipped": self.skipped,
        }
        if self.counters:
            out["counters"] = dict(sorted(self.counters.items()))
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        return out


def _rng(family: str, seed: int) -> random.Random:
    return random.Random(f"fibseq-suite:{family}:{seed}")


def _nonzero(rng: random.Random) -> Fraction:
    while True:
        x = Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))
        if x:
            return x


def _random_matrix(rng: random.Random, rows: int, cols: int) -> list:
    return [[Fraction(rng.randint(-3, 3), rng.choice((1, 2))) for _ in range(cols)] for _ in range(rows)]


def _injective_matrix(rng: random.Random, rows: int, cols: int) -> list:
    while True:
        k = _random_matrix(rng, rows, cols)
        if xla.rank(k) == cols:
            return k


def identity_window(seed: int, max_n: int, max_dim: int) -> SequenceWindow:
    rng = _rng("window", seed)
    n = rng.randint(2, max(2, max_n))
    d = rng.randint(1, max(1, max_dim))
    kind = "independent" if n <= d and rng.random() < 0.5 else "dependent"
    return random_window(n, d, seed, kind)


# ---------------------------------------------------------------------------
# exact identities on sequence windows, plus the representation checks


def run_identities(seeds: int = 200, max_n: int = 10, max_dim: int = 10) -> FamilyReport:
    rep = FamilyReport("exact_identities")
    for seed in range(seeds):
        rng = _rng("identities", seed)
        w = identity_window(seed, max_n, max_dim)
        spec = DerivedSpec(_nonzero(rng), _nonzero(rng), rng.choice((1, -1)))
        f = random_vector(rng, w.dim)
        where = {"seed": seed, "n": len(w), "dim": w.dim}
        rep.instances += 1
        checks = [
            frames.check_sf_identity(w, f),
            frames.check_union_frame(w, spec),
            frames.check_bessel_transfer(w, spec),
            frames.check_kernel_identity(w),
            frames.check_alternating_expansion(w),
            frames.check_span_identity(w.with_tail(Tail.UNKNOWN)),
            frames.check_sum_independence(w),
            frames.check_reverse_independence(w),
            frames.check_rank_transfer(w, spec),
        ]
        for c in checks:
            rep.record(c, where)
        if len(w) >= 3:
            for c in _representation_checks(w, rng, rep):
                rep.record(c, where)
    return rep


def _representation_checks(w: SequenceWindow, rng: random.Random, rep: FamilyReport) -> list[CheckResult]:
    out = []
    sums = [list(v) for v in sum_window(w.with_tail(Tail.UNKNOWN)).vectors]
    sums_independent = xla.span_rank(sums, w.dim) == len(sums)
    try:
        t = fibrep.construct(w)
    except NoRepresentation as exc:
        rep.bump("no_representation")
        # the certificate must be genuine, and independent sums never produce one
        c = list(exc.witness)
        lhs = [Fraction(0)] * w.dim
        for k, ck in enumerate(c):
            lhs = xla.vadd(lhs, xla.vscale(ck, xla.vadd(w[k + 1], w[k + 2])))
        ok = xla.is_zero(lhs) and not xla.is_zero(exc.image) and not sums_independent
        return [CheckResult("certificate", ok, witness=None if ok else c)]
    rep.bump("represented")
    out.append(fibrep.verify(w, t))
    if len(w) >= 4:
        out.append(fibrep.check_mn_equivalence(w, t))
    out.append(fibrep.range_check(w, t))
    if not xla.is_zero(w[1]) and frames.find_breakpoint(w) is not None:
        out.append(fibrep.containment_check(w, t))
    out.append(fibrep.injectivity_check(w, t))
    inv = fibrep.invariant_subspace_witness(w, t)
    out.append(CheckResult("invariant_subspace", (inv is None) == sums_independent, witness=inv))
    k = _injective_matrix(rng, w.dim + rng.randint(0, 2), w.dim)
    kw = fibrep.transport_window(w, k)
    out.append(fibrep.verify(kw, fibrep.transport(w, t, k)))
    return out


# ---------------------------------------------------------------------------
# closed form of the iterates against the recursion


def closed_form_instance(seed: int, max_dim: int = 6):
    rng = _rng("closed_form", seed)
    d = rng.randint(1, max_dim)
    t = _random_matrix(rng, d, d)
    return t, list(random_vector(rng, d)), list(random_vector(rng, d))


def run_closed_form(seeds: int = 100, max_dim: int = 6, n_max: int = 16,
                    plan_for: PlanFn | None = None, fail_fast: bool = False) -> FamilyReport:
    """closed_form_iterate(n) == recursion for 4 <= n <= n_max, exactly."""
    rep = FamilyReport("closed_form")
    plan_for = plan_for or fibrep.binomial_plan
    for seed in range(seeds):
        t, f1, f2 = closed_form_instance(seed, max_dim)
        seq = [f1, f2]
        while len(seq) < n_max:
            seq.append(xla.matvec(t, xla.vadd(seq[-2], seq[-1])))
        rep.instances += 1
        for n in range(4, n_max + 1):
            got = fibrep.closed_form_iterate(t, f1, f2, n, plan_for(n))
            diff = xla.vsub(got, seq[n - 1])
            if not xla.is_zero(diff):
                rep.record(CheckResult("closed_form", False, residual=frames.vec_norm(diff),
                                       witness={"n": n}), {"seed": seed, "n": n})
                break
        if fail_fast and rep.failures:
            break
    return rep


def mutated_plans(n_max: int = 16):
    """Every single-sign flip of a nonzero coefficient, as ``(n, index, part, plan_for)``."""
    for n in range(4, n_max + 1):
        plan = fibrep.binomial_plan(n)
        for idx, (_, c2, _, c1, _) in enumerate(plan.terms):
            for part, coeff in (("f2", c2), ("f1", c1)):
                if coeff:
                    bad = plan.flipped(idx, part)
                    yield n, idx, part, _override(n, bad)


def _override(n: int, bad: fibrep.BinomialPlan) -> PlanFn:
    return lambda k: bad if k == n else fibrep.binomial_plan(k)


# ---------------------------------------------------------------------------
# norm bound, injectivity, uniqueness


def norm_bound_window(seed: int, max_dim: int = 6) -> SequenceWindow:
    rng = _rng("norm_bound", seed)
    d = rng.randint(3, max(3, max_dim))
    if rng.random() < 0.6:
        return random_window(d, d, seed, "independent")
    return random_window(d + rng.randint(1, 3), d, seed, "dependent")


def run_norm_bound(seeds: int = 200, max_dim: int = 6) -> FamilyReport:
    rep = FamilyReport("norm_bound")
    for seed in range(seeds):
        w = norm_bound_window(seed, max_dim)
        rep.instances += 1
        try:
            t = fibrep.construct(w)
        except NoRepresentation:
            t = None
        res = fibrep.norm_bound_check(w, t)
        rep.bump("hypotheses_hold" if not res.skipped else "hypotheses_fail")
        rep.record(res, {"seed": seed, "n": len(w), "dim": w.dim})
    return rep


def injectivity_window(seed: int, max_dim: int = 8) -> tuple[SequenceWindow, bool]:
    """Random window with a representation; odd seeds plant f_j = f_i (3 <= i < j)."""
    rng = _rng("injectivity", seed)
    attempt = 0
    while True:
        d = rng.randint(3, max_dim)
        n = rng.randint(4, d + 1)
        plant = seed % 2 == 1
        vecs = [random_vector(rng, d) for _ in range(n)]
        if plant:
            i = rng.randint(3, n - 1)
            j = rng.randint(i + 1, n)
            vecs[j - 1] = vecs[i - 1]
        w = SequenceWindow(d, tuple(vecs), Tail.ZERO, f"injectivity seed={seed} attempt={attempt}")
        if fibrep.representation_exists(w):
            return w, plant
        attempt += 1


def run_injectivity(seeds: int = 200, max_dim: int = 8) -> FamilyReport:
    rep = FamilyReport("injectivity")
    for seed in range(seeds):
        w, _ = injectivity_window(seed, max_dim)
        rep.instances += 1
        res = fibrep.injectivity_check(w, fibrep.construct(w))
        rep.bump("non_injective" if not res.data.get("injective_on_sums", True) else "injective")
        rep.record(res, {"seed": seed, "n": len(w), "dim": w.dim})
    return rep


def _random_in_span(rng: random.Random, w: SequenceWindow) -> list:
    out = [Fraction(0)] * w.dim
    for v in w.vectors:
        out = xla.vadd(out, xla.vscale(Fraction(rng.randint(-3, 3)), v))
    return out


def recurrence_operator(w: SequenceWindow, g) -> list:
    """Ambient images T f_n from T f_1 = g and T f_(n+1) = f_(n+2) - T f_n.

    Used as an independent construction route; ``w`` must be independent,
    and T f_N (which would need f_(N+1)) is set to zero.
    """
    images = [list(g)]
    for n in range(1, len(w) - 1):
        images.append(xla.vsub(list(w[n + 2]), images[-1]))
    images.append([Fraction(0)] * w.dim)
    return images


def run_uniqueness(pairs: int = 100, max_dim: int = 7) -> FamilyReport:
    """Equal pins give identical matrices (by two routes); distinct pins differ."""
    rep = FamilyReport("uniqueness")
    for seed in range(pairs):
        rng = _rng("uniqueness", seed)
        d = rng.randint(3, max_dim)
        w = random_window(rng.randint(3, d), d, seed, "independent")
        g = _random_in_span(rng, w)
        t = fibrep.construct(w, fibrep.Extension.pinned(g))
        images = recurrence_operator(w, g)
        coords = t.basis.coords_many(images)
        r = t.basis.rank
        s = fibrep.FibOperator(t.basis, tuple(tuple(coords[j][i] for j in range(r)) for i in range(r)),
                               fibrep.Method.EXPLICIT, tuple(g))
        rep.instances += 1
        same = fibrep.uniqueness_check(w, t, s)
        rep.record(same, {"seed": seed, "pair": "equal"})
        rep.bump("equal_pairs_identical" if same.passed else "equal_pairs_differ")
        h = _random_in_span(rng, w)
        while h == g:
            h = _random_in_span(rng, w)
        u = fibrep.construct(w, fibrep.Extension.pinned(h))
        diff = fibrep.uniqueness_check(w, t, u)
        rep.record(diff, {"seed": seed, "pair": "distinct"})
        rep.bump("distinct_pairs_differ" if diff.passed else "distinct_pairs_equal")
    return rep


def run_all(seeds: int = 200, max_n: int = 10, max_dim: int = 10,
            plan_for: PlanFn | None = None) -> list[FamilyReport]:
    small = min(max_dim, 6)
    return [
        run_identities(seeds, max_n, max_dim),
        run_closed_form(max(1, seeds // 2), small, max(4, min(16, max_n + 6)), plan_for),
        run_norm_bound(seeds, small),
        run_injectivity(seeds, max(3, min(max_dim, 8))),
        run_uniqueness(max(1, seeds // 2), max(3, min(max_dim, 7))),
    ]
