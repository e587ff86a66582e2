"""The nine acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the terminal
summary (see conftest) and to stdout for ``pytest -s``.
"""
import math
from fractions import Fraction as F

from fibseq import catalog, fibrep, frames, spectral, suite
from fibseq import exactla as xla
from fibseq.errors import NoRepresentation
from fibseq.sequences import canonical

from conftest import ACCEPTANCE_LINES


def report(number, title, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_exact_identity_suite():
    rep = suite.run_identities(seeds=200, max_n=10, max_dim=10)
    report(1, "exact identity suite", rep.passed and rep.instances == 200,
           f"{rep.instances} windows, {rep.failures} failures, {rep.skipped} hypothesis skips")


def test_2_closed_form_equals_recursion():
    rep = suite.run_closed_form(seeds=100, max_dim=6, n_max=16)
    plan = fibrep.binomial_plan(4)
    t, f1, f2 = suite.closed_form_instance(0)
    t2 = xla.matmul(t, t)
    base = xla.vadd(xla.vadd(xla.matvec(t, f2), xla.matvec(t2, f1)), xla.matvec(t2, f2))
    base_ok = (plan.a_n, plan.b_n) == (1, 0) and fibrep.closed_form_iterate(t, f1, f2, 4) == base
    report(2, "closed form = recursion", rep.passed and base_ok,
           f"{rep.instances} triples, n = 4..16, {rep.failures} mismatches, base case f_4 {'ok' if base_ok else 'wrong'}")


def test_3_named_example_operators():
    outcomes = {}
    for name in ("ex_e1e1", "ex_e123e1", "ex_e2e2", "half_f3"):
        w, t = catalog.example_operator(name, 10)
        res = fibrep.verify(w, t)
        outcomes[name] = res.passed and res.residual == 0
    pair = [catalog.example_operator(name, 10) for name in ("onb_t", "onb_s")]
    outcomes["onb_two_operators"] = all(fibrep.verify(w, t).passed for w, t in pair) and \
        pair[0][1].mat != pair[1][1].mat
    try:
        fibrep.construct(canonical("ex_norep", 5, 4))
        outcomes["ex_norep"] = False
    except NoRepresentation as exc:
        outcomes["ex_norep"] = list(exc.witness) == [1, -1, 0]
    good = sum(outcomes.values())
    report(3, "named example operators", good == 6, f"{good}/6 as stated ({', '.join(k for k, v in outcomes.items() if not v) or 'all'})")


def test_4_sum_pairs_spectrum():
    parts, ok = [], True
    for n in (4, 16, 64):
        b = spectral.frame_bounds(canonical("sum_pairs", n, n + 1))
        err = abs(b.lambda_min - (2 - 2 * math.cos(math.pi / (n + 1))))
        ok = ok and err <= 1e-9 and b.lambda_max <= 4
        parts.append(f"N={n} lambda_min {b.lambda_min:.6g} (err {err:.1e}) lambda_max {b.lambda_max:.6f}")
    report(4, "sum-pair Gram closed form", ok, "; ".join(parts))


def test_5_completeness_decay():
    decay = frames.completeness_decay(F(1), F(2), range(8, 25))
    ratios = [b / a for (_, a), (_, b) in zip(decay, decay[1:])]
    err = abs(ratios[-1] - 0.5)
    report(5, "sigma_min ratio for e_n + 2 e_(n+1)", err < 0.05,
           f"ratio at N=24 is {ratios[-1]:.6f} (|. - 1/2| = {err:.1e})")


def test_6_norm_bound():
    rep = suite.run_norm_bound(seeds=200)
    held = rep.counters.get("hypotheses_hold", 0)
    report(6, "norm bound", rep.passed and held > 0,
           f"{rep.failures} violations over {rep.instances} instances ({held} with kernel inclusion)")


def test_7_injectivity():
    rep = suite.run_injectivity(seeds=200)
    planted = rep.counters.get("non_injective", 0)
    report(7, "injectivity biconditional", rep.passed and planted >= 10,
           f"{rep.failures} failures over {rep.instances} instances, {planted} non-injective")


def test_8_uniqueness():
    rep = suite.run_uniqueness(pairs=100)
    same = rep.counters.get("equal_pairs_identical", 0)
    differ = rep.counters.get("distinct_pairs_differ", 0)
    report(8, "uniqueness", rep.passed and same == 100 and differ == 100,
           f"{same}/100 equal-pin pairs identical, {differ}/100 distinct-pin pairs differ")


def test_9_mutation_sanity():
    caught, total, missed = 0, 0, []
    for n, idx, part, plan_for in suite.mutated_plans(16):
        total += 1
        rep = suite.run_closed_form(seeds=100, max_dim=6, n_max=16, plan_for=plan_for, fail_fast=True)
        if rep.passed:
            missed.append((n, idx, part))
        else:
            caught += 1
    report(9, "mutation sanity", total > 0 and not missed,
           f"{caught}/{total} single-sign flips detected" + (f", missed {missed[:5]}" if missed else ""))
