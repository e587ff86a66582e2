from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibseq import catalog, fibrep
from fibseq import exactla as xla
from fibseq.errors import (
    BasisMismatch,
    DimMismatch,
    NoBreakpoint,
    NoRepresentation,
    NotIndependent,
    NotInjective,
    NTooSmall,
    PolicyError,
    WindowTooShort,
)
from fibseq.fibrep import Extension
from fibseq.sequences import SequenceWindow, Tail, canonical, random_window, sum_window

from conftest import rationals, windows

H = F(1, 2)


def e(d, *pairs):
    v = [F(0)] * d
    for k, c in pairs:
        v[k - 1] = F(c)
    return v


def test_norep_certificate():
    with pytest.raises(NoRepresentation) as info:
        fibrep.construct(canonical("ex_norep", 5, 4))
    assert list(info.value.witness) == [1, -1, 0]
    assert list(info.value.image) == e(4, (1, 1), (3, -1))


def test_too_short():
    with pytest.raises(WindowTooShort):
        fibrep.construct(canonical("onb", 2, 2))


@pytest.mark.parametrize("ext", [fibrep.ZERO, fibrep.HALF_F3])
def test_onb_any_policy(ext):
    w = canonical("onb", 6, 6)
    t = fibrep.construct(w, ext)
    assert fibrep.verify(w, t).passed and fibrep.verify(w, t).residual == 0


def test_e2e2_constructs():
    w = canonical("ex_e2e2", 8, 6)
    assert fibrep.verify(w, fibrep.construct(w)).passed


def test_alternating_onb():
    w = canonical("onb", 5, 5)
    t = fibrep.construct_alternating(w)
    assert t.apply(w[1]) == e(5, (1, -1), (2, 1))
    assert t.apply(w[2]) == e(5, (1, 1), (2, -1), (3, 1))
    assert xla.vadd(t.apply(w[1]), t.apply(w[2])) == list(w[3])
    with pytest.raises(NotIndependent):
        fibrep.construct_alternating(canonical("ex_e1e1", 5, 4))


def test_half_f3_onb():
    w = canonical("onb", 6, 6)
    t = fibrep.construct_half_f3(w)
    assert t.apply(w[1]) == t.apply(w[2]) == e(6, (3, H))
    assert t.apply(w[3]) == e(6, (4, 1), (3, -H))
    later = [list(v) for v in w.vectors[2:]]
    assert all(xla.in_span(later, t.apply(v)) for v in w.vectors)
    with pytest.raises(NotIndependent):
        fibrep.construct_half_f3(canonical("ex_norep", 5, 4))


def test_half_f3_policy_matches_formula():
    w = random_window(6, 7, 3, "independent")
    assert fibrep.construct(w, fibrep.HALF_F3).mat == fibrep.construct_half_f3(w).mat


def test_verify_identity_fails_at_three():
    w = canonical("onb", 5, 5)
    basis = fibrep.span_basis(w)
    ident = fibrep.FibOperator(basis, tuple(tuple(r) for r in xla.identity(5)), fibrep.Method.EXPLICIT, w[1])
    res = fibrep.verify(w, ident)
    assert not res.passed and res.witness == {"n": 3}


def test_verify_basis_mismatch():
    t = fibrep.construct(canonical("onb", 4, 4))
    with pytest.raises(BasisMismatch):
        fibrep.verify(canonical("onb", 4, 5), t)


@pytest.mark.parametrize("name", catalog.EXAMPLE_OPERATORS)
@pytest.mark.parametrize("n", [6, 9, 13])
def test_example_operators_verify(name, n):
    w, t = catalog.example_operator(name, n)
    res = fibrep.verify(w, t)
    assert res.passed and res.residual == 0


def test_example_needs_long_enough_window():
    with pytest.raises(WindowTooShort):
        catalog.example_operator("ex_e2e2", 5)


def test_example_operator_values():
    w, t = catalog.example_operator("ex_e1e1", 8)
    assert t.apply(e(7, (1, 1))) == e(7, (2, H))
    w, t = catalog.example_operator("ex_e123e1", 8)
    assert t.apply(e(7, (1, 1))) == e(7, (4, H), (3, H), (1, -H))
    w, t = catalog.example_operator("ex_e2e2", 8)
    assert t.apply(e(6, (1, 1))) == e(6, (3, 1), (4, -H))
    w, s = catalog.example_operator("onb_s", 6)
    assert s.apply(w[1]) == e(6) and s.apply(w[2]) == e(6, (3, 1))


# -- closed form ------------------------------------------------------------


def symbolic_iterate(n):
    """f_n as {(which, power): coeff} from the recursion, which in {1, 2}."""
    seq = [{(1, 0): 1}, {(2, 0): 1}]
    while len(seq) < n:
        nxt = {}
        for term in (seq[-2], seq[-1]):
            for (which, p), c in term.items():
                nxt[(which, p + 1)] = nxt.get((which, p + 1), 0) + c
        seq.append(nxt)
    return seq[n - 1]


def plan_terms(plan):
    out = {}
    for _, c2, p2, c1, p1 in plan.terms:
        for key, c in (((2, p2), c2), ((1, p1), c1)):
            if c:
                out[key] = out.get(key, 0) + c
    return out


def test_plan_base_cases():
    p4 = fibrep.binomial_plan(4)
    assert (p4.a_n, p4.b_n) == (1, 0)
    assert plan_terms(p4) == {(2, 1): 1, (1, 2): 1, (2, 2): 1}
    p5 = fibrep.binomial_plan(5)
    assert (p5.a_n, p5.b_n) == (2, -1)
    assert plan_terms(p5) == {(1, 2): 1, (2, 2): 2, (1, 3): 1, (2, 3): 1}
    with pytest.raises(NTooSmall):
        fibrep.binomial_plan(3)


@pytest.mark.parametrize("n", range(4, 31))
def test_plan_matches_symbolic_recursion(n):
    plan = fibrep.binomial_plan(n)
    assert plan.a_n == (n - 1) // 2 and plan.b_n in (-1, 0)
    assert plan_terms(plan) == symbolic_iterate(n)
    assert all(c2 >= 0 and c1 >= 0 for _, c2, _, c1, _ in plan.terms)


def test_closed_form_small_n():
    t = [[F(0), F(1)], [F(1), F(1)]]
    f1, f2 = [F(1), F(0)], [F(0), F(1)]
    assert fibrep.closed_form_iterate(t, f1, f2, 1) == f1
    assert fibrep.closed_form_iterate(t, f1, f2, 2) == f2
    t2 = xla.matmul(t, t)
    want = xla.vadd(xla.vadd(xla.matvec(t, f2), xla.matvec(t2, f1)), xla.matvec(t2, f2))
    assert fibrep.closed_form_iterate(t, f1, f2, 4) == want
    with pytest.raises(DimMismatch):
        fibrep.closed_form_iterate(t, [F(1)], f2, 5)


@st.composite
def triples(draw):
    d = draw(st.integers(1, 4))
    t = [[draw(rationals) for _ in range(d)] for _ in range(d)]
    return t, [draw(rationals) for _ in range(d)], [draw(rationals) for _ in range(d)]


@given(triples(), st.integers(1, 12))
def test_closed_form_equals_recursion(triple, n):
    t, f1, f2 = triple
    assert fibrep.closed_form_iterate(t, f1, f2, n) == fibrep.recursion_iterate(t, f1, f2, n)


def test_flipped_plan_breaks_identity():
    t = [[F(1), F(2)], [F(-1), F(3)]]
    f1, f2 = [F(1), F(0)], [F(0), F(1)]
    bad = fibrep.binomial_plan(6).flipped(0, "f2")
    assert fibrep.closed_form_iterate(t, f1, f2, 6, bad) != fibrep.recursion_iterate(t, f1, f2, 6)


# -- properties of a representation ----------------------------------------


def test_mn_equivalence():
    w = canonical("onb", 6, 6)
    t = fibrep.construct(w)
    assert fibrep.check_mn_equivalence(w, t).passed
    rows = [list(r) for r in t.mat]
    rows[0][0] += 1
    bad = fibrep.FibOperator(t.basis, tuple(map(tuple, rows)), t.method, t.tf1)
    res = fibrep.check_mn_equivalence(w, bad)
    assert not res.passed and res.witness["F"] == 1


def test_uniqueness_examples():
    w = canonical("onb", 6, 6)
    t = fibrep.construct(w)
    assert fibrep.uniqueness_check(w, t, t).passed
    alt, half = fibrep.construct_alternating(w), fibrep.construct_half_f3(w)
    res = fibrep.uniqueness_check(w, alt, half)
    assert res.passed and not res.data["tf1_equal"]
    g = e(6, (2, 3), (5, -1))
    a = fibrep.construct(w, Extension.pinned(g))
    b = fibrep.construct(w, Extension.pinned(g))
    assert a.mat == b.mat and fibrep.uniqueness_check(w, a, b).passed


def test_pinned_policy_errors():
    w = canonical("onb", 4, 5)
    with pytest.raises(PolicyError):
        fibrep.construct(w, Extension.pinned(e(5, (5, 1))))  # outside span
    # f_1 in the span of the sums: T f_1 is forced, a different pin contradicts it
    forced = canonical("ex_e1e1", 6, 5)
    t = fibrep.construct(forced)
    assert fibrep.construct(forced, Extension.pinned(t.tf1)).mat == t.mat
    with pytest.raises(PolicyError):
        fibrep.construct(forced, Extension.pinned(xla.vadd(t.tf1, e(5, (1, 1)))))


def test_forced_tf1_makes_policies_agree():
    w = canonical("ex_e2e2", 8, 6)
    assert fibrep.construct(w, fibrep.ZERO).mat == fibrep.construct(w, fibrep.HALF_F3).mat


def test_range_check_examples():
    w = canonical("onb", 6, 6)
    res = fibrep.range_check(w, fibrep.construct_half_f3(w))
    assert res.passed and res.data["equality_claimed"] and res.data["equal"]
    res = fibrep.range_check(w, fibrep.construct_alternating(w))
    assert res.passed and not res.data["equality_claimed"] and res.data["contained"]
    w2 = canonical("ex_e2e2", 8, 6)
    res = fibrep.range_check(w2, fibrep.construct(w2))
    assert res.passed and res.data["equal"]


def test_containment_examples():
    w, t = catalog.example_operator("ex_e123e1", 8)
    assert fibrep.containment_check(w, t).data["m"] == 4
    assert xla.in_span([list(w[3]), list(w[4]), list(w[5])], t.apply(w[1]))
    w, t = catalog.example_operator("ex_e2e2", 9)
    assert fibrep.containment_check(w, t).passed
    with pytest.raises(NoBreakpoint):
        fibrep.containment_check(canonical("onb", 5, 5), fibrep.construct(canonical("onb", 5, 5)))


def test_invariant_subspace():
    w, t = catalog.example_operator("ex_e2e2", 9)
    l, basis = fibrep.invariant_subspace_witness(w, t)
    vs = [list(w[i]) for i in range(1, l + 1)]
    assert all(xla.in_span(vs, list(v)) for v in w.vectors)
    assert all(xla.in_span(vs, t.apply(v)) for v in vs)
    assert fibrep.invariant_subspace_witness(canonical("onb", 5, 5), fibrep.construct(canonical("onb", 5, 5))) is None


def test_norm_bound_examples():
    w = canonical("onb", 6, 6)
    res = fibrep.norm_bound_check(w, fibrep.construct(w))
    assert res.passed and res.data["norm"] <= res.data["bound"]
    w2 = canonical("ex_e2e2", 8, 6)
    res = fibrep.norm_bound_check(w2, fibrep.construct(w2))
    assert res.passed or res.skipped
    planted = SequenceWindow(2, ((F(1), F(0)), (F(0), F(1)), (F(1), F(0)), (F(1), F(1))))
    res = fibrep.norm_bound_check(planted)
    assert res.skipped and res.witness is not None
    with pytest.raises(ValueError):
        fibrep.norm_bound_check(w.with_tail(Tail.UNKNOWN))


def test_injectivity_examples():
    w = canonical("onb", 6, 6)
    res = fibrep.injectivity_check(w, fibrep.construct_half_f3(w))
    assert res.passed
    assert not res.data["injective_on_span"]  # T f_1 = T f_2
    planted = SequenceWindow(4, tuple(map(tuple, [e(4, (1, 1)), e(4, (2, 1)), e(4, (3, 1)),
                                                   e(4, (4, 1)), e(4, (3, 1))])))
    res = fibrep.injectivity_check(planted, fibrep.construct(planted))
    assert res.passed
    assert not res.data["injective_on_sums"] and not res.data["kernel_inclusion"]


def test_transport():
    w = canonical("onb", 4, 4)
    t = fibrep.construct(w)
    assert fibrep.transport(w, t, xla.identity(4)).mat == t.mat
    two = [[2 * x for x in row] for row in xla.identity(4)]
    kw = fibrep.transport_window(w, two)
    assert fibrep.verify(kw, fibrep.transport(w, t, two)).passed
    with pytest.raises(NotInjective):
        fibrep.transport(w, t, [[F(1), F(0), F(0), F(0)]])
    k = [[F(1), F(1), F(0), F(0)], [F(0), F(1), F(0), F(0)], [F(0), F(0), F(2), F(1)], [F(0), F(0), F(0), F(1)]]
    both = fibrep.transport_adjoint(w, t, k)
    assert fibrep.verify(fibrep.transport_window(w, xla.adjoint(k)), both["adjoint"]).passed


@given(windows(min_n=3, max_n=7, max_dim=5))
def test_soundness(w):
    sums = [list(v) for v in sum_window(w.with_tail(Tail.UNKNOWN)).vectors]
    try:
        t = fibrep.construct(w)
    except NoRepresentation as exc:
        assert xla.span_rank(sums, w.dim) < len(sums)
        lhs = [F(0)] * w.dim
        for k, c in enumerate(exc.witness):
            lhs = xla.vadd(lhs, xla.vscale(c, xla.vadd(w[k + 1], w[k + 2])))
        assert xla.is_zero(lhs) and not xla.is_zero(exc.image)
        return
    assert fibrep.verify(w, t).passed
    assert fibrep.injectivity_check(w, t).passed
    assert fibrep.range_check(w, t).passed


def test_operator_serialises():
    d = fibrep.construct_half_f3(canonical("onb", 4, 4)).to_dict()
    assert d["method"] == "half_f3" and d["tf1"] == ["0/1", "0/1", "1/2", "0/1"]
    assert d["span_basis"] == [0, 1, 2, 3]


def test_soundness_seeded_sweep():
    from fibseq.suite import identity_window

    built = refused = 0
    for seed in range(500):
        w = identity_window(seed, 8, 6)
        if len(w) < 3:
            continue
        sums = [list(v) for v in sum_window(w.with_tail(Tail.UNKNOWN)).vectors]
        try:
            t = fibrep.construct(w)
        except NoRepresentation:
            assert xla.span_rank(sums, w.dim) < len(sums)
            refused += 1
            continue
        assert fibrep.verify(w, t).passed
        built += 1
    assert built > 100 and refused > 10


def test_range_not_forced_without_breakpoint():
    w = SequenceWindow(4, tuple(map(tuple, [e(4, (1, 1)), e(4, (2, 1)), e(4, (3, 1)), e(4, (2, 1))])))
    t = fibrep.construct(w, Extension.pinned(e(4, (1, 1))))
    res = fibrep.range_check(w, t)
    assert fibrep.verify(w, t).passed and res.passed
    assert not res.data["equal"] and not res.data["equality_claimed"]
