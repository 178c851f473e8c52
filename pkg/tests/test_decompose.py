import pytest
from hypothesis import given, settings, strategies as st

from semiloop.decompose import (
    Cycle, CycleNotApplicable, DecompositionError, LayerSequence, build_unifier_from_cycle,
    check_finite_condition, compose_trace, decompose_D, decompose_Dprime, detect_cycle,
    find_cycle, finite_condition_margin, segment, sub_segment,
)
from semiloop.harness import extendable_semiloops
from semiloop.loops import ExtensionBuilder, unify_extension
from semiloop.oracle import oracle_extension, oracle_unify_extension, verify_unifier
from semiloop.terms import (
    ClassVar, SemiloopSpec, Substitution, X, Y, compose, apply, extend, parse_substitution, parse_term,
    shift, shift_n, variables,
)
from semiloop.unify import OccursCheck, unify

from worked_examples import load

P, S = parse_term, parse_substitution

# Finite condition holds at 1 when carriers are only checked against s theta,
# yet the next extension fails: the carrier's shift x_3 occurs in s.
CARRIER_IN_S = SemiloopSpec.parse(
    "h(h(x_4,x_2),h(h(x_3,#a),h(x_3,x_3)))",
    "h(h(h(y_4,y_1),y_2),h(h(y_3,y_2),h(y_2,y_4)))",
)


@pytest.fixture(scope="module")
def deep():
    return extendable_semiloops(seed=11, count=40, depth=6)


def test_unwindowed_trace_stages():
    tr = decompose_D(load("late_failure"), 3)
    assert [st.depth for st in tr.steps] == [3, 2, 1]
    assert [st.shift_amount for st in tr.steps] == [2, 1, 0]
    assert [st.theta for st in tr.steps] == [
        S("{y_1 -> h(x_6,h(x_1,x_6))}"), S("{y_2 -> h(x_6,h(x_1,x_6))}"),
        S("{x_8 -> h(x_6,h(x_1,x_6))}"),
    ]
    assert tr.final_binding == S("{#a -> h(x_3,h(x_6,h(x_1,x_6)))}")
    assert compose_trace(tr) == unify_extension(load("late_failure"), 3).mgu


def test_windowed_trace_stages():
    sl = load("short_cycle")
    tr = decompose_Dprime(sl, 5)
    assert [st.theta for st in tr.steps] == [
        S("{y_1 -> h(h(x_1,x_1),x_1)}"), S("{x_2 -> x_1}"), S("{x_2 -> x_1}"),
        S("{x_2 -> h(h(x_1,x_1),x_1)}"), S("{x_2 -> x_1}"),
    ]
    # the innermost layer hands h(h(x_2,x_2),x_2) down; the unifier uses it unshifted
    assert tr.step(1).residual_target == P("h(h(x_2,x_2),x_2)")
    assert tr.final_binding == S("{#a -> h(h(x_1,x_1),x_1)}")
    t1 = "h(h(x_2,x_2),x_2)"
    assert tr.entering(4)[1] == P(f"h(h({t1},{t1}),{t1})")
    assert tr.entering(3)[1] == P(f"h({t1},{t1})")
    assert tr.entering(2)[1] == P(t1)
    assert tr.entering(1)[1] == P(f"h({t1},{t1})")
    assert compose_trace(tr) == unify_extension(sl, 5).mgu
    # y_1 is the only class-y variable, so the outermost eliminator binds it
    assert variables(sl.fixed) == {ClassVar(Y, 1)}


def test_trace_of_zero_is_the_base_binding():
    sl = load("square")
    for tr in (decompose_D(sl, 0), decompose_Dprime(sl, 0)):
        assert tr.steps == ()
        assert tr.final_binding == {sl.recvar: sl.fixed}
        assert compose_trace(tr) == unify(sl.recvar, sl.fixed).mgu


def test_decomposition_requires_extendable_prefixes():
    with pytest.raises(DecompositionError) as e:
        decompose_D(load("finite_at_two"), 3)
    assert e.value.j == 2
    with pytest.raises(DecompositionError) as e:
        decompose_Dprime(load("occurs_at_three"), 4)
    assert e.value.j == 3 and isinstance(e.value.outcome, OccursCheck)
    with pytest.raises(ValueError):
        decompose_D(load("square"), -1)


def test_variable_fixed_term_cannot_be_decomposed():
    with pytest.raises(DecompositionError) as e:
        decompose_D(SemiloopSpec.parse("h(x_1,#a)", "y_1"), 1)
    assert e.value.j == 0


def test_trace_text_form():
    text = decompose_D(load("late_failure"), 3).to_text().splitlines()
    assert text[0] == "trace op=D k=3"
    assert text[1].startswith("step depth=3 shift=2 theta={y_1 -> h(x_6,h(x_1,x_6))} target=")
    assert text[-1] == "final {#a -> h(x_3,h(x_6,h(x_1,x_6)))}"


def test_sigma_delta_lies_in_the_window():
    sl = load("late_failure")
    tr = decompose_Dprime(sl, 8)
    for st in tr.steps:
        assert all(isinstance(z, ClassVar) and z.cls == X and 1 <= z.index <= 6
                   for z in st.sigma_delta)


def test_cycle_in_short_example():
    sl = load("short_cycle")
    tr = decompose_Dprime(sl, 5)
    cyc = detect_cycle(tr, 0)
    assert (cyc.r, cyc.i, cyc.j, cyc.period) == (4, 3, 2, 2)
    assert tr.entering(cyc.i) == tr.entering(cyc.j - 1)


def test_cycle_below_window_is_not_applicable():
    sl = load("late_failure")
    tr = decompose_Dprime(sl, 6)
    with pytest.raises(CycleNotApplicable):
        detect_cycle(tr, 5)


def test_no_cycle_when_states_are_distinct():
    sl = SemiloopSpec.parse("h(x_1,#a)", "h(y_1,h(y_2,h(y_3,h(y_4,y_5))))")
    tr = decompose_Dprime(sl, 3)
    assert len({tr.entering(d) for d in range(1, 4)}) == 3
    assert find_cycle(tr) is None
    assert detect_cycle(tr, 0) is None


def test_segment_and_sub_segment_base_cases():
    tr = decompose_Dprime(load("short_cycle"), 5)
    for d in range(1, 6):
        st = tr.step(d)
        assert segment(tr, d, d) == shift_n(st.theta, st.shift_amount)
        closing = Substitution({tr.recvar: shift_n(st.recvar_image, st.shift_amount)})
        assert sub_segment(tr, d, d) == compose(segment(tr, d, d), closing)
    with pytest.raises(IndexError):
        segment(tr, 2, 3)
    with pytest.raises(IndexError):
        segment(tr, 6, 1)


def test_full_segment_closed_by_final_binding_is_the_mgu():
    sl = load("late_failure")
    tr = decompose_Dprime(sl, 9)
    assert sub_segment(tr, 9, 1) == oracle_unify_extension(sl, 9).mgu


def test_cycle_unifiers_for_short_example():
    sl = load("short_cycle")
    tr = decompose_Dprime(sl, 5)
    cyc = detect_cycle(tr, 0)
    assert build_unifier_from_cycle(tr, cyc, 4) == compose_trace(decompose_Dprime(sl, 4))
    for k in range(4, 31):
        u = build_unifier_from_cycle(tr, cyc, k)
        assert verify_unifier(oracle_extension(sl, k), sl.fixed, u)
        assert u == oracle_unify_extension(sl, k).mgu


def test_cycle_unifiers_for_square_up_to_fifty():
    sl = load("square")
    tr = LayerSequence(sl).trace(4)
    cyc = find_cycle(tr)
    assert cyc is not None
    for k in range(3, 51):
        assert verify_unifier(oracle_extension(sl, k), sl.fixed,
                              build_unifier_from_cycle(tr, cyc, k))


def test_cycle_unifier_rejects_small_k():
    sl = load("short_cycle")
    tr = decompose_Dprime(sl, 5)
    with pytest.raises(ValueError):
        build_unifier_from_cycle(tr, Cycle(4, 3, 2), 2)


def test_finite_condition_on_examples():
    sl = load("finite_at_two")
    assert check_finite_condition(sl, 2, unify_extension(sl, 2).mgu)
    assert not check_finite_condition(sl, 1, unify_extension(sl, 1).mgu)   # binds #a
    for j in range(3, 23):
        assert oracle_unify_extension(sl, j).unifiable

    sl = load("shift_collision")
    assert not check_finite_condition(sl, 1, unify_extension(sl, 1).mgu)
    with pytest.raises(ValueError):
        check_finite_condition(sl, 0, Substitution())


def test_finite_condition_counts_carriers_that_meet_s():
    sl = CARRIER_IN_S
    mgu = unify_extension(sl, 1).mgu
    unbound, m, carriers = finite_condition_margin(sl, mgu)
    assert unbound
    # checked against s theta alone, every carrier passes
    s_theta = apply(sl.extendable, shift(mgu))
    assert all(shift(z) not in variables(s_theta) for z in carriers)
    # but the second extension does not unify, so the condition must fail
    assert not oracle_unify_extension(sl, 2).unifiable
    assert not check_finite_condition(sl, 1, mgu)


def test_extend_reconstruction_needs_carriers_clear_of_s():
    # the side condition z not in var(s mgu) holds for every carrier of an
    # idempotent mgu; it is z not in var(s) that makes the construction work
    sl = SemiloopSpec.parse("h(x_1,#a)", "h(y_3,y_3)")
    mgu = unify_extension(sl, 1).mgu
    s, a = sl.extendable, sl.recvar
    rebuilt = Substitution({z: extend(r, a, apply(s, mgu)) for z, r in mgu.items()})
    assert not verify_unifier(extend(s, a, s), sl.fixed, rebuilt)
    assert not unify(extend(s, a, s), sl.fixed).unifiable


def _carriers(sl, mgu):
    return [z for z, r in mgu.items() if sl.recvar in variables(r)]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 5))
def test_extend_and_shift_extend_reconstructions(seed, k):
    from semiloop.harness import GenConfig, generate_semiloop
    sl = generate_semiloop(GenConfig(seed=seed % 97, max_depth=2, fixed_term_depth=2,
                                     max_var_index=3), seed)
    s, a, t = sl.extendable, sl.recvar, sl.fixed
    b = ExtensionBuilder(sl)
    rep = unify_extension(sl, k, b)
    if not rep.unifiable or rep.extendably:
        return
    mgu = rep.mgu
    carriers = _carriers(sl, mgu)
    if all(z not in variables(s) for z in carriers):
        rebuilt = Substitution({z: extend(r, a, apply(s, mgu)) for z, r in mgu.items()})
        assert verify_unifier(extend(b.term(k), a, s), t, rebuilt)
    theta = shift(mgu)
    s_theta = apply(s, theta)
    if all(shift(z) not in variables(s) for z in carriers):
        rebuilt = Substitution({shift(z): extend(shift(r), a, s_theta) for z, r in mgu.items()})
        assert verify_unifier(b.term(k + 1), t, rebuilt)


def test_both_decompositions_compose_to_the_oracle_mgu(deep):
    for sl in deep:
        for k in range(1, 7):
            want = oracle_unify_extension(sl, k).mgu
            assert compose_trace(decompose_D(sl, k)) == want
            assert compose_trace(decompose_Dprime(sl, k)) == want


def test_segment_shift_identity(deep):
    for sl in deep[:15]:
        layers = LayerSequence(sl)
        for r in range(1, 7):
            tr_r = layers.trace(r)
            for k in range(r, 7):
                tr_k = layers.trace(k)
                for j in range(1, r + 1):
                    assert shift_n(segment(tr_r, r, j), k - r) == segment(tr_k, k, j + k - r)


def test_layer_sequence_matches_fresh_decomposition(deep):
    sl = deep[0]
    layers = LayerSequence(sl)
    layers.trace(6)
    assert layers.trace(3) == decompose_Dprime(sl, 3)
