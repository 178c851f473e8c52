from hypothesis import given, settings

from semiloop.loops import ExtensionBuilder, unify_extension
from semiloop.oracle import oracle_extension, oracle_unify, oracle_unify_extension, verify_unifier
from semiloop.terms import Substitution, parse_substitution, parse_term, x, y
from semiloop.unify import Clash, OccursCheck, unify

from strategies import semiloops, x_terms, y_terms
from worked_examples import all_examples, load

P = parse_term


def test_extension_matches_builder():
    for sl in all_examples().values():
        b = ExtensionBuilder(sl)
        for n in range(0, 6):
            assert oracle_extension(sl, n) == b.term(n)


def test_agrees_on_every_worked_example():
    for name, sl in all_examples().items():
        for n in range(0, 16):
            e, o = unify_extension(sl, n).outcome, oracle_unify_extension(sl, n)
            assert e.unifiable == o.unifiable, (name, n)
            if o.unifiable:
                assert e.mgu == o.mgu, (name, n)


def test_extension_zero_always_unifies():
    for sl in all_examples().values():
        assert oracle_unify_extension(sl, 0).unifiable


def test_failure_kinds():
    assert isinstance(oracle_unify(P("h(c,x_1)"), P("h(d,y_1)")), Clash)
    out = oracle_unify(P("h(x_1,x_1)"), P("h(y_1,h(y_1,c))"))
    assert isinstance(out, OccursCheck)


def test_verify_unifier():
    sl = load("finite_at_two")
    s1 = oracle_extension(sl, 1)
    sigma = parse_substitution("{y_3 -> x_3, y_4 -> h(x_2,h(x_1,x_1)), #a -> h(y_1,y_2)}")
    assert verify_unifier(s1, sl.fixed, sigma)
    assert not verify_unifier(x(1), y(1), Substitution())
    assert verify_unifier(x(1), y(1), {y(1): x(1)})
    # images are not substituted a second time
    assert not verify_unifier(P("h(x_1,x_2)"), P("h(x_2,x_2)"), {x(1): x(2), x(2): x(1)})


@given(x_terms(with_recvar=True), y_terms())
def test_agrees_with_engine_on_random_pairs(s, t):
    e, o = unify(s, t), oracle_unify(s, t)
    assert e.unifiable == o.unifiable
    if o.unifiable:
        assert e.mgu == o.mgu
        assert verify_unifier(s, t, o.mgu)


@settings(max_examples=50, deadline=None)
@given(semiloops())
def test_agrees_with_engine_on_random_extensions(sl):
    b = ExtensionBuilder(sl)
    for n in range(0, 8):
        e, o = unify_extension(sl, n, b).outcome, oracle_unify_extension(sl, n)
        assert e.unifiable == o.unifiable
        if o.unifiable:
            assert e.mgu == o.mgu
