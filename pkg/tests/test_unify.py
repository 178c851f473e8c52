import itertools

from hypothesis import assume, given, settings

from semiloop.terms import App, RecVar, Substitution, apply, parse_term, shift, variables, x, y
from semiloop.unify import Clash, OccursCheck, irreducible_form, orient, unify, unify_problem

from strategies import terms, x_terms, y_terms

P = parse_term


def test_unifier_of_simple_pair():
    out = unify(P("h(x_1,h(x_2,c))"), P("h(y_1,y_2)"))
    assert out.unifiable
    assert out.mgu == {y(1): x(1), y(2): P("h(x_2,c)")}


def test_clash_reports_symbols():
    out = unify(P("h(c,x_1)"), P("h(d,y_1)"))
    assert isinstance(out, Clash)
    assert out.symbols == ("c", "d")
    assert not out.unifiable


def test_occurs_check_reports_variable_and_term():
    out = unify(P("h(x_1,x_1)"), P("h(y_1,h(y_1,c))"))
    assert isinstance(out, OccursCheck)
    assert out.variable == x(1)
    assert out.kind == "OCCURS-CHECK"


def test_orientation_rules():
    a = RecVar("a")
    assert orient(x(3), x(1)) == (x(3), x(1))        # larger index is bound
    assert orient(x(1), y(1)) == (y(1), x(1))        # class y after class x
    assert orient(a, y(1)) == (y(1), a)              # class variable before recursion variable
    assert orient(P("c"), x(2)) == (x(2), P("c"))


def test_bindings_stay_triangular_in_the_solved_form():
    out = unify(P("h(h(x_2,x_2),x_1)"), P("h(y_1,h(y_1,c))"))
    assert out.unifiable
    assert (y(1), P("h(x_2,x_2)")) in out.solved
    assert out.mgu[x(1)] == P("h(h(x_2,x_2),c)")


def test_irreducible_form_keeps_offending_pair():
    # the third extension of h(h(h(x_2,x_1),h(x_2,x_3)),#a) against h(h(y_3,y_1),h(y_4,y_4))
    s3 = P("h(h(h(x_4,x_3),h(x_4,x_5)),h(h(h(x_3,x_2),h(x_3,x_4)),"
           "h(h(h(x_2,x_1),h(x_2,x_3)),#a)))")
    form = irreducible_form([(s3, P("h(h(y_3,y_1),h(y_4,y_4))"))])
    expected = {
        (y(3), P("h(x_4,x_3)")), (y(4), P("h(h(x_3,x_2),h(x_3,x_4))")), (y(1), P("h(x_4,x_5)")),
        (RecVar("a"), P("h(x_3,x_4)")), (x(3), P("h(x_2,x_1)")), (x(2), P("h(x_2,x_3)")),
    }
    assert set(form.pairs) == expected


def test_unify_problem_keeps_pair_order():
    out = unify_problem([(x(1), P("c")), (x(1), P("d"))])
    assert isinstance(out, Clash)


@given(x_terms(with_recvar=True), y_terms())
def test_mgu_unifies_and_is_idempotent(s, t):
    out = unify(s, t)
    if out.unifiable:
        sigma = out.mgu
        assert apply(s, sigma) == apply(t, sigma)
        assert not (sigma.domain() & sigma.range_vars())


@given(x_terms(), y_terms())
def test_shifted_problem_has_shifted_mgu(s, t):
    out = unify(s, t)
    shifted = unify(shift(s), t)
    assert shifted.unifiable == out.unifiable
    if out.unifiable:
        assert shifted.mgu == shift(out.mgu)


GROUND = [P("c"), P("h(c,c)"), P("g(c)")]


@settings(max_examples=60, deadline=None)
@given(x_terms(max_index=2), y_terms(max_index=2))
def test_mgu_is_most_general_over_small_ground_instances(s, t):
    vs = sorted(variables(s) | variables(t), key=lambda v: v.sort_key())
    assume(len(vs) <= 4)
    out = unify(s, t)
    found_any = False
    for images in itertools.product(GROUND, repeat=len(vs)):
        rho = Substitution(dict(zip(vs, images)))
        if apply(s, rho) != apply(t, rho):
            continue
        found_any = True
        assert out.unifiable
        # rho factors through the mgu: rho = mgu rho on every variable
        for v in vs:
            assert apply(apply(v, out.mgu), rho) == apply(v, rho)
    if out.unifiable and not found_any:
        # some ground instance of the mgu must be a ground unifier
        rho = Substitution({v: App("c") for v in variables(apply(s, out.mgu))})
        assert apply(apply(s, out.mgu), rho) == apply(apply(t, out.mgu), rho)
