"""Deterministic first-order syntactic unification without variable renaming.

Pairs are processed leftmost first with the usual rules (delete, decompose,
orient, bind).  Bindings are kept triangular while solving, so the
irreducible form looks like the forms one writes by hand, and the m.g.u. is
extracted afterwards by substituting bindings into each other until nothing
changes.

Orientation when a variable meets a variable:

* a class variable meets a recursion variable: the class variable is bound
  (``y_1 -> #a``), since recursion variables only take non-variable terms;
* two class variables: the larger ``(class, index)`` is bound to the smaller,
  class x ordering before class y;
* two recursion variables: the alphabetically larger name is bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .terms import App, ClassVar, RecVar, Substitution, Term, Var, format_term

__all__ = [
    "UnifProblem", "Unifier", "Clash", "OccursCheck", "UnifOutcome",
    "unify", "unify_problem", "irreducible_form", "orient",
]


@dataclass(frozen=True)
class UnifProblem:
    pairs: tuple[tuple[Term, Term], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((l, r) for l, r in self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __str__(self):
        return "{" + ", ".join(f"{format_term(l)} =? {format_term(r)}" for l, r in self.pairs) + "}"


@dataclass(frozen=True)
class Unifier:
    mgu: Substitution
    solved: UnifProblem = field(default_factory=UnifProblem, compare=False)

    unifiable = True
    kind = "UNIFIABLE"


@dataclass(frozen=True)
class Clash:
    position: int
    symbols: tuple[str, str]
    pair: tuple[Term, Term] = field(compare=False, default=None)
    irreducible: UnifProblem = field(default_factory=UnifProblem, compare=False)

    unifiable = False
    kind = "CLASH"


@dataclass(frozen=True)
class OccursCheck:
    variable: Var
    term: Term
    position: int = field(compare=False, default=0)
    irreducible: UnifProblem = field(default_factory=UnifProblem, compare=False)

    unifiable = False
    kind = "OCCURS-CHECK"


UnifOutcome = Unifier | Clash | OccursCheck


def orient(l: Term, r: Term) -> tuple[Var, Term]:
    """Pick the variable to bind for a pair where at least one side is a variable."""
    if type(l) is App:
        return r, l
    if type(r) is App:
        return l, r
    if type(l) is ClassVar and type(r) is RecVar:
        return l, r
    if type(l) is RecVar and type(r) is ClassVar:
        return r, l
    if l.sort_key() > r.sort_key():
        return l, r
    return r, l


def _walk(t: Term, bindings: dict) -> Term:
    while type(t) is not App and t in bindings:
        t = bindings[t]
    return t


def _occurs(z: Var, t: Term, bindings: dict) -> bool:
    seen: set[int] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if type(u) is App:
            if id(u) not in seen:
                seen.add(id(u))
                stack.extend(u.args)
        elif u == z:
            return True
        elif u in bindings:
            stack.append(bindings[u])
    return False


def _resolve(bindings: dict) -> Substitution:
    done: dict = {}

    def image(z):
        if z in done:
            return done[z]
        done[z] = None  # acyclic by the occurs check
        out = full(bindings[z])
        done[z] = out
        return out

    memo: dict[int, Term] = {}

    def full(t):
        if type(t) is not App:
            return image(t) if t in bindings else t
        hit = memo.get(id(t))
        if hit is not None:
            return hit
        args = tuple(full(a) for a in t.args)
        out = t if all(a is b for a, b in zip(args, t.args)) else App(t.symbol, args)
        memo[id(t)] = out
        return out

    return Substitution((z, image(z)) for z in bindings)


def unify_problem(pairs) -> UnifOutcome:
    """Solve a list of pairs, keeping their order."""
    pairs = list(pairs)
    bindings: dict = {}
    stack = [(l, r, i) for i, (l, r) in reversed(list(enumerate(pairs)))]

    def snapshot(extra=()):
        solved = [(z, t) for z, t in bindings.items()]
        rest = [(l, r) for l, r, _ in reversed(stack)]
        return UnifProblem(tuple(solved) + tuple(extra) + tuple(rest))

    while stack:
        l, r, pos = stack.pop()
        l = _walk(l, bindings)
        r = _walk(r, bindings)
        if l == r:
            continue
        if type(l) is App and type(r) is App:
            if l.symbol != r.symbol or len(l.args) != len(r.args):
                return Clash(pos, (l.symbol, r.symbol), (l, r), snapshot([(l, r)]))
            for a, b in reversed(tuple(zip(l.args, r.args))):
                stack.append((a, b, pos))
            continue
        z, t = orient(l, r)
        if _occurs(z, t, bindings):
            return OccursCheck(z, t, pos, snapshot([(z, t)]))
        bindings[z] = t
    return Unifier(_resolve(bindings), snapshot())


def unify(s: Term, t: Term) -> UnifOutcome:
    return unify_problem([(s, t)])


def irreducible_form(problem) -> UnifProblem:
    """The pairs left when no rule applies.

    On success these are the (triangular) bindings; on failure the offending
    pair is kept in place next to the bindings found so far.
    """
    pairs = problem.pairs if isinstance(problem, UnifProblem) else problem
    out = unify_problem(pairs)
    return out.solved if out.unifiable else out.irreducible
