"""Reference implementation used to cross-check the engine.

Nothing here is imported from ``unify``, ``loops`` or ``decompose`` except the
outcome types.  Extensions are rebuilt from scratch as plain trees, and
unification is done by a different algorithm than the engine's rule-based
solver: union-find over term nodes (unification closure) followed by an
acyclicity check.  The m.g.u. is then read off each equivalence class:

* a class holding a function node maps all its variables to that node's term;
* otherwise every variable maps to the preferred one of the class, i.e. the
  recursion variable if present, else the smallest ``(class, index)``.

This is exactly the binding map the engine's orientation rule produces, so
the two can be compared for equality and not just for unifiability.
"""
from __future__ import annotations

from .terms import App, ClassVar, RecVar, SemiloopSpec, Substitution, Term, VarClass
from .unify import Clash, OccursCheck, Unifier, UnifOutcome

__all__ = ["oracle_extension", "oracle_unify", "oracle_unify_extension", "verify_unifier"]


def _subst(t: Term, sigma: dict) -> Term:
    if isinstance(t, App):
        return App(t.symbol, [_subst(a, sigma) for a in t.args])
    return sigma.get(t, t)


def _shift_x(t: Term, n: int) -> Term:
    if isinstance(t, App):
        return App(t.symbol, [_shift_x(a, n) for a in t.args])
    if isinstance(t, ClassVar) and t.cls == VarClass.X:
        return ClassVar(VarClass.X, t.index + n)
    return t


def oracle_extension(sl: SemiloopSpec, n: int) -> Term:
    """``s_n = sh^(n-1)(s)`` with the recursion variable replaced by ``s_(n-1)``."""
    out = sl.recvar
    for k in range(1, n + 1):
        out = _subst(_shift_x(sl.extendable, k - 1), {sl.recvar: out})
    return out


def _preference(v: Term) -> tuple:
    if isinstance(v, RecVar):
        return (0, 0, 0, v.name)
    return (1, int(v.cls), v.index, "")


class _Graph:
    def __init__(self):
        self.parent: list[int] = []
        self.symbol: list[str | None] = []    # None for variable nodes
        self.children: list[list[int]] = []
        self.var_node: dict[Term, int] = {}
        self.fn: list[int | None] = []         # per root: a function node of the class
        self.source: dict[int, Term] = {}      # function node -> the input subterm

    def add(self, t: Term) -> int:
        # walks the term as a tree; shared subterms get separate nodes
        if not isinstance(t, App):
            if t in self.var_node:
                return self.var_node[t]
            i = self._new(None, [])
            self.var_node[t] = i
            return i
        kids = [self.add(a) for a in t.args]
        i = self._new(t.symbol, kids)
        self.source[i] = t
        return i

    def _new(self, symbol, kids) -> int:
        i = len(self.parent)
        self.parent.append(i)
        self.symbol.append(symbol)
        self.children.append(kids)
        self.fn.append(i if symbol is not None else None)
        return i

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i


def oracle_unify(s: Term, t: Term) -> UnifOutcome:
    g = _Graph()
    pending = [(g.add(s), g.add(t))]
    while pending:
        a, b = pending.pop()
        ra, rb = g.find(a), g.find(b)
        if ra == rb:
            continue
        fa, fb = g.fn[ra], g.fn[rb]
        if fa is not None and fb is not None:
            if g.symbol[fa] != g.symbol[fb] or len(g.children[fa]) != len(g.children[fb]):
                return Clash(0, (g.symbol[fa], g.symbol[fb]))
            pending.extend(zip(g.children[fa], g.children[fb]))
        g.parent[rb] = ra
        if fa is None:
            g.fn[ra] = fb

    members: dict[int, list[Term]] = {}
    for v, i in g.var_node.items():
        members.setdefault(g.find(i), []).append(v)

    # Post-order over the class graph; meeting a class that is still open
    # means a cycle through function nodes, i.e. an occurs-check failure.
    def kids(root):
        f = g.fn[root]
        return [] if f is None else [g.find(c) for c in g.children[f]]

    built: dict[int, Term] = {}
    open_: set[int] = set()
    roots = sorted({g.find(i) for i in range(len(g.parent))})
    for start in roots:
        if start in built:
            continue
        stack = [(start, iter(kids(start)))]
        open_.add(start)
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                open_.discard(node)
                f = g.fn[node]
                if f is None:
                    built[node] = min(members[node], key=_preference)
                else:
                    built[node] = App(g.symbol[f], [built[g.find(c)] for c in g.children[f]])
            elif nxt in open_:
                on_cycle = [r for r, _ in stack[[r for r, _ in stack].index(nxt):]]
                v = min((v for r in on_cycle for v in members.get(r, ())), key=_preference)
                return OccursCheck(v, g.source[g.fn[nxt]])
            elif nxt not in built:
                open_.add(nxt)
                stack.append((nxt, iter(kids(nxt))))

    out = {}
    for root, vs in members.items():
        for v in vs:
            if v != built[root]:
                out[v] = built[root]
    return Unifier(Substitution(out))


def oracle_unify_extension(sl: SemiloopSpec, n: int) -> UnifOutcome:
    return oracle_unify(oracle_extension(sl, n), sl.fixed)


def verify_unifier(s: Term, t: Term, sigma) -> bool:
    """Whether ``s sigma`` and ``t sigma`` are the same term.

    Compares the two sides node by node without materializing them.  Each
    side is a pair (term, substituted?) because images of ``sigma`` are
    inserted as they are and must not be substituted again.
    """
    sigma = dict(sigma)
    seen = set()
    stack = [((s, True), (t, True))]
    while stack:
        (u, su), (v, sv) = stack.pop()
        if su and not isinstance(u, App) and u in sigma:
            u, su = sigma[u], False
        if sv and not isinstance(v, App) and v in sigma:
            v, sv = sigma[v], False
        key = (id(u), su, id(v), sv)
        if key in seen:
            continue
        seen.add(key)
        if isinstance(u, App) and isinstance(v, App):
            if u.symbol != v.symbol or len(u.args) != len(v.args):
                return False
            stack.extend(((a, su), (b, sv)) for a, b in zip(u.args, v.args))
        elif isinstance(u, App) or isinstance(v, App) or u != v:
            return False
    return True
