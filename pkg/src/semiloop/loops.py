"""Extensions of semiloops and per-extension unifiability."""
from __future__ import annotations

from dataclasses import dataclass

from .terms import BOTH, RecVar, SemiloopSpec, Substitution, Term, extend, shift
from .unify import UnifOutcome, unify

__all__ = [
    "DEFAULT_NODE_BUDGET", "ResourceLimitError", "Extension", "ExtensionBuilder",
    "ExtendablyUnifiableReport", "extension", "unify_extension",
    "is_loop_unifiable_up_to", "loop_extension",
]

DEFAULT_NODE_BUDGET = 10**6


class ResourceLimitError(RuntimeError):
    def __init__(self, n: int, size: int, budget: int):
        super().__init__(f"extension {n} has {size} nodes, budget is {budget}")
        self.n = n
        self.size = size
        self.budget = budget


@dataclass(frozen=True)
class Extension:
    n: int
    term: Term
    fixed: Term


class ExtensionBuilder:
    """Builds ``s_0, s_1, ...`` incrementally, each from its predecessor.

    Not thread safe; use one builder per thread.
    """

    def __init__(self, sl: SemiloopSpec, node_budget: int = DEFAULT_NODE_BUDGET):
        self.sl = sl
        self.node_budget = node_budget
        self._terms: list[Term] = [sl.recvar]

    def term(self, n: int) -> Term:
        if n < 0:
            raise ValueError("extension index must be non-negative")
        sl = self.sl
        if sl.degenerate and n >= 1:
            return sl.extendable
        while len(self._terms) <= n:
            k = len(self._terms)
            nxt = extend(shift(self._terms[-1]), sl.recvar, sl.extendable)
            if nxt.size > self.node_budget:
                raise ResourceLimitError(k, nxt.size, self.node_budget)
            self._terms.append(nxt)
        return self._terms[n]

    def __getitem__(self, n: int) -> Extension:
        return Extension(n, self.term(n), self.sl.fixed)


def extension(sl: SemiloopSpec, n: int, node_budget: int = DEFAULT_NODE_BUDGET) -> Extension:
    return ExtensionBuilder(sl, node_budget)[n]


@dataclass(frozen=True)
class ExtendablyUnifiableReport:
    n: int
    unifiable: bool
    extendably: bool
    mgu: Substitution | None
    recvar_binding: Term | None
    outcome: UnifOutcome

    def __post_init__(self):
        if self.extendably and not self.unifiable:
            raise ValueError("extendably unifiable implies unifiable")


def _report(n: int, recvar: RecVar, outcome: UnifOutcome) -> ExtendablyUnifiableReport:
    if not outcome.unifiable:
        return ExtendablyUnifiableReport(n, False, False, None, None, outcome)
    mgu = outcome.mgu
    binding = mgu.get(recvar)
    return ExtendablyUnifiableReport(n, True, binding is not None, mgu, binding, outcome)


def unify_extension(sl: SemiloopSpec, n: int, builder: ExtensionBuilder | None = None
                    ) -> ExtendablyUnifiableReport:
    builder = builder or ExtensionBuilder(sl)
    return _report(n, sl.recvar, unify(builder.term(n), sl.fixed))


def is_loop_unifiable_up_to(sl: SemiloopSpec, bound: int,
                            builder: ExtensionBuilder | None = None
                            ) -> list[ExtendablyUnifiableReport]:
    """Reports for extensions ``1..bound``, stopping at the first failure."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    builder = builder or ExtensionBuilder(sl)
    out = []
    for n in range(1, bound + 1):
        rep = unify_extension(sl, n, builder)
        out.append(rep)
        if not rep.unifiable:
            break
    return out


def loop_extension(s: Term, a: RecVar, t: Term, b: RecVar, n: int) -> tuple[Term, Term]:
    """The n-extension of a two-sided loop: both sides are shifted over every
    class and extended.  Only the stepping exists; classification is for
    semiloops.
    """
    left, right = a, b
    for _ in range(n):
        left = extend(shift(left, BOTH), a, s)
        right = extend(shift(right, BOTH), b, t)
    return left, right
