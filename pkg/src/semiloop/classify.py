"""Decision driver: probe extensions in order and stop at the first verdict
one of the sufficient conditions licenses."""
from __future__ import annotations

from dataclasses import dataclass, field

from .decompose import (
    Cycle, DecompositionError, LayerSequence, check_finite_condition, detect_cycle, find_cycle,
)
from .loops import ExtendablyUnifiableReport, ExtensionBuilder, ResourceLimitError, unify_extension
from .terms import DegenerateTermError, SemiloopSpec, delta, format_term
from .unify import OccursCheck, UnifOutcome

__all__ = [
    "NotLoopUnifiable", "FinitelyLoopUnifiable", "InfinitelyLoopUnifiable", "Inconclusive",
    "Verdict", "Classification", "classify", "default_bound", "semiloop_delta",
]


@dataclass(frozen=True)
class NotLoopUnifiable:
    n: int
    failure: UnifOutcome = field(compare=False)

    name = "NOT-LOOP-UNIFIABLE"
    definite = True


@dataclass(frozen=True)
class FinitelyLoopUnifiable:
    k: int

    name = "FINITELY-LOOP-UNIFIABLE"
    definite = True


@dataclass(frozen=True)
class InfinitelyLoopUnifiable:
    r: int
    cycle: Cycle

    name = "INFINITELY-LOOP-UNIFIABLE"
    definite = True


@dataclass(frozen=True)
class Inconclusive:
    bound: int
    resource_limited: bool = False

    name = "INCONCLUSIVE"
    definite = False


Verdict = NotLoopUnifiable | FinitelyLoopUnifiable | InfinitelyLoopUnifiable | Inconclusive


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    reports: tuple[ExtendablyUnifiableReport, ...]
    delta: int
    bound: int
    notes: tuple[str, ...] = ()

    @property
    def definite(self) -> bool:
        return self.verdict.definite

    def to_text(self) -> str:
        v = self.verdict
        lines = [f"verdict: {v.name}"]
        if isinstance(v, NotLoopUnifiable):
            lines.append(f"n: {v.n}")
            lines.append(f"failure: {_failure_text(v.failure)}")
        elif isinstance(v, FinitelyLoopUnifiable):
            lines.append(f"k: {v.k}")
        elif isinstance(v, InfinitelyLoopUnifiable):
            lines.append(f"r: {v.r}")
            lines.append(f"cycle: i={v.cycle.i} j={v.cycle.j} period={v.cycle.period}")
        else:
            lines.append(f"resource_limited: {str(v.resource_limited).lower()}")
        lines.append(f"delta: {self.delta}")
        lines.append(f"bound: {self.bound}")
        lines.append(f"extensions: {len(self.reports)}")
        for rep in self.reports:
            if not rep.unifiable:
                status = _failure_text(rep.outcome)
            elif rep.extendably:
                status = f"UNIFIABLE extendable binding={format_term(rep.recvar_binding)}"
            else:
                status = "UNIFIABLE final"
            lines.append(f"ext.{rep.n}: {status}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def _failure_text(out: UnifOutcome) -> str:
    if isinstance(out, OccursCheck):
        return f"OCCURS-CHECK {format_term(out.variable)} in {format_term(out.term)}"
    return f"CLASH {out.symbols[0]} vs {out.symbols[1]}"


def semiloop_delta(sl: SemiloopSpec) -> int:
    """Index spread of the extendable side; 0 when it has no class variables."""
    try:
        return delta(sl.extendable)
    except DegenerateTermError:
        return 0


def default_bound(sl: SemiloopSpec) -> int:
    return max(2 * semiloop_delta(sl) + 8, 32)


def classify(sl: SemiloopSpec, bound: int | None = None,
             builder: ExtensionBuilder | None = None) -> Classification:
    """Probe extensions ``1..bound`` in order.

    At each ``n``: a failed unification ends with NotLoopUnifiable; a unifier
    meeting the finite condition ends with FinitelyLoopUnifiable; otherwise,
    while every extension so far binds the recursion variable and ``n - 1``
    exceeds ``2*delta``, a repeated state in the windowed decomposition of
    the ``n``-extension ends with InfinitelyLoopUnifiable.  Repeats found
    below that threshold are only noted.
    """
    if bound is None:
        bound = default_bound(sl)
    if bound < 1:
        raise ValueError("bound must be at least 1")
    d = semiloop_delta(sl)
    builder = builder or ExtensionBuilder(sl)
    reports: list[ExtendablyUnifiableReport] = []
    notes: list[str] = []
    all_extendable = True
    noted_sub_window = False
    layers = LayerSequence(sl, windowed=True)

    def done(verdict):
        return Classification(verdict, tuple(reports), d, bound, tuple(notes))

    for n in range(1, bound + 1):
        try:
            rep = unify_extension(sl, n, builder)
        except ResourceLimitError as e:
            notes.append(f"resource limit at extension {e.n}: {e.size} nodes > {e.budget}")
            return done(Inconclusive(bound, True))
        reports.append(rep)
        if not rep.unifiable:
            return done(NotLoopUnifiable(n, rep.outcome))
        if check_finite_condition(sl, n, rep.mgu):
            return done(FinitelyLoopUnifiable(n))
        all_extendable = all_extendable and rep.extendably
        if not all_extendable or sl.degenerate or n < 3:
            continue
        try:
            trace = layers.trace(n)
        except DecompositionError:
            # cannot happen while every prefix binds the recursion variable
            all_extendable = False
            continue
        if n - 1 > 2 * d:
            cyc = detect_cycle(trace, d)
            if cyc is not None:
                return done(InfinitelyLoopUnifiable(n - 1, cyc))
        else:
            cyc = None if noted_sub_window else find_cycle(trace)
            if cyc is not None:
                noted_sub_window = True
                notes.append(f"sub-window cycle at r={n - 1} (i={cyc.i} j={cyc.j}), "
                             f"not conclusive since r <= 2*delta = {2 * d}")
    return done(Inconclusive(bound))
