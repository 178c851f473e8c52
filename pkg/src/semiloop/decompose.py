"""Layer-by-layer decomposition of extension unifiers, and the two
sufficient conditions built on it.

The k-extension ``s_k`` is ``sh^(k-1)(s)`` with the recursion variable
replaced by ``s_(k-1)``.  Its unifier against ``t`` can therefore be computed
one layer at a time, always working with the unshifted ``s``:

1. unify ``s sigma =? target`` treating the recursion variable as an ordinary
   variable; call the result ``theta + {#a -> t'}``;
2. the eliminator contributes ``sh^(depth-1)(theta)`` to the final unifier;
3. recurse one level down with ``sh(sigma theta)`` and ``sh(t')``.

``depth`` counts the layers still to be solved, from ``k`` down to ``1``.  The
recursion bottoms out with ``{#a -> t'}`` of the innermost layer.  In the
windowed variant the carried substitution is cut down to the index interval
``[m, m + delta(s)]`` of ``s``; nothing outside it can reach a later layer.

The state carried downward, ``(sigma_delta, target)``, does not depend on
``k``.  A state that repeats makes the tail of every deeper decomposition
periodic, which is how unifiers for all extensions are assembled from a
single trace.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .terms import (
    ID, X, App, ClassVar, RecVar, SemiloopSpec, Substitution, Term, apply, class_vars,
    compose, compose_all, format_term, restrict, shift, shift_n, variables, window,
)
from .loops import ExtensionBuilder, unify_extension
from .unify import UnifOutcome, Unifier, unify

__all__ = [
    "DecompStep", "DecompTrace", "Cycle", "DecompositionError", "CycleNotApplicable",
    "LayerSequence", "check_decomposable", "decompose", "decompose_D", "decompose_Dprime", "compose_trace",
    "find_cycle", "detect_cycle", "segment", "sub_segment", "build_unifier_from_cycle",
    "check_finite_condition", "finite_condition_margin",
]


class DecompositionError(ValueError):
    """Extension ``j`` is not extendably unifiable, so no decomposition exists."""

    def __init__(self, j: int, outcome: UnifOutcome | None):
        reason = "not unifiable" if outcome is not None and not outcome.unifiable \
            else "not extendably unifiable"
        super().__init__(f"extension {j} is {reason}")
        self.j = j
        self.outcome = outcome


class CycleNotApplicable(ValueError):
    """The trace is too short for the cycle criterion (needs r > 2*delta)."""


@dataclass(frozen=True)
class DecompStep:
    depth: int
    shift_amount: int
    theta: Substitution
    residual_target: Term
    sigma_delta: Substitution
    recvar_image: Term = field(compare=False, default=None)
    carried: Substitution = field(compare=False, default=None)

    @property
    def state(self) -> tuple[Substitution, Term]:
        return self.sigma_delta, self.residual_target

    @property
    def eliminator(self) -> Substitution:
        return shift_n(self.theta, self.shift_amount)


@dataclass(frozen=True)
class DecompTrace:
    steps: tuple[DecompStep, ...]
    final_binding: Substitution
    k: int
    windowed: bool = True
    fixed: Term = field(compare=False, default=None)
    recvar: RecVar = field(compare=False, default=None)

    def step(self, depth: int) -> DecompStep:
        if not 1 <= depth <= self.k:
            raise IndexError(f"depth {depth} outside 1..{self.k}")
        return self.steps[self.k - depth]

    def entering(self, depth: int) -> tuple[Substitution, Term]:
        """State ``(sigma_delta, target)`` handed to the layer at ``depth``."""
        if depth == self.k:
            return ID, self.fixed
        return self.step(depth + 1).state

    def to_text(self) -> str:
        op = "Dprime" if self.windowed else "D"
        lines = [f"trace op={op} k={self.k}"]
        for st in self.steps:
            lines.append(
                f"step depth={st.depth} shift={st.shift_amount} theta={st.theta} "
                f"target={format_term(st.residual_target)} sigma_delta={st.sigma_delta}"
            )
        lines.append(f"final {self.final_binding}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Cycle:
    """The state entering depth ``i`` equals the state leaving depth ``j``.

    Leaving depth ``j`` means entering ``j - 1``, so the layers ``i..j``
    repeat with period ``i - j + 1``.
    """
    r: int
    i: int
    j: int

    @property
    def period(self) -> int:
        return self.i - self.j + 1


class LayerSequence:
    """The layers of the decomposition, computed lazily from the outside in.

    Layer ``p`` (0-based) is the ``p+1``-th unification from the top.  It does
    not depend on which extension is being decomposed, so one sequence serves
    the traces of every ``sigma_k``; only the depth labels and shift amounts
    of the steps differ.  The caller is responsible for the precondition that
    every extension up to the largest ``k`` requested binds the recursion
    variable; a layer that fails anyway raises ``DecompositionError``.
    """

    def __init__(self, sl: SemiloopSpec, windowed: bool = True):
        self.sl = sl
        self.windowed = windowed
        win = window(sl.extendable)
        if win:
            lo, hi = win
            self._in_window = lambda z: type(z) is ClassVar and z.cls == X and lo <= z.index <= hi
        else:
            self._in_window = lambda z: False
        # per layer: (theta, recvar image, residual target, sigma_delta, carried)
        self._layers: list[tuple] = []
        self._carried, self._target = ID, sl.fixed

    def __len__(self) -> int:
        return len(self._layers)

    def extend_to(self, n: int) -> None:
        s, a = self.sl.extendable, self.sl.recvar
        while len(self._layers) < n:
            out = unify(apply(s, self._carried), self._target)
            if not out.unifiable or a not in out.mgu:
                raise DecompositionError(len(self._layers) + 1, out)
            image = out.mgu[a]
            theta = out.mgu.without(a)
            nxt = shift(compose(self._carried, theta))
            sigma_delta = restrict(nxt, self._in_window)
            residual = shift(image)
            carried = sigma_delta if self.windowed else nxt
            self._layers.append((theta, image, residual, sigma_delta, carried))
            self._carried, self._target = carried, residual

    def trace(self, k: int) -> DecompTrace:
        sl = self.sl
        if k == 0:
            return DecompTrace((), Substitution({sl.recvar: sl.fixed}), 0, self.windowed,
                               sl.fixed, sl.recvar)
        self.extend_to(k)
        steps = tuple(
            DecompStep(k - p, k - p - 1, theta, residual, sigma_delta, image, carried)
            for p, (theta, image, residual, sigma_delta, carried) in enumerate(self._layers[:k])
        )
        return DecompTrace(steps, Substitution({sl.recvar: steps[-1].recvar_image}), k,
                           self.windowed, sl.fixed, sl.recvar)


def check_decomposable(sl: SemiloopSpec, k: int) -> None:
    """Raise ``DecompositionError`` unless extensions ``0..k`` all bind the
    recursion variable."""
    if k >= 1 and not isinstance(sl.fixed, App):
        # extension 0 binds the variable fixed term to #a, not #a itself
        raise DecompositionError(0, Unifier(Substitution({sl.fixed: sl.recvar})))
    builder = ExtensionBuilder(sl)
    for j in range(1, k + 1):
        rep = unify_extension(sl, j, builder)
        if not rep.extendably:
            raise DecompositionError(j, rep.outcome)


def decompose(sl: SemiloopSpec, k: int, windowed: bool = True) -> DecompTrace:
    if k < 0:
        raise ValueError("k must be non-negative")
    check_decomposable(sl, k)
    return LayerSequence(sl, windowed).trace(k)


def decompose_D(sl: SemiloopSpec, k: int) -> DecompTrace:
    return decompose(sl, k, windowed=False)


def decompose_Dprime(sl: SemiloopSpec, k: int) -> DecompTrace:
    return decompose(sl, k, windowed=True)


def compose_trace(trace: DecompTrace) -> Substitution:
    return compose_all([st.eliminator for st in trace.steps] + [trace.final_binding])


def segment(trace: DecompTrace, i: int, j: int) -> Substitution:
    """Composition of the shifted eliminators at depths ``i`` down to ``j``."""
    if not 1 <= j <= i <= trace.k:
        raise IndexError(f"segment ({i},{j}) outside 1..{trace.k}")
    return compose_all(trace.step(d).eliminator for d in range(i, j - 1, -1))


def sub_segment(trace: DecompTrace, i: int, j: int) -> Substitution:
    """``segment(i, j)`` closed off with the recursion-variable binding of depth ``j``."""
    seg = segment(trace, i, j)
    st = trace.step(j)
    return compose(seg, Substitution({trace.recvar: shift_n(st.recvar_image, st.shift_amount)}))


def find_cycle(trace: DecompTrace) -> Cycle | None:
    """First repeated state, scanning ``i`` upward from the innermost layer and,
    for each ``i``, the shortest period first."""
    last_seen: dict = {}   # state -> largest depth d <= i - 2 entered with it
    for i in range(2, trace.k + 1):
        if i >= 3:
            last_seen[trace.entering(i - 2)] = i - 2
        d = last_seen.get(trace.entering(i))
        if d is not None:
            return Cycle(trace.k - 1, i, d + 1)
    return None


def detect_cycle(trace: DecompTrace, delta: int) -> Cycle | None:
    """``find_cycle`` restricted to traces of ``sigma_(r+1)`` with ``r > 2*delta``."""
    r = trace.k - 1
    if r <= 2 * delta:
        raise CycleNotApplicable(f"r = {r} is not above 2*delta = {2 * delta}")
    return find_cycle(trace)


def build_unifier_from_cycle(trace: DecompTrace, cyc: Cycle, k: int) -> Substitution:
    """A unifier of the k-extension assembled from a trace that contains a cycle.

    The layers above depth ``i`` are used once, then the block of layers
    ``i..j`` repeats; every copy is shifted to its place in the k-extension.
    The last block, possibly partial, is closed by ``sub_segment``.
    """
    K = trace.k
    if k < K - 1:
        raise ValueError(f"k = {k} is below r = {K - 1}")
    if k == 0:
        return Substitution({trace.recvar: trace.fixed})
    head_len = K - cyc.i            # layers above the cycle
    period = cyc.period
    if k <= head_len:
        return shift_n(sub_segment(trace, K, K - k + 1), k - K)
    alpha, beta = divmod(k - head_len, period)
    parts = []
    if head_len:
        parts.append(shift_n(segment(trace, K, cyc.i + 1), k - K))
    blocks = alpha if beta else alpha - 1
    for c in range(blocks):
        parts.append(shift_n(segment(trace, cyc.i, cyc.j), k - K - c * period))
    if beta:
        parts.append(shift_n(sub_segment(trace, cyc.i, cyc.i - beta + 1), k - K - alpha * period))
    else:
        parts.append(shift_n(sub_segment(trace, cyc.i, cyc.j), k - K - (alpha - 1) * period))
    return compose_all(parts)


def finite_condition_margin(sl: SemiloopSpec, mgu: Substitution) -> tuple[bool, int, list]:
    """Pieces of the finite-unifiability check, for reporting.

    Returns whether the recursion variable is unbound, the bound ``m`` that
    shifted carriers must exceed, and the class-x domain variables whose
    images mention the recursion variable (the carriers).

    ``m`` is the largest class-x index in ``s`` or in ``s theta`` with
    ``theta = sh(mgu)``.  Taking ``s theta`` alone is not enough: a carrier
    whose shift is a variable of ``s`` is bound by ``theta`` and so vanishes
    from ``s theta``, yet it is exactly the variable that collides when the
    recursion variable is replaced by ``s`` in the next extension.
    """
    a = sl.recvar
    s = sl.extendable
    theta = shift(mgu)
    xs = [v.index for v in class_vars(s, X) | class_vars(apply(s, theta), X)]
    m = max(xs) if xs else -1
    carriers = [z for z, r in mgu.items()
                if type(z) is ClassVar and z.cls == X and a in variables(r)]
    return a not in mgu, m, carriers


def check_finite_condition(sl: SemiloopSpec, k: int, mgu: Substitution) -> bool:
    """True when the unifier of extension ``k`` licenses unifiability of every
    later extension.

    The unifier of extension ``j + 1`` is then obtained from that of ``j`` by
    shifting and putting ``s theta`` in place of the recursion variable, and
    carriers stay clear of ``s`` under every further shift.  Class-y
    variables are never shifted, so only class-x carriers are constrained.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    unbound, m, carriers = finite_condition_margin(sl, mgu)
    return unbound and all(z.index + 1 > m for z in carriers)
