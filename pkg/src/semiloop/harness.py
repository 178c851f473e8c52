"""Random semiloop generation and the fuzz campaign.

Randomness comes from numpy's Philox counter-based generator.  Instance
``i`` of a campaign with seed ``S`` draws from ``SeedSequence([S, i])``, so
any single instance can be replayed without generating the ones before it,
and the report does not depend on how work was split across processes.
"""
from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classify import (
    Classification, FinitelyLoopUnifiable, Inconclusive, InfinitelyLoopUnifiable,
    NotLoopUnifiable, classify,
)
from .decompose import LayerSequence, build_unifier_from_cycle
from .loops import ExtensionBuilder, unify_extension
from .oracle import oracle_extension, oracle_unify_extension, verify_unifier
from .terms import App, ClassVar, RecVar, SemiloopSpec, Signature, Term, VarClass

__all__ = [
    "GenConfig", "CampaignReport", "InstanceResult", "generate_semiloop", "instance_rng",
    "run_campaign", "check_instance", "VERDICT_NAMES", "DEEP_CONFIGS", "extendable_semiloops",
]

VERDICT_NAMES = ("NOT-LOOP-UNIFIABLE", "FINITELY-LOOP-UNIFIABLE",
                 "INFINITELY-LOOP-UNIFIABLE", "INCONCLUSIVE")

# Extensions checked against the oracle past a finite-unifiability witness.
FINITE_HORIZON = 20
# Extra extensions checked past 2*delta for cycle-built unifiers.
CYCLE_MARGIN = 10
# Oracle checks past the verdict stop once the extension tree gets this big.
ORACLE_NODE_CAP = 50_000


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_depth: int = 3
    arity: tuple[tuple[str, int], ...] = (("h", 2),)
    max_var_index: int = 4
    recvar_positions: int = 1
    fixed_term_depth: int = 3
    leaf_prob: float = 0.3

    def __post_init__(self):
        arity = self.arity.items() if isinstance(self.arity, dict) else self.arity
        object.__setattr__(self, "arity", tuple(sorted((str(f), int(n)) for f, n in arity)))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1: the recursion variable "
                             "has to sit below a function symbol")
        if not any(n >= 1 for _, n in self.arity):
            raise ValueError("arity profile needs a symbol of arity at least 1")
        if self.max_var_index < 1:
            raise ValueError("max_var_index must be at least 1")
        if self.recvar_positions < 1:
            raise ValueError("recvar_positions must be at least 1")
        if self.fixed_term_depth < 0:
            raise ValueError("fixed_term_depth must be non-negative")

    @property
    def signature(self) -> Signature:
        return Signature(dict(self.arity))


def instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def _random_shape(rng, cfg: GenConfig, depth: int, root: bool):
    """A tree of function symbols with ``None`` marking leaves to fill in."""
    funcs = [(f, n) for f, n in cfg.arity if n >= 1]
    if depth == 0 or (not root and rng.random() < cfg.leaf_prob):
        return None
    f, n = funcs[rng.integers(len(funcs))]
    return (f, [_random_shape(rng, cfg, depth - 1, False) for _ in range(n)])


def _count_leaves(shape) -> int:
    return 1 if shape is None else sum(_count_leaves(c) for c in shape[1])


def _fill(shape, leaves):
    if shape is None:
        return next(leaves)
    f, kids = shape
    return App(f, [_fill(c, leaves) for c in kids])


def _random_leaf(rng, cfg: GenConfig, cls: VarClass) -> Term:
    consts = [f for f, n in cfg.arity if n == 0]
    if consts and rng.random() < 0.15:
        return App(consts[rng.integers(len(consts))], ())
    return ClassVar(cls, int(rng.integers(1, cfg.max_var_index + 1)))


def generate_semiloop(cfg: GenConfig, index: int = 0) -> SemiloopSpec:
    rng = instance_rng(cfg.seed, index)
    a = RecVar("a")

    shape = _random_shape(rng, cfg, cfg.max_depth, True)
    n_leaves = _count_leaves(shape)
    n_rec = int(rng.integers(1, min(cfg.recvar_positions, n_leaves) + 1))
    rec_at = set(rng.choice(n_leaves, size=n_rec, replace=False).tolist())
    leaves = [a if i in rec_at else _random_leaf(rng, cfg, VarClass.X) for i in range(n_leaves)]
    s = _fill(shape, iter(leaves))

    fshape = _random_shape(rng, cfg, cfg.fixed_term_depth, True)
    t = _fill(fshape, iter(_random_leaf(rng, cfg, VarClass.Y)
                           for _ in range(_count_leaves(fshape))))
    return SemiloopSpec(s, t, a, cfg.signature)


# Small shapes and few variable indices make long runs of extendably
# unifiable extensions common enough to collect by rejection sampling.
DEEP_CONFIGS = (
    dict(max_depth=2, fixed_term_depth=2, max_var_index=3),
    dict(max_depth=3, fixed_term_depth=2, max_var_index=2),
    dict(max_depth=2, fixed_term_depth=3, max_var_index=3),
    dict(max_depth=3, fixed_term_depth=3, max_var_index=3),
)


def _extendable_depth(sl: SemiloopSpec, limit: int) -> int:
    builder = ExtensionBuilder(sl)
    for n in range(1, limit + 1):
        if not unify_extension(sl, n, builder).extendably:
            return n - 1
    return limit


def extendable_semiloops(seed: int, count: int, depth: int,
                         max_draws: int = 1_000_000) -> list[SemiloopSpec]:
    """``count`` distinct generated semiloops whose extensions ``1..depth`` all
    bind the recursion variable, in draw order.

    Draws cycle through ``DEEP_CONFIGS``; draw ``i`` uses instance index ``i``.
    Raises ``RuntimeError`` if ``max_draws`` draws do not yield enough.
    """
    cfgs = [GenConfig(seed=seed, **kw) for kw in DEEP_CONFIGS]
    found: dict[SemiloopSpec, None] = {}
    for i in range(max_draws):
        if len(found) >= count:
            break
        sl = generate_semiloop(cfgs[i % len(cfgs)], i)
        if sl not in found and _extendable_depth(sl, depth) >= depth:
            found[sl] = None
    if len(found) < count:
        raise RuntimeError(f"only {len(found)} of {count} instances after {max_draws} draws")
    return list(found)


@dataclass(frozen=True)
class InstanceResult:
    index: int
    semiloop: SemiloopSpec
    verdict: str
    witness: int | None
    disagreements: tuple[str, ...] = ()
    violations: tuple[str, ...] = ()
    conjecture_candidate: bool = False
    seconds: float = field(default=0.0, compare=False)


def _witness(c: Classification) -> int | None:
    v = c.verdict
    if isinstance(v, NotLoopUnifiable):
        return v.n
    if isinstance(v, FinitelyLoopUnifiable):
        return v.k
    if isinstance(v, InfinitelyLoopUnifiable):
        return v.r
    return None


def _tree_size(sl: SemiloopSpec, n: int) -> int:
    """Node count of the n-extension written out as a tree."""
    occ = sum(1 for _ in _recvar_leaves(sl.extendable, sl.recvar))
    size = 1
    for _ in range(n):
        size = sl.extendable.size - occ + occ * size
    return size


def _recvar_leaves(t: Term, a: RecVar):
    if isinstance(t, App):
        for u in t.args:
            yield from _recvar_leaves(u, a)
    elif t == a:
        yield t


def check_instance(sl: SemiloopSpec, bound: int | None = None, index: int = 0) -> InstanceResult:
    """Classify one semiloop and check the verdict against the oracle."""
    start = time.perf_counter()
    c = classify(sl, bound)
    v = c.verdict
    disagreements: list[str] = []
    violations: list[str] = []

    for rep in c.reports:
        o = oracle_unify_extension(sl, rep.n)
        if o.unifiable != rep.unifiable:
            disagreements.append(f"ext {rep.n}: engine {rep.outcome.kind}, oracle {o.kind}")
        elif o.unifiable and o.mgu != rep.mgu:
            disagreements.append(f"ext {rep.n}: engine {rep.mgu}, oracle {o.mgu}")

    if isinstance(v, FinitelyLoopUnifiable):
        for j in range(v.k, v.k + FINITE_HORIZON + 1):
            if _tree_size(sl, j) > ORACLE_NODE_CAP:
                break
            o = oracle_unify_extension(sl, j)
            if not o.unifiable:
                violations.append(f"finite condition at {v.k} but extension {j} fails")
                break
            if sl.recvar in o.mgu:
                violations.append(f"extension {j} binds the recursion variable after "
                                  f"extension {v.k} did not")
                break
    elif isinstance(v, InfinitelyLoopUnifiable):
        trace = LayerSequence(sl).trace(v.r + 1)
        for k in range(v.r, v.r + 2 * c.delta + CYCLE_MARGIN + 1):
            if _tree_size(sl, k) > ORACLE_NODE_CAP:
                break
            u = build_unifier_from_cycle(trace, v.cycle, k)
            if not verify_unifier(oracle_extension(sl, k), sl.fixed, u):
                violations.append(f"cycle unifier for extension {k} does not unify")
                break

    candidate = (isinstance(v, Inconclusive) and not v.resource_limited
                 and all(r.extendably for r in c.reports))
    return InstanceResult(index, sl, v.name, _witness(c), tuple(disagreements),
                          tuple(violations), candidate, time.perf_counter() - start)


def _run_one(args) -> InstanceResult:
    cfg, index, bound = args
    return check_instance(generate_semiloop(cfg, index), bound, index)


@dataclass
class CampaignReport:
    seed: int
    count: int
    bound: int | None
    counts: dict[str, int]
    witnesses: dict[str, dict[int, int]]
    disagreements: list[tuple[int, str]]
    violations: list[tuple[int, str]]
    conjecture_candidates: list[int]
    seconds_total: float = 0.0
    seconds_max: float = 0.0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.violations

    def to_text(self, timings: bool = False) -> str:
        lines = [f"seed: {self.seed}", f"count: {self.count}",
                 f"bound: {'default' if self.bound is None else self.bound}",
                 f"total: {self.total}"]
        for name in VERDICT_NAMES:
            lines.append(f"verdict.{name}: {self.counts.get(name, 0)}")
        for name in VERDICT_NAMES:
            hist = self.witnesses.get(name)
            if hist:
                body = " ".join(f"{w}:{c}" for w, c in sorted(hist.items()))
                lines.append(f"witness.{name}: {body}")
        lines.append(f"oracle_disagreements: {len(self.disagreements)}")
        lines.append(f"soundness_violations: {len(self.violations)}")
        lines.append(f"conjecture_candidates: {len(self.conjecture_candidates)}")
        lines.extend(f"disagreement: instance={i} {msg}" for i, msg in self.disagreements)
        lines.extend(f"violation: instance={i} {msg}" for i, msg in self.violations)
        if self.conjecture_candidates:
            lines.append("candidates: " + " ".join(map(str, self.conjecture_candidates)))
        if timings:
            lines.append(f"seconds_total: {self.seconds_total:.3f}")
            lines.append(f"seconds_max: {self.seconds_max:.3f}")
        return "\n".join(lines) + "\n"


def run_campaign(cfg: GenConfig, count: int, bound: int | None = None,
                 workers: int = 1) -> CampaignReport:
    """Classify ``count`` generated semiloops and cross-check every verdict.

    Conjecture candidates are inconclusive instances whose extensions all
    bound the recursion variable up to the bound without a cycle showing up.
    They are evidence to look at, not failures.
    """
    jobs = [(cfg, i, bound) for i in range(count)]
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, count // (8 * workers))))
    else:
        results = [_run_one(j) for j in jobs]

    counts: Counter = Counter()
    witnesses: dict[str, Counter] = {}
    report = CampaignReport(cfg.seed, count, bound, {}, {}, [], [], [])
    for r in results:   # already in index order
        counts[r.verdict] += 1
        if r.witness is not None:
            witnesses.setdefault(r.verdict, Counter())[r.witness] += 1
        report.disagreements.extend((r.index, m) for m in r.disagreements)
        report.violations.extend((r.index, m) for m in r.violations)
        if r.conjecture_candidate:
            report.conjecture_candidates.append(r.index)
        report.seconds_total += r.seconds
        report.seconds_max = max(report.seconds_max, r.seconds)
    report.counts = dict(counts)
    report.witnesses = {k: dict(v) for k, v in witnesses.items()}
    return report
