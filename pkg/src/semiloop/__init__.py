"""Unification of loops and semiloops: schematic term sequences built by
repeatedly shifting a term and plugging it into itself.

The modules, bottom up: ``terms`` (terms, substitutions, shift/extend),
``unify`` (syntactic unification), ``loops`` (extensions), ``decompose``
(layered unifiers and the two sufficient conditions), ``classify`` (the
decision driver), ``oracle`` (independent cross-check) and ``harness``
(random generation and fuzz campaigns).
"""
from .classify import (
    Classification, FinitelyLoopUnifiable, Inconclusive, InfinitelyLoopUnifiable,
    NotLoopUnifiable, classify, default_bound,
)
from .decompose import (
    Cycle, CycleNotApplicable, DecompositionError, DecompStep, DecompTrace,
    build_unifier_from_cycle, check_finite_condition, compose_trace, decompose_D,
    decompose_Dprime, detect_cycle, find_cycle, segment, sub_segment,
)
from .loops import (
    ExtendablyUnifiableReport, Extension, ExtensionBuilder, ResourceLimitError, extension,
    is_loop_unifiable_up_to, unify_extension,
)
from .terms import (
    App, ClassVar, RecVar, SemiloopSpec, Signature, Substitution, Term, apply, compose,
    delta, extend, format_term, parse_substitution, parse_term, shift, shift_n,
)
from .unify import Clash, OccursCheck, Unifier, irreducible_form, unify

__version__ = "0.1.0"
