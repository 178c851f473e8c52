"""Terms over two indexed variable classes and recursion variables.

A term is one of

* ``ClassVar`` - an indexed variable ``x_i`` or ``y_i``,
* ``RecVar``   - a recursion variable ``#a`` marking where a term is extended,
* ``App``      - a function symbol applied to argument terms (constants have
  no arguments).

All terms are immutable and hashable; equality is syntactic.  The module also
provides substitutions and the structural operators used everywhere else:
``shift`` (rename class variables to their successors), ``extend`` (replace a
recursion variable by a body term), ``apply``/``compose`` and ``delta``.

Text grammar::

    h(x_1, #a)        application, class variable, recursion variable
    a                 constant (``a()`` is accepted on input)
    {x_1 -> h(y_2,y_2), #a -> b}
"""
from __future__ import annotations

import enum
import re
from collections.abc import Callable, Iterable, Iterator, Mapping

__all__ = [
    "VarClass", "X", "Y", "X_ONLY", "BOTH",
    "Term", "ClassVar", "RecVar", "App", "Var",
    "Substitution", "Signature", "SemiloopSpec",
    "TermSyntaxError", "DegenerateTermError",
    "x", "y", "rv", "app",
    "shift", "shift_n", "extend", "apply", "compose", "compose_all", "restrict",
    "variables", "class_vars", "occurs", "positions", "delta", "window",
    "parse_term", "parse_substitution", "format_term",
]


class VarClass(enum.IntEnum):
    X = 0
    Y = 1

    def __str__(self) -> str:
        return self.name.lower()


X = VarClass.X
Y = VarClass.Y
X_ONLY = frozenset({X})
BOTH = frozenset({X, Y})


class TermSyntaxError(ValueError):
    pass


class DegenerateTermError(ValueError):
    """Raised when an operation needs class variables and the term has none."""


class Term:
    __slots__ = ("_hash", "size")

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_term(self)

    def __repr__(self) -> str:
        return f"<{format_term(self)}>"


class ClassVar(Term):
    __hash__ = Term.__hash__
    __slots__ = ("cls", "index")

    def __init__(self, cls: VarClass, index: int):
        if index < 0:
            raise ValueError(f"negative variable index {index}")
        self.cls = VarClass(cls)
        self.index = index
        self.size = 1
        self._hash = hash(("cv", self.cls, index))

    def __eq__(self, other):
        return self is other or (
            type(other) is ClassVar and self.index == other.index and self.cls == other.cls
        )

    def sort_key(self):
        return (0, int(self.cls), self.index, "")


class RecVar(Term):
    __hash__ = Term.__hash__
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.size = 1
        self._hash = hash(("rv", name))

    def __eq__(self, other):
        return self is other or (type(other) is RecVar and self.name == other.name)

    def sort_key(self):
        return (1, 0, 0, self.name)


class App(Term):
    __hash__ = Term.__hash__
    __slots__ = ("symbol", "args")

    def __init__(self, symbol: str, args: Iterable[Term] = ()):
        self.symbol = symbol
        self.args = tuple(args)
        self.size = 1 + sum(a.size for a in self.args)
        self._hash = hash((symbol, self.args))

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not App or self._hash != other._hash or self.size != other.size:
            return False
        return _dag_equal(self, other)


def _dag_equal(a: App, b: App) -> bool:
    # Terms built by substitution share subterms heavily; comparing each
    # pair of nodes once keeps this linear in the number of distinct nodes.
    seen: set[tuple[int, int]] = set()
    stack = [(a, b)]
    while stack:
        u, v = stack.pop()
        if u is v:
            continue
        if type(u) is not App or type(v) is not App:
            if u != v:
                return False
            continue
        key = (id(u), id(v))
        if key in seen:
            continue
        seen.add(key)
        if u._hash != v._hash or u.symbol != v.symbol or len(u.args) != len(v.args):
            return False
        stack.extend(zip(u.args, v.args))
    return True


Var = ClassVar | RecVar


def x(i: int) -> ClassVar:
    return ClassVar(X, i)


def y(i: int) -> ClassVar:
    return ClassVar(Y, i)


def rv(name: str = "a") -> RecVar:
    return RecVar(name)


def app(symbol: str, *args: Term) -> App:
    return App(symbol, args)


def _var_key(v: Var):
    return v.sort_key()


class Substitution(Mapping):
    """Finite map from variables to terms.  Identity bindings are dropped."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping | Iterable[tuple[Var, Term]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        m = {}
        for z, t in items:
            if not isinstance(z, (ClassVar, RecVar)):
                raise TypeError(f"cannot bind non-variable {z!r}")
            if z != t:
                m[z] = t
        self._map = m
        self._hash = None

    def __getitem__(self, z):
        return self._map[z]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._map == other._map
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def domain(self) -> frozenset:
        return frozenset(self._map)

    def range_vars(self) -> frozenset:
        out: set = set()
        for t in self._map.values():
            out |= variables(t)
        return frozenset(out)

    def without(self, *zs: Var) -> Substitution:
        return Substitution((z, t) for z, t in self._map.items() if z not in zs)

    def __str__(self) -> str:
        body = ", ".join(
            f"{format_term(z)} -> {format_term(self._map[z])}"
            for z in sorted(self._map, key=_var_key)
        )
        return "{" + body + "}"

    def __repr__(self) -> str:
        return f"Substitution({self})"


ID = Substitution()



# -- structural operators ---------------------------------------------------

def _rebuild(t: Term, leaf: Callable[[Term], Term]) -> Term:
    # Shared subterms are rewritten once; results keep sharing.
    memo: dict[int, Term] = {}

    def go(u: Term) -> Term:
        if type(u) is not App:
            return leaf(u)
        key = id(u)
        hit = memo.get(key)
        if hit is not None:
            return hit
        new_args = tuple(go(a) for a in u.args)
        if all(n is o for n, o in zip(new_args, u.args)):
            out = u
        else:
            out = App(u.symbol, new_args)
        memo[key] = out
        return out

    return go(t)


def shift_n(obj, n: int = 1, classes: frozenset = X_ONLY):
    """Rename every class variable in ``classes`` from ``z_i`` to ``z_{i+n}``.

    Works on terms and substitutions.  ``n`` may be negative (inverse shift)
    as long as no index drops below zero.
    """
    if isinstance(obj, Substitution):
        return Substitution(
            (shift_n(z, n, classes), shift_n(t, n, classes)) for z, t in obj.items()
        )
    if n == 0:
        return obj

    def leaf(u):
        if type(u) is ClassVar and u.cls in classes:
            return ClassVar(u.cls, u.index + n)
        return u

    return _rebuild(obj, leaf)


def shift(obj, classes: frozenset = X_ONLY):
    return shift_n(obj, 1, classes)


def extend(obj, a: RecVar, body: Term):
    """Replace every occurrence of recursion variable ``a`` by ``body``."""
    if isinstance(obj, Substitution):
        return Substitution((z, extend(t, a, body)) for z, t in obj.items())
    return _rebuild(obj, lambda u: body if u == a else u)


def apply(t: Term, sigma: Mapping) -> Term:
    """Simultaneous replacement of the domain variables of ``sigma``."""
    if not sigma:
        return t
    get = sigma.get
    return _rebuild(t, lambda u: get(u, u))


def compose(sigma: Mapping, theta: Mapping) -> Substitution:
    """The composition ``sigma theta``: ``z(sigma theta) = (z sigma) theta``."""
    out = {z: apply(t, theta) for z, t in sigma.items()}
    for z, t in theta.items():
        if z not in out:
            out[z] = t
    return Substitution(out)


def compose_all(subs: Iterable[Mapping]) -> Substitution:
    """``s1 s2 ... sn``, folded from the right so that each factor's images
    are rewritten once instead of every accumulated image per step."""
    out: Substitution = ID
    for sigma in reversed(list(subs)):
        out = compose(sigma, out)
    return out


def restrict(sigma: Mapping, keep: Callable[[Var], bool] | Iterable[Var]) -> Substitution:
    if not callable(keep):
        keep = frozenset(keep).__contains__
    return Substitution((z, t) for z, t in sigma.items() if keep(z))


# -- queries ----------------------------------------------------------------

def _leaves(t: Term) -> Iterator[Term]:
    seen: set[int] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if type(u) is App:
            if id(u) in seen:
                continue
            seen.add(id(u))
            stack.extend(u.args)
        else:
            yield u


def variables(t: Term) -> frozenset:
    return frozenset(_leaves(t))


def class_vars(t: Term, cls: VarClass | None = None) -> frozenset:
    return frozenset(
        u for u in _leaves(t) if type(u) is ClassVar and (cls is None or u.cls == cls)
    )


def occurs(z: Var, t: Term) -> bool:
    return any(u == z for u in _leaves(t))


def positions(t: Term, z: Term) -> frozenset:
    """Positions (tuples of 0-based argument indices) at which ``z`` occurs."""
    out = []

    def go(u, path):
        if u == z:
            out.append(path)
        elif type(u) is App:
            for i, a in enumerate(u.args):
                go(a, path + (i,))

    go(t, ())
    return frozenset(out)


def delta(s: Term) -> int:
    """Spread between the largest and smallest class-variable index of ``s``."""
    idx = [v.index for v in class_vars(s)]
    if not idx:
        raise DegenerateTermError(f"{format_term(s)} has no class variables")
    return max(idx) - min(idx)


def window(s: Term) -> tuple[int, int] | None:
    """Index interval ``[m, m + delta(s)]`` of the class variables of ``s``."""
    idx = [v.index for v in class_vars(s)]
    if not idx:
        return None
    return min(idx), max(idx)


# -- signatures and semiloops -----------------------------------------------

class Signature(Mapping):
    """Function symbols with their arities."""

    __slots__ = ("_arity",)

    def __init__(self, arities: Mapping[str, int] | None = None):
        self._arity = dict(arities or {})
        for f, n in self._arity.items():
            if n < 0:
                raise ValueError(f"symbol {f} has negative arity")

    def __getitem__(self, f):
        return self._arity[f]

    def __iter__(self):
        return iter(self._arity)

    def __len__(self):
        return len(self._arity)

    def __repr__(self):
        return f"Signature({self._arity})"

    @classmethod
    def of(cls, *terms: Term) -> Signature:
        arity: dict[str, int] = {}
        for t in terms:
            for u in _apps(t):
                prev = arity.setdefault(u.symbol, len(u.args))
                if prev != len(u.args):
                    raise ValueError(
                        f"symbol {u.symbol} used with arities {prev} and {len(u.args)}"
                    )
        return cls(arity)

    def check(self, t: Term) -> None:
        for u in _apps(t):
            if self._arity.get(u.symbol) != len(u.args):
                raise ValueError(f"{u.symbol}/{len(u.args)} is not in {self!r}")


def _apps(t: Term) -> Iterator[App]:
    seen: set[int] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if type(u) is App and id(u) not in seen:
            seen.add(id(u))
            yield u
            stack.extend(u.args)


class SemiloopSpec:
    """A left semiloop: an extendable term over class x and one recursion
    variable, against a fixed term over class y.

    The recursion variable may be absent from ``extendable``; every extension
    from the first on is then the extendable term itself.
    """

    __slots__ = ("extendable", "recvar", "fixed", "signature")

    def __init__(self, extendable: Term, fixed: Term, recvar: RecVar | None = None,
                 signature: Signature | None = None):
        rvs = {u for u in variables(extendable) if type(u) is RecVar}
        if recvar is None:
            if len(rvs) > 1:
                raise ValueError("extendable term has several recursion variables")
            recvar = next(iter(rvs), RecVar("a"))
        elif rvs - {recvar}:
            raise ValueError(f"foreign recursion variable in {format_term(extendable)}")
        for u in variables(extendable):
            if type(u) is ClassVar and u.cls != X:
                raise ValueError(f"extendable term may only use class x, found {u}")
        for u in variables(fixed):
            if type(u) is RecVar:
                raise ValueError("fixed term may not contain recursion variables")
            if u.cls != Y:
                raise ValueError(f"fixed term may only use class y, found {u}")
        sig = signature if signature is not None else Signature.of(extendable, fixed)
        sig.check(extendable)
        sig.check(fixed)
        self.extendable = extendable
        self.recvar = recvar
        self.fixed = fixed
        self.signature = sig

    @property
    def degenerate(self) -> bool:
        return not occurs(self.recvar, self.extendable)

    def __eq__(self, other):
        return (
            isinstance(other, SemiloopSpec)
            and self.extendable == other.extendable
            and self.fixed == other.fixed
            and self.recvar == other.recvar
        )

    def __hash__(self):
        return hash((self.extendable, self.fixed, self.recvar))

    def __repr__(self):
        return f"<{format_term(self.extendable)}, {format_term(self.fixed)}|"

    @classmethod
    def parse(cls, extendable: str, fixed: str) -> SemiloopSpec:
        return cls(parse_term(extendable), parse_term(fixed))

    @classmethod
    def from_text(cls, text: str) -> SemiloopSpec:
        """Read the two-line ``extendable: <term>`` / ``fixed: <term>`` format."""
        fields = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            key, sep, value = line.partition(":")
            if not sep or key.strip() not in ("extendable", "fixed"):
                raise TermSyntaxError(f"unexpected line {line!r}")
            fields[key.strip()] = value
        missing = {"extendable", "fixed"} - fields.keys()
        if missing:
            raise TermSyntaxError(f"missing field(s): {', '.join(sorted(missing))}")
        return cls.parse(fields["extendable"], fields["fixed"])

    def to_text(self) -> str:
        return f"extendable: {format_term(self.extendable)}\nfixed: {format_term(self.fixed)}\n"


# -- text form --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_']*)|(?P<hash>#)|(?P<punct>->|[(),{}]))")
_CLASSVAR = re.compile(r"([xy])_(\d+)$")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise TermSyntaxError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def term(self) -> Term:
        tok = self.take()
        if tok == "#":
            name = self.take()
            if not name[0].isalpha():
                raise TermSyntaxError(f"bad recursion variable name {name!r}")
            return RecVar(name)
        if not tok[0].isalpha():
            raise TermSyntaxError(f"unexpected {tok!r}")
        m = _CLASSVAR.match(tok)
        if m:
            return ClassVar(X if m.group(1) == "x" else Y, int(m.group(2)))
        args = []
        if self.peek() == "(":
            self.take("(")
            if self.peek() != ")":
                args.append(self.term())
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.term())
            self.take(")")
        return App(tok, args)

    def done(self):
        if self.peek() is not None:
            raise TermSyntaxError(f"trailing input at {self.peek()!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_substitution(text: str) -> Substitution:
    p = _Parser(text)
    p.take("{")
    pairs = []
    if p.peek() != "}":
        while True:
            z = p.term()
            if not isinstance(z, (ClassVar, RecVar)):
                raise TermSyntaxError(f"{format_term(z)} is not a variable")
            p.take("->")
            pairs.append((z, p.term()))
            if p.peek() != ",":
                break
            p.take(",")
    p.take("}")
    p.done()
    return Substitution(pairs)


def format_term(t: Term) -> str:
    parts: list[str] = []

    def go(u):
        if type(u) is ClassVar:
            parts.append(f"{u.cls}_{u.index}")
        elif type(u) is RecVar:
            parts.append("#" + u.name)
        else:
            parts.append(u.symbol)
            if u.args:
                parts.append("(")
                for i, a in enumerate(u.args):
                    if i:
                        parts.append(",")
                    go(a)
                parts.append(")")

    go(t)
    return "".join(parts)
