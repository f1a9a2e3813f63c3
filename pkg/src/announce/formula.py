"""Formula trees for EL, PAL, APAL, GAL and CAL.

Only box forms exist as nodes; diamonds and ``Kh`` are built with the helper
functions below, which return the negated-box encoding.  Nodes are immutable
and cache their hash, so large shared trees can be used as memo keys.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from functools import reduce

from .errors import NotEpistemic


class Formula:
    __slots__ = ()

    def _parts(self):
        names = _FIELDS.get(type(self))
        if names is None:
            names = _FIELDS[type(self)] = tuple(f.name for f in fields(self))
        return tuple(getattr(self, n) for n in names)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return _same_tree(self, other)

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + self._parts())
            self.__dict__["_h"] = h
        return h

    def __str__(self):
        return to_text(self)

    # operator sugar, handy in tests and generators
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Imp(self, other)


_FIELDS = {}


def _same_tree(a, b):
    # shared subtrees make naive recursion exponential; compare each pair once
    seen = set()
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y or (id(x), id(y)) in seen:
            continue
        seen.add((id(x), id(y)))
        if type(x) is not type(y) or hash(x) != hash(y):
            return False
        for u, v in zip(x._parts(), y._parts()):
            if isinstance(u, Formula):
                stack.append((u, v))
            elif u != v:
                return False
    return True


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Know(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True, eq=False)
class AnnBox(Formula):
    announcement: Formula
    sub: Formula


@dataclass(frozen=True, eq=False)
class ApalBox(Formula):
    sub: Formula


@dataclass(frozen=True, eq=False)
class GalBox(Formula):
    group: frozenset
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "group", frozenset(self.group))


@dataclass(frozen=True, eq=False)
class CalBox(Formula):
    group: frozenset
    sub: Formula

    def __post_init__(self):
        object.__setattr__(self, "group", frozenset(self.group))


TOP = Top()
BOTTOM = Bottom()

QUANTIFIERS = (ApalBox, GalBox, CalBox)
DYNAMIC = (AnnBox,) + QUANTIFIERS


# derived forms

def atom(name):
    return Atom(name)


def atoms(names):
    return [Atom(n) for n in names.split()]


def kh(agent, f):
    return Not(Know(agent, Not(f)))


def ann_dia(psi, f):
    return Not(AnnBox(psi, Not(f)))


def apal_dia(f):
    return Not(ApalBox(Not(f)))


def gal_dia(group, f):
    return Not(GalBox(group, Not(f)))


def cal_dia(group, f):
    return Not(CalBox(group, Not(f)))


def iff(a, b):
    return And(Imp(a, b), Imp(b, a))


def conj(items):
    """Left-nested conjunction; the empty conjunction is ``true``."""
    items = list(items)
    if not items:
        return TOP
    return reduce(And, items)


def disj(items):
    """Left-nested disjunction; the empty disjunction is ``false``."""
    items = list(items)
    if not items:
        return BOTTOM
    return reduce(Or, items)


def children(f):
    if isinstance(f, (Not, Know, ApalBox, GalBox, CalBox)):
        return (f.sub,)
    if isinstance(f, (And, Or, Imp)):
        return (f.left, f.right)
    if isinstance(f, AnnBox):
        return (f.announcement, f.sub)
    return ()


def _fold(f, leaf, combine, memo=None):
    """Memoised bottom-up fold; shared subtrees are visited once."""
    if memo is None:
        memo = {}
    key = id(f)
    if key in memo:
        return memo[key][1]
    val = combine(f, [_fold(c, leaf, combine, memo) for c in children(f)]) \
        if children(f) else leaf(f)
    memo[key] = (f, val)
    return val


# structural analyses

def is_el(f) -> bool:
    """True iff ``f`` uses no announcement or quantifier operator."""
    return _fold(f, lambda g: True,
                 lambda g, cs: not isinstance(g, DYNAMIC) and all(cs))


def is_quantifier_free(f) -> bool:
    return _fold(f, lambda g: True,
                 lambda g, cs: not isinstance(g, QUANTIFIERS) and all(cs))


def is_el_group(f, group) -> bool:
    """True iff ``f`` is a conjunction with exactly one ``K_a phi_a`` per ``a``
    in ``group`` and every ``phi_a`` in EL."""
    group = set(group)
    if not group:
        return isinstance(f, Top)
    conjuncts = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            conjuncts.append(g)
    owners = []
    for c in conjuncts:
        if not isinstance(c, Know) or not is_el(c.sub):
            return False
        owners.append(c.agent)
    return len(owners) == len(group) and set(owners) == group


def modal_depth(f) -> int:
    """Maximum nesting of knowledge operators; EL formulas only."""
    if not is_el(f):
        raise NotEpistemic("modal depth is only defined for epistemic formulas")
    return _fold(f, lambda g: 0,
                 lambda g, cs: max(cs) + (1 if isinstance(g, Know) else 0))


def atoms_of(f) -> frozenset:
    return _fold(f, lambda g: frozenset([g.name]) if isinstance(g, Atom) else frozenset(),
                 lambda g, cs: frozenset().union(*cs))


def agents_of(f) -> frozenset:
    def combine(g, cs):
        out = frozenset().union(*cs)
        if isinstance(g, Know):
            out |= {g.agent}
        elif isinstance(g, (GalBox, CalBox)):
            out |= g.group
        return out
    return _fold(f, lambda g: frozenset(), combine)


def size(f) -> int:
    """Number of nodes of the tree (shared subtrees counted each time)."""
    return _fold(f, lambda g: 1, lambda g, cs: 1 + sum(cs))


# printer

_IMP, _OR, _AND, _UNARY = range(4)


def _group(g):
    return "{" + ",".join(sorted(g)) + "}"


def _emit(f, level, out):
    if isinstance(f, Imp):
        if level > _IMP:
            out.append("(")
        _emit(f.left, _OR, out)
        out.append(" -> ")
        _emit(f.right, _IMP, out)
        if level > _IMP:
            out.append(")")
    elif isinstance(f, (Or, And)):
        mine = _OR if isinstance(f, Or) else _AND
        if level > mine:
            out.append("(")
        _emit(f.left, mine, out)
        out.append(" | " if mine == _OR else " & ")
        _emit(f.right, mine + 1, out)
        if level > mine:
            out.append(")")
    elif isinstance(f, Top):
        out.append("true")
    elif isinstance(f, Bottom):
        out.append("false")
    elif isinstance(f, Atom):
        out.append(f.name)
    elif isinstance(f, Not):
        out.append("~")
        _emit(f.sub, _UNARY, out)
    elif isinstance(f, Know):
        out.append(f"K {f.agent} ")
        _emit(f.sub, _UNARY, out)
    elif isinstance(f, AnnBox):
        out.append("[")
        _emit(f.announcement, _IMP, out)
        out.append("] ")
        _emit(f.sub, _UNARY, out)
    elif isinstance(f, ApalBox):
        out.append("[!] ")
        _emit(f.sub, _UNARY, out)
    elif isinstance(f, GalBox):
        out.append(f"[G{_group(f.group)}] ")
        _emit(f.sub, _UNARY, out)
    elif isinstance(f, CalBox):
        out.append(f"[C{_group(f.group)}] ")
        _emit(f.sub, _UNARY, out)
    else:
        raise TypeError(f"not a formula: {f!r}")


def to_text(f) -> str:
    """Canonical text; ``parse(to_text(f)) == f`` for every formula."""
    out = []
    _emit(f, _IMP, out)
    return "".join(out)
