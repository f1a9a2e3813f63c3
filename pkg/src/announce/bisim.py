"""Bounded and stable bisimulation by partition refinement.

Level 0 groups states by their valuation restricted to the atom set.  Level
``m`` splits a level ``m-1`` block by the set of level ``m-1`` classes each
agent can reach, which is the usual forth/back condition.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .formula import Atom, Know, Not, conj, disj, kh
from .kripke import Model, iter_bits


@dataclass(frozen=True)
class Partition:
    level: object          # int, or "stable"
    atoms: frozenset
    blocks: tuple          # tuple of frozensets of state names
    class_of: dict         # state name -> block index
    masks: tuple           # same blocks as bitsets

    def __len__(self):
        return len(self.blocks)

    def block_of(self, s):
        return self.blocks[self.class_of[s]]


def _renumber(keys, order):
    ids, out = {}, {}
    for i in order:
        out[i] = ids.setdefault(keys[i], len(ids))
    return out, len(ids)


def _level0(m: Model, dom: int, atoms):
    atoms = sorted(atoms)
    order = list(iter_bits(dom))
    keys = {i: tuple((m.atom_masks.get(p, 0) >> i) & 1 for p in atoms) for i in order}
    return _renumber(keys, order)


def _refine(m: Model, dom: int, cls: dict):
    order = list(iter_bits(dom))
    keys = {}
    for i in order:
        sig = [cls[i]]
        for a in m.agents:
            blk = m.block_mask(a, i) & dom
            sig.append(frozenset(cls[j] for j in iter_bits(blk)))
        keys[i] = tuple(sig)
    return _renumber(keys, order)


def refinement_levels(m: Model, atoms, n: int, dom: int | None = None):
    """Class maps (state index -> block id) for levels ``0..n`` on ``dom``."""
    dom = m.full if dom is None else dom
    cls, k = _level0(m, dom, atoms)
    levels = [cls]
    for _ in range(n):
        cls, k = _refine(m, dom, cls)
        levels.append(cls)
    return levels


def stable_classes(m: Model, atoms, dom: int | None = None):
    """Class map and level at which refinement stops splitting blocks."""
    dom = m.full if dom is None else dom
    cls, k = _level0(m, dom, atoms)
    level = 0
    while True:
        nxt, k2 = _refine(m, dom, cls)
        if k2 == k:
            return cls, level
        cls, k, level = nxt, k2, level + 1


def class_masks(cls: dict) -> list:
    out = [0] * (max(cls.values()) + 1 if cls else 0)
    for i, c in cls.items():
        out[c] |= 1 << i
    return out


def stable_masks(m: Model, atoms, dom: int | None = None) -> list:
    """Stable bisimulation classes of the submodel on ``dom`` as bitsets."""
    cls, _ = stable_classes(m, atoms, dom)
    return class_masks(cls)


def _partition(m: Model, atoms, cls, level) -> Partition:
    masks = tuple(class_masks(cls))
    blocks = tuple(m.states_of(b) for b in masks)
    class_of = {m.states[i]: c for i, c in cls.items()}
    return Partition(level, frozenset(atoms), blocks, class_of, masks)


def _atoms(m: Model, pi):
    return m.props if pi is None else frozenset(pi)


def nbisim(m: Model, pi: Iterable[str] | None, n: int) -> Partition:
    """The ``n``-bisimulation partition over atoms ``pi`` (default: all)."""
    if n < 0:
        raise ValueError("n must be a natural number")
    pi = _atoms(m, pi)
    return _partition(m, pi, refinement_levels(m, pi, n)[-1], n)


def stable_bisim(m: Model, pi: Iterable[str] | None = None) -> Partition:
    pi = _atoms(m, pi)
    cls, _ = stable_classes(m, pi)
    return _partition(m, pi, cls, "stable")


def stable_level(m: Model, pi: Iterable[str] | None = None) -> int:
    """Least ``n`` at which the refinement is stable."""
    return stable_classes(m, _atoms(m, pi))[1]


class Characteriser:
    """Builds characteristic formulas, memoised per (level, block).

    One instance serves every state and every level up to ``n``.
    """

    def __init__(self, m: Model, pi, n: int):
        self.m = m
        self.pi = sorted(pi)
        self.levels = refinement_levels(m, pi, n)
        self.memo = {}

    def literals(self, i):
        m = self.m
        return conj(Atom(p) if (m.atom_masks.get(p, 0) >> i) & 1 else Not(Atom(p))
                    for p in self.pi)

    def formula(self, level, i):
        cls = self.levels[level][i]
        key = (level, cls)
        if key in self.memo:
            return self.memo[key]
        base = self.literals(i)
        if level == 0:
            f = base
        else:
            prev = self.levels[level - 1]
            parts = [base]
            for a in self.m.agents:
                reps = {}
                for j in iter_bits(self.m.block_mask(a, i)):
                    reps.setdefault(prev[j], j)
                succ = [self.formula(level - 1, j) for _, j in sorted(reps.items())]
                parts.extend(kh(a, g) for g in succ)
                parts.append(Know(a, disj(succ)))
            f = conj(parts)
        self.memo[key] = f
        return f


def distinguishing_formula(m: Model, pi: Iterable[str] | None, n: int, s: str):
    """EL formula of modal depth ``<= n`` true exactly on the ``n``-class of ``s``."""
    i = m.check_state(s)
    pi = _atoms(m, pi)
    return Characteriser(m, pi, n).formula(n, i)


def class_formulas(m: Model, pi: Iterable[str] | None, n: int) -> list:
    """One characteristic formula per level-``n`` block, in block order."""
    pi = _atoms(m, pi)
    ch = Characteriser(m, pi, n)
    reps = {}
    for i, c in ch.levels[n].items():
        reps.setdefault(c, i)
    return [ch.formula(n, reps[c]) for c in sorted(reps)]


def unions(blocks: list) -> list:
    """All unions of ``blocks`` in bitstring order (block 0 is the low bit),
    the empty union first."""
    out = [0]
    for b in blocks:
        out += [x | b for x in out]
    return out


def closed_masks(m: Model, atoms, dom: int | None = None) -> list:
    return unions(stable_masks(m, atoms, dom))[1:]


def closed_sets(m: Model, pi: Iterable[str] | None = None) -> Iterator[frozenset]:
    """Nonempty unions of stable bisimulation classes.

    Order: the ``k``-th set (from 1) is the union of the blocks whose index bit
    is set in ``k``.
    """
    pi = _atoms(m, pi)
    masks = stable_masks(m, pi)
    for k in range(1, 1 << len(masks)):
        yield m.states_of(sum(masks[b] for b in iter_bits(k)))
