"""Naive reference evaluator used to cross-check :mod:`announce.mcheck`.

Nothing here shares code with the bitset checker beyond model construction.
Truth is computed pointwise on explicit submodels built by
:func:`~announce.kripke.restrict`, and quantifiers range over actual
announcement *formulas*: disjunctions of characteristic formulas of the
stable bisimulation classes of the current submodel, fed through the
ordinary ``[psi]phi`` clause.  Exponential; meant for models of a handful of
states.
"""
from __future__ import annotations

from itertools import combinations, product

from .bisim import class_formulas, stable_level
from .formula import (BOTTOM, AnnBox, And, ApalBox, Atom, Bottom, CalBox, GalBox,
                      Imp, Know, Not, Or, Top, conj, disj)
from .kripke import Model, equiv_class, restrict


def _subsets(items):
    for k in range(len(items) + 1):
        yield from combinations(items, k)


class Oracle:
    def __init__(self, cal_literal=False):
        self.cal_literal = cal_literal
        self._memo = {}
        self._anns = {}

    def announcements(self, m: Model):
        """One EL formula per nonempty bisimulation-closed set of ``m``."""
        key = frozenset(m.states)
        got = self._anns.get(key)
        if got is None:
            forms = class_formulas(m, m.props, stable_level(m, m.props))
            got = [disj(c) for c in _subsets(forms) if c]
            self._anns[key] = got
        return got

    def group_announcements(self, m: Model, group):
        """Formulas ``AND_{a in G} K_a chi_a`` with ``chi_a`` closed-set formulas."""
        group = sorted(group)
        if not group:
            return [conj([])]
        chis = [BOTTOM] + self.announcements(m)
        return [conj(Know(a, c) for a, c in zip(group, pick))
                for pick in product(chis, repeat=len(group))]

    def holds(self, m: Model, s: str, f) -> bool:
        key = (frozenset(m.states), s, f)
        got = self._memo.get(key)
        if got is None:
            got = self._memo[key] = self._holds(m, s, f)
        return got

    def extension(self, m: Model, f) -> frozenset:
        return frozenset(s for s in m.states if self.holds(m, s, f))

    def _after(self, m, s, psi, f):
        # M_s |= [psi]f
        if not self.holds(m, s, psi):
            return True
        return self.holds(restrict(m, self.extension(m, psi)), s, f)

    def _holds(self, m, s, f):
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Atom):
            return f.name in m.valuation.get(s, ())
        if isinstance(f, Not):
            return not self.holds(m, s, f.sub)
        if isinstance(f, And):
            return self.holds(m, s, f.left) and self.holds(m, s, f.right)
        if isinstance(f, Or):
            return self.holds(m, s, f.left) or self.holds(m, s, f.right)
        if isinstance(f, Imp):
            return not self.holds(m, s, f.left) or self.holds(m, s, f.right)
        if isinstance(f, Know):
            return all(self.holds(m, t, f.sub) for t in equiv_class(m, f.agent, s))
        if isinstance(f, AnnBox):
            return self._after(m, s, f.announcement, f.sub)
        if isinstance(f, ApalBox):
            return all(self._after(m, s, psi, f.sub) for psi in self.announcements(m))
        if isinstance(f, GalBox):
            return all(self._after(m, s, psi, f.sub)
                       for psi in self.group_announcements(m, f.group))
        if isinstance(f, CalBox):
            rest = set(m.agents) - f.group
            others = self.group_announcements(m, rest)
            for psi in self.group_announcements(m, f.group):
                if not self.holds(m, s, psi):
                    continue
                if not any(self._counter(m, s, psi, chi, f.sub) for chi in others):
                    return False
            return True
        raise TypeError(f"not a formula: {f!r}")

    def _counter(self, m, s, psi, chi, f):
        if not self.holds(m, s, chi):
            return self.cal_literal
        return self._after(m, s, And(psi, chi), f)


def oracle_check(m: Model, s: str, f, cal_literal=False) -> bool:
    return Oracle(cal_literal).holds(m, s, f)


def oracle_extension(m: Model, f, cal_literal=False) -> frozenset:
    return Oracle(cal_literal).extension(m, f)
