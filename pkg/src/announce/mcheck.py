"""Model checking for EL, PAL, APAL, GAL and CAL on finite models.

Quantification over epistemic formulas is realised by quantification over
their possible extensions.  On a finite model the extensions of EL formulas
are exactly the unions of stable bisimulation classes (over the atoms of the
model), so

* ``[!]phi`` ranges over every nonempty union of stable classes;
* ``[G]phi`` ranges over the sets ``X_a(B_1) & ... & X_a(B_k)`` for ``a`` in
  ``G``, where ``X_a(B) = {s : [s]_a <= B}`` and each ``B`` is such a union;
* ``[C G]phi`` is the dual of ``<C G>phi``: for every ``G``-announcement that
  keeps the state there is a counter-announcement by the other agents,
  keeping the state, after which ``phi`` holds.  ``cal_literal=True`` swaps
  in the clause exactly as written in the literature, where the
  counter-announcement may also be false at the state.

Every submodel is a bitset of the original states.  Extensions are memoised
per ``(submodel, formula)`` and stable partitions per submodel, since
bisimilarity is recomputed inside each restriction.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .bisim import stable_masks, unions
from .errors import QuantifierBudgetExceeded, SignatureMismatch, UnknownState
from .formula import (AnnBox, And, ApalBox, Atom, Bottom, CalBox, GalBox, Imp,
                      Know, Not, Or, Top, agents_of, is_quantifier_free, to_text)
from .kripke import Model, iter_bits

DEFAULT_BUDGET = 1 << 22
BATCH_THRESHOLD = 32


def default_budget() -> int:
    raw = os.environ.get("ANNOUNCE_BUDGET")
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError("ANNOUNCE_BUDGET must be >= 1")
        return value
    return DEFAULT_BUDGET


class CheckContext:
    """Caches and counters for checking formulas against one model.

    ``budget`` caps the number of candidate announcements a single quantifier
    evaluation may enumerate; exceeding it raises
    :class:`QuantifierBudgetExceeded` instead of truncating.
    """

    def __init__(self, model: Model, budget: int | None = None,
                 cal_literal: bool = False, batch: bool = True):
        self.model = model
        self.budget = default_budget() if budget is None else budget
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        self.cal_literal = cal_literal
        self.batch = batch and len(model) <= kernels.MAX_STATES
        self.atoms = model.props
        self.memo = {}
        self.candidates_enumerated = 0
        self.witnesses = {}
        self._stable = {}
        self._agent_family = {}
        self._group_family = {}
        self._programs = {}

    # signature

    def check_signature(self, f):
        unknown = agents_of(f) - set(self.model.agents)
        if unknown:
            raise SignatureMismatch(f"formula mentions agents not in the model: {sorted(unknown)}")

    def _dom(self, restriction):
        if restriction is None:
            return self.model.full
        if isinstance(restriction, int):
            return restriction & self.model.full
        return self.model.mask_of(restriction)

    # candidate announcements

    def _spend(self, n):
        if n > self.budget:
            raise QuantifierBudgetExceeded(n, self.budget)

    def stable(self, dom: int) -> list:
        got = self._stable.get(dom)
        if got is None:
            got = self._stable[dom] = stable_masks(self.model, self.atoms, dom)
        return got

    def closed(self, dom: int) -> list:
        """Nonempty unions of stable classes of the submodel, bitstring order."""
        blocks = self.stable(dom)
        self._spend((1 << len(blocks)) - 1)
        if self.batch:
            return _unions_np(blocks)[1:]
        return unions(blocks)[1:]

    def agent_family(self, dom: int, a: str) -> list:
        """Distinct extensions of ``K_a chi`` in the submodel, ``chi`` in EL."""
        key = (dom, a)
        got = self._agent_family.get(key)
        if got is not None:
            return got
        stable = self.stable(dom)
        ablocks = [b & dom for b in self.model.block_masks[a] if b & dom]
        if len(ablocks) <= len(stable):
            # unions of a-blocks that equal the interior of their closure
            self._spend(1 << len(ablocks))
            cand = _unions_np(ablocks) if self.batch else unions(ablocks)
            out = _interior(_closure(cand, stable), ablocks)
            got = sorted(int(x) for x, y in zip(cand, out) if x == y)
        else:
            self._spend(1 << len(stable))
            cand = _unions_np(stable) if self.batch else unions(stable)
            got = sorted({int(x) for x in _interior(cand, ablocks)})
        self._agent_family[key] = got
        return got

    def group_family(self, dom: int, group) -> list:
        """Extensions of the group announcements of ``group``, without the
        empty set; ``[dom]`` for the empty group."""
        group = frozenset(group)
        key = (dom, group)
        got = self._group_family.get(key)
        if got is not None:
            return got
        fam = {dom}
        for a in sorted(group):
            other = self.agent_family(dom, a)
            self._spend(len(fam) * len(other))
            fam = {x & y for x in fam for y in other}
        got = sorted(x for x in fam if x)
        self._group_family[key] = got
        return got

    # evaluation

    def extension_mask(self, dom: int, f) -> int:
        if not dom:
            return 0
        key = (dom, f)
        got = self.memo.get(key)
        if got is not None:
            return got
        got = self._eval(dom, f)
        self.memo[key] = got
        return got

    def _eval(self, dom, f):
        m = self.model
        ext = self.extension_mask
        if isinstance(f, Top):
            return dom
        if isinstance(f, Bottom):
            return 0
        if isinstance(f, Atom):
            return dom & m.atom_masks.get(f.name, 0)
        if isinstance(f, Not):
            return dom & ~ext(dom, f.sub)
        if isinstance(f, And):
            left = ext(dom, f.left)
            return left & ext(dom, f.right)
        if isinstance(f, Or):
            left = ext(dom, f.left)
            return left | ext(dom, f.right)
        if isinstance(f, Imp):
            left = ext(dom, f.left)
            return dom & (~left | ext(dom, f.right))
        if isinstance(f, Know):
            body = ext(dom, f.sub)
            out = 0
            for b in m.block_masks[f.agent]:
                sub = b & dom
                if sub and not sub & ~body:
                    out |= sub
            return out
        if isinstance(f, AnnBox):
            psi = ext(dom, f.announcement)
            return dom & (~psi | ext(psi, f.sub))
        if isinstance(f, ApalBox):
            fail = self._box_fail(dom, f, self.closed(dom), f.sub)
            return dom & ~fail
        if isinstance(f, GalBox):
            fail = self._box_fail(dom, f, self.group_family(dom, f.group), f.sub)
            return dom & ~fail
        if isinstance(f, CalBox):
            return dom & ~self._cal_fail(dom, f)
        raise TypeError(f"not a formula: {f!r}")

    def _program(self, body):
        prog = self._programs.get(body)
        if prog is None:
            prog = self._programs[body] = kernels.compile_formula(body, self.model)
        return prog

    def _batchable(self, body, count):
        return self.batch and count >= BATCH_THRESHOLD and is_quantifier_free(body)

    def _exts(self, cands, body):
        """Extension of ``body`` inside each candidate domain."""
        if self._batchable(body, len(cands)):
            arr = np.asarray(cands, dtype=np.uint64)
            return arr, kernels.eval_batch(self._program(body), arr)
        ints = [int(x) for x in cands]
        return ints, [self.extension_mask(x, body) for x in ints]

    def _box_fail(self, dom, f, cands, body):
        self._spend(len(cands))
        self.candidates_enumerated += len(cands)
        cands, exts = self._exts(cands, body)
        if isinstance(exts, np.ndarray):
            per = cands & ~exts
            fail = int(np.bitwise_or.reduce(per)) if len(per) else 0
            if fail:
                self.witnesses[(dom, f)] = {
                    i: int(cands[int(np.argmax((per >> np.uint64(i)) & np.uint64(1)))])
                    for i in iter_bits(fail)}
            return fail
        fail = 0
        wit = {}
        for x, e in zip(cands, exts):
            new = x & ~e & ~fail
            for i in iter_bits(new):
                wit[i] = x
            fail |= new
        if fail:
            self.witnesses[(dom, f)] = wit
        return fail

    def _cal_fail(self, dom, f):
        xs = self.group_family(dom, f.group)
        rest = frozenset(self.model.agents) - f.group
        ys = self.group_family(dom, rest)
        if self.cal_literal and rest:
            # a counter-announcement like K_a false is false everywhere
            ys = [0] + list(ys)
        self._spend(len(xs) * len(ys))
        self.candidates_enumerated += len(xs) * len(ys)
        if self.batch:
            xa = np.asarray(xs, dtype=np.uint64)
            ya = np.asarray(ys, dtype=np.uint64)
            zs = (xa[:, None] & ya[None, :]).ravel()
            uniq, inv = np.unique(zs, return_inverse=True)
            _, exts = self._exts(uniq, f.sub)
            exts = np.asarray([int(e) for e in exts], dtype=np.uint64) \
                if not isinstance(exts, np.ndarray) else exts
            ext = exts[inv].reshape(len(xs), len(ys))
            if self.cal_literal:
                ext = ext | (xa[:, None] & ~ya[None, :])
            good = np.bitwise_or.reduce(ext, axis=1)
            per = xa & ~good
            fail = int(np.bitwise_or.reduce(per)) if len(per) else 0
            if fail:
                self.witnesses[(dom, f)] = {
                    i: int(xa[int(np.argmax((per >> np.uint64(i)) & np.uint64(1)))])
                    for i in iter_bits(fail)}
            return fail
        fail = 0
        wit = {}
        for x in xs:
            good = 0
            for y in ys:
                good |= self.extension_mask(x & y, f.sub)
                if self.cal_literal:
                    good |= x & ~y
            new = x & ~good & ~fail
            for i in iter_bits(new):
                wit[i] = x
            fail |= new
        if fail:
            self.witnesses[(dom, f)] = wit
        return fail

    def falsifying_announcements(self, f, dom=None):
        """Witness sets recorded for ``f``: state -> announced state set."""
        dom = self.model.full if dom is None else dom
        wit = self.witnesses.get((dom, f), {})
        return {self.model.states[i]: sorted(self.model.states_of(x))
                for i, x in wit.items()}


def _unions_np(blocks) -> np.ndarray:
    out = np.zeros(1, dtype=np.uint64)
    for b in blocks:
        out = np.concatenate([out, out | np.uint64(b)])
    return out


def _closure(cands, stable):
    if isinstance(cands, np.ndarray):
        out = np.zeros_like(cands)
        zero = np.uint64(0)
        for c in stable:
            c = np.uint64(c)
            out |= np.where((cands & c) != zero, c, zero)
        return out
    return [sum(c for c in stable if c & x) for x in cands]


def _interior(cands, blocks):
    if isinstance(cands, np.ndarray):
        out = np.zeros_like(cands)
        zero = np.uint64(0)
        for b in blocks:
            b = np.uint64(b)
            out |= np.where((b & ~cands) == zero, b, zero)
        return out
    return [sum(b for b in blocks if not b & ~x) for x in cands]


# public operations

def extension(ctx: CheckContext, restriction, f) -> frozenset:
    """Truth set of ``f`` in the submodel on ``restriction`` (None: whole model)."""
    ctx.check_signature(f)
    return ctx.model.states_of(ctx.extension_mask(ctx._dom(restriction), f))


def check(ctx: CheckContext, s: str, f) -> bool:
    ctx.check_signature(f)
    i = ctx.model.check_state(s)
    return bool(ctx.extension_mask(ctx.model.full, f) >> i & 1)


def check_validity(ctx: CheckContext, f) -> bool:
    ctx.check_signature(f)
    return ctx.extension_mask(ctx.model.full, f) == ctx.model.full


def gal_sets(ctx: CheckContext, group, restriction=None):
    """Iterate the extensions of group announcements by ``group``."""
    dom = ctx._dom(restriction)
    for a in group:
        ctx.model.check_agent(a)
    for x in ctx.group_family(dom, group):
        yield ctx.model.states_of(x)


@dataclass
class CheckReport:
    formula: str
    point: str
    value: bool
    candidates_enumerated: int
    elapsed_ms: float

    def to_json(self, pretty=False) -> str:
        return json.dumps(asdict(self), indent=2 if pretty else None)


def run_check(model: Model, point: str, f, budget: int | None = None,
              cal_literal: bool = False) -> CheckReport:
    if point not in model.index:
        raise UnknownState(f"unknown state {point!r}")
    ctx = CheckContext(model, budget=budget, cal_literal=cal_literal)
    t0 = time.perf_counter()
    value = check(ctx, point, f)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return CheckReport(to_text(f), point, value, ctx.candidates_enumerated, round(elapsed, 3))
