"""Batch evaluation of quantifier-free formulas over many submodels.

A quantified operator has to evaluate its body once per candidate
announcement, and on a 20-state model that is about a million submodels.
The body is compiled to a straight-line program over 64-bit state masks
(models of at most 64 states) and run for every candidate domain by one of
two interchangeable kernels:

* ``eval_batch_numba`` -- a numba ``@njit`` loop, one candidate at a time;
* ``eval_batch_numpy`` -- pure numpy, vectorised across candidates.

``ANNOUNCE_DISABLE_NUMBA=1`` forces the numpy kernel; it is also used when
numba cannot be imported.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .formula import (AnnBox, And, Atom, Bottom, Imp, Know, Not, Or, Top)

OP_TOP, OP_BOT, OP_ATOM, OP_NOT, OP_AND, OP_OR, OP_IMP, OP_KNOW = range(8)
MAX_STATES = 64

_DISABLED = os.environ.get("ANNOUNCE_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("numba disabled by ANNOUNCE_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


@dataclass(frozen=True)
class Program:
    """Straight-line program; instruction ``k`` writes register ``k``.

    ``dom[k]`` names the register holding the domain the instruction is
    evaluated in, or ``-1`` for the candidate submodel itself.  The result of
    the program is the last register.
    """
    op: np.ndarray
    arg1: np.ndarray
    arg2: np.ndarray
    dom: np.ndarray
    atom_masks: np.ndarray
    blocks: np.ndarray
    nblocks: np.ndarray

    def __len__(self):
        return len(self.op)


def compile_formula(f, model) -> Program:
    """Compile a quantifier-free formula against ``model``'s signature."""
    if len(model) > MAX_STATES:
        raise ValueError(f"batch kernels support at most {MAX_STATES} states")
    agents = {a: k for k, a in enumerate(model.agents)}
    atom_ids = {}
    ins = []
    memo = {}

    def emit(op, a1=0, a2=0, dom=-1):
        ins.append((op, a1, a2, dom))
        return len(ins) - 1

    def go(g, dom):
        key = (g, dom)
        if key in memo:
            return memo[key]
        if isinstance(g, Top):
            r = emit(OP_TOP, dom=dom)
        elif isinstance(g, Bottom):
            r = emit(OP_BOT, dom=dom)
        elif isinstance(g, Atom):
            if g.name in model.atom_masks:
                r = emit(OP_ATOM, atom_ids.setdefault(g.name, len(atom_ids)), dom=dom)
            else:
                r = emit(OP_BOT, dom=dom)
        elif isinstance(g, Not):
            r = emit(OP_NOT, go(g.sub, dom), dom=dom)
        elif isinstance(g, (And, Or, Imp)):
            op = {And: OP_AND, Or: OP_OR, Imp: OP_IMP}[type(g)]
            left = go(g.left, dom)
            r = emit(op, left, go(g.right, dom), dom=dom)
        elif isinstance(g, Know):
            r = emit(OP_KNOW, agents[g.agent], go(g.sub, dom), dom=dom)
        elif isinstance(g, AnnBox):
            # [psi]phi holds where psi fails or phi holds inside the psi-part
            psi = go(g.announcement, dom)
            r = emit(OP_IMP, psi, go(g.sub, psi), dom=dom)
        else:
            raise TypeError(f"cannot batch-compile {type(g).__name__}")
        memo[key] = r
        return r

    go(f, -1)
    arr = np.array(ins, dtype=np.int64).reshape(-1, 4)
    masks = np.zeros(max(len(atom_ids), 1), dtype=np.uint64)
    for name, k in atom_ids.items():
        masks[k] = model.atom_masks[name]
    width = max((len(model.block_masks[a]) for a in model.agents), default=1)
    blocks = np.zeros((max(len(agents), 1), max(width, 1)), dtype=np.uint64)
    nblocks = np.zeros(max(len(agents), 1), dtype=np.int64)
    for a, k in agents.items():
        bm = model.block_masks[a]
        blocks[k, :len(bm)] = bm
        nblocks[k] = len(bm)
    return Program(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(),
                   arr[:, 3].copy(), masks, blocks, nblocks)


def _eval_batch_py(op, arg1, arg2, dom, atom_masks, blocks, nblocks, cands):
    n_ins = op.shape[0]
    out = np.empty(cands.shape[0], dtype=np.uint64)
    reg = np.zeros(n_ins, dtype=np.uint64)
    zero = np.uint64(0)
    for c in range(cands.shape[0]):
        x = cands[c]
        for k in range(n_ins):
            d = x if dom[k] < 0 else reg[dom[k]]
            o = op[k]
            if o == OP_TOP:
                v = d
            elif o == OP_BOT:
                v = zero
            elif o == OP_ATOM:
                v = d & atom_masks[arg1[k]]
            elif o == OP_NOT:
                v = d & ~reg[arg1[k]]
            elif o == OP_AND:
                v = reg[arg1[k]] & reg[arg2[k]]
            elif o == OP_OR:
                v = reg[arg1[k]] | reg[arg2[k]]
            elif o == OP_IMP:
                v = d & (~reg[arg1[k]] | reg[arg2[k]])
            else:
                body = reg[arg2[k]]
                a = arg1[k]
                v = zero
                for b in range(nblocks[a]):
                    sub = blocks[a, b] & d
                    if sub != zero and (sub & ~body) == zero:
                        v |= sub
            reg[k] = v
        out[c] = reg[n_ins - 1]
    return out


if HAVE_NUMBA:
    _eval_batch_jit = njit(cache=True, nogil=True)(_eval_batch_py)
else:  # pragma: no cover - exercised only without numba
    _eval_batch_jit = None


def eval_batch_numba(prog: Program, cands: np.ndarray) -> np.ndarray:
    if _eval_batch_jit is None:
        raise RuntimeError("numba backend unavailable")
    return _eval_batch_jit(prog.op, prog.arg1, prog.arg2, prog.dom, prog.atom_masks,
                           prog.blocks, prog.nblocks, np.ascontiguousarray(cands, np.uint64))


def eval_batch_numpy(prog: Program, cands: np.ndarray) -> np.ndarray:
    cands = np.asarray(cands, dtype=np.uint64)
    regs = []
    zero = np.uint64(0)
    for k in range(len(prog.op)):
        d = cands if prog.dom[k] < 0 else regs[prog.dom[k]]
        o, a1, a2 = prog.op[k], prog.arg1[k], prog.arg2[k]
        if o == OP_TOP:
            v = d
        elif o == OP_BOT:
            v = np.zeros_like(cands)
        elif o == OP_ATOM:
            v = d & prog.atom_masks[a1]
        elif o == OP_NOT:
            v = d & ~regs[a1]
        elif o == OP_AND:
            v = regs[a1] & regs[a2]
        elif o == OP_OR:
            v = regs[a1] | regs[a2]
        elif o == OP_IMP:
            v = d & (~regs[a1] | regs[a2])
        else:
            body = regs[a2]
            v = np.zeros_like(cands)
            for b in range(prog.nblocks[a1]):
                sub = d & prog.blocks[a1, b]
                ok = (sub != zero) & ((sub & ~body) == zero)
                v |= np.where(ok, sub, zero)
        regs.append(v)
    return regs[-1]


def eval_batch(prog: Program, cands) -> np.ndarray:
    """Extension of the compiled formula inside each candidate domain."""
    cands = np.asarray(cands, dtype=np.uint64)
    if HAVE_NUMBA:
        return eval_batch_numba(prog, cands)
    return eval_batch_numpy(prog, cands)


def to_uint64(masks) -> np.ndarray:
    return np.fromiter((int(x) for x in masks), dtype=np.uint64, count=len(masks))
