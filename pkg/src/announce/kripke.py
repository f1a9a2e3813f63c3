"""Finite S5 Kripke models.

Accessibility is stored as one partition of the state set per agent, so every
relation is an equivalence relation by construction.  State names are strings
at the API boundary; internally each state has a dense index and sets of
states are Python ints used as bitsets (bit ``i`` set means state ``i`` is in
the set).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (EmptyRestriction, ModelFormatError, OverlappingBlocks,
                     UncoveredState, UnknownAgent, UnknownProp, UnknownState)


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class Model:
    states: tuple
    agents: tuple
    valuation: Mapping[str, frozenset]
    partitions: Mapping[str, tuple]
    props: frozenset

    # derived, index-level views
    index: dict = field(init=False, repr=False)
    full: int = field(init=False, repr=False)
    atom_masks: dict = field(init=False, repr=False)
    block_masks: dict = field(init=False, repr=False)
    block_of: dict = field(init=False, repr=False)

    def __post_init__(self):
        index = {s: i for i, s in enumerate(self.states)}
        atom_masks = {p: 0 for p in self.props}
        for s, ps in self.valuation.items():
            for p in ps:
                atom_masks[p] |= 1 << index[s]
        block_masks, block_of = {}, {}
        for a in self.agents:
            masks = sorted((sum(1 << index[s] for s in b) for b in self.partitions[a]),
                           key=lambda m: m & -m)
            owner = [0] * len(self.states)
            for k, m in enumerate(masks):
                for i in iter_bits(m):
                    owner[i] = k
            block_masks[a] = tuple(masks)
            block_of[a] = tuple(owner)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "full", (1 << len(self.states)) - 1)
        object.__setattr__(self, "atom_masks", atom_masks)
        object.__setattr__(self, "block_masks", block_masks)
        object.__setattr__(self, "block_of", block_of)

    def __len__(self):
        return len(self.states)

    def _key(self):
        return (self.states, frozenset(self.agents),
                {a: frozenset(self.partitions[a]) for a in self.agents},
                {s: frozenset(self.valuation.get(s, ())) for s in self.states},
                self.props)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return self._key() == other._key()

    __hash__ = None

    # bitset helpers

    def mask_of(self, states: Iterable[str]) -> int:
        m = 0
        for s in states:
            if s not in self.index:
                raise UnknownState(f"unknown state {s!r}")
            m |= 1 << self.index[s]
        return m

    def states_of(self, mask: int) -> frozenset:
        return frozenset(self.states[i] for i in iter_bits(mask))

    def ordered_states_of(self, mask: int) -> list:
        return [self.states[i] for i in iter_bits(mask)]

    def check_agent(self, a: str):
        if a not in self.block_masks:
            raise UnknownAgent(f"unknown agent {a!r}")

    def check_state(self, s: str) -> int:
        try:
            return self.index[s]
        except (KeyError, TypeError):
            raise UnknownState(f"unknown state {s!r}") from None

    def block_mask(self, a: str, i: int) -> int:
        return self.block_masks[a][self.block_of[a][i]]


@dataclass(frozen=True)
class PointedModel:
    model: Model
    point: str

    def __post_init__(self):
        self.model.check_state(self.point)


@dataclass(frozen=True)
class Agent:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Test:
    prop: str
    __test__ = False  # not a pytest class

    def __str__(self):
        return f"{self.prop}?"


def program(*steps) -> tuple:
    """Build a program from steps; bare strings ending in ``?`` become tests.

    >>> program("s", "r?", "e", "l?")
    (Agent(name='s'), Test(prop='r'), Agent(name='e'), Test(prop='l'))
    """
    out = []
    for st in steps:
        if isinstance(st, (Agent, Test)):
            out.append(st)
        elif isinstance(st, str) and st.endswith("?"):
            out.append(Test(st[:-1]))
        elif isinstance(st, str):
            out.append(Agent(st))
        else:
            raise TypeError(f"bad program step {st!r}")
    if not out:
        raise ValueError("a program needs at least one step")
    return tuple(out)


def new_model(states: Sequence[str], agents: Iterable[str],
              valuation: Mapping[str, Iterable[str]],
              partitions: Mapping[str, Iterable[Iterable[str]]],
              props: Iterable[str] | None = None) -> Model:
    """Validate the inputs and build a :class:`Model`.

    Raises OverlappingBlocks / UncoveredState / UnknownState / UnknownAgent
    naming the offending agent or state.
    """
    states = tuple(states)
    if not states:
        raise UncoveredState("a model needs at least one state")
    if len(set(states)) != len(states):
        raise ModelFormatError("duplicate state names")
    known = set(states)
    agents = tuple(dict.fromkeys(agents))
    for a in agents:
        if not isinstance(a, str) or not a:
            raise ModelFormatError(f"bad agent name {a!r}")
    for a in partitions:
        if a not in agents:
            raise UnknownAgent(f"partition given for unknown agent {a!r}")
    val = {}
    for s, ps in valuation.items():
        if s not in known:
            raise UnknownState(f"valuation mentions unknown state {s!r}")
        val[s] = frozenset(ps)
    for s in states:
        val.setdefault(s, frozenset())
    parts = {}
    for a in agents:
        seen = {}
        blocks = []
        for block in partitions.get(a, ()):
            block = frozenset(block)
            if not block:
                continue
            for s in block:
                if s not in known:
                    raise UnknownState(f"agent {a!r}: unknown state {s!r}")
                if s in seen:
                    raise OverlappingBlocks(f"agent {a!r}: state {s!r} lies in two blocks")
                seen[s] = True
            blocks.append(block)
        for s in states:
            if s not in seen:
                raise UncoveredState(f"agent {a!r}: state {s!r} is in no block")
        parts[a] = tuple(blocks)
    all_props = frozenset().union(*val.values())
    if props is not None:
        all_props |= frozenset(props)
    return Model(states, agents, val, parts, all_props)


def restrict(m: Model, keep: Iterable[str]) -> Model:
    """Submodel on ``keep``: blocks and valuation are intersected with it."""
    keep = set(keep)
    if not keep:
        raise EmptyRestriction("cannot restrict a model to the empty set")
    for s in keep:
        m.check_state(s)
    return restrict_mask(m, m.mask_of(keep))


def restrict_mask(m: Model, mask: int) -> Model:
    if not mask & m.full:
        raise EmptyRestriction("cannot restrict a model to the empty set")
    states = tuple(m.ordered_states_of(mask))
    kept = set(states)
    parts = {a: tuple(b & kept for b in m.partitions[a] if b & kept) for a in m.agents}
    val = {s: m.valuation[s] for s in states}
    return Model(states, m.agents, val, parts, m.props)


def equiv_class(m: Model, a: str, s: str) -> frozenset:
    m.check_agent(a)
    i = m.check_state(s)
    return m.states_of(m.block_mask(a, i))


def _program_image(m: Model, pi, start: int) -> int:
    cur = start
    for step in pi:
        if isinstance(step, Agent):
            m.check_agent(step.name)
            nxt = 0
            for blk in m.block_masks[step.name]:
                if blk & cur:
                    nxt |= blk
            cur = nxt
        elif isinstance(step, Test):
            if step.prop not in m.props:
                raise UnknownProp(f"unknown proposition {step.prop!r}")
            cur &= m.atom_masks[step.prop]
        else:
            raise TypeError(f"bad program step {step!r}")
    return cur


def run_program(m: Model, pi, s: str) -> frozenset:
    """States ``t`` with ``(s, t)`` in the relation of the composite program."""
    if not pi:
        raise ValueError("a program needs at least one step")
    i = m.check_state(s)
    return m.states_of(_program_image(m, pi, 1 << i))


def reach(m: Model, agents: Iterable[str], s: str) -> frozenset:
    """States reachable from ``s`` through the union of the agents' relations."""
    agents = list(agents)
    for a in agents:
        m.check_agent(a)
    cur = 1 << m.check_state(s)
    while True:
        nxt = cur
        for a in agents:
            for blk in m.block_masks[a]:
                if blk & cur:
                    nxt |= blk
        if nxt == cur:
            return m.states_of(cur)
        cur = nxt


# JSON model files

_MODEL_KEYS = {"states", "agents", "valuation", "point"}


def model_from_dict(doc: Mapping) -> tuple[Model, str | None]:
    """Parse the JSON model document; returns ``(model, point or None)``."""
    if not isinstance(doc, Mapping):
        raise ModelFormatError("model document must be a JSON object")
    extra = set(doc) - _MODEL_KEYS
    if extra:
        raise ModelFormatError(f"unknown keys in model document: {sorted(extra)}")
    for key in ("states", "agents"):
        if key not in doc:
            raise ModelFormatError(f"model document lacks {key!r}")
    states, agents = doc["states"], doc["agents"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ModelFormatError("'states' must be a list of strings")
    if not isinstance(agents, Mapping):
        raise ModelFormatError("'agents' must map agent names to block lists")
    valuation = doc.get("valuation", {})
    if not isinstance(valuation, Mapping):
        raise ModelFormatError("'valuation' must map states to atom lists")
    m = new_model(states, list(agents), valuation, agents)
    point = doc.get("point")
    if point is not None:
        m.check_state(point)
    return m, point


def model_to_dict(m: Model, point: str | None = None) -> dict:
    doc = {
        "states": list(m.states),
        "agents": {a: [m.ordered_states_of(b) for b in m.block_masks[a]] for a in m.agents},
        "valuation": {s: sorted(m.valuation[s]) for s in m.states if m.valuation[s]},
    }
    if point is not None:
        doc["point"] = point
    return doc


def load_model(path) -> tuple[Model, str | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON: {exc}") from None
    return model_from_dict(doc)


def dump_model(m: Model, path, point: str | None = None):
    Path(path).write_text(json.dumps(model_to_dict(m, point), indent=2) + "\n")
