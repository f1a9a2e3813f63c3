"""Seeded random models and formulas for property tests and the suite."""
from __future__ import annotations

import random

from .formula import (BOTTOM, TOP, AnnBox, And, ApalBox, Atom, CalBox, GalBox,
                      Imp, Know, Not, Or)
from .kripke import Model, new_model

AGENT_NAMES = ("a", "b", "c")
ATOM_NAMES = ("p", "q", "r")


def random_partition(rng: random.Random, states):
    """Partition ``states`` by giving each state a random block label."""
    k = rng.randint(1, len(states))
    labels = [rng.randrange(k) for _ in states]
    blocks = {}
    for s, lab in zip(states, labels):
        blocks.setdefault(lab, []).append(s)
    return list(blocks.values())


def random_model(rng: random.Random, max_states=8, max_agents=3, max_atoms=3,
                 n_states=None, n_agents=None, n_atoms=None) -> Model:
    n = n_states or rng.randint(1, max_states)
    na = n_agents or rng.randint(1, max_agents)
    nq = n_atoms if n_atoms is not None else rng.randint(1, max_atoms)
    states = [f"w{i}" for i in range(n)]
    agents = AGENT_NAMES[:na]
    atoms = ATOM_NAMES[:nq]
    valuation = {s: {p for p in atoms if rng.random() < 0.5} for s in states}
    parts = {a: random_partition(rng, states) for a in agents}
    return new_model(states, agents, valuation, parts, props=atoms)


def random_el(rng: random.Random, atoms, agents, depth: int, size: int = 6):
    """Random EL formula with modal depth at most ``depth``."""
    atoms, agents = list(atoms), list(agents)

    def go(d, budget):
        if budget <= 1:
            r = rng.random()
            if r < 0.06:
                return TOP
            if r < 0.1:
                return BOTTOM
            return Atom(rng.choice(atoms))
        choices = ["not", "and", "or", "imp"] + (["know"] * 2 if d > 0 and agents else [])
        op = rng.choice(choices)
        if op == "not":
            return Not(go(d, budget - 1))
        if op == "know":
            return Know(rng.choice(agents), go(d - 1, budget - 1))
        left = rng.randint(1, budget - 1)
        ctor = {"and": And, "or": Or, "imp": Imp}[op]
        return ctor(go(d, left), go(d, budget - left))

    return go(depth, rng.randint(1, max(1, size)))


def random_formula(rng: random.Random, atoms, agents, size: int = 8,
                   quantifiers=("apal", "gal", "cal"), ann=True):
    """Random formula over all operators, for round-trips and cross-checks."""
    atoms, agents = list(atoms), list(agents)

    def group():
        return frozenset(a for a in agents if rng.random() < 0.5)

    def go(budget):
        if budget <= 1:
            r = rng.random()
            if r < 0.05:
                return TOP
            if r < 0.1:
                return BOTTOM
            return Atom(rng.choice(atoms))
        ops = ["not", "and", "or", "imp", "know"]
        if ann:
            ops.append("ann")
        ops.extend(quantifiers)
        op = rng.choice(ops)
        if op == "not":
            return Not(go(budget - 1))
        if op == "know":
            return Know(rng.choice(agents), go(budget - 1))
        if op == "apal":
            return ApalBox(go(budget - 1))
        if op == "gal":
            return GalBox(group(), go(budget - 1))
        if op == "cal":
            return CalBox(group(), go(budget - 1))
        left = rng.randint(1, budget - 1)
        if op == "ann":
            return AnnBox(go(left), go(budget - left))
        ctor = {"and": And, "or": Or, "imp": Imp}[op]
        return ctor(go(left), go(budget - left))

    return go(rng.randint(1, max(1, size)))
