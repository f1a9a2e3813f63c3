"""Randomised properties driven by hypothesis."""
import random

from hypothesis import given, settings, strategies as st

from announce import tiling as T
from announce.bisim import nbisim, refinement_levels
from announce.formula import (AnnBox, Imp, Know, Not, iff, is_el, modal_depth)
from announce.kripke import Agent, Test, restrict, run_program
from announce.mcheck import CheckContext, check_validity, extension
from announce.parser import parse
from announce.formula import to_text
from announce.randgen import random_el, random_formula, random_model

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def model(seed, **kw):
    return random_model(random.Random(seed), **kw)


@given(seeds)
def test_print_parse_round_trip(seed):
    f = random_formula(random.Random(seed), ["p", "q", "r"], ["a", "b"], size=14)
    assert parse(to_text(f)) == f


@given(seeds)
def test_depth_laws(seed):
    rng = random.Random(seed)
    f = random_el(rng, ["p", "q"], ["a", "b"], 3)
    g = random_el(rng, ["p", "q"], ["a", "b"], 2)
    assert is_el(f) and modal_depth(f) <= 3
    assert modal_depth(Not(f)) == modal_depth(f)
    assert modal_depth(Imp(f, g)) == max(modal_depth(f), modal_depth(g))
    assert modal_depth(Know("a", f)) == modal_depth(f) + 1


@given(seeds, st.data())
def test_restrict_keeps_partitions(seed, data):
    m = model(seed, max_states=7)
    keep = data.draw(st.sets(st.sampled_from(m.states), min_size=1))
    sub = restrict(m, keep)
    for a in m.agents:
        covered = sorted(s for b in sub.block_masks[a] for s in sub.states_of(b))
        assert covered == sorted(keep)
        for b in sub.block_masks[a]:
            s = next(iter(sub.states_of(b)))
            assert sub.states_of(b) == m.states_of(m.block_mask(a, m.index[s])) & keep


@given(seeds, st.data())
def test_program_composition(seed, data):
    m = model(seed, max_states=8)
    steps = data.draw(st.lists(st.one_of(st.sampled_from(m.agents).map(Agent),
                                         st.sampled_from(sorted(m.props)).map(Test)),
                               min_size=1, max_size=5))
    s = data.draw(st.sampled_from(m.states))
    cur = {s}
    for step in steps:
        cur = {t for u in cur for t in run_program(m, [step], u)}
    assert run_program(m, steps, s) == cur


@given(seeds)
def test_refinement_is_monotone(seed):
    m = model(seed, max_states=8)
    levels = refinement_levels(m, m.props, len(m))
    for lo, hi in zip(levels, levels[1:]):
        for i in hi:
            for j in hi:
                if hi[i] == hi[j]:
                    assert lo[i] == lo[j]
    assert len(set(levels[-1].values())) == len(set(levels[-2].values()))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_bisimilar_states_agree(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_states=7)
    ctx = CheckContext(m)
    n = rng.randint(0, 3)
    part = nbisim(m, m.props, n)
    for _ in range(20):
        f = random_el(rng, m.props, m.agents, n, size=8)
        ext = extension(ctx, None, f)
        for b in part.blocks:
            assert b <= ext or not (b & ext)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_pal_reduction(seed):
    rng = random.Random(seed)
    m = random_model(rng, max_states=6)
    ctx = CheckContext(m)
    psi = random_el(rng, m.props, m.agents, 2, size=5)
    phi = random_formula(rng, m.props, m.agents, size=5)
    a = rng.choice(m.agents)
    assert check_validity(ctx, iff(AnnBox(psi, Know(a, phi)),
                                   Imp(psi, Know(a, AnnBox(psi, phi)))))
    assert check_validity(ctx, iff(AnnBox(psi, Not(phi)), Imp(psi, Not(AnnBox(psi, phi)))))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_valid_tiling_matches_search(w, h, data):
    ts = T.TileSet(("x", "y"), (T.Tile("x", "y", "x", "y"), T.Tile("y", "x", "x", "y"),
                                T.Tile("x", "x", "y", "x")))
    cells = data.draw(st.lists(st.lists(st.integers(0, 2), min_size=w, max_size=w),
                               min_size=h, max_size=h))
    g = T.TileGrid(w, h, cells)
    ok = all(ts.tiles[cells[j][i]].right == ts.tiles[cells[j][i + 1]].left
             for j in range(h) for i in range(w - 1)) and \
        all(ts.tiles[cells[j][i]].up == ts.tiles[cells[j + 1][i]].down
            for j in range(h - 1) for i in range(w))
    assert T.valid_tiling(ts, g) == ok
    found = T.search_tiling(ts, w, h)
    if ok:
        assert found is not None
    if found is not None:
        assert T.valid_tiling(ts, found)
