import pytest

from announce import tiling as T
from announce.assets import tileset
from announce.errors import (ChainBroken, IndexOutOfRange, InvalidTiling,
                             ModelFormatError, PaletteClash)
from announce.formula import (Know, agents_of, atoms_of, modal_depth, to_text)
from announce.kripke import PointedModel, program, restrict, run_program
from announce.mcheck import CheckContext, check
from announce.parser import parse

RED_BLUE = T.TileSet(("red", "blue"), (T.Tile("red", "blue", "red", "blue"),))
CLASH = T.TileSet(("red", "blue", "green"), (T.Tile("red", "blue", "green", "blue"),))


def test_valid_tiling_examples():
    assert T.valid_tiling(RED_BLUE, T.TileGrid.constant(3, 2))
    assert not T.valid_tiling(CLASH, T.TileGrid.constant(1, 2))
    assert T.valid_tiling(CLASH, T.TileGrid.constant(3, 1))
    with pytest.raises(IndexOutOfRange):
        T.valid_tiling(CLASH, T.TileGrid.constant(1, 1, index=1))


def test_two_tile_hand_check():
    ts = tileset("dominos")
    good = T.TileGrid(2, 2, [[0, 1], [1, 0]])
    assert T.valid_tiling(ts, good)
    for bad in ([[0, 0], [1, 0]], [[0, 1], [0, 1]], [[1, 0], [1, 0]]):
        assert not T.valid_tiling(ts, T.TileGrid(2, 2, bad))


def test_search():
    assert T.search_tiling(tileset("uniform"), 4, 4) == T.TileGrid.constant(4, 4)
    assert T.search_tiling(tileset("mismatch"), 2, 2) is None
    g = T.search_tiling(tileset("dominos"), 3, 3)
    assert g is not None and T.valid_tiling(tileset("dominos"), g)
    assert g.at(0, 0) == 0  # lexicographically first
    with pytest.raises(ValueError):
        T.search_tiling(RED_BLUE, 0, 2)


def test_tileset_validation():
    with pytest.raises(ModelFormatError):
        T.TileSet(("red",), ())
    with pytest.raises(ModelFormatError):
        T.TileSet(("red",), (T.Tile("red", "red", "red", "blue"),))
    with pytest.raises(ModelFormatError):
        T.TileGrid(2, 1, [[0]])


def test_gen_sat(uniform):
    f = T.gen_sat(uniform)
    assert parse(to_text(f)) == f
    assert atoms_of(f) == {"red", "white", "u", "d", "l", "r"}
    assert agents_of(f) == {"s", "e"}
    with pytest.raises(PaletteClash):
        T.gen_sat(T.uniform_tileset("white"))
    with pytest.raises(PaletteClash):
        T.gen_sat(T.uniform_tileset("heart"))


def test_one_col_singleton_palette():
    # one colour: the disjunction has one disjunct with no negated conjuncts
    f = T.one_col(["red"])
    assert to_text(f) == "K s K e K s red"


def test_gen_local():
    f = T.gen_local()
    assert agents_of(f) == {"s", "e"}
    assert atoms_of(f) == {"u", "d", "l", "r", "heart", "club", "diamond", "spade"}
    parts = []
    g = f
    while g.__class__.__name__ == "And" and len(parts) < 3:
        parts.append(g.right)
        g = g.left
    assert [g] + parts[::-1] == [T.one_label(), T.one_suit(), T.edge(), T.adj()]
    assert modal_depth(f) == 8
    assert parse(to_text(f)) == f


def test_gen_cb_prefixes():
    apal, gal, cal = (T.gen_cb(k) for k in ("apal", "gal", "cal"))
    assert isinstance(apal, Know) and apal.agent == "e" and apal.sub.agent == "s"
    for f in (gal, cal):
        assert [f.agent, f.sub.agent, f.sub.sub.agent] == ["s", "e", "s"]
    locals_ = [apal.sub.sub.left.left, gal.sub.sub.sub.left.left, cal.sub.sub.sub.left.left]
    assert all(x == T.gen_local() for x in locals_)
    assert to_text(apal).startswith("K e K s (")
    for f in (apal, gal, cal):
        assert parse(to_text(f)) == f
    with pytest.raises(ValueError):
        T.gen_cb("pal")


def test_ck_triples():
    text = to_text(T.ck("apal"))
    assert text.count("[!]") == 16
    assert T.CK_TRIPLES[0] == ("heart", "club", "spade")
    assert to_text(T.ck("gal")).count("[G{e}]") == 4
    assert to_text(T.cyc("gal")).count("[G{s}]") == 4
    assert to_text(T.cyc("cal")).count("[C{e,s}]") == 4


def test_grid_model_shapes(uniform):
    pm = T.gen_grid_model(uniform, T.TileGrid.constant(1, 1))
    m = pm.model
    assert len(m) == 5 and pm.point == "0_0_mid"
    eblocks = [m.states_of(b) for b in m.block_masks["e"]]
    assert all(len(b) == 1 for b in eblocks)
    pm = T.gen_grid_model(uniform, T.TileGrid.constant(2, 2))
    m = pm.model
    assert len(m) == 20
    mids = m.states_of(m.block_mask("e", m.index["0_0_mid"]))
    assert mids == {"0_0_mid", "1_0_mid", "0_1_mid", "1_1_mid"}
    assert m.states_of(m.block_mask("e", m.index["0_0_r"])) == {"0_0_r", "1_0_l"}
    assert m.states_of(m.block_mask("e", m.index["0_1_u"])) == {"0_1_u"}
    assert m.valuation["0_0_mid"] == {"white", "heart"}
    assert m.valuation["1_0_mid"] >= {"club"}
    assert m.valuation["1_1_mid"] >= {"diamond"}
    assert m.valuation["0_1_mid"] >= {"spade"}
    assert m.valuation["1_0_u"] == {"u", "red"}


def test_grid_model_rejects_invalid():
    with pytest.raises(InvalidTiling):
        T.gen_grid_model(CLASH, T.TileGrid.constant(1, 2))


def test_right_step_program(uniform):
    pm = T.gen_grid_model(uniform, T.TileGrid.constant(2, 2))
    assert run_program(pm.model, program("s", "r?", "e", "l?"), "0_0_mid") == {"1_0_l"}
    assert run_program(pm.model, program("s", "u?", "e", "d?"), "0_0_mid") == {"0_1_d"}


def test_extract_round_trip():
    ts = tileset("dominos")
    for w in range(1, 5):
        for h in range(1, 5):
            g = T.search_tiling(ts, w, h)
            pm = T.gen_grid_model(ts, g)
            assert T.extract_tiling(pm, ts, w, h) == g
    pm = T.gen_grid_model(tileset("uniform"), T.TileGrid.constant(1, 1))
    assert T.extract_tiling(pm, tileset("uniform"), 1, 1) == T.TileGrid.constant(1, 1)


def test_extract_broken_chain(uniform):
    pm = T.gen_grid_model(uniform, T.TileGrid.constant(2, 1))
    m = restrict(pm.model, [s for s in pm.model.states if s != "0_0_r"])
    with pytest.raises(ChainBroken):
        T.extract_tiling(PointedModel(m, pm.point), uniform, 2, 1)


def test_sat_and_parts_hold_on_grids(uniform):
    for n in (1, 2, 3):
        pm = T.gen_grid_model(uniform, T.TileGrid.constant(n, n))
        ctx = CheckContext(pm.model)
        ke_ks = lambda f: Know("e", Know("s", f))
        assert check(ctx, pm.point, T.gen_sat(uniform))
        for part in (T.one_label(), T.one_suit(), T.adj()):
            assert check(ctx, pm.point, ke_ks(part))
        assert check(ctx, pm.point, parse("heart"))


def test_edge_as_written_fails_on_truncated_grids(uniform):
    # the literal tail K_e K_s Kh_e r also covers the centre world of the
    # square above; the guarded reading holds once all four suits exist
    for n in (1, 2, 3):
        pm = T.gen_grid_model(uniform, T.TileGrid.constant(n, n))
        ctx = CheckContext(pm.model)
        assert not check(ctx, pm.point, Know("e", Know("s", T.edge())))
        assert check(ctx, pm.point, Know("e", Know("s", T.edge(guarded=True)))) == (n > 1)


def test_json_files(tmp_path):
    ts = tileset("dominos")
    assert T.tileset_from_dict(T.tileset_to_dict(ts)) == ts
    g = T.TileGrid(2, 1, [[0, 1]])
    assert T.grid_from_dict(T.grid_to_dict(g)) == g
    with pytest.raises(ModelFormatError):
        T.tileset_from_dict({"colours": ["red"], "tiles": [{"up": "red"}]})
    with pytest.raises(ModelFormatError):
        T.grid_from_dict({"width": 1})
