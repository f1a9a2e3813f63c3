"""Wang tiles, bounded tilings and the checkerboard gadget.

The gadget uses two agents: ``s`` (cannot tell apart the five worlds of a
square) and ``e`` (cannot tell apart touching sides of neighbouring squares,
nor any two square centres).  Atoms ``u d l r`` mark the side a world stands
for, the suits ``heart club diamond spade`` mark centres by the parity of the
square, and one atom per colour labels every world.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import (ChainBroken, IndexOutOfRange, InvalidTiling,
                     ModelFormatError, PaletteClash)
from .formula import (ApalBox, Atom, CalBox, GalBox, Imp, Know, Not, conj, disj, kh)
from .kripke import PointedModel, new_model, program, _program_image

SQUARE, EDGE = "s", "e"
UP, RIGHT, DOWN, LEFT, MID = "u", "r", "d", "l", "mid"
DIRECTIONS = (UP, RIGHT, DOWN, LEFT)
HEART, CLUB, DIAMOND, SPADE = "heart", "club", "diamond", "spade"
SUITS = (HEART, CLUB, DIAMOND, SPADE)
LABELS = (UP, DOWN, LEFT, RIGHT) + SUITS
CENTRE_COLOUR = "white"
RESERVED = frozenset(LABELS) | {CENTRE_COLOUR}


@dataclass(frozen=True)
class Tile:
    up: str
    right: str
    down: str
    left: str

    def side(self, k):
        return {UP: self.up, RIGHT: self.right, DOWN: self.down, LEFT: self.left}[k]


@dataclass(frozen=True)
class TileSet:
    palette: tuple
    tiles: tuple

    def __post_init__(self):
        object.__setattr__(self, "palette", tuple(self.palette))
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if len(set(self.palette)) != len(self.palette):
            raise ModelFormatError("duplicate colour in palette")
        if not self.tiles:
            raise ModelFormatError("a tile set needs at least one tile")
        for t in self.tiles:
            for k in DIRECTIONS:
                if t.side(k) not in self.palette:
                    raise ModelFormatError(f"tile colour {t.side(k)!r} is not in the palette")


@dataclass(frozen=True)
class TileGrid:
    width: int
    height: int
    cells: tuple  # cells[j][i], row j = 0 at the bottom

    def __post_init__(self):
        cells = tuple(tuple(row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.width < 1 or self.height < 1:
            raise ModelFormatError("grid dimensions must be positive")
        if len(cells) != self.height or any(len(row) != self.width for row in cells):
            raise ModelFormatError("grid cells do not match width x height")

    def at(self, i, j):
        return self.cells[j][i]

    @classmethod
    def constant(cls, width, height, index=0):
        return cls(width, height, tuple((index,) * width for _ in range(height)))


def uniform_tileset(colour="red") -> TileSet:
    return TileSet((colour,), (Tile(colour, colour, colour, colour),))


# validity and search

def valid_tiling(ts: TileSet, g: TileGrid) -> bool:
    """Both matching conditions hold on every interior edge of the rectangle."""
    n = len(ts.tiles)
    for row in g.cells:
        for k in row:
            if not 0 <= k < n:
                raise IndexOutOfRange(f"tile index {k} outside 0..{n - 1}")
    for j in range(g.height):
        for i in range(g.width):
            t = ts.tiles[g.at(i, j)]
            if i + 1 < g.width and t.right != ts.tiles[g.at(i + 1, j)].left:
                return False
            if j + 1 < g.height and t.up != ts.tiles[g.at(i, j + 1)].down:
                return False
    return True


def search_tiling(ts: TileSet, width: int, height: int) -> TileGrid | None:
    """Lexicographically first valid tiling (cells in row-major order from
    the bottom-left, tiles in index order), or None."""
    if width < 1 or height < 1:
        raise ValueError("width and height must be >= 1")
    tiles = ts.tiles
    cells = [[None] * width for _ in range(height)]
    order = [(i, j) for j in range(height) for i in range(width)]

    def fits(k, i, j):
        t = tiles[k]
        if i > 0 and tiles[cells[j][i - 1]].right != t.left:
            return False
        if j > 0 and tiles[cells[j - 1][i]].up != t.down:
            return False
        return True

    def place(pos):
        if pos == len(order):
            return True
        i, j = order[pos]
        for k in range(len(tiles)):
            if fits(k, i, j):
                cells[j][i] = k
                if place(pos + 1):
                    return True
        cells[j][i] = None
        return False

    if place(0):
        return TileGrid(width, height, cells)
    return None


# gadget formulas

def _a(name):
    return Atom(name)


def _ks(f):
    return Know(SQUARE, f)


def _ke(f):
    return Know(EDGE, f)


def _kske(f):
    return _ks(_ke(_ks(f)))


def _palette(ts: TileSet):
    clash = sorted(set(ts.palette) & RESERVED)
    if clash:
        raise PaletteClash(f"colours clash with reserved atoms: {clash}")
    return ts.palette + (CENTRE_COLOUR,)


def exactly_one(names):
    """``OR_c (c & AND_{d != c} ~d)``."""
    names = list(names)
    return disj(conj([_a(c)] + [Not(_a(d)) for d in names if d != c]) for c in names)


def one_col(colours):
    return _kske(exactly_one(colours))


def tile_gamma(ts: TileSet):
    return _kske(disj(conj(Imp(_a(k), _a(t.side(k))) for k in (UP, RIGHT, DOWN, LEFT))
                      for t in ts.tiles))


def match(colours):
    return _kske(disj(_ke(_a(c)) for c in colours))


def gen_sat(ts: TileSet):
    """``oneCol & tile & match`` over the palette plus the centre colour."""
    colours = _palette(ts)
    return conj([one_col(colours), tile_gamma(ts), match(colours)])


def one_label():
    return _kske(exactly_one(LABELS))


def sq(x):
    return conj([_ks(disj([_a(UP), _a(DOWN), _a(LEFT), _a(RIGHT), _a(x)])),
                 kh(SQUARE, _a(UP)), kh(SQUARE, _a(DOWN)), kh(SQUARE, _a(LEFT)),
                 kh(SQUARE, _a(RIGHT)), kh(SQUARE, _a(x))])


def one_suit():
    return _ks(_ke(disj(sq(x) for x in SUITS)))


def _side_case(pair, seen, there, turn, guarded):
    # K_e(pair) & (Kh_e seen -> K_e(there -> K_s(turn -> K_e K_s Kh_e seen)))
    a, b = pair
    guard = kh(EDGE, _a(seen))
    last = kh(EDGE, _a(seen))
    if guarded:
        last = Imp(_a(there), last)
    tail = _ke(Imp(_a(there), _ks(Imp(_a(turn), _ke(_ks(last))))))
    return conj([_ke(disj([_a(a), _a(b)])), Imp(guard, tail)])


def edge(guarded=False):
    """Edge-agent constraint.

    The innermost ``K_e K_s Kh_e r`` also ranges over the centre and
    ``u d r`` worlds of the square above, where ``Kh_e r`` never holds, so on
    any grid wider than one column the formula fails at ``l``-worlds.
    ``guarded=True`` weakens the tail to ``K_e K_s (l -> Kh_e r)`` (and
    likewise for ``u``/``d``), which is what the surrounding argument uses.
    """
    centre = conj([_ke(disj(_a(x) for x in SUITS))] + [kh(EDGE, _a(x)) for x in SUITS])
    return _kske(disj([_side_case((LEFT, RIGHT), RIGHT, LEFT, UP, guarded),
                       _side_case((UP, DOWN), UP, DOWN, RIGHT, guarded),
                       centre]))


# suit of the square to the right / above
RIGHT_OF = {HEART: CLUB, CLUB: HEART, DIAMOND: SPADE, SPADE: DIAMOND}
ABOVE = {HEART: SPADE, CLUB: DIAMOND, DIAMOND: CLUB, SPADE: HEART}


def adj_suit(x):
    body = conj([Imp(_a(RIGHT), _ke(Imp(_a(LEFT), kh(SQUARE, _a(RIGHT_OF[x]))))),
                 Imp(_a(UP), _ke(Imp(_a(DOWN), kh(SQUARE, _a(ABOVE[x])))))])
    return _ks(_ke(Imp(_a(x), _ks(body))))


def adj():
    return conj(adj_suit(x) for x in SUITS)


def gen_local(guarded=False):
    """``oneLabel & oneSuit & edge & adj``."""
    return conj([one_label(), one_suit(), edge(guarded), adj()])


def _chain(steps, last):
    """``K_s(k1 -> K_e(k2 -> ... last))`` alternating s and e from the left."""
    f = last
    agents = [SQUARE, EDGE] * len(steps)
    for k, ag in reversed(list(zip(steps, agents))):
        f = Know(ag, Imp(_a(k), f))
    return f


_CYCLE = (RIGHT, LEFT, UP, DOWN, LEFT, RIGHT, DOWN, UP)
# (X, Y, Z): suit, right neighbour, upper neighbour
CK_TRIPLES = ((HEART, CLUB, SPADE), (CLUB, HEART, DIAMOND),
              (DIAMOND, SPADE, CLUB), (SPADE, DIAMOND, HEART))


def _cyc_body_apa(x):
    return _chain(_CYCLE, kh(SQUARE, _a(x)))


def _cyc_body_ga(x):
    inner = kh(EDGE, conj([_a(UP), kh(SQUARE, _a(x))]))
    return _chain(_CYCLE[:-1], inner)


def _ck_parts(y, z):
    """The four announcement bodies shared by the APAL and CAL versions."""
    def part(v, first, second):
        return Imp(_ke(Not(_a(v))),
                   _ks(Imp(_a(first), _ke(Imp(_a(second), _ks(Not(_a(v))))))))
    return [part(y, RIGHT, LEFT), part(z, UP, DOWN), part(y, LEFT, RIGHT), part(z, DOWN, UP)]


def cyc(kind):
    if kind == "apal":
        body = lambda x: ApalBox(_cyc_body_apa(x))
    elif kind == "gal":
        body = lambda x: GalBox({SQUARE}, _cyc_body_ga(x))
    elif kind == "cal":
        body = lambda x: CalBox({SQUARE, EDGE}, _cyc_body_apa(x))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return conj(Imp(_a(x), body(x)) for x in SUITS)


def _t(kind, x, y, z):
    if kind == "gal":
        body = conj([Imp(_a(RIGHT), _ke(Imp(_a(LEFT), kh(SQUARE, _a(y))))),
                     Imp(_a(UP), _ke(Imp(_a(DOWN), kh(SQUARE, _a(z))))),
                     Imp(_a(LEFT), _ke(Imp(_a(RIGHT), kh(SQUARE, _a(y))))),
                     Imp(_a(DOWN), _ke(Imp(_a(UP), kh(SQUARE, _a(z)))))])
        return Imp(_a(x), GalBox({EDGE}, _ks(body)))
    wrap = ApalBox if kind == "apal" else (lambda b: CalBox({SQUARE, EDGE}, b))
    return Imp(_a(x), conj(wrap(p) for p in _ck_parts(y, z)))


def ck(kind):
    if kind not in ("apal", "gal", "cal"):
        raise ValueError(f"unknown kind {kind!r}")
    return conj(_t(kind, *triple) for triple in CK_TRIPLES)


def gen_cb(kind: str, guarded=False):
    """Checkerboard formula for ``kind`` in ``apal``, ``gal``, ``cal``."""
    inner = conj([gen_local(guarded), cyc(kind), ck(kind)])
    if kind == "apal":
        return _ke(_ks(inner))
    return _ks(_ke(_ks(inner)))


# grid models

def world(i, j, k):
    return f"{i}_{j}_{k}"


def suit_of(i, j):
    return {(0, 0): HEART, (1, 0): CLUB, (1, 1): DIAMOND, (0, 1): SPADE}[(i % 2, j % 2)]


def gen_grid_model(ts: TileSet, g: TileGrid) -> PointedModel:
    """Checkerboard model of a valid bounded tiling, pointed at ``(0,0,mid)``.

    Sides with no neighbour inside the rectangle (bottom row ``d``, left
    column ``l``, top row ``u``, right column ``r``) are singleton ``e``-blocks.
    """
    _palette(ts)
    if not valid_tiling(ts, g):
        raise InvalidTiling("grid is not a valid tiling for this tile set")
    W, H = g.width, g.height
    states, valuation = [], {}
    sq_blocks, e_blocks = [], []
    for j in range(H):
        for i in range(W):
            tile = ts.tiles[g.at(i, j)]
            block = []
            for k in (MID, UP, RIGHT, DOWN, LEFT):
                w = world(i, j, k)
                states.append(w)
                block.append(w)
                if k == MID:
                    valuation[w] = {CENTRE_COLOUR, suit_of(i, j)}
                else:
                    valuation[w] = {k, tile.side(k)}
            sq_blocks.append(block)
    e_blocks.append([world(i, j, MID) for j in range(H) for i in range(W)])
    for j in range(H):
        for i in range(W):
            if i + 1 < W:
                e_blocks.append([world(i, j, RIGHT), world(i + 1, j, LEFT)])
            else:
                e_blocks.append([world(i, j, RIGHT)])
            if i == 0:
                e_blocks.append([world(i, j, LEFT)])
            if j + 1 < H:
                e_blocks.append([world(i, j, UP), world(i, j + 1, DOWN)])
            else:
                e_blocks.append([world(i, j, UP)])
            if j == 0:
                e_blocks.append([world(i, j, DOWN)])
    props = set(LABELS) | set(ts.palette) | {CENTRE_COLOUR}
    m = new_model(states, (SQUARE, EDGE), valuation,
                  {SQUARE: sq_blocks, EDGE: e_blocks}, props=props)
    return PointedModel(m, world(0, 0, MID))


_RIGHT_STEP = program(SQUARE, RIGHT + "?", EDGE, LEFT + "?")
_UP_STEP = program(SQUARE, UP + "?", EDGE, DOWN + "?")


def extract_tiling(pm: PointedModel, ts: TileSet, width: int, height: int) -> TileGrid:
    """Read a ``width x height`` tiling off a checkerboard-like model.

    Squares are found by walking ``s;r?;e;l?`` (right) and ``s;u?;e;d?`` (up)
    from the point; each side colour is read from the palette atom true at
    the square's unique world for that side.
    """
    m = pm.model
    palette = [c for c in ts.palette]

    def step(square_world, prog, what):
        img = _program_image(m, prog, 1 << square_world)
        hits = [i for i in range(len(m)) if img >> i & 1]
        if len(hits) != 1:
            raise ChainBroken(f"{what} of {m.states[square_world]}: "
                              f"{len(hits)} candidate worlds")
        return hits[0]

    def read(square_world, where):
        block = m.block_mask(SQUARE, square_world)
        sides = []
        for k in (UP, RIGHT, DOWN, LEFT):
            ws = block & m.atom_masks.get(k, 0)
            if bin(ws).count("1") != 1:
                raise ChainBroken(f"square {where}: no unique {k}-world")
            i = ws.bit_length() - 1
            cols = [c for c in palette if m.atom_masks.get(c, 0) >> i & 1]
            if len(cols) != 1:
                raise ChainBroken(f"square {where}: side {k} has colours {cols}")
            sides.append(cols[0])
        for idx, t in enumerate(ts.tiles):
            if (t.up, t.right, t.down, t.left) == tuple(sides):
                return idx
        raise ChainBroken(f"square {where}: sides {sides} match no tile")

    start = m.check_state(pm.point)
    rows = []
    anchor = start
    for j in range(height):
        if j:
            anchor = step(anchor, _UP_STEP, f"square above row {j - 1}")
        cur = anchor
        row = []
        for i in range(width):
            if i:
                cur = step(cur, _RIGHT_STEP, f"square right of column {i - 1}")
            row.append(read(cur, (i, j)))
        rows.append(row)
    return TileGrid(width, height, rows)


# JSON files

def tileset_from_dict(doc) -> TileSet:
    if not isinstance(doc, dict) or set(doc) - {"colours", "tiles"}:
        raise ModelFormatError("tile set must have keys 'colours' and 'tiles'")
    try:
        tiles = [Tile(t["up"], t["right"], t["down"], t["left"]) for t in doc["tiles"]]
        return TileSet(tuple(doc["colours"]), tuple(tiles))
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"malformed tile set: {exc}") from None


def tileset_to_dict(ts: TileSet) -> dict:
    return {"colours": list(ts.palette),
            "tiles": [{"up": t.up, "right": t.right, "down": t.down, "left": t.left}
                      for t in ts.tiles]}


def grid_from_dict(doc) -> TileGrid:
    if not isinstance(doc, dict) or set(doc) != {"width", "height", "cells"}:
        raise ModelFormatError("grid must have exactly 'width', 'height', 'cells'")
    return TileGrid(int(doc["width"]), int(doc["height"]), doc["cells"])


def grid_to_dict(g: TileGrid) -> dict:
    return {"width": g.width, "height": g.height, "cells": [list(r) for r in g.cells]}


def load_tileset(path) -> TileSet:
    return tileset_from_dict(json.loads(Path(path).read_text()))


def load_grid(path) -> TileGrid:
    return grid_from_dict(json.loads(Path(path).read_text()))
