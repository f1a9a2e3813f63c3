"""Property suites and acceptance criteria, runnable from tests or the CLI.

Every check returns a :class:`Result`.  ``run_suite`` bundles the random
property checks of each module with the acceptance criteria into one report;
the report is deterministic for a given seed apart from timings.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product

from . import tiling as T
from .assets import figure1, tileset
from .bisim import Characteriser, nbisim, refinement_levels, stable_level
from .formula import (AnnBox, ApalBox, Atom, CalBox, GalBox, Imp, Know, Not,
                      conj, gal_dia, iff, to_text)
from .kripke import Agent, Test, restrict, run_program
from .mcheck import CheckContext, check, check_validity, extension
from .oracle import Oracle
from .parser import parse
from .randgen import random_el, random_formula, random_model, AGENT_NAMES, ATOM_NAMES

CB_BUDGET = 1 << 22


@dataclass
class Result:
    key: str
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    recorded: bool = False  # experiment: reported, never fails the run

    def line(self) -> str:
        tag = "RECORDED" if self.recorded else ("PASS" if self.passed else "FAIL")
        return f"[{tag}] {self.key}: {self.title}"


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.elapsed_ms = round((time.perf_counter() - t0) * 1000.0, 1)
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def model_pool(seed: int, count: int, max_states: int, max_agents=3, max_atoms=3):
    rng = random.Random(seed)
    return [random_model(rng, max_states, max_agents, max_atoms) for _ in range(count)]


# 1. worked example

@_timed
def criterion_figure1(seed: int = 0) -> Result:
    m, _ = figure1()
    ctx = CheckContext(m)
    f = parse
    out = {
        "a": check(ctx, "w01", f("~K a q & <!> K a q")),
        "b": check(ctx, "w11", f("<G{a}> K b p")),
        "c": check_validity(ctx, f("<G{a}> (K b p | K b ~p)"))
             and check_validity(ctx, f("<G{b}> (K a q | K a ~q)")),
        "d": check(ctx, "w11", f("<G{a,b}> (K a (p & q) & K b (p & q))")),
        "e": check_validity(ctx, f("<C{a}> (K b p | K b ~p)"))
             and not check_validity(ctx, f("<C{a}> ~(K a q | K a ~q)"))
             and check_validity(ctx, f("<G{a}> ~(K a q | K a ~q)")),
    }
    rng = random.Random(seed)
    ab = frozenset("ab")
    bad = []
    for _ in range(50):
        phi = random_formula(rng, ("p", "q"), ("a", "b"), size=7)
        law = iff(Not(GalBox(ab, Not(phi))), Not(CalBox(ab, Not(phi))))
        if not check_validity(ctx, law):
            bad.append(to_text(phi))
    out["f"] = not bad
    return Result("1", "Figure-1 battery", all(out.values()),
                  {"parts": out, "counterexamples": bad[:3]})


# 2. distinguishing formulas

@_timed
def criterion_distinguishing(seed: int = 0, models: int = 200, max_n: int = 4) -> Result:
    bad = []
    checked = 0
    for k, m in enumerate(model_pool(seed, models, 8)):
        ctx = CheckContext(m)
        ch = Characteriser(m, m.props, max_n)
        for n in range(max_n + 1):
            part = nbisim(m, m.props, n)
            for i, s in enumerate(m.states):
                phi = ch.formula(n, i)
                checked += 1
                if extension(ctx, None, phi) != part.block_of(s):
                    bad.append((k, n, s))
    return Result("2", "distinguishing formulas define n-bisimulation classes",
                  not bad, {"checked": checked, "failures": bad[:5]})


# 3. n-bisimilar states agree on depth-n formulas

@_timed
def criterion_invariance(seed: int = 0, models: int = 200, max_n: int = 4,
                         formulas: int = 1000) -> Result:
    rng = random.Random(seed + 1)
    # one pool of formulas per (depth bound, agent count)
    pools = {(n, k): [random_el(rng, ATOM_NAMES, AGENT_NAMES[:k], n, size=8)
                      for _ in range(formulas)]
             for n in range(max_n + 1) for k in range(1, 4)}
    pairs = 0
    cases = 0
    bad = []
    for idx, m in enumerate(model_pool(seed, models, 8)):
        ctx = CheckContext(m)
        levels = refinement_levels(m, m.props, max_n)
        for n in range(max_n + 1):
            cls = levels[n]
            blocks = {}
            for i, c in cls.items():
                blocks[c] = blocks.get(c, 0) | 1 << i
            nontrivial = [b for b in blocks.values() if b & (b - 1)]
            if not nontrivial:
                continue
            pairs += sum(bin(b).count("1") * (bin(b).count("1") - 1) // 2 for b in nontrivial)
            for phi in pools[(n, len(m.agents))]:
                ext = ctx.extension_mask(m.full, phi)
                cases += 1
                for b in nontrivial:
                    if ext & b and ext & b != b:
                        bad.append((idx, n, to_text(phi)))
                        break
    return Result("3", "n-bisimilar states agree on EL formulas of depth <= n",
                  not bad, {"models": models, "bisimilar_pairs": pairs,
                            "formula_checks": cases, "failures": bad[:5]})


# 4. closed-set enumeration against announcing actual formulas

@_timed
def criterion_apal_oracle(seed: int = 0, models: int = 100, per_model: int = 20) -> Result:
    rng = random.Random(seed + 2)
    bad = []
    for idx, m in enumerate(model_pool(seed + 2, models, 5)):
        ctx = CheckContext(m)
        ora = Oracle()
        for _ in range(per_model):
            phi = random_formula(rng, m.props, m.agents, size=6, quantifiers=("apal",))
            f = ApalBox(phi)
            if extension(ctx, None, f) != ora.extension(m, f):
                bad.append((idx, to_text(f)))
    return Result("4", "[!] by closed sets agrees with the formula-level oracle",
                  not bad, {"models": models, "formulas": models * per_model,
                            "failures": bad[:5]})


# 5. validities

def _laws(rng, m):
    agents = list(m.agents)
    A = frozenset(agents)

    def el():
        return random_el(rng, m.props, agents, 2, size=5)

    def any_f():
        return random_formula(rng, m.props, agents, size=4)

    def group():
        return frozenset(a for a in agents if rng.random() < 0.5) or frozenset(agents[:1])

    psi, phi, p = el(), any_f(), Atom(rng.choice(sorted(m.props)))
    a = rng.choice(agents)
    G = group()
    return {
        "pal_atom": iff(AnnBox(psi, p), Imp(psi, p)),
        "pal_not": iff(AnnBox(psi, Not(phi)), Imp(psi, Not(AnnBox(psi, phi)))),
        "pal_know": iff(AnnBox(psi, Know(a, phi)),
                        Imp(psi, Know(a, Imp(psi, AnnBox(psi, phi))))),
        "gal_merge": Imp(gal_dia(G, gal_dia(G, phi)), gal_dia(G, phi)),
        "gal_is_apal": Imp(gal_dia(G, phi), Not(ApalBox(Not(phi)))),
        "cal_game": Imp(CalBox(frozenset(), phi), Not(CalBox(A, Not(phi)))),
        "gal_cal_all": iff(GalBox(A, phi), CalBox(A, phi)),
    }


@_timed
def criterion_validities(seed: int = 0, models: int = 100, rounds: int = 3) -> Result:
    rng = random.Random(seed + 3)
    counts, bad = {}, []
    for idx, m in enumerate(model_pool(seed + 3, models, 6)):
        ctx = CheckContext(m)
        for _ in range(rounds):
            for name, law in _laws(rng, m).items():
                counts[name] = counts.get(name, 0) + 1
                if not check_validity(ctx, law):
                    bad.append((idx, name, to_text(law)))
    return Result("5", "validity suite", not bad, {"instances": counts, "failures": bad[:5]})


# 6. checkerboard model, epistemic level

def grid_diagnostics(ts, g):
    pm = T.gen_grid_model(ts, g)
    ctx = CheckContext(pm.model)
    ke_ks = lambda f: Know(T.EDGE, Know(T.SQUARE, f))
    parts = {
        "sat": T.gen_sat(ts),
        "oneLabel": ke_ks(T.one_label()), "oneSuit": ke_ks(T.one_suit()),
        "edge": ke_ks(T.edge()), "adj": ke_ks(T.adj()),
        "local_guarded": ke_ks(T.gen_local(guarded=True)),
    }
    out = {k: check(ctx, pm.point, f) for k, f in parts.items()}
    out["heart"] = check(ctx, pm.point, Atom(T.HEART))
    out["round_trip"] = T.extract_tiling(pm, ts, g.width, g.height) == g
    return pm, ctx, out


@_timed
def criterion_grid_el(seed: int = 0, sizes=(1, 2, 3, 4)) -> Result:
    ts = tileset("uniform")
    goal = conj([T.gen_sat(ts), Know(T.EDGE, Know(T.SQUARE, T.gen_local()))])
    rows = {}
    ok = True
    for n in sizes:
        g = T.TileGrid.constant(n, n)
        pm, ctx, diag = grid_diagnostics(ts, g)
        holds = check(ctx, pm.point, goal)
        diag["sat_and_local"] = holds
        if not holds:
            bad = pm.model.full & ~ctx.extension_mask(pm.model.full, T.edge().sub.sub.sub)
            diag["edge_fails_at"] = sorted(pm.model.states_of(bad))[:8]
        rows[f"{n}x{n}"] = diag
        ok &= holds and diag["heart"] and diag["round_trip"]
    return Result("6", "checkerboard model satisfies SAT and K_e K_s local", ok, rows)


# 7. checkerboard model, quantified level (experiment)

def _cb_failure(ctx, pm, f):
    """Explain a false CB formula: worlds where each conjunct fails, and for
    the quantified conjuncts the announcements that falsify them there."""
    m = pm.model
    inner = f
    while isinstance(inner, Know):
        inner = inner.sub
    local, cyc, ck = inner.left.left, inner.left.right, inner.right
    out = {}
    quantified_fail = 0
    for name, g in (("local", local), ("cyc", cyc), ("ck", ck)):
        bad = m.full & ~ctx.extension_mask(m.full, g)
        if bad:
            out[name] = sorted(m.states_of(bad))
            if name != "local":
                quantified_fail |= bad
    wit = {}
    for (dom, q), per in ctx.witnesses.items():
        hits = [i for i in per if quantified_fail >> i & 1]
        if dom == m.full and hits:
            wit[to_text(q)] = {m.states[i]: sorted(m.states_of(per[i])) for i in hits}
    out["falsifying_announcements"] = wit
    return out


@_timed
def criterion_grid_quantified(seed: int = 0, budget: int = CB_BUDGET) -> Result:
    ts = tileset("uniform")
    pm = T.gen_grid_model(ts, T.TileGrid.constant(2, 2))
    rows = {}
    for kind in ("apal", "gal", "cal"):
        for guarded in (False, True):
            f = T.gen_cb(kind, guarded=guarded)
            ctx = CheckContext(pm.model, budget=budget)
            t0 = time.perf_counter()
            value = check(ctx, pm.point, f)
            row = {"value": value, "candidates_enumerated": ctx.candidates_enumerated,
                   "elapsed_ms": round((time.perf_counter() - t0) * 1000.0, 1)}
            if not value:
                row["why"] = _cb_failure(ctx, pm, f)
            rows[f"{kind}{'_guarded' if guarded else ''}"] = row
    return Result("7", "CB formulas on the 2x2 checkerboard (recorded)", True, rows,
                  recorded=True)


# 8. tiling search

@_timed
def criterion_tiling_oracle(seed: int = 0) -> Result:
    uniform, mismatch, dominos = tileset("uniform"), tileset("mismatch"), tileset("dominos")
    none_2x2 = T.search_tiling(mismatch, 2, 2) is None
    const = T.search_tiling(uniform, 4, 4) == T.TileGrid.constant(4, 4)
    found = 0
    valid = True
    for ts in (uniform, mismatch, dominos):
        for w, h in product(range(1, 5), repeat=2):
            g = T.search_tiling(ts, w, h)
            if g is not None:
                found += 1
                valid &= T.valid_tiling(ts, g)
    return Result("8", "tiling search", none_2x2 and const and valid,
                  {"mismatch_2x2_none": none_2x2, "uniform_4x4_constant": const,
                   "found_grids_valid": valid,
                   "found": found})


CRITERIA = (criterion_figure1, criterion_distinguishing, criterion_invariance,
            criterion_apal_oracle, criterion_validities, criterion_grid_el,
            criterion_grid_quantified, criterion_tiling_oracle)


# property suites over random models of the given sizes

def _naive_compose(m, pi, s):
    cur = {s}
    for step in pi:
        if isinstance(step, Agent):
            cur = {t for u in cur for t in m.states
                   if m.block_of[step.name][m.index[t]] == m.block_of[step.name][m.index[u]]}
        else:
            cur = {t for t in cur if step.prop in m.valuation[t]}
    return frozenset(cur)


def _valid_by_edges(ts, g):
    tiles = ts.tiles
    for j in range(g.height):
        for i in range(g.width):
            if i > 0 and tiles[g.cells[j][i - 1]].right != tiles[g.cells[j][i]].left:
                return False
            if j > 0 and tiles[g.cells[j - 1][i]].up != tiles[g.cells[j][i]].down:
                return False
    return True


@_timed
def property_kripke(seed, sizes, count=40) -> Result:
    rng = random.Random(seed + 10)
    bad = []
    for n in sizes:
        for _ in range(count):
            m = random_model(rng, n_states=n)
            if restrict(m, m.states) != m:
                bad.append("restrict identity")
            pi = [Agent(rng.choice(m.agents)) if rng.random() < 0.6
                  else Test(rng.choice(sorted(m.props))) for _ in range(rng.randint(1, 5))]
            s = rng.choice(m.states)
            if run_program(m, pi, s) != _naive_compose(m, pi, s):
                bad.append(f"program {pi}")
    return Result("P-kripke", "restriction and program composition", not bad,
                  {"failures": bad[:5]})


@_timed
def property_formula(seed, sizes, count=300) -> Result:
    rng = random.Random(seed + 11)
    bad = []
    for _ in range(count):
        f = random_formula(rng, ATOM_NAMES, AGENT_NAMES, size=12)
        if parse(to_text(f)) != f:
            bad.append(to_text(f))
    return Result("P-formula", "printer/parser round trip", not bad, {"failures": bad[:5]})


@_timed
def property_bisim(seed, sizes, count=40) -> Result:
    rng = random.Random(seed + 12)
    bad = []
    for n in sizes:
        for _ in range(count):
            m = random_model(rng, n_states=n)
            levels = refinement_levels(m, m.props, len(m.states) + 1)
            for lo, hi in zip(levels, levels[1:]):
                # every level-(k+1) class sits inside one level-k class
                seen = {}
                if any(seen.setdefault(hi[i], lo[i]) != lo[i] for i in hi):
                    bad.append("refinement not monotone")
            if stable_level(m) > len(m.states):
                bad.append("stabilised late")
    return Result("P-bisim", "refinement monotone and stable within |S| levels",
                  not bad, {"failures": bad[:5]})


@_timed
def property_mcheck(seed, sizes, count=15) -> Result:
    rng = random.Random(seed + 13)
    bad = []
    for n in sizes:
        if n > 4:
            continue  # the oracle is exponential in the number of classes
        for _ in range(count):
            m = random_model(rng, n_states=n, max_agents=2, max_atoms=2)
            ora = Oracle()
            ctx = CheckContext(m)
            for _ in range(5):
                f = random_formula(rng, m.props, m.agents, size=6)
                if extension(ctx, None, f) != ora.extension(m, f):
                    bad.append(to_text(f))
    return Result("P-mcheck", "checker agrees with the naive oracle on all operators",
                  not bad, {"failures": bad[:5]})


@_timed
def property_tiling(seed, sizes, count=100) -> Result:
    rng = random.Random(seed + 14)
    ts = tileset("dominos")
    bad = []
    for _ in range(count):
        w, h = rng.randint(1, 4), rng.randint(1, 4)
        g = T.TileGrid(w, h, [[rng.randrange(len(ts.tiles)) for _ in range(w)]
                              for _ in range(h)])
        if T.valid_tiling(ts, g) != _valid_by_edges(ts, g):
            bad.append(T.grid_to_dict(g))
    return Result("P-tiling", "valid_tiling agrees with a per-edge loop", not bad,
                  {"failures": bad[:5]})


PROPERTIES = (property_kripke, property_formula, property_bisim, property_mcheck,
              property_tiling)


def run_suite(seed: int = 0, sizes=(2, 3, 4), criteria=True) -> dict:
    sizes = tuple(sizes)
    warnings = []
    if not sizes:
        warnings.append("no sizes given: random property suites are vacuous")
    results = [p(seed, sizes) for p in PROPERTIES] if sizes else []
    if criteria:
        results += [c(seed) for c in CRITERIA]
    passed = all(r.passed for r in results if not r.recorded)
    return {
        "seed": seed,
        "sizes": list(sizes),
        "passed": passed,
        "warnings": warnings,
        "results": [{"key": r.key, "title": r.title, "passed": r.passed,
                     "recorded": r.recorded, "detail": r.detail,
                     "elapsed_ms": r.elapsed_ms} for r in results],
    }
