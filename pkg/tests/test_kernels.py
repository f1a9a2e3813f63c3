import random

import numpy as np
import pytest

from announce import kernels
from announce.kripke import new_model
from announce.mcheck import CheckContext
from announce.parser import parse
from announce.randgen import random_formula, random_model


def _cases(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        m = random_model(rng, n_states=rng.randint(1, 10), max_agents=3)
        f = random_formula(rng, m.props, m.agents, size=10, quantifiers=())
        cands = np.array([rng.randrange(1 << len(m)) for _ in range(40)], dtype=np.uint64)
        yield m, f, cands


def test_numpy_kernel_matches_reference():
    for m, f, cands in _cases(0, 60):
        ctx = CheckContext(m, batch=False)
        prog = kernels.compile_formula(f, m)
        got = kernels.eval_batch_numpy(prog, cands)
        want = [ctx.extension_mask(int(x), f) for x in cands]
        assert [int(x) for x in got] == want


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_numba_kernel_matches_numpy():
    for m, f, cands in _cases(1, 60):
        prog = kernels.compile_formula(f, m)
        assert np.array_equal(kernels.eval_batch_numba(prog, cands),
                              kernels.eval_batch_numpy(prog, cands))


def test_ann_box_uses_inner_domain(fig1):
    m = fig1
    f = parse("[p | q] K a q")
    prog = kernels.compile_formula(f, m)
    assert -1 in set(prog.dom.tolist()) and max(prog.dom.tolist()) >= 0
    out = kernels.eval_batch(prog, np.array([m.full], dtype=np.uint64))
    assert int(out[0]) == CheckContext(m).extension_mask(m.full, f)


def test_rejects_quantifiers(fig1):
    with pytest.raises(TypeError):
        kernels.compile_formula(parse("[p] [!] q"), fig1)


def test_too_many_states():
    states = [f"s{i}" for i in range(65)]
    m = new_model(states, ["a"], {}, {"a": [states]})
    with pytest.raises(ValueError):
        kernels.compile_formula(parse("p"), m)
    assert not CheckContext(m).batch


def test_backend_flag():
    assert kernels.BACKEND in ("numba", "numpy")
