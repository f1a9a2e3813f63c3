"""Compare the numba and numpy batch kernels.

Evaluates the body of one ``[!]`` conjunct of the APAL checkerboard formula
over every candidate announcement of the 2x2 checkerboard model (2^20 - 1
candidate submodels), plus a smaller random workload.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import random
import time

import numpy as np

from announce import kernels
from announce import tiling as T
from announce.bisim import stable_masks
from announce.mcheck import _unions_np
from announce.randgen import random_formula, random_model


def workloads():
    ts = T.uniform_tileset()
    pm = T.gen_grid_model(ts, T.TileGrid.constant(2, 2))
    body = T.cyc("apal").left.left.left.right.sub  # body of c_apa(heart)
    cands = _unions_np(stable_masks(pm.model, pm.model.props))[1:]
    yield "checkerboard 2x2, c_apa(heart)", kernels.compile_formula(body, pm.model), cands

    rng = random.Random(0)
    m = random_model(rng, n_states=16, n_agents=3, n_atoms=3)
    f = random_formula(rng, m.props, m.agents, size=40, quantifiers=())
    cands = np.array([rng.randrange(1, 1 << 16) for _ in range(200_000)], dtype=np.uint64)
    yield "random 16 states, 40-node formula", kernels.compile_formula(f, m), cands


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"numba available: {kernels.HAVE_NUMBA}")
    for name, prog, cands in workloads():
        t_np, out_np = best_of(lambda: kernels.eval_batch_numpy(prog, cands), args.repeat)
        line = f"{name}: {len(cands)} candidates, {len(prog)} instructions; numpy {t_np:.3f}s"
        if kernels.HAVE_NUMBA:
            kernels.eval_batch_numba(prog, cands[:1])  # compile outside the timing
            t_nb, out_nb = best_of(lambda: kernels.eval_batch_numba(prog, cands), args.repeat)
            assert np.array_equal(out_np, out_nb)
            line += f", numba {t_nb:.3f}s ({t_np / t_nb:.1f}x)"
        print(line)


if __name__ == "__main__":
    main()
