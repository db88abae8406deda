"""Time the numba kernels against their fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once untimed (so compilation or cache loading is excluded),
then ``--repeat`` timed runs; the best time is reported. Both paths must
return identical results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from boxcolor import _kernels
from boxcolor.conflict import build_graph
from boxcolor.constructions import build_gadget_y, build_z_geometric, gen_random_guillotine


def best_of(fn, repeat: int) -> tuple[float, object]:
    out = fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def contact_cases():
    yield "z-geometric (462 boxes)", build_z_geometric().arrays()
    yield "guillotine 2000 boxes", gen_random_guillotine(1, 2000, (40, 40, 40)).arrays()


def search_cases():
    y = build_gadget_y()
    g = build_graph(y)
    names = ("Y1", "Y2", "Y3")
    covered = sorted(set().union(*(y.regions[n] for n in names)))
    core = g.induced(covered)
    indptr, indices = core.csr()
    member = np.array([[v in y.regions[n] for n in names] for v in core.vertices])
    yield "claim-2 capped search", (indptr, indices, len(core), member, np.array([3, 3, 3]))

    rng = np.random.default_rng(5)
    n = 70
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.12]
    nb = [[] for _ in range(n)]
    for a, b in edges:
        nb[a].append(b)
        nb[b].append(a)
    indptr = np.cumsum([0] + [len(x) for x in nb]).astype(np.int64)
    indices = np.array([w for x in nb for w in sorted(x)], dtype=np.int64)
    yield "G(70, 0.12) 4-colouring", (indptr, indices, 4, None, None)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<12} {'case':<28} {'numba [s]':>11} {'fallback [s]':>13} {'speed-up':>9}")
    for label, (lo, hi) in contact_cases():
        tj, a = best_of(lambda: _kernels.contact_codes(lo, hi, jit=True), args.repeat)
        tn, b = best_of(lambda: _kernels.contact_codes(lo, hi, jit=False), args.repeat)
        assert np.array_equal(a, b)
        print(f"{'contact':<12} {label:<28} {tj:>11.4f} {tn:>13.4f} {tn / tj:>8.1f}x")
    for label, (indptr, indices, k, member, caps) in search_cases():
        run = lambda jit: _kernels.color_search(indptr, indices, k, member, caps, jit=jit)  # noqa: E731
        tj, a = best_of(lambda: run(True), args.repeat)
        tn, b = best_of(lambda: run(False), args.repeat)
        assert a[0] == b[0] and a[2] == b[2] and np.array_equal(a[1], b[1])
        print(f"{'search':<12} {label:<28} {tj:>11.4f} {tn:>13.4f} {tn / tj:>8.1f}x   ({a[2]} nodes)")


if __name__ == "__main__":
    main()
