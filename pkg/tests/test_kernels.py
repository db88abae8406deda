"""The JIT and fallback paths must agree bit for bit."""

import numpy as np
import pytest

from boxcolor import _kernels
from boxcolor.constructions import build_z_geometric, gen_random_guillotine

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def test_contact_codes_paths_agree_on_random_boxes():
    rng = np.random.default_rng(7)
    lo = rng.integers(0, 6, size=(150, 3))
    hi = lo + rng.integers(1, 4, size=(150, 3))
    a = _kernels.contact_codes(lo, hi, jit=True)
    b = _kernels.contact_codes(lo, hi, jit=False)
    assert np.array_equal(a, b)
    assert set(np.unique(a)) <= {0, 1, 2}
    assert np.array_equal(a, a.T)


def test_contact_codes_paths_agree_on_z():
    lo, hi = build_z_geometric().arrays()
    assert np.array_equal(_kernels.contact_codes(lo, hi, jit=True), _kernels.contact_codes(lo, hi, jit=False))


def test_contact_codes_block_boundary():
    lo, hi = gen_random_guillotine(3, 300, (20, 20, 20)).arrays()
    full = _kernels._contact_codes_numpy(lo, hi, block=1000)
    assert np.array_equal(full, _kernels._contact_codes_numpy(lo, hi, block=37))


def _csr(n, edges):
    nb = [[] for _ in range(n)]
    for u, v in edges:
        nb[u].append(v)
        nb[v].append(u)
    indptr = np.cumsum([0] + [len(x) for x in nb])
    return indptr, np.array([w for x in nb for w in sorted(x)], dtype=np.int64)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("k", [2, 3, 4])
def test_color_search_paths_agree(seed, k):
    rng = np.random.default_rng(seed)
    n = 14
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3]
    indptr, indices = _csr(n, edges)
    member = rng.random((n, 2)) < 0.5
    caps = np.array([2, 3])
    fast = _kernels.color_search(indptr, indices, k, member, caps, jit=True)
    slow = _kernels.color_search(indptr, indices, k, member, caps, jit=False)
    assert fast[0] == slow[0] and fast[2] == slow[2]
    assert np.array_equal(fast[1], slow[1])


def test_color_search_node_limit():
    # a complete graph with no seeding: each placement is one node
    n = 9
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    indptr, indices = _csr(n, edges)
    status, _, nodes = _kernels.color_search(indptr, indices, 8, node_limit=3)
    assert status == _kernels.LIMIT
    assert nodes == 4


def test_fixed_colour_conflict_is_unsat():
    indptr, indices = _csr(2, [(0, 1)])
    status, _, _ = _kernels.color_search(indptr, indices, 2, fixed=np.array([0, 0]))
    assert status == _kernels.UNSAT


def test_env_flag_selects_fallback():
    import os
    import subprocess
    import sys

    code = (
        "from boxcolor import _kernels; from boxcolor.certify import check_claim2; "
        "from boxcolor.constructions import build_gadget_y; "
        "print(_kernels.USE_JIT, check_claim2(build_gadget_y()).passed)"
    )
    env = dict(os.environ, BOXCOLOR_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
