"""Hot loops: pairwise box contact classification and exact coloring search.

Each kernel has a numba-compiled path and a pure numpy/Python fallback.
The JIT path is used when numba imports cleanly and the environment
variable ``BOXCOLOR_DISABLE_JIT`` is not set to a truthy value.
"""

from __future__ import annotations

import os
import types

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            fn.py_func = fn
            return fn

        if args and callable(args[0]):
            return wrap(args[0])
        return wrap


def _env_disabled():
    return os.environ.get("BOXCOLOR_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes", "on")


USE_JIT = HAVE_NUMBA and not _env_disabled()

# pair codes produced by the contact kernels
SEPARATE = 0
CONTACT = 1
OVERLAP = 2

# search status codes
SAT = 0
UNSAT = 1
LIMIT = 2


@njit(cache=True, nogil=True)
def _contact_codes_jit(lo, hi):
    n = lo.shape[0]
    out = np.zeros((n, n), np.int8)
    for i in range(n):
        for j in range(i + 1, n):
            touching = 0
            overlapping = 0
            apart = False
            for d in range(3):
                ov = min(hi[i, d], hi[j, d]) - max(lo[i, d], lo[j, d])
                if ov > 0:
                    overlapping += 1
                elif ov == 0:
                    touching += 1
                else:
                    apart = True
                    break
            code = 0
            if not apart:
                if overlapping == 3:
                    code = 2
                elif overlapping == 2 and touching == 1:
                    code = 1
            out[i, j] = code
            out[j, i] = code
    return out


def _contact_codes_numpy(lo, hi, block=256):
    n = lo.shape[0]
    out = np.zeros((n, n), np.int8)
    for start in range(0, n, block):
        stop = min(start + block, n)
        ov = np.minimum(hi[start:stop, None, :], hi[None, :, :]) - np.maximum(
            lo[start:stop, None, :], lo[None, :, :]
        )
        apart = (ov < 0).any(axis=2)
        n_over = (ov > 0).sum(axis=2)
        n_touch = (ov == 0).sum(axis=2)
        code = np.where(n_over == 3, OVERLAP, np.where((n_over == 2) & (n_touch == 1), CONTACT, SEPARATE))
        code[apart] = SEPARATE
        out[start:stop] = code
    np.fill_diagonal(out, SEPARATE)
    return out


def contact_codes(lo, hi, jit=None):
    """Classify every box pair as SEPARATE, CONTACT (positive-area face) or OVERLAP.

    ``lo`` and ``hi`` are ``(n, 3)`` integer arrays of box extents. Returns a
    symmetric ``(n, n)`` int8 matrix with a zero diagonal.
    """
    lo = np.ascontiguousarray(lo, dtype=np.int64)
    hi = np.ascontiguousarray(hi, dtype=np.int64)
    if jit is None:
        jit = USE_JIT
    if jit and HAVE_NUMBA:
        return _contact_codes_jit(lo, hi)
    return _contact_codes_numpy(lo, hi)


def _color_ok_py(v, c, nb_count, member, caps, reg_count, reg_distinct):
    if nb_count[v, c] > 0:
        return False
    for r in range(member.shape[1]):
        if member[v, r] and reg_count[r, c] == 0 and reg_distinct[r] >= caps[r]:
            return False
    return True


def _assign_py(v, c, sign, colors, indptr, indices, nb_count, member, reg_count, reg_distinct, use):
    if sign > 0:
        colors[v] = c
    else:
        colors[v] = -1
    use[c] += sign
    for p in range(indptr[v], indptr[v + 1]):
        nb_count[indices[p], c] += sign
    for r in range(member.shape[1]):
        if member[v, r]:
            if sign > 0:
                if reg_count[r, c] == 0:
                    reg_distinct[r] += 1
                reg_count[r, c] += 1
            else:
                reg_count[r, c] -= 1
                if reg_count[r, c] == 0:
                    reg_distinct[r] -= 1


def _color_search_py(indptr, indices, k, member, caps, fixed, node_limit):
    """Backtracking k-coloring with region color caps.

    Vertex choice: fewest admissible colors, then highest saturation, then
    highest degree, then lowest index. A vertex may take any color already
    in use or the single lowest unused one, which removes color-renaming
    symmetry. ``fixed[v] >= 0`` pre-assigns a color.

    Returns ``(status, colors, nodes)``.
    """
    n = indptr.shape[0] - 1
    n_reg = member.shape[1]
    colors = np.full(n, -1, np.int64)
    nb_count = np.zeros((n, k), np.int64)
    reg_count = np.zeros((n_reg, k), np.int64)
    reg_distinct = np.zeros(n_reg, np.int64)
    use = np.zeros(k, np.int64)
    deg = np.empty(n, np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]

    free = 0
    for v in range(n):
        c = fixed[v]
        if c < 0:
            free += 1
            continue
        if c >= k or not _color_ok(v, c, nb_count, member, caps, reg_count, reg_distinct):
            return UNSAT, colors, 0
        _assign(v, c, 1, colors, indptr, indices, nb_count, member, reg_count, reg_distinct, use)

    stack_v = np.empty(free + 1, np.int64)
    stack_c = np.empty(free + 1, np.int64)
    depth = 0
    nodes = 0
    entering = True
    while True:
        if entering:
            if depth == free:
                return SAT, colors, nodes
            top = -1
            for c in range(k):
                if use[c] > 0:
                    top = c
            lim = min(top + 1, k - 1)
            best = -1
            best_opts = k + 1
            best_sat = -1
            for v in range(n):
                if colors[v] >= 0:
                    continue
                opts = 0
                sat = 0
                for c in range(k):
                    if nb_count[v, c] > 0:
                        sat += 1
                    if c <= lim and _color_ok(v, c, nb_count, member, caps, reg_count, reg_distinct):
                        opts += 1
                if (
                    opts < best_opts
                    or (opts == best_opts and sat > best_sat)
                    or (opts == best_opts and sat == best_sat and deg[v] > deg[best])
                ):
                    best = v
                    best_opts = opts
                    best_sat = sat
            stack_v[depth] = best
            stack_c[depth] = 0
            v = best
        else:
            v = stack_v[depth]
            _assign(v, colors[v], -1, colors, indptr, indices, nb_count, member, reg_count, reg_distinct, use)

        top = -1
        for c in range(k):
            if use[c] > 0:
                top = c
        lim = min(top + 1, k - 1)
        found = -1
        for c in range(stack_c[depth], lim + 1):
            if _color_ok(v, c, nb_count, member, caps, reg_count, reg_distinct):
                found = c
                break
        if found >= 0:
            _assign(v, found, 1, colors, indptr, indices, nb_count, member, reg_count, reg_distinct, use)
            stack_c[depth] = found + 1
            depth += 1
            nodes += 1
            entering = True
            if nodes > node_limit:
                return LIMIT, colors, nodes
        else:
            depth -= 1
            if depth < 0:
                return UNSAT, colors, nodes
            entering = False


_color_ok = njit(cache=True, nogil=True)(_color_ok_py)
_assign = njit(cache=True, nogil=True)(_assign_py)
_color_search_jit = njit(cache=True, nogil=True)(_color_search_py)
# same search code, bound to the undecorated helpers
_color_search_pure = types.FunctionType(
    _color_search_py.__code__,
    {**globals(), "_color_ok": _color_ok_py, "_assign": _assign_py},
    "_color_search_pure",
)


def color_search(indptr, indices, k, member=None, caps=None, fixed=None, node_limit=10**8, jit=None):
    """Run the exact coloring search on a CSR graph. See ``_color_search_py``."""
    n = len(indptr) - 1
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    if member is None:
        member = np.zeros((n, 0), np.bool_)
    if caps is None:
        caps = np.zeros(member.shape[1], np.int64)
    if fixed is None:
        fixed = np.full(n, -1, np.int64)
    member = np.ascontiguousarray(member, dtype=np.bool_)
    caps = np.ascontiguousarray(caps, dtype=np.int64)
    fixed = np.ascontiguousarray(fixed, dtype=np.int64)
    if jit is None:
        jit = USE_JIT
    fn = _color_search_jit if (jit and HAVE_NUMBA) else _color_search_pure
    status, colors, nodes = fn(indptr, indices, int(k), member, caps, fixed, int(node_limit))
    return int(status), colors, int(nodes)
