"""Hot inner loops over permutation arrays.

Every kernel exists twice: a loop version compiled with numba and a
vectorised numpy version. ``GGRAPH_DISABLE_NUMBA=1`` selects the numpy path
(see :mod:`ggraph._accel`). Both paths take and return ``int32`` arrays whose
rows are permutations of ``0..n-1`` acting on the right, so the product
``p*q`` of two rows is ``q[p]``.
"""

from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, njit

__all__ = [
    "HAVE_NUMBA",
    "backend",
    "backtrack_search",
    "commuting_pairs",
    "commuting_with",
    "conjugate_rows",
    "element_orders",
    "power_rows",
    "product_rows",
    "sift",
]


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# -- sifting ----------------------------------------------------------------


@njit
def _sift_loop(g, base, in_orbit, tinv, start):
    n = g.shape[0]
    h = g.copy()
    tmp = np.empty_like(h)
    k = base.shape[0]
    for i in range(start, k):
        x = h[base[i]]
        if not in_orbit[i, x]:
            return h, i
        u = tinv[i, x]
        for j in range(n):
            tmp[j] = u[h[j]]
        h, tmp = tmp, h
    return h, k


def _sift_numpy(g, base, in_orbit, tinv, start):
    h = g
    k = base.shape[0]
    for i in range(start, k):
        x = h[base[i]]
        if not in_orbit[i, x]:
            return h, i
        h = tinv[i, x][h]
    return h, k


def sift(g, base, in_orbit, tinv, start=0):
    """Sift ``g`` through packed chain arrays starting at level ``start``.

    Returns ``(residue, level)``; ``level == len(base)`` means every level
    accepted and ``residue`` is what is left after the last one.
    """
    if HAVE_NUMBA:
        return _sift_loop(g, base, in_orbit, tinv, start)
    return _sift_numpy(g, base, in_orbit, tinv, start)


# -- element orders -----------------------------------------------------------


@njit
def _orders_loop(X):
    m, n = X.shape
    out = np.empty(m, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    for r in range(m):
        seen[:] = False
        acc = 1
        for i in range(n):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = X[r, j]
                length += 1
            a, b = acc, length
            while b:
                a, b = b, a % b
            acc = acc // a * length
        out[r] = acc
    return out


def _orders_numpy(X):
    m, n = X.shape
    ident = np.arange(n, dtype=X.dtype)
    cyc = np.zeros((m, n), dtype=np.int64)
    Y = X.copy()
    rows = np.arange(m)[:, None]
    for k in range(1, n + 1):
        hit = (Y == ident) & (cyc == 0)
        cyc[hit] = k
        if not (cyc == 0).any():
            break
        Y = X[rows, Y]
    return np.lcm.reduce(cyc, axis=1)


def element_orders(X):
    """Order of every row of ``X`` (lcm of its cycle lengths)."""
    X = np.ascontiguousarray(X, dtype=np.int32)
    if X.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if HAVE_NUMBA:
        return _orders_loop(X)
    return _orders_numpy(X)


# -- powers ---------------------------------------------------------------------


@njit
def _power_loop(X, e):
    m, n = X.shape
    out = np.empty_like(X)
    base = np.empty(n, dtype=X.dtype)
    acc = np.empty(n, dtype=X.dtype)
    tmp = np.empty(n, dtype=X.dtype)
    for r in range(m):
        for i in range(n):
            base[i] = X[r, i]
            acc[i] = i
        k = e
        while k > 0:
            if k & 1:
                for i in range(n):
                    tmp[i] = base[acc[i]]
                acc[:] = tmp
            k >>= 1
            if k:
                for i in range(n):
                    tmp[i] = base[base[i]]
                base[:] = tmp
        out[r] = acc
    return out


def _power_numpy(X, e):
    m, n = X.shape
    rows = np.arange(m)[:, None]
    acc = np.broadcast_to(np.arange(n, dtype=X.dtype), (m, n)).copy()
    base = X.copy()
    while e > 0:
        if e & 1:
            acc = base[rows, acc]
        e >>= 1
        if e:
            base = base[rows, base]
    return acc


def power_rows(X, e: int):
    """Row-wise ``e``-th power (``e >= 0``)."""
    X = np.ascontiguousarray(X, dtype=np.int32)
    if e < 0:
        raise ValueError("negative exponent")
    if HAVE_NUMBA:
        return _power_loop(X, int(e))
    return _power_numpy(X, int(e))


# -- commuting pairs -----------------------------------------------------------------


@njit
def _commuting_loop(V):
    m, n = V.shape
    cap = 1024
    out = np.empty((cap, 2), dtype=np.int64)
    cnt = 0
    for i in range(m):
        for j in range(i + 1, m):
            ok = True
            for x in range(n):
                if V[j, V[i, x]] != V[i, V[j, x]]:
                    ok = False
                    break
            if ok:
                if cnt == cap:
                    bigger = np.empty((cap * 2, 2), dtype=np.int64)
                    bigger[:cap] = out
                    out = bigger
                    cap *= 2
                out[cnt, 0] = i
                out[cnt, 1] = j
                cnt += 1
    return out[:cnt]


def _commuting_numpy(V):
    m = V.shape[0]
    found = []
    for i in range(m - 1):
        rest = V[i + 1 :]
        left = rest[:, V[i]]  # row j: V[j][V[i]] = V[i] * V[j]
        right = V[i][rest]  # row j: V[i][V[j]] = V[j] * V[i]
        js = np.nonzero((left == right).all(axis=1))[0]
        if js.size:
            found.append(np.stack([np.full(js.size, i), js + i + 1], axis=1))
    if not found:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(found).astype(np.int64)


def commuting_pairs(V):
    """All index pairs ``i < j`` with ``V[i] V[j] = V[j] V[i]``."""
    V = np.ascontiguousarray(V, dtype=np.int32)
    if V.shape[0] < 2:
        return np.zeros((0, 2), dtype=np.int64)
    if HAVE_NUMBA:
        return _commuting_loop(V)
    return _commuting_numpy(V)


@njit
def _commuting_with_loop(u, V):
    m, n = V.shape
    out = np.zeros(m, dtype=np.bool_)
    for j in range(m):
        ok = True
        for x in range(n):
            if V[j, u[x]] != u[V[j, x]]:
                ok = False
                break
        out[j] = ok
    return out


def _commuting_with_numpy(u, V):
    # progressive check: most rows fail on the first few points
    m, n = V.shape
    alive = np.arange(m)
    for lo in range(0, n, 8):
        if not alive.size:
            break
        cols = np.arange(lo, min(lo + 8, n))
        W = V[alive]
        ok = (W[:, u[cols]] == u[W[:, cols]]).all(axis=1)
        alive = alive[ok]
    out = np.zeros(m, dtype=np.bool_)
    out[alive] = True
    return out


def commuting_with(u, V):
    """Mask of the rows of ``V`` commuting with the permutation ``u``."""
    u = np.ascontiguousarray(u, dtype=np.int32)
    V = np.ascontiguousarray(V, dtype=np.int32)
    if HAVE_NUMBA:
        return _commuting_with_loop(u, V)
    return _commuting_with_numpy(u, V)


@njit
def _conjugate_loop(X, g):
    m, n = X.shape
    out = np.empty_like(X)
    for i in range(m):
        for a in range(n):
            out[i, g[a]] = g[X[i, a]]
    return out


def conjugate_rows(X, g):
    """Rows ``x^g = g^-1 x g`` for every row ``x`` of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.int32)
    g = np.ascontiguousarray(g, dtype=np.int32)
    if HAVE_NUMBA:
        return _conjugate_loop(X, g)
    out = np.empty_like(X)
    out[:, g] = g[X]
    return out


# -- products of row sets ---------------------------------------------------------


@njit
def _product_loop(A, B):
    a, n = A.shape
    b = B.shape[0]
    out = np.empty((a * b, n), dtype=A.dtype)
    r = 0
    for i in range(a):
        for j in range(b):
            for x in range(n):
                out[r, x] = B[j, A[i, x]]
            r += 1
    return out


def _product_numpy(A, B):
    # out[i*b + j] = A[i] * B[j] = B[j][A[i]]
    prod = B[:, A]  # (b, a, n) with [j, i] = B[j][A[i]]
    return np.ascontiguousarray(prod.transpose(1, 0, 2)).reshape(-1, A.shape[1])


def product_rows(A, B):
    """All products ``A[i] * B[j]``, ordered with ``j`` varying fastest."""
    A = np.ascontiguousarray(A, dtype=np.int32)
    B = np.ascontiguousarray(B, dtype=np.int32)
    if HAVE_NUMBA:
        return _product_loop(A, B)
    return _product_numpy(A, B)


# -- backtrack search for x^g = y ------------------------------------------------------------


@njit
def _search_loop(start, h0, img, used, allowed, base, in_orbit, trans, labels, x, y, xlen, ylen):
    k = base.shape[0]
    n = h0.shape[0]
    H = np.empty((k + 1, n), dtype=h0.dtype)
    H[start] = h0
    cursor = np.zeros(k + 1, dtype=np.int64)
    mark = np.zeros(k + 1, dtype=np.int64)
    chg = np.empty(n, dtype=np.int64)
    nchg = 0
    hinv = np.empty(n, dtype=h0.dtype)
    nodes = 0
    j = start
    while True:
        if j == k:
            h = H[k]
            ok = True
            for i in range(n):
                if h[x[i]] != y[h[i]]:
                    ok = False
                    break
            if ok:
                res = h.copy()
                while nchg > 0:
                    nchg -= 1
                    a = chg[nchg]
                    used[img[a]] = False
                    img[a] = -1
                return True, res, nodes
            j -= 1
            while nchg > mark[j]:
                nchg -= 1
                a = chg[nchg]
                used[img[a]] = False
                img[a] = -1
            continue
        b = base[j]
        h = H[j]
        advanced = False
        while cursor[j] < n:
            g = cursor[j]
            cursor[j] += 1
            if not in_orbit[j, g]:
                continue
            if j == start and not allowed[g]:
                continue
            beta = h[g]
            if img[b] >= 0:
                if img[b] != beta:
                    continue
            elif xlen[b] != ylen[beta] or used[beta]:
                continue
            nodes += 1
            u = trans[j, g]
            hn = H[j + 1]
            for i in range(n):
                hn[i] = h[u[i]]
            mark[j] = nchg
            ok = True
            if img[b] < 0:
                a = b
                c = beta
                while True:
                    if img[a] >= 0 or used[c]:
                        ok = False
                        break
                    img[a] = c
                    used[c] = True
                    chg[nchg] = a
                    nchg += 1
                    a = x[a]
                    c = y[c]
                    if a == b:
                        break
            if ok:
                for i in range(n):
                    hinv[hn[i]] = i
                lab = labels[j + 1]
                for i in range(n):
                    if img[i] >= 0 and lab[i] != lab[hinv[img[i]]]:
                        ok = False
                        break
            if not ok:
                while nchg > mark[j]:
                    nchg -= 1
                    a = chg[nchg]
                    used[img[a]] = False
                    img[a] = -1
                continue
            advanced = True
            break
        if advanced:
            j += 1
            cursor[j] = 0
            continue
        if j == start:
            return False, h0, nodes
        j -= 1
        while nchg > mark[j]:
            nchg -= 1
            a = chg[nchg]
            used[img[a]] = False
            img[a] = -1


def _search_numpy(start, h0, img, used, allowed, base, in_orbit, trans, labels, x, y, xlen, ylen):
    k = base.shape[0]
    n = h0.shape[0]
    ar = np.arange(n, dtype=h0.dtype)
    nodes = 0

    def assign(b, beta):
        # map the x-cycle of b onto the y-cycle of beta; returns changed points or None
        changed = []
        a, c = b, beta
        while True:
            if img[a] >= 0 or used[c]:
                undo(changed)
                return None
            img[a] = c
            used[c] = True
            changed.append(a)
            a, c = int(x[a]), int(y[c])
            if a == b:
                return changed

    def undo(changed):
        for a in changed:
            used[img[a]] = False
            img[a] = -1

    def dfs(j, h):
        nonlocal nodes
        if j == k:
            return h if np.array_equal(h[x], y[h]) else None
        b = int(base[j])
        cand = np.nonzero(in_orbit[j])[0]
        if j == start:
            cand = cand[allowed[cand]]
        beta_all = h[cand]
        if img[b] >= 0:
            cand = cand[beta_all == img[b]]
        else:
            cand = cand[(ylen[beta_all] == xlen[b]) & ~used[beta_all]]
        lab = labels[j + 1]
        for g in cand.tolist():
            nodes += 1
            hn = h[trans[j, g]]
            beta = int(hn[b])
            changed = [] if img[b] >= 0 else assign(b, beta)
            if changed is None:
                continue
            hinv = np.empty_like(hn)
            hinv[hn] = ar
            known = np.nonzero(img >= 0)[0]
            if (lab[known] == lab[hinv[img[known]]]).all():
                res = dfs(j + 1, hn)
                if res is not None:
                    undo(changed)
                    return res
            undo(changed)
        return None

    res = dfs(start, h0)
    if res is None:
        return False, h0, nodes
    return True, res.copy(), nodes


def backtrack_search(start, h0, img, used, allowed, base, in_orbit, trans, labels, x, y, xlen, ylen):
    """Depth-first search for ``g`` with ``x^g = y`` below chain level ``start``.

    Elements considered are ``s * h0`` with ``s`` in the stabilizer of the
    first ``start`` base points. ``img``/``used`` hold images already forced
    (``-1`` for none) and are restored on return. ``allowed`` masks the
    orbit points tried at level ``start``. Returns ``(found, g, nodes)``.
    """
    if HAVE_NUMBA:
        return _search_loop(start, h0, img, used, allowed, base, in_orbit, trans, labels, x, y, xlen, ylen)
    return _search_numpy(start, h0, img, used, allowed, base, in_orbit, trans, labels, x, y, xlen, ylen)
