"""Pure numpy implementations of the enumeration kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is unavailable or ``GLPSH_PURE_PYTHON=1`` is set.
"""

import numpy as np


def mul_table(mats, keys, q, add, mul, n):
    m = mats.shape[0]
    table = np.empty((m, m), dtype=np.int32)
    if n == 0:
        table[:] = 0
        return table
    B = mats.reshape(m, n, n)
    weights = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    for i in range(m):
        A = mats[i].reshape(n, n)
        acc = np.zeros((m, n, n), dtype=np.int64)
        for t in range(n):
            acc = add[acc, mul[A[None, :, t, None], B[:, None, t, :]]]
        k = acc.reshape(m, n * n) @ weights
        table[i] = np.searchsorted(keys, k)
    return table


def closure(table, gens, identity):
    m = table.shape[0]
    seen = np.zeros(m, dtype=bool)
    seen[identity] = True
    frontier = np.array([identity], dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return frontier
    while frontier.size:
        nxt = np.unique(table[np.ix_(frontier, gens)].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return np.flatnonzero(seen).astype(np.int64)


def double_cosets(table, left, right):
    m = table.shape[0]
    labels = np.full(m, -1, dtype=np.int64)
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    reps = []
    for g in range(m):
        if labels[g] >= 0:
            continue
        kg = table[left, g]
        members = np.unique(table[np.ix_(kg, right)].ravel())
        labels[members] = len(reps)
        reps.append(g)
    return labels, np.array(reps, dtype=np.int64)


def orbit_labels(perms):
    perms = np.asarray(perms, dtype=np.int64)
    k, m = perms.shape
    labels = np.full(m, -1, dtype=np.int64)
    for x in range(m):
        if labels[x] >= 0:
            continue
        labels[x] = x
        frontier = np.array([x], dtype=np.int64)
        while frontier.size:
            nxt = np.unique(perms[:, frontier].ravel())
            nxt = nxt[labels[nxt] < 0]
            labels[nxt] = x
            frontier = nxt
    return labels
