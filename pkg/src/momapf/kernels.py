"""Hot numeric kernels.

Each kernel has a numba implementation and a numpy (or plain python)
fallback; the public names point at one or the other depending on
``MOMAPF_DISABLE_NUMBA``. Both variants are importable for tests and
benchmarks as ``<name>_numba`` / ``<name>_numpy``.

Joint-state encoding used by the joint oracle: with ``V`` cells and ``N``
agents, ``key = mask + 2**N * sum(pos[i] * V**i)`` where bit ``i`` of
``mask`` marks agent ``i`` as finished (parked at its goal for good).
"""
import heapq

import numpy as np

from ._jit import USE_NUMBA, njit

INF = np.int64(1) << np.int64(60)


# --------------------------------------------------------------------------
# backward single-objective Dijkstra


def _backward_dijkstra_py(nbr, cost_m, goal):
    n = nbr.shape[0]
    dist = np.full(n, INF, dtype=np.int64)
    dist[goal] = 0
    heap = [(np.int64(0), np.int64(goal))]
    opp = np.array([0, 3, 4, 1, 2], dtype=np.int64)
    while len(heap) > 0:
        d, w = heapq.heappop(heap)
        if d > dist[w]:
            continue
        for s in range(1, 5):
            u = nbr[w, s]
            if u < 0:
                continue
            # edge u -> w lives in u's row at the opposite slot
            nd = d + cost_m[u, opp[s]]
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (np.int64(nd), np.int64(u)))
    return dist


backward_dijkstra_numpy = _backward_dijkstra_py
backward_dijkstra_numba = njit(_backward_dijkstra_py)


# --------------------------------------------------------------------------
# pareto filtering


def _group_pareto_keep_nb(keys, costs):
    """``keys``/``costs`` sorted by (key, lex cost). Keep rows not weakly dominated within their key group."""
    n, m = costs.shape
    keep = np.ones(n, dtype=np.bool_)
    kept = np.empty(n, dtype=np.int64)
    nk = 0
    for i in range(n):
        if i > 0 and keys[i] != keys[i - 1]:
            nk = 0
        bad = False
        for jj in range(nk):
            j = kept[jj]
            le = True
            for k in range(m):
                if costs[j, k] > costs[i, k]:
                    le = False
                    break
            if le:
                bad = True
                break
        if bad:
            keep[i] = False
        else:
            kept[nk] = i
            nk += 1
    return keep


def _group_pareto_keep_np(keys, costs):
    n = keys.shape[0]
    keep = np.ones(n, dtype=bool)
    if n == 0:
        return keep
    bounds = np.flatnonzero(np.diff(keys)) + 1
    starts = np.concatenate(([0], bounds))
    ends = np.concatenate((bounds, [n]))
    for a, b in zip(starts[ends - starts > 1], ends[ends - starts > 1]):
        c = costs[a:b]
        # le[i, j]: row j <= row i componentwise; weak dominance is transitive,
        # so comparing against all earlier rows equals comparing against kept ones
        le = np.all(c[None, :, :] <= c[:, None, :], axis=2)
        keep[a:b] = ~np.tril(le, -1).any(axis=1)
    return keep


group_pareto_keep_numba = njit(_group_pareto_keep_nb)
group_pareto_keep_numpy = _group_pareto_keep_np


def _dominated_by_front_nb(costs, front):
    n, m = costs.shape
    out = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        for j in range(front.shape[0]):
            le = True
            for k in range(m):
                if front[j, k] > costs[i, k]:
                    le = False
                    break
            if le:
                out[i] = True
                break
    return out


def _dominated_by_front_np(costs, front):
    n = costs.shape[0]
    if front.shape[0] == 0 or n == 0:
        return np.zeros(n, dtype=bool)
    out = np.empty(n, dtype=bool)
    step = max(1, 2_000_000 // max(1, front.size))
    for a in range(0, n, step):
        c = costs[a : a + step]
        out[a : a + step] = np.all(front[None, :, :] <= c[:, None, :], axis=2).any(axis=1)
    return out


dominated_by_front_numba = njit(_dominated_by_front_nb)
dominated_by_front_numpy = _dominated_by_front_np


def pareto_prune(keys, costs):
    """Sort labels by (key, lex cost) and drop weakly dominated ones per key. Returns (order, keep)."""
    cols = [costs[:, k] for k in range(costs.shape[1] - 1, -1, -1)]
    order = np.lexsort(cols + [keys])
    return order, group_pareto_keep(keys[order], costs[order])


# --------------------------------------------------------------------------
# joint-space layer expansion


def _joint_expand_nb(keys, costs, nbr, ecost, n_agents, n_cells):
    """All collision-free joint successors of the labels at time t.

    Finished agents stay put at zero cost; active agents take any of the 5
    slots (self-loop included). Rejects vertex collisions at t+1 and edge
    swaps between t and t+1. Returns (child_keys, child_costs, parent_index).
    """
    n, m = costs.shape
    N = n_agents
    base = np.int64(1) << np.int64(N)
    pos = np.empty(N, dtype=np.int64)
    nxt = np.empty(N, dtype=np.int64)
    slot = np.empty(N, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    out_keys = np.empty(0, dtype=np.int64)
    out_costs = np.empty((0, m), dtype=np.int64)
    out_par = np.empty(0, dtype=np.int64)
    w_ptr = 0
    for phase in range(2):
        if phase == 1:
            total = counts.sum()
            out_keys = np.empty(total, dtype=np.int64)
            out_costs = np.empty((total, m), dtype=np.int64)
            out_par = np.empty(total, dtype=np.int64)
        for li in range(n):
            key = keys[li]
            mask = key % base
            rest = key // base
            for a in range(N):
                pos[a] = rest % n_cells
                rest //= n_cells
                slot[a] = 0
            while True:
                ok = True
                for a in range(N):
                    if (mask >> a) & 1:
                        if slot[a] != 0:
                            ok = False
                            break
                        nxt[a] = pos[a]
                    else:
                        w = nbr[pos[a], slot[a]]
                        if w < 0:
                            ok = False
                            break
                        nxt[a] = w
                if ok:
                    for a in range(N):
                        for b in range(a + 1, N):
                            if nxt[a] == nxt[b]:
                                ok = False
                            elif nxt[a] == pos[b] and nxt[b] == pos[a]:
                                ok = False
                        if not ok:
                            break
                if ok:
                    if phase == 0:
                        counts[li] += 1
                    else:
                        nk = np.int64(0)
                        mul = np.int64(1)
                        for a in range(N):
                            nk += nxt[a] * mul
                            mul *= n_cells
                        out_keys[w_ptr] = nk * base + mask
                        for k in range(m):
                            s = costs[li, k]
                            for a in range(N):
                                if not (mask >> a) & 1:
                                    s += ecost[pos[a], slot[a], k]
                            out_costs[w_ptr, k] = s
                        out_par[w_ptr] = li
                        w_ptr += 1
                # odometer over slots
                a = 0
                while a < N:
                    slot[a] += 1
                    if slot[a] < 5:
                        break
                    slot[a] = 0
                    a += 1
                if a == N:
                    break
    return out_keys, out_costs, out_par


def _joint_expand_np(keys, costs, nbr, ecost, n_agents, n_cells):
    N = n_agents
    base = np.int64(1) << np.int64(N)
    mask = keys % base
    rest = keys // base
    pos = np.empty((keys.shape[0], N), dtype=np.int64)
    for a in range(N):
        pos[:, a] = rest % n_cells
        rest = rest // n_cells
    par = np.arange(keys.shape[0], dtype=np.int64)
    cur_pos = pos
    nxt = np.empty((keys.shape[0], 0), dtype=np.int64)
    acc = costs.copy()
    for a in range(N):
        rows = np.repeat(np.arange(par.shape[0]), 5)
        slots = np.tile(np.arange(5), par.shape[0])
        p = cur_pos[rows, a]
        done = ((mask[par[rows]] >> a) & 1).astype(bool)
        w = nbr[p, slots]
        valid = np.where(done, slots == 0, w >= 0)
        rows, slots, p, done, w = rows[valid], slots[valid], p[valid], done[valid], w[valid]
        w = np.where(done, p, w)
        step = np.where(done[:, None], 0, ecost[p, slots])
        new_nxt = np.concatenate([nxt[rows], w[:, None]], axis=1)
        # collisions against agents already placed
        ok = np.ones(rows.shape[0], dtype=bool)
        for b in range(a):
            ok &= new_nxt[:, b] != w
            ok &= ~((new_nxt[:, b] == cur_pos[rows, a]) & (w == cur_pos[rows, b]))
        par = par[rows][ok]
        cur_pos = cur_pos[rows][ok]
        nxt = new_nxt[ok]
        acc = acc[rows][ok] + step[ok]
    mul = n_cells ** np.arange(N, dtype=np.int64)
    out_keys = (nxt * mul).sum(axis=1) * base + mask[par]
    return out_keys.astype(np.int64), acc.astype(np.int64), par


joint_expand_numba = njit(_joint_expand_nb)
joint_expand_numpy = _joint_expand_np


if USE_NUMBA:
    backward_dijkstra = backward_dijkstra_numba
    group_pareto_keep = group_pareto_keep_numba
    dominated_by_front = dominated_by_front_numba
    joint_expand = joint_expand_numba
else:
    backward_dijkstra = backward_dijkstra_numpy
    group_pareto_keep = group_pareto_keep_numpy
    dominated_by_front = dominated_by_front_numpy
    joint_expand = joint_expand_numpy
