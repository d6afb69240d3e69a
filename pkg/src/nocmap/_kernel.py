"""Compiled execution-time kernel used by the search loops.

Same event order as the reference loop in ``sim``: events are keyed by
``(arrival, packet index)`` and every packet has at most one pending event,
so the key packs into one int64 and the hop number lives in a side array.
"""

import numpy as np
from numba import njit, types
from numba.typed import Dict


@njit(cache=True)
def _push(heap, size, key):
    k = size
    heap[k] = key
    while k > 0:
        parent = (k - 1) >> 1
        if heap[parent] <= key:
            break
        heap[k] = heap[parent]
        k = parent
    heap[k] = key
    return size + 1


@njit(cache=True)
def _pop(heap, size):
    top = heap[0]
    size -= 1
    last = heap[size]
    k = 0
    while True:
        child = 2 * k + 1
        if child >= size:
            break
        if child + 1 < size and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] >= last:
            break
        heap[k] = heap[child]
        k = child
    if size > 0:
        heap[k] = last
    return top, size


@njit(cache=True)
def texec(tiles, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx,
          route, route_len, n_tiles, tl, hop):
    n_p = src.shape[0]
    remaining = npred.copy()
    ready = np.zeros(n_p, np.int64)
    free = np.zeros(n_tiles, np.int64)
    at_hop = np.zeros(n_p, np.int64)
    path_base = np.empty(n_p, np.int64)
    path_len = np.empty(n_p, np.int64)
    width = route.shape[2]
    for i in range(n_p):
        a = tiles[src[i]]
        b = tiles[dst[i]]
        path_base[i] = a * n_tiles + b
        path_len[i] = route_len[a, b]
    heap = np.empty(n_p, np.int64)
    size = 0
    for i in range(n_p):
        if npred[i] == 0:
            size = _push(heap, size, (comp[i] + tl) * n_p + i)
    result = 0
    flat = route.reshape(n_tiles * n_tiles, width)
    while size > 0:
        key, size = _pop(heap, size)
        arrival = key // n_p
        i = key - arrival * n_p
        h = at_hop[i]
        r = flat[path_base[i], h]
        s = arrival if arrival >= free[r] else free[r]
        free[r] = s + busy[i]
        if h + 1 < path_len[i]:
            at_hop[i] = h + 1
            size = _push(heap, size, (s + hop) * n_p + i)
            continue
        done = s + tail[i]
        if done > result:
            result = done
        for e in range(succ_ptr[i], succ_ptr[i + 1]):
            j = succ_idx[e]
            if done > ready[j]:
                ready[j] = done
            remaining[j] -= 1
            if remaining[j] == 0:
                size = _push(heap, size, (ready[j] + comp[j] + tl) * n_p + j)
    return result


@njit(cache=True)
def _longest_path(tiles, order, fixed, per_router, src, dst, hops, succ_ptr, succ_idx):
    """Contention-free Start-to-End length; packets with an unplaced end count two routers."""
    n_p = fixed.shape[0]
    ready = np.zeros(n_p, np.int64)
    best = 0
    for k in range(n_p):
        i = order[k]
        a = tiles[src[i]]
        b = tiles[dst[i]]
        eta = hops[a, b] + 1 if a >= 0 and b >= 0 else 2
        done = ready[i] + fixed[i] + per_router * eta
        if done > best:
            best = done
        for e in range(succ_ptr[i], succ_ptr[i + 1]):
            j = succ_idx[e]
            if done > ready[j]:
                ready[j] = done
    return best


@njit(cache=True)
def branch_and_bound(order, first_tiles, w, h1, hops, base, erl, ceiling, static_per_cycle, timed,
                     t_order, fixed, per_router,
                     src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop):
    """Depth-first search over placements of ``order``; returns (cost, ties, leaves).

    ``w`` is the symmetric core-to-core weight matrix, ``h1`` the hop count
    minus one between tiles.  A node is pruned only when its bound exceeds
    the incumbent, so every optimal placement reached is returned in ``ties``.
    With ``timed`` set, the contention-free path bound and the simulated
    execution time add ``static_per_cycle`` per cycle.
    """
    m = order.shape[0]
    n = h1.shape[0]
    tiles = -np.ones(m, np.int64)
    free = np.ones(n, np.bool_)
    placed = np.zeros(m, np.bool_)
    extra = np.zeros((m, n), np.int64)
    cands = np.zeros((m, n), np.int64)
    n_cands = np.zeros(m, np.int64)
    pos = np.zeros(m, np.int64)
    spent = np.zeros(m + 1, np.int64)
    best = ceiling
    cap = 16
    ties = np.empty((cap, m), np.int64)
    n_ties = 0
    leaves = 0
    cheap = 0
    if timed:
        cheap = static_per_cycle * _longest_path(tiles, t_order, fixed, per_router, src, dst, hops,
                                                 succ_ptr, succ_idx)

    depth = 0
    for q in range(first_tiles.shape[0]):
        cands[0, q] = first_tiles[q]
    n_cands[0] = first_tiles.shape[0]
    pos[0] = 0
    while depth >= 0:
        k = order[depth]
        if tiles[k] >= 0:
            # undo the placement made at this depth before trying the next tile
            t = tiles[k]
            for u in range(m):
                if w[u, k] != 0:
                    for s in range(n):
                        extra[u, s] -= w[u, k] * h1[t, s]
            free[t] = True
            tiles[k] = -1
            placed[k] = False
        if pos[depth] >= n_cands[depth]:
            depth -= 1
            continue
        t = cands[depth, pos[depth]]
        pos[depth] += 1
        e = spent[depth] + extra[k, t]
        lb = base + erl * e
        if lb > best:
            if depth == 0:
                continue
            pos[depth] = n_cands[depth]  # candidates are sorted by extra
            continue
        tiles[k] = t
        free[t] = False
        placed[k] = True
        for u in range(m):
            if w[u, k] != 0:
                for s in range(n):
                    extra[u, s] += w[u, k] * h1[t, s]
        if depth + 1 == m:
            cost = lb
            ok = True
            if timed:
                if lb + static_per_cycle * _longest_path(tiles, t_order, fixed, per_router, src, dst, hops,
                                                         succ_ptr, succ_idx) > best:
                    ok = False
                else:
                    leaves += 1
                    cost = lb + static_per_cycle * texec(tiles, src, dst, comp, busy, tail, npred, succ_ptr,
                                                         succ_idx, route, route_len, n_tiles, tl, hop)
            else:
                leaves += 1
            if ok and cost <= best:
                if cost < best:
                    best = cost
                    n_ties = 0
                if n_ties == cap:
                    bigger = np.empty((2 * cap, m), np.int64)
                    bigger[:cap] = ties
                    ties = bigger
                    cap *= 2
                ties[n_ties] = tiles
                n_ties += 1
            continue  # the undo happens on the next pass at this depth
        look = 0
        for u in range(m):
            if not placed[u]:
                lo = -1
                for s in range(n):
                    if free[s] and (lo < 0 or extra[u, s] < lo):
                        lo = extra[u, s]
                look += lo
        bound = lb + erl * look
        if bound > best:
            continue
        if timed:
            if bound + cheap > best:
                continue
            if bound + static_per_cycle * _longest_path(tiles, t_order, fixed, per_router, src, dst, hops,
                                                        succ_ptr, succ_idx) > best:
                continue
        # descend: candidates for the next core sorted by their extra cost
        nxt = order[depth + 1]
        c = 0
        for s in range(n):
            if free[s]:
                cands[depth + 1, c] = s
                c += 1
        keys = np.empty(c, np.int64)
        for q in range(c):
            keys[q] = extra[nxt, cands[depth + 1, q]]
        perm = np.argsort(keys, kind="mergesort")
        tmp = cands[depth + 1, :c].copy()
        for q in range(c):
            cands[depth + 1, q] = tmp[perm[q]]
        n_cands[depth + 1] = c
        pos[depth + 1] = 0
        spent[depth + 1] = e
        depth += 1
    return best, ties[:n_ties].copy(), leaves


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _next(state):
    """splitmix64 step; ``state`` is a one-element uint64 array."""
    state[0] += _GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _uniform(state):
    return float(_next(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _below(state, k):
    return np.int64((_next(state) >> np.uint64(11)) % np.uint64(k))


@njit(cache=True)
def _propose(state, m, nfree):
    """Relocation to a free tile or swap of two cores, each half the time when both exist."""
    if nfree > 0 and (m < 2 or _uniform(state) < 0.5):
        return 1, _below(state, m), _below(state, nfree)
    i = _below(state, m)
    j = _below(state, m - 1)
    if j >= i:
        j += 1
    return 0, i, j


@njit(cache=True)
def _move_delta(kind, i, j, tiles, free, w, dist):
    """Change of the weighted hop sum for a swap of cores i, j or a move of core i to free slot j."""
    m = tiles.shape[0]
    d = 0
    if kind == 0:
        ti = tiles[i]
        tj = tiles[j]
        for u in range(m):
            if u != i and u != j:
                tu = tiles[u]
                d += w[i, u] * (dist[tj, tu] - dist[ti, tu]) + w[j, u] * (dist[ti, tu] - dist[tj, tu])
    else:
        ti = tiles[i]
        tn = free[j]
        for u in range(m):
            if u != i:
                tu = tiles[u]
                d += w[i, u] * (dist[tn, tu] - dist[ti, tu])
    return d


@njit(cache=True)
def _apply_move(kind, i, j, tiles, free):
    if kind == 0:
        t = tiles[i]
        tiles[i] = tiles[j]
        tiles[j] = t
    else:
        t = tiles[i]
        tiles[i] = free[j]
        free[j] = t


@njit(cache=True)
def _memo_texec(tiles, memo, radix, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len,
                n_tiles, tl, hop):
    if radix == 0:
        return texec(tiles, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
    key = 0
    for t in tiles:
        key = key * radix + t
    got = memo.get(key, -1)
    if got < 0:
        got = texec(tiles, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
        memo[key] = got
    return got


@njit(cache=True)
def _full_cost(tiles, memo, radix, w, dist, erl, const, static_per_cycle, timed,
               src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop):
    m = tiles.shape[0]
    s = 0
    for a in range(m):
        for b in range(a + 1, m):
            s += w[a, b] * dist[tiles[a], tiles[b]]
    cost = const + erl * s
    if timed:
        cost += static_per_cycle * _memo_texec(tiles, memo, radix, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
    return cost, s


@njit(cache=True)
def anneal(seed, m, w, dist, erl, const, static_per_cycle, timed, t0_fixed, cooling, moves_per_temp,
           min_temp_fraction, plateau, p_accept, radix,
           src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop):
    """One annealing run; returns (best cost, best tiles, evaluations, best cost per temperature).

    ``t0_fixed < 0`` asks for the automatic start temperature.  Execution
    times are memoised by tile vector when ``radix ** m`` fits in int64
    (``radix = 0`` disables the memo).  The run
    ends with a steepest-descent pass over every swap and relocation.
    """
    n = dist.shape[0]
    memo = Dict.empty(key_type=types.int64, value_type=types.int64)
    state = np.empty(1, np.uint64)
    state[0] = np.uint64(seed)
    perm = np.arange(n)
    for k in range(n - 1, 0, -1):
        r = _below(state, k + 1)
        t = perm[k]
        perm[k] = perm[r]
        perm[r] = t
    tiles = perm[:m].copy()
    free = perm[m:].copy()
    nfree = n - m
    cur, hops = _full_cost(tiles, memo, radix, w, dist, erl, const, static_per_cycle, timed, src, dst, comp, busy, tail,
                           npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
    evals = 1
    best = cur
    best_tiles = tiles.copy()
    best_free = free.copy()
    history = np.empty(0, np.int64)
    if m == 0 or (m == 1 and nfree == 0):
        return best, best_tiles, evals, history

    if t0_fixed < 0:
        total = 0.0
        ups = 0
        for _ in range(100):
            kind, i, j = _propose(state, m, nfree)
            dh = _move_delta(kind, i, j, tiles, free, w, dist)
            _apply_move(kind, i, j, tiles, free)
            new = const + erl * (hops + dh)
            if timed:
                new += static_per_cycle * _memo_texec(tiles, memo, radix, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
            evals += 1
            _apply_move(kind, i, j, tiles, free)
            if new > cur:
                total += new - cur
                ups += 1
        t0 = (total / ups) / -np.log(p_accept) if ups > 0 else 0.0
    else:
        t0 = t0_fixed

    steps = 0
    cap = 64
    history = np.empty(cap, np.int64)
    temp = t0
    stale = 0
    while stale < plateau and (t0 == 0.0 or temp >= min_temp_fraction * t0):
        changed = False
        for _ in range(moves_per_temp):
            kind, i, j = _propose(state, m, nfree)
            dh = _move_delta(kind, i, j, tiles, free, w, dist)
            _apply_move(kind, i, j, tiles, free)
            new = const + erl * (hops + dh)
            if timed:
                new += static_per_cycle * _memo_texec(tiles, memo, radix, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
            evals += 1
            d = new - cur
            if d <= 0 or (temp > 0.0 and _uniform(state) < np.exp(-d / temp)):
                if d != 0:
                    changed = True
                cur = new
                hops += dh
                if cur < best:
                    best = cur
                    best_tiles[:] = tiles
                    best_free[:] = free
            else:
                _apply_move(kind, i, j, tiles, free)
        stale = 0 if changed else stale + 1
        if steps == cap:
            bigger = np.empty(2 * cap, np.int64)
            bigger[:cap] = history
            history = bigger
            cap *= 2
        history[steps] = best
        steps += 1
        temp *= cooling

    # steepest descent from the best state
    tiles[:] = best_tiles
    free[:] = best_free
    cur, hops = _full_cost(tiles, memo, radix, w, dist, erl, const, static_per_cycle, timed, src, dst, comp, busy, tail,
                           npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
    while True:
        top = cur
        top_kind = -1
        top_i = 0
        top_j = 0
        top_dh = 0
        for kind in range(2):
            lim_a = m
            for i in range(lim_a):
                lim_b = m if kind == 0 else nfree
                start = i + 1 if kind == 0 else 0
                for j in range(start, lim_b):
                    dh = _move_delta(kind, i, j, tiles, free, w, dist)
                    new = const + erl * (hops + dh)
                    if timed:
                        _apply_move(kind, i, j, tiles, free)
                        new += static_per_cycle * _memo_texec(tiles, memo, radix, src, dst, comp, busy, tail, npred, succ_ptr, succ_idx, route, route_len, n_tiles, tl, hop)
                        _apply_move(kind, i, j, tiles, free)
                    evals += 1
                    if new < top:
                        top = new
                        top_kind = kind
                        top_i = i
                        top_j = j
                        top_dh = dh
        if top_kind < 0:
            break
        _apply_move(top_kind, top_i, top_j, tiles, free)
        cur = top
        hops += top_dh
    if cur < best:
        best = cur
        best_tiles[:] = tiles
    return best, best_tiles, evals, history[:steps].copy()
