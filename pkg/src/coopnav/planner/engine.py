"""Frontier-expansion engine shared by the four planners.

One jitted routine covers Dijkstra (no heuristic) and A* (Euclidean or
radio-weighted heuristic). The open set is a binary heap of ``(key, flat
index)`` tuples, so equal keys pop the lexicographically smaller cell first.
"""

import heapq
import math

import numpy as np
from numba import njit

HEUR_NONE = 0
HEUR_EUCLID = 1
HEUR_WEIGHTED = 2

_DR = np.array([-1, -1, -1, 0, 0, 1, 1, 1], dtype=np.int64)
_DC = np.array([-1, 0, 1, -1, 1, -1, 0, 1], dtype=np.int64)
_SQRT2 = math.sqrt(2.0)
_REOPEN_TOL = 1e-12


@njit(cache=True)
def _heuristic(kind, radio, alpha, r, c, sr, sc):
    if kind == HEUR_NONE:
        return 0.0
    d = math.sqrt((sr - r) * (sr - r) + (sc - c) * (sc - c))
    if kind == HEUR_WEIGHTED:
        return (1.0 - alpha * radio[r, c]) * d
    return d


@njit(cache=True)
def _is_ancestor(pred, u, v):
    w = u
    while w != -1:
        if w == v:
            return True
        w = pred[w]
    return False


@njit(cache=True)
def search(blocked, radio, alpha, weighted, heur, start, stop,
           early_exit, reopen_closed, acyclic, max_reexpansions):
    """Run the search; returns (g, pred, expanded, reexpansions, converged).

    ``reopen_closed`` re-opens settled cells on a strictly smaller label
    (label-correcting / inconsistent-heuristic A*). ``acyclic`` refuses any
    relaxation that would close a loop in the predecessor tree, which is
    required once step costs can be negative. Re-openings stop after
    ``max_reexpansions``; ``converged`` is False in that case.
    """
    nr, nc = blocked.shape
    size = nr * nc
    g = np.full(size, np.inf)
    fkey = np.full(size, np.inf)
    pred = np.full(size, -1, dtype=np.int64)
    closed = np.zeros(size, dtype=np.bool_)
    popped = np.zeros(size, dtype=np.bool_)
    sr = stop // nc
    sc = stop % nc

    g[start] = 0.0
    f0 = _heuristic(heur, radio, alpha, start // nc, start % nc, sr, sc)
    fkey[start] = f0
    heap = [(f0, start)]
    expanded = 0
    reexp = 0
    converged = True

    while len(heap) > 0:
        f, u = heapq.heappop(heap)
        if closed[u] or f != fkey[u]:
            continue
        closed[u] = True
        expanded += 1
        if popped[u]:
            reexp += 1
        popped[u] = True
        if early_exit and u == stop:
            break
        ur = u // nc
        uc = u % nc
        gu = g[u]
        for k in range(8):
            vr = ur + _DR[k]
            vc = uc + _DC[k]
            if vr < 0 or vr >= nr or vc < 0 or vc >= nc:
                continue
            if blocked[vr, vc]:
                continue
            v = vr * nc + vc
            step = 1.0 if (_DR[k] == 0 or _DC[k] == 0) else _SQRT2
            if weighted:
                step = (1.0 - alpha * radio[vr, vc]) * step
            nd = gu + step
            if closed[v]:
                if not reopen_closed or not (nd < g[v] - _REOPEN_TOL):
                    continue
            elif not (nd < g[v]):
                continue
            if acyclic and _is_ancestor(pred, u, v):
                continue
            if closed[v] and reexp >= max_reexpansions:
                converged = False
                continue
            g[v] = nd
            pred[v] = u
            closed[v] = False
            fv = nd + _heuristic(heur, radio, alpha, vr, vc, sr, sc)
            fkey[v] = fv
            heapq.heappush(heap, (fv, v))
    return g, pred, expanded, reexp, converged


@njit(cache=True)
def trace_back(pred, start, stop):
    out = [stop]
    w = stop
    while w != start:
        w = pred[w]
        if w == -1 or len(out) > pred.size:
            return np.empty(0, dtype=np.int64)
        out.append(w)
    res = np.empty(len(out), dtype=np.int64)
    for i in range(len(out)):
        res[i] = out[len(out) - 1 - i]
    return res
