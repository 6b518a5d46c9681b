"""Combining operations on joint distributions and alphabet-size control.

Two operations build new joint distributions out of a pair (A, B):

* ``op_minus`` models the xor of the two inputs; its output alphabet is the
  pair (y0, y1), flattened y0-major.
* ``op_plus`` models the second input with the xor revealed; its output
  alphabet is the triple (u0, y0, y1), flattened u0-major then y0.

Two one-output distributions play a special role: the "superb" distribution
(input known to be 0) and the "pitiful" one (uniform input, no information).
Combinations involving them reduce, up to equivalence, to a nine-cell lookup
per operation (``table_simplify``), which mirrors the symbol tables of the
transform module under the substitution s -> superb, p -> pitiful.

``canonicalize`` removes zero-mass outputs and merges outputs with equal
posteriors; ``degrade_merge`` caps the alphabet at a budget ``mu`` by greedy
pairwise merging (adjacent in posterior order, smallest conditional-entropy
increase first) and can emit the stochastic map certifying that the result
is degraded from the input.
"""

from __future__ import annotations

import math

import numpy as np

from .channels import JointDist

GENERIC = "generic"
SUPERB = "superb"
PITIFUL = "pitiful"

# Posteriors closer than this merge during canonicalization; keeps
# floating-point noise from inflating alphabets while moving Z/K/H by
# less than ~1e-9.
POSTERIOR_TOL = 1e-9

__all__ = [
    "GENERIC",
    "SUPERB",
    "PITIFUL",
    "POSTERIOR_TOL",
    "special_superb",
    "special_pitiful",
    "op_minus",
    "op_plus",
    "canonicalize",
    "detect_tag",
    "table_simplify",
    "degrade_merge",
]


def special_superb() -> JointDist:
    """Single uninformative output, input pinned to 0."""
    return JointDist(np.array([[1.0], [0.0]]), tag=SUPERB)


def special_pitiful() -> JointDist:
    """Single uninformative output, uniform input."""
    return JointDist(np.array([[0.5], [0.5]]), tag=PITIFUL)


def op_minus(a: JointDist, b: JointDist) -> JointDist:
    """Joint distribution of (x0 xor x1; y0, y1)."""
    a0, a1 = a.mass
    b0, b1 = b.mass
    row0 = np.outer(a0, b0) + np.outer(a1, b1)
    row1 = np.outer(a1, b0) + np.outer(a0, b1)
    return JointDist(np.stack([row0.ravel(), row1.ravel()]))


def op_plus(a: JointDist, b: JointDist) -> JointDist:
    """Joint distribution of (x1; x0 xor x1, y0, y1)."""
    a0, a1 = a.mass
    b0, b1 = b.mass
    row0 = np.concatenate([np.outer(a0, b0).ravel(), np.outer(a1, b0).ravel()])
    row1 = np.concatenate([np.outer(a1, b1).ravel(), np.outer(a0, b1).ravel()])
    return JointDist(np.stack([row0, row1]))


def canonicalize(a: JointDist) -> JointDist:
    """Equivalence-preserving cleanup.

    Drops zero-mass outputs, merges outputs whose posteriors agree within
    ``POSTERIOR_TOL``, and orders the result by posterior.  Z, K and H are
    unchanged up to the merge tolerance.
    """
    mass = a.mass
    totals = mass.sum(axis=0)
    keep = totals > 0.0
    if not keep.all():
        mass = mass[:, keep]
        totals = totals[keep]
    q = mass[0] / totals
    order = np.argsort(q, kind="stable")
    q = q[order]
    mass = mass[:, order]
    # group boundaries where the posterior gap exceeds the tolerance
    starts = np.flatnonzero(np.concatenate([[True], np.diff(q) > POSTERIOR_TOL]))
    if starts.size == mass.shape[1]:
        merged = mass
    else:
        merged = np.stack([np.add.reduceat(mass[0], starts),
                           np.add.reduceat(mass[1], starts)])
    return JointDist(merged, tag=a.tag)


def detect_tag(a: JointDist) -> str:
    """Tag a distribution as superb/pitiful only on exact canonical equality."""
    c = canonicalize(a)
    if c.num_outputs != 1:
        return GENERIC
    if c.mass[0, 0] == 1.0 and c.mass[1, 0] == 0.0:
        return SUPERB
    if c.mass[0, 0] == 0.5 and c.mass[1, 0] == 0.5:
        return PITIFUL
    return GENERIC


def table_simplify(op: str, a: JointDist, b: JointDist) -> JointDist:
    """Apply ``op_minus``/``op_plus`` with tag shortcuts.

    When either operand is tagged superb or pitiful the result is read off a
    lookup (up to equivalence) instead of being computed; results inherit the
    surviving operand unchanged.
    """
    ta, tb = a.tag, b.tag
    if op == "minus":
        if ta == PITIFUL or tb == PITIFUL:
            return special_pitiful()
        if ta == SUPERB:
            return b
        if tb == SUPERB:
            return a
        return op_minus(a, b)
    if op == "plus":
        if ta == SUPERB or tb == SUPERB:
            return special_superb()
        if ta == PITIFUL:
            return b
        if tb == PITIFUL:
            return a
        return op_plus(a, b)
    raise ValueError(f"unknown operation {op!r}")


# --------------------------------------------------------------------------
# greedy degrading merge
# --------------------------------------------------------------------------

def _greedy_merge_groups(p0, p1, mu):  # pragma: no cover - exercised via wrapper
    """Group assignment for columns sorted by posterior.

    Repeatedly merges the adjacent pair with the smallest conditional-entropy
    increase until at most ``mu`` groups remain.  The merge sequence does not
    depend on ``mu`` (``mu`` is only the stopping point), so smaller budgets
    yield coarsenings of larger ones.

    Implemented as an indexed binary heap over "left columns": each live
    column i with a live right neighbour owns the cost of merging that pair.
    """
    m = p0.shape[0]
    nxt = np.empty(m, dtype=np.int64)
    prv = np.empty(m, dtype=np.int64)
    for i in range(m):
        nxt[i] = i + 1
        prv[i] = i - 1
    alive = np.ones(m, dtype=np.bool_)
    parent = np.full(m, -1, dtype=np.int64)
    ent = np.empty(m, dtype=np.float64)
    for i in range(m):
        h = 0.0
        t = p0[i] + p1[i]
        if p0[i] > 0.0:
            h -= p0[i] * math.log2(p0[i] / t)
        if p1[i] > 0.0:
            h -= p1[i] * math.log2(p1[i] / t)
        ent[i] = h

    cost = np.empty(m, dtype=np.float64)
    heap = np.empty(m, dtype=np.int64)
    pos = np.full(m, -1, dtype=np.int64)

    def pair_cost(i, j):
        a0 = p0[i] + p0[j]
        a1 = p1[i] + p1[j]
        t = a0 + a1
        h = 0.0
        if a0 > 0.0:
            h -= a0 * math.log2(a0 / t)
        if a1 > 0.0:
            h -= a1 * math.log2(a1 / t)
        return h - ent[i] - ent[j]

    def less(i, j):
        # ties resolve toward the lower (smaller-posterior) column
        if cost[i] != cost[j]:
            return cost[i] < cost[j]
        return i < j

    def sift_up(k):
        while k > 0:
            par = (k - 1) >> 1
            if less(heap[k], heap[par]):
                heap[k], heap[par] = heap[par], heap[k]
                pos[heap[k]] = k
                pos[heap[par]] = par
                k = par
            else:
                break
        return k

    def sift_down(k, size):
        while True:
            left = 2 * k + 1
            if left >= size:
                break
            best = left
            right = left + 1
            if right < size and less(heap[right], heap[left]):
                best = right
            if less(heap[best], heap[k]):
                heap[k], heap[best] = heap[best], heap[k]
                pos[heap[k]] = k
                pos[heap[best]] = best
                k = best
            else:
                break
        return k

    size = m - 1
    for i in range(size):
        cost[i] = pair_cost(i, i + 1)
        heap[i] = i
        pos[i] = i
    for k in range(size // 2 - 1, -1, -1):
        sift_down(k, size)

    def remove(i, size):
        # drop column i's heap entry, if any
        k = pos[i]
        if k < 0:
            return size
        size -= 1
        last = heap[size]
        pos[i] = -1
        if k != size:
            heap[k] = last
            pos[last] = k
            k2 = sift_up(k)
            if k2 == k:
                sift_down(k, size)
        return size

    def update(i, size):
        cost[i] = pair_cost(i, nxt[i])
        k = pos[i]
        if k < 0:
            heap[size] = i
            pos[i] = size
            size += 1
            sift_up(size - 1)
        else:
            k2 = sift_up(k)
            if k2 == k:
                sift_down(k, size)
        return size

    count = m
    while count > mu and size > 0:
        i = heap[0]
        j = nxt[i]
        p0[i] += p0[j]
        p1[i] += p1[j]
        h = 0.0
        t = p0[i] + p1[i]
        if p0[i] > 0.0:
            h -= p0[i] * math.log2(p0[i] / t)
        if p1[i] > 0.0:
            h -= p1[i] * math.log2(p1[i] / t)
        ent[i] = h
        alive[j] = False
        parent[j] = i
        nxt[i] = nxt[j]
        if nxt[j] < m:
            prv[nxt[j]] = i
        count -= 1
        size = remove(j, size)
        if nxt[i] < m:
            size = update(i, size)
        else:
            size = remove(i, size)
        if prv[i] >= 0:
            size = update(prv[i], size)

    groups = np.empty(m, dtype=np.int64)
    rank = np.full(m, -1, dtype=np.int64)
    r = 0
    for i in range(m):
        if alive[i]:
            rank[i] = r
            r += 1
    for i in range(m):
        j = i
        while parent[j] >= 0:
            j = parent[j]
        groups[i] = rank[j]
    return groups


try:  # the merge loop is sequential; JIT it when numba is available
    import numba

    _greedy_merge_groups_jit = numba.njit(cache=True)(_greedy_merge_groups)
except ImportError:  # pragma: no cover
    _greedy_merge_groups_jit = _greedy_merge_groups


def degrade_merge(a: JointDist, mu: int, return_witness: bool = False):
    """Cap the output alphabet at ``mu`` symbols by degrading merges.

    Returns the merged distribution; with ``return_witness=True`` also
    returns the column-stochastic table Q such that the result equals the
    input pushed through Q (a deterministic symbol-grouping kernel).
    """
    if mu < 2:
        raise ValueError(f"merge budget must be at least 2, got {mu}")
    m = a.num_outputs
    if m <= mu:
        if return_witness:
            return a, np.eye(m)
        return a
    totals = a.mass.sum(axis=0)
    q = np.where(totals > 0.0, a.mass[0] / np.where(totals > 0.0, totals, 1.0), 0.5)
    order = np.argsort(q, kind="stable")
    p0 = a.mass[0, order].copy()
    p1 = a.mass[1, order].copy()
    groups_sorted = _greedy_merge_groups_jit(p0, p1, mu)
    n_groups = int(groups_sorted.max()) + 1
    groups = np.empty(m, dtype=np.int64)
    groups[order] = groups_sorted
    merged = np.zeros((2, n_groups))
    np.add.at(merged[0], groups, a.mass[0])
    np.add.at(merged[1], groups, a.mass[1])
    out = JointDist(merged, tag=a.tag if n_groups == m else GENERIC)
    if return_witness:
        witness = np.zeros((n_groups, m))
        witness[groups, np.arange(m)] = 1.0
        return out, witness
    return out
