# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Integer breadth-first orbit closure, the hot loop behind enumerate_orbit.

Operates on the lcm-scaled integer form of a system.  The caller verifies
that every intermediate fits comfortably in 64 bits; see orbit.py for the
dispatch and the bound.
"""

from libc.stdint cimport int64_t
from libcpp.algorithm cimport sort
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector


def bfs_integer(ratios, offsets, long long seed, long long expand_cap,
                long long record_cap, long long node_budget):
    """Closure of the seed's images under y -> r*y + b, pruned at expand_cap.

    Returns (sorted points with |p| <= record_cap, complete flag,
    insertions used).  Semantics match the pure-Python walk exactly on
    complete runs.
    """
    cdef int m = len(ratios)
    cdef vector[int64_t] rs
    cdef vector[int64_t] bs
    cdef int i
    for i in range(m):
        rs.push_back(ratios[i])
        bs.push_back(offsets[i])

    cdef unordered_set[int64_t] seen
    cdef vector[int64_t] queue
    cdef size_t head = 0
    cdef long long used = 0
    cdef bint complete = True
    cdef int64_t x = seed
    cdef int64_t v, mag

    while True:
        for i in range(m):
            v = rs[i] * x + bs[i]
            mag = v if v >= 0 else -v
            if mag > expand_cap:
                continue
            if seen.count(v):
                continue
            if used >= node_budget:
                complete = False
                break
            seen.insert(v)
            queue.push_back(v)
            used += 1
        if not complete or head >= queue.size():
            break
        x = queue[head]
        head += 1

    cdef vector[int64_t] out
    cdef int64_t w
    for w in seen:
        mag = w if w >= 0 else -w
        if mag <= record_cap:
            out.push_back(w)
    sort(out.begin(), out.end())
    cdef list points = [out[j] for j in range(out.size())]
    return points, complete, used
