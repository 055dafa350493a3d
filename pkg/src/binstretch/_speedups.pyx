# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bin packing kernel.

Mirrors ``binstretch._pykernel.pack_bins`` exactly: same search order,
same symmetry handling, same memoization, so it is a drop-in
replacement returning identical assignments. See the pure module for
the algorithm notes.
"""

from cpython cimport array
import array

DEF MAX_BINS = 64


cdef bint _dfs(int i, int n, int m, int[::1] sizes, int[::1] free_,
               int[::1] assign, set dead) except? 0:
    cdef int b, r, s, k, j, v, ntried
    cdef int srt[MAX_BINS]
    cdef int tried[MAX_BINS]
    cdef bint dup

    if i == n:
        return True

    for b in range(m):
        srt[b] = free_[b]
    for b in range(1, m):
        v = srt[b]
        j = b - 1
        while j >= 0 and srt[j] > v:
            srt[j + 1] = srt[j]
            j -= 1
        srt[j + 1] = v
    key = (i, tuple([srt[b] for b in range(m)]))
    if key in dead:
        return False

    s = sizes[i]
    ntried = 0
    for b in range(m):
        r = free_[b]
        if r < s:
            continue
        dup = False
        for k in range(ntried):
            if tried[k] == r:
                dup = True
                break
        if dup:
            continue
        tried[ntried] = r
        ntried += 1
        free_[b] = r - s
        assign[i] = b
        if _dfs(i + 1, n, m, sizes, free_, assign, dead):
            return True
        free_[b] = r
    assign[i] = -1
    dead.add(key)
    return False


def pack_bins(sizes, m, capacity):
    """Assign every size to one of ``m`` bins of ``capacity``.

    Returns a list mapping item position -> bin index, or None when no
    assignment exists.
    """
    cdef int mm = m
    cdef int cap = capacity
    cdef int n = len(sizes)
    cdef int i
    cdef long long total = 0

    if mm < 1:
        raise ValueError(f"need at least one bin, got m={m}")
    if mm > MAX_BINS:
        raise ValueError(f"compiled kernel supports at most {MAX_BINS} bins")
    if cap < 0:
        raise ValueError(f"capacity must be nonnegative, got {capacity}")
    if n == 0:
        return []

    cdef array.array size_arr = array.array("i", sizes)
    cdef int[::1] size_view = size_arr
    cdef int biggest = size_view[0]
    for i in range(n):
        if size_view[i] > biggest:
            biggest = size_view[i]
        total += size_view[i]
    if biggest > cap or total > <long long> mm * cap:
        return None

    cdef array.array free_arr = array.array("i", [cap] * mm)
    cdef array.array assign_arr = array.array("i", [-1] * n)
    cdef int[::1] free_view = free_arr
    cdef int[::1] assign_view = assign_arr
    cdef set dead = set()

    if _dfs(0, n, mm, size_view, free_view, assign_view, dead):
        return [assign_view[i] for i in range(n)]
    return None
