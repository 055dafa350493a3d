"""Pure-Python bin packing kernel: exact witness search.

Fallback for the compiled extension ``binstretch._speedups``; both run
the same depth-first search, so they return identical assignments:

* items are consumed in the order given (callers pass them sorted
  non-increasing, which is what makes the search fast),
* for each item, bins sharing a residual capacity are tried once,
* (item index, sorted residual profile) states that failed are
  memoized for the rest of the call.

Exactness does not depend on the item order or the symmetry rules;
they only cut the search.
"""


def pack_bins(sizes, m, capacity):
    """Assign every size to one of ``m`` bins of ``capacity``.

    Returns a list mapping item position -> bin index, or None when no
    assignment exists.
    """
    if m < 1:
        raise ValueError(f"need at least one bin, got m={m}")
    if capacity < 0:
        raise ValueError(f"capacity must be nonnegative, got {capacity}")
    n = len(sizes)
    if n == 0:
        return []
    if max(sizes) > capacity or sum(sizes) > m * capacity:
        return None

    free = [capacity] * m
    assign = [-1] * n
    dead = set()

    def dfs(i):
        if i == n:
            return True
        key = (i, tuple(sorted(free)))
        if key in dead:
            return False
        s = sizes[i]
        tried = set()
        for b in range(m):
            r = free[b]
            if r < s or r in tried:
                continue
            tried.add(r)
            free[b] = r - s
            assign[i] = b
            if dfs(i + 1):
                return True
            free[b] = r
        assign[i] = -1
        dead.add(key)
        return False

    return assign if dfs(0) else None
