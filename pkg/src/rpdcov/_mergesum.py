"""Merge-based weighted inversion counting.

The O(n log n) distance-covariance path needs, for every position j, the
sums of several weight channels over the predecessors i < j whose key is
strictly smaller (``vals[i] < vals[j]``).  A bottom-up stable merge over
the key array accumulates all four channels in one pass: whenever an
element of the right run is emitted, the running totals of the left-run
elements already consumed (all strictly smaller) are added to its output
slots.  Equal keys are emitted right-run first so they are never counted.

All accumulation is sequential left-to-right, so results are reproducible
bit for bit across runs.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def smaller_prefix_sums(vals, w1, w2, w3):  # pragma: no cover - jitted
    n = vals.shape[0]
    idx = np.arange(n)
    tmp = np.empty(n, np.int64)
    cnt = np.zeros(n)
    s1 = np.zeros(n)
    s2 = np.zeros(n)
    s3 = np.zeros(n)
    width = 1
    while width < n:
        lo = 0
        while lo < n - width:
            mid = lo + width
            hi = min(lo + 2 * width, n)
            i = lo
            j = mid
            k = lo
            ac = 0.0
            a1 = 0.0
            a2 = 0.0
            a3 = 0.0
            while i < mid and j < hi:
                li = idx[i]
                rj = idx[j]
                if vals[li] < vals[rj]:
                    ac += 1.0
                    a1 += w1[li]
                    a2 += w2[li]
                    a3 += w3[li]
                    tmp[k] = li
                    i += 1
                else:
                    cnt[rj] += ac
                    s1[rj] += a1
                    s2[rj] += a2
                    s3[rj] += a3
                    tmp[k] = rj
                    j += 1
                k += 1
            while i < mid:
                tmp[k] = idx[i]
                i += 1
                k += 1
            while j < hi:
                rj = idx[j]
                cnt[rj] += ac
                s1[rj] += a1
                s2[rj] += a2
                s3[rj] += a3
                tmp[k] = rj
                j += 1
                k += 1
            for t in range(lo, hi):
                idx[t] = tmp[t]
            lo += 2 * width
        width *= 2
    return cnt, s1, s2, s3
