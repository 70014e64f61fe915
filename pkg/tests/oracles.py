"""Independent brute-force reference implementations used to referee the
library code. Deliberately slow and literal; kept free of msa_probe logic."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def max_matching_exhaustive(ref, est, window):
    """Maximum one-to-one matching cardinality by exhaustive search.

    Tries, for every reference event, every still-unused estimate within
    the window (or skipping it), memoized on (index, used-mask).
    """
    ref = list(ref)
    est = list(est)

    @lru_cache(maxsize=None)
    def go(i: int, used: int) -> int:
        if i == len(ref):
            return 0
        best = go(i + 1, used)  # leave ref[i] unmatched
        for j, e in enumerate(est):
            if not used & (1 << j) and abs(ref[i] - e) <= window:
                best = max(best, 1 + go(i + 1, used | (1 << j)))
        return best

    result = go(0, 0)
    go.cache_clear()
    return result


def pairwise_prf_bruteforce(y_ref, y_est):
    """Pairwise clustering P/R/F by explicit O(n^2) enumeration of pairs."""
    n = len(y_ref)
    assert len(y_est) == n
    both = ref_pairs = est_pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            r = y_ref[i] == y_ref[j]
            e = y_est[i] == y_est[j]
            ref_pairs += r
            est_pairs += e
            both += r and e
    precision = both / est_pairs if est_pairs else 0.0
    recall = both / ref_pairs if ref_pairs else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f


def label_at_naive(intervals, t):
    """Point-in-interval search over (start, end, class) triples."""
    for start, end, cls in intervals:
        if start <= t < end:
            return int(cls)
    return int(intervals[-1][2])


def accuracy_bruteforce(ref_intervals, est_intervals, duration, frame_rate):
    n = max(1, math.ceil(duration * frame_rate - 1e-9))
    hits = 0
    for k in range(n):
        center = (k + 0.5) / frame_rate
        hits += label_at_naive(ref_intervals, center) == label_at_naive(est_intervals, center)
    return hits / n


def sliding_pool_naive(data, frame_rate, window_s, hop_s):
    """Literal double-loop sliding average with the documented index rules."""
    data = np.asarray(data, dtype=np.float64)
    n = data.shape[0]
    count = max(1, math.ceil(n / (hop_s * frame_rate) - 1e-9))
    out = np.zeros((count, data.shape[1]))
    for i in range(count):
        start = min(math.floor(i * hop_s * frame_rate + 0.5), n - 1)
        end = min(math.floor((i * hop_s + window_s) * frame_rate + 0.5), n)
        end = max(end, start + 1)
        acc = np.zeros(data.shape[1])
        for r in range(start, end):
            acc += data[r]
        out[i] = acc / (end - start)
    return out


def adaptive_pool_naive(data, t):
    """Literal floor/ceil-bin adaptive average pooling."""
    data = np.asarray(data, dtype=np.float64)
    n = data.shape[0]
    out = np.zeros((t, data.shape[1]))
    for i in range(t):
        start = math.floor(i * n / t)
        end = math.ceil((i + 1) * n / t)
        acc = np.zeros(data.shape[1])
        for r in range(start, end):
            acc += data[r]
        out[i] = acc / (end - start)
    return out


def finite_diff_grads(loss_fn, weight, bias, h=1e-5):
    """Central finite differences of loss_fn(weight, bias) w.r.t. both."""
    gw = np.zeros_like(weight)
    for idx in np.ndindex(*weight.shape):
        wp = weight.copy()
        wm = weight.copy()
        wp[idx] += h
        wm[idx] -= h
        gw[idx] = (loss_fn(wp, bias) - loss_fn(wm, bias)) / (2 * h)
    gb = np.zeros_like(bias)
    for idx in np.ndindex(*bias.shape):
        bp = bias.copy()
        bm = bias.copy()
        bp[idx] += h
        bm[idx] -= h
        gb[idx] = (loss_fn(weight, bp) - loss_fn(weight, bm)) / (2 * h)
    return gw, gb
