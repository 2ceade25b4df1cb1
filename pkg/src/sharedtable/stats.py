"""Two-sided Wilcoxon signed-rank test.

Exact null distribution by sign enumeration for small samples (n <= 12 after
dropping zero differences), normal approximation with continuity correction
above.  Ties get average ranks; zero differences are dropped.
"""

from __future__ import annotations

import math


class AllZeroDifferences(Exception):
    pass


EXACT_LIMIT = 12


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def wilcoxon_signed_rank(pairs: list[tuple[float, float]]) -> tuple[float, float]:
    """(W, two-sided p) for paired samples; W = min of the signed rank sums."""
    diffs = [x - y for x, y in pairs if x != y]
    if not diffs:
        raise AllZeroDifferences("every paired difference is zero")
    n = len(diffs)
    ranks = _average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for d, r in zip(diffs, ranks) if d > 0)
    w_minus = sum(r for d, r in zip(diffs, ranks) if d < 0)
    w = min(w_plus, w_minus)
    total = w_plus + w_minus

    if n <= EXACT_LIMIT:
        # Enumerate all sign assignments of the observed ranks.
        eps = 1e-9
        count = 0
        for mask in range(1 << n):
            t = 0.0
            for i in range(n):
                if mask >> i & 1:
                    t += ranks[i]
            if t <= w + eps or t >= total - w - eps:
                count += 1
        p = count / (1 << n)
    else:
        mu = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0
        # Tie correction on the rank variance.
        seen: dict[float, int] = {}
        for d in diffs:
            seen[abs(d)] = seen.get(abs(d), 0) + 1
        var -= sum(t**3 - t for t in seen.values()) / 48.0
        sigma = math.sqrt(var)
        z = (w - mu + 0.5) / sigma
        p = 2.0 * 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))
    return w, min(1.0, p)
