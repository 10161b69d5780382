"""Independent brute-force oracles for the class enumerations.

The library's primary enumerator walks coordinate vectors positionally.  The
oracle here is deliberately structured differently: it walks descending value
multisets (with sum and square-sum pruning) and then expands each solution
multiset through its distinct permutations.  Counts and class sets from the
two routes must agree exactly.

Shared search frame: classes dH - sum(m_i E_i) on the blow-up of P^2 at r
points, with

    exceptional:  d^2 - sum m_i^2 = -1,  3d - sum m_i = 1
    conic:        d^2 - sum m_i^2 =  0,  3d - sum m_i = 2

Cauchy-Schwarz bounds the degree: (3d - k)^2 <= r (d^2 + eps) with
(k, eps) = (1, 1) or (2, 0), and each entry by |m_i| <= isqrt(d^2 + eps).
"""

from math import isqrt


def _multisets(k, hi, lo, total, sq_total):
    """Descending k-tuples with entries in [lo, hi], given sum and square sum."""
    if k == 0:
        if total == 0 and sq_total == 0:
            yield ()
        return
    for v in range(hi, lo - 1, -1):
        rest_s = total - v
        rest_q = sq_total - v * v
        if rest_q < 0:
            continue
        # remaining entries are <= v and >= lo
        if rest_s > (k - 1) * v or rest_s < (k - 1) * lo:
            continue
        if rest_s * rest_s > (k - 1) * rest_q and k > 1:
            continue
        for tail in _multisets(k - 1, v, lo, rest_s, rest_q):
            yield (v,) + tail


def _distinct_permutations(values):
    seen = set()
    # values is short (r <= 8); filtering itertools.permutations is fine
    from itertools import permutations

    for p in permutations(values):
        if p not in seen:
            seen.add(p)
            yield p


def _solutions(r, d, m_sum, m_sq):
    """All length-r multiplicity vectors with the given sum and square sum."""
    if r == 0:
        return [()] if m_sum == 0 and m_sq == 0 else []
    bound = isqrt(m_sq) if m_sq >= 0 else -1
    out = []
    for mult in _multisets(r, bound, -bound, m_sum, m_sq):
        out.extend(_distinct_permutations(mult))
    return out


def oracle_exceptional(r):
    """Multiplicity vectors (m_1..m_r) with degrees, as (d, m) tuples."""
    found = []
    d = 0
    while (3 * d - 1) ** 2 <= r * (d * d + 1) or d == 0:
        for m in _solutions(r, d, 3 * d - 1, d * d + 1):
            found.append((d, m))
        d += 1
    # the d = 0 equations force exactly one m_i = -1 (sum -1, square sum 1),
    # i.e. the classes E_i themselves; no extra effectivity filter is needed
    return sorted(found)


def oracle_conic(r):
    found = []
    d = 1
    while (3 * d - 2) ** 2 <= r * d * d:
        for m in _solutions(r, d, 3 * d - 2, d * d):
            found.append((d, m))
        d += 1
    return sorted(found)


def signature_histogram(classes):
    """Group (d, m) tuples by (d, descending multiset of m)."""
    hist = {}
    for d, m in classes:
        key = (d, tuple(sorted(m, reverse=True)))
        hist[key] = hist.get(key, 0) + 1
    return hist


if __name__ == "__main__":
    import time

    t0 = time.perf_counter()
    print("exceptional counts r=0..8:",
          [len(oracle_exceptional(r)) for r in range(9)])
    print("conic counts r=1..8:",
          [len(oracle_conic(r)) for r in range(1, 9)])
    sev = oracle_conic(7)
    print("r=7 orbit histogram:")
    for key, n in sorted(signature_histogram(sev).items()):
        print("   ", key, "->", n)
    eight = oracle_conic(8)
    per_degree = {}
    for d, m in eight:
        per_degree[d] = per_degree.get(d, 0) + 1
    print("r=8 conic per-degree:", sorted(per_degree.items()))
    print("r=8 signature count:", len(signature_histogram(eight)))
    print("elapsed: %.3fs" % (time.perf_counter() - t0))
