"""Pairs of conic fibration classes: degree, finiteness, degree bounds.

A pair (c1, c2) of distinct conic classes on BlowupP2(r) induces a map to
P^1 x P^1 whose degree is the pairing c1.c2.  The map is finite exactly when
that degree is positive and no curve is contracted by both fibrations.
"Contracted by both" is decided against the exceptional classes only: on
these lattices every irreducible class with negative square is exceptional,
and a common irreducible fiber would force degree 0, which is reported
separately through the degree field.

The signature-(1, r) index bound 2 K^2 (c1.c2) <= (K.c1 + K.c2)^2 caps the
degree at 8 / K^2 for conic pairs (the right side is 16).

The full-rank pair scans (rank 8 has 2160 conic classes, about 2.3 million
unordered pairs) run on numpy int64 Gram matrices.  Entries are bounded by
9 * 11^2 (coordinates never exceed 11 in absolute value, checked before the
multiply), so 64-bit arithmetic is exact.  Shared-contraction masks are
computed as an indicator-matrix product in float64, where every value is a
count of at most 240 and therefore exactly representable.  The env var
PICARDKIT_THREADS caps the thread count of the blocked product (0 = auto).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curves import (
    ClassFamily,
    OrbitSignature,
    enumerate_conic,
    enumerate_exceptional,
    is_conic,
    orbit_signature,
)
from .lattice import DivisorClass, SurfaceModel, canonical_class, pairing

BLOCK_ROWS = 512


@dataclass(frozen=True)
class FibrationPair:
    model: SurfaceModel
    c1: DivisorClass
    c2: DivisorClass

    def __post_init__(self) -> None:
        for c in (self.c1, self.c2):
            if c.model != self.model:
                raise ValueError(f"{c} does not live in {self.model}")
            if not is_conic(c):
                raise ValueError(f"{c} is not a conic fibration class")
        if self.c1 == self.c2:
            raise ValueError("fibration pair needs two distinct classes")


@dataclass(frozen=True)
class FinitenessReport:
    degree: int
    common_contracted: tuple[DivisorClass, ...]
    is_finite: bool


@dataclass(frozen=True)
class HodgeBound:
    lhs: int
    rhs: int
    holds: bool


@dataclass(frozen=True)
class PairClassEntry:
    """One group of finite pairs: unordered signature pair, degree, count."""

    signature_pair: tuple[OrbitSignature, OrbitSignature]
    degree: int
    count: int


@dataclass(frozen=True)
class PairScanSummary:
    """Whole-rank facts about the set of unordered conic pairs."""

    rank: int
    class_count: int
    pair_count: int
    max_degree: int
    hodge_holds: bool
    finite_pair_count: int
    finite_degrees: tuple[int, ...]


def analyze_pair(pair: FibrationPair,
                 exceptional: ClassFamily | None = None) -> FinitenessReport:
    """Degree, commonly contracted exceptional classes, and finiteness."""
    if exceptional is None:
        exceptional = enumerate_exceptional(pair.model.size)
    elif exceptional.model != pair.model:
        raise ValueError("exceptional family from a different model")
    degree = pairing(pair.c1, pair.c2)
    contracted = tuple(
        e for e in exceptional
        if pairing(e, pair.c1) == 0 and pairing(e, pair.c2) == 0
    )
    return FinitenessReport(
        degree=degree,
        common_contracted=contracted,
        is_finite=degree > 0 and not contracted,
    )


def hodge_bound(model: SurfaceModel, c1: DivisorClass,
                c2: DivisorClass) -> HodgeBound:
    """Index-theorem inequality 2 K^2 (c1.c2) <= (K.c1 + K.c2)^2 for
    square-zero classes."""
    if model.kind != "BlowupP2":
        raise ValueError("hodge_bound needs a BlowupP2 model")
    for c in (c1, c2):
        if c.model != model:
            raise ValueError(f"{c} does not live in {model}")
        if pairing(c, c) != 0:
            raise ValueError(f"{c} is not square-zero")
    k = canonical_class(model)
    lhs = 2 * pairing(k, k) * pairing(c1, c2)
    rhs = (pairing(k, c1) + pairing(k, c2)) ** 2
    return HodgeBound(lhs=lhs, rhs=rhs, holds=lhs <= rhs)


def max_degree_bound(r: int) -> int:
    """Degree cap floor(8 / K^2) for finite conic pairs on BlowupP2(r)."""
    if not 1 <= r <= 8:
        raise ValueError(f"need 1 <= r <= 8, got {r}")
    return 8 // (9 - r)


def _thread_budget() -> int:
    raw = os.environ.get("PICARDKIT_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"PICARDKIT_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError(f"PICARDKIT_THREADS must be >= 0, got {n}")
    if n == 0:
        return min(os.cpu_count() or 1, 8)
    return n


def _coord_matrix(fam: ClassFamily) -> np.ndarray:
    return np.array([c.coords for c in fam], dtype=np.int64)


def _pair_tables(r: int):
    """Degrees and shared-contraction mask over all conic-class pairs.

    Returns (conic family, degree matrix G with G[i,j] = c_i.c_j, and a
    boolean matrix marking pairs that share a contracted exceptional class).
    """
    fam = enumerate_conic(r)
    exc = enumerate_exceptional(r)
    C = _coord_matrix(fam)
    E = _coord_matrix(exc)
    if max(np.abs(C).max(), np.abs(E).max(initial=0)) > 2 ** 20:
        raise ValueError("coordinates too large for the 64-bit fast path")
    CJ = C.copy()
    CJ[:, 1:] *= -1
    G = CJ @ C.T
    # indicator of "this exceptional class is contracted by this fibration"
    Z = ((CJ @ E.T) == 0).astype(np.float64) if len(exc) else \
        np.zeros((len(fam), 0))
    n = Z.shape[0]
    shared = np.empty((n, n), dtype=bool)

    def fill(lo: int, hi: int) -> None:
        # exact: each entry counts shared zeros, an integer <= 240
        shared[lo:hi] = (Z[lo:hi] @ Z.T) > 0.5

    blocks = [(lo, min(lo + BLOCK_ROWS, n)) for lo in range(0, n, BLOCK_ROWS)]
    workers = min(_thread_budget(), len(blocks)) if blocks else 1
    if workers <= 1:
        for lo, hi in blocks:
            fill(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: fill(*b), blocks))
    return fam, G, shared


def scan_conic_pairs(r: int) -> PairScanSummary:
    """Exhaustive facts over every unordered pair of conic classes."""
    fam, G, shared = _pair_tables(r)
    n = len(fam)
    if n < 2:
        return PairScanSummary(r, n, 0, 0, True, 0, ())
    iu = np.triu_indices(n, 1)
    degrees = G[iu]
    max_degree = int(degrees.max())
    k_sq = 9 - r
    finite = (degrees > 0) & ~shared[iu]
    fin_deg = degrees[finite]
    return PairScanSummary(
        rank=r,
        class_count=n,
        pair_count=len(degrees),
        max_degree=max_degree,
        hodge_holds=2 * k_sq * max_degree <= 16,
        finite_pair_count=int(finite.sum()),
        finite_degrees=tuple(int(d) for d in np.unique(fin_deg)),
    )


def classify_finite_pairs(r: int) -> list[PairClassEntry]:
    """Group all finite unordered conic pairs by signature pair and degree.

    Entries are sorted by (first signature, second signature, degree); each
    signature pair is ordered with the smaller signature first.
    """
    fam, G, shared = _pair_tables(r)
    n = len(fam)
    if n < 2:
        return []
    sigs = [orbit_signature(c) for c in fam]
    unique = sorted(set(sigs),
                    key=lambda s: (s.degree, s.multiplicities))
    index = {s: i for i, s in enumerate(unique)}
    sig_ids = np.array([index[s] for s in sigs], dtype=np.int64)

    ii, jj = np.triu_indices(n, 1)
    finite = (G[ii, jj] > 0) & ~shared[ii, jj]
    ii, jj = ii[finite], jj[finite]
    deg = G[ii, jj]
    a = np.minimum(sig_ids[ii], sig_ids[jj])
    b = np.maximum(sig_ids[ii], sig_ids[jj])
    # composite key; degree <= 8 < 32 by the index bound
    key = (a * len(unique) + b) * 32 + deg
    values, counts = np.unique(key, return_counts=True)
    out = []
    for v, cnt in zip(values.tolist(), counts.tolist()):
        d = v % 32
        ab = v // 32
        out.append(PairClassEntry(
            signature_pair=(unique[ab // len(unique)], unique[ab % len(unique)]),
            degree=int(d),
            count=int(cnt),
        ))
    return out
