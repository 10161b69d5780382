"""Exhaustive enumeration of distinguished curve classes on blow-up models.

Two families are enumerated on BlowupP2(r), writing classes as
dH - sum(m_i E_i):

* exceptional classes: c^2 = -1 and c.K = -1, i.e.
  d^2 - sum m_i^2 = -1 and 3d - sum m_i = 1;
* conic fibration classes: c^2 = 0 and c.K = -2, i.e.
  d^2 = sum m_i^2 and 3d - sum m_i = 2.

Cauchy-Schwarz caps the degree: (3d-1)^2 <= r(d^2+1) for exceptional
classes and (3d-2)^2 <= r d^2 for conic classes, and each multiplicity by
m_i^2 <= d^2 + 1.  The search is a positional depth-first walk over
multiplicity vectors inside those bounds, pruned by feasibility of the
remaining sum and square sum; the independent test oracle walks descending
multisets instead, so the two routes share no loop structure.

Degrees below zero are not curve classes and are never searched.  At d = 0
the equations admit only a single m_i = -1, i.e. the basis classes E_i;
an explicit filter enforces exactly that pattern anyway, since the lattice
equations alone say nothing about effectivity.  For d >= 1 every solution
of the exceptional system automatically has all m_i >= 0: were some
m_j <= -1, dropping it leaves sum' >= 3d and square budget <= d^2, and
Cauchy-Schwarz over at most 7 remaining coordinates would force
9d^2 <= 7d^2, impossible for d >= 1.  The conic system behaves the same
way ((3d-1)^2 <= 7(d^2-1) has no integer solutions at all).

Classes here live purely in the lattice.  Whether a class is realized by an
actual curve depends on the blown-up points being in general position,
which has no lattice counterpart; the enumerations assume it.

Output order is lexicographic on (d, multiplicity vector), so reports and
JSON renderings are stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Iterator

from .lattice import DivisorClass, SurfaceModel, canonical_class, pairing

EXCEPTIONAL = "exceptional"
CONIC = "conic"


@dataclass(frozen=True)
class OrbitSignature:
    """(degree, descending multiplicity multiset): the fingerprint of a
    class up to permutations of the blown-up points."""

    degree: int
    multiplicities: tuple[int, ...]

    def __str__(self) -> str:
        return f"({self.degree}; {','.join(map(str, self.multiplicities))})"


@dataclass(frozen=True)
class ClassFamily:
    model: SurfaceModel
    family_kind: str
    members: tuple[DivisorClass, ...]
    _member_set: frozenset = field(repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_member_set", frozenset(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[DivisorClass]:
        return iter(self.members)

    def __contains__(self, c: object) -> bool:
        return c in self._member_set


@dataclass(frozen=True)
class ReducibleFiber:
    """A conic-class decomposition into two exceptional components."""

    total: DivisorClass
    components: tuple[DivisorClass, DivisorClass]

    def __post_init__(self) -> None:
        a, b = self.components
        if a + b != self.total:
            raise ValueError("components do not sum to the fiber class")
        if pairing(a, a) != -1 or pairing(b, b) != -1 or pairing(a, b) != 1:
            raise ValueError("components are not exceptional classes meeting once")


def is_exceptional(c: DivisorClass) -> bool:
    k = canonical_class(c.model)
    return pairing(c, c) == -1 and pairing(c, k) == -1


def is_conic(c: DivisorClass) -> bool:
    k = canonical_class(c.model)
    return pairing(c, c) == 0 and pairing(c, k) == -2


def _mult_vectors(r: int, target_sum: int, target_sq: int):
    """Positional DFS over integer vectors m with the given sum and square
    sum, entries bounded by |m_i| <= isqrt(target_sq).  Lexicographic."""
    if target_sq < 0:
        return
    bound = isqrt(target_sq)
    prefix = [0] * r

    def rec(i: int, s: int, q: int):
        if i == r:
            if s == target_sum and q == target_sq:
                yield tuple(prefix)
            return
        k = r - i - 1  # entries after this one
        for v in range(-bound, bound + 1):
            q2 = q + v * v
            if q2 > target_sq:
                continue
            s2 = s + v
            rem_s = target_sum - s2
            rem_q = target_sq - q2
            if rem_s * rem_s > k * rem_q:
                continue  # Cauchy-Schwarz: unreachable sum
            if rem_q > k * bound * bound:
                continue  # not enough coordinates left to burn the budget
            prefix[i] = v
            yield from rec(i + 1, s2, q2)
        prefix[i] = 0

    yield from rec(0, 0, 0)


def enumerate_exceptional(r: int) -> ClassFamily:
    """All classes with c^2 = c.K = -1 on BlowupP2(r), 0 <= r <= 8."""
    model = SurfaceModel.blowup_p2(r)
    members = []
    d = 0
    while r >= 1 and (3 * d - 1) ** 2 <= r * (d * d + 1):
        for m in _mult_vectors(r, 3 * d - 1, d * d + 1):
            if d == 0:
                # effectivity filter: keep only the basis classes E_i
                if sorted(m) != [-1] + [0] * (r - 1):
                    continue
            members.append(DivisorClass.from_curve(model, d, m))
        d += 1
    return ClassFamily(model, EXCEPTIONAL, tuple(members))


def enumerate_conic(r: int) -> ClassFamily:
    """All classes with c^2 = 0, c.K = -2 on BlowupP2(r), 1 <= r <= 8."""
    if not 1 <= r <= 8:
        raise ValueError(f"conic enumeration needs 1 <= r <= 8, got {r}")
    model = SurfaceModel.blowup_p2(r)
    members = []
    d = 1
    while (3 * d - 2) ** 2 <= r * d * d:
        for m in _mult_vectors(r, 3 * d - 2, d * d):
            members.append(DivisorClass.from_curve(model, d, m))
        d += 1
    return ClassFamily(model, CONIC, tuple(members))


def orbit_signature(c: DivisorClass) -> OrbitSignature:
    """Degree plus the sorted multiplicity multiset of a blow-up class."""
    return OrbitSignature(c.degree,
                          tuple(sorted(c.multiplicities(), reverse=True)))


def reducible_fibers(c: DivisorClass,
                     fam: ClassFamily) -> list[ReducibleFiber]:
    """All splittings c = A + B into two exceptional classes with A.B = 1.

    Each unordered pair is listed once, ordered by the lexicographically
    smaller component.
    """
    if not is_conic(c):
        raise ValueError(f"{c} is not a conic fibration class")
    if fam.family_kind != EXCEPTIONAL:
        raise ValueError("reducible_fibers needs the exceptional family")
    if fam.model != c.model:
        raise ValueError("family and class live in different models")
    fibers = []
    for a in fam:
        b = c - a
        if a.coords < b.coords and b in fam and pairing(a, b) == 1:
            fibers.append(ReducibleFiber(c, (a, b)))
    fibers.sort(key=lambda f: f.components[0].coords)
    return fibers
