"""Exact rational polyhedral cones and the nef/psef/mori surface reports.

Everything here runs over exact arithmetic: integers for normalized rays
and facet normals, Fractions inside the two algorithms.  No floating point
is used anywhere.

* Double description: a cone given by halfspace normals is converted to
  generators by Motzkin-style incremental refinement.  Lineality is carried
  explicitly: processing a halfspace that cuts the current lineality space
  shrinks it by one dimension and emits the cut direction as a ray, so
  non-pointed intermediate cones are handled without perturbation.  Ray
  adjacency uses the combinatorial zero-set test (two rays combine only if
  no third ray's tight set contains the intersection of theirs), which
  keeps the description minimal at every step.
* Membership and extremality: a phase-I simplex over Fractions with Bland's
  rule decides whether a vector is a nonnegative combination of given
  generators.  This is the second, independent route to containment next
  to the facet-sign test, and the two are required to agree.

Normalization: rays and facet normals are scaled to primitive integer
vectors (denominators cleared, gcd divided out) with orientation preserved;
flipping the sign would change the ray or the halfspace.  Only lineality
line directions, where both signs belong to the cone, are canonicalized to
a positive leading coordinate.

Surface reports: the effective generators are classical and hard-coded
(basis classes H or E_i plus all exceptional classes, two rulings on
P1 x P1), then sanity-checked by pairing against -K, which must be strictly
positive on every generator.  The nef cone is stored by its facet normals,
the psef generators pushed through the intersection form; its generator
description is only materialized for the tiny models, because the nef cone
of a blow-up at many points has a combinatorially huge set of extremal rays
that nothing downstream needs.  The Mori cone of a blow-up model is
identified with the psef cone (divisor and curve classes coincide on a
surface); for ProductP1(n) it is the nonnegative orthant of curve classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .curves import enumerate_exceptional
from .lattice import DivisorClass, SurfaceModel, canonical_class, pairing

Vec = tuple[int, ...]


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _neg(v: Sequence) -> tuple:
    return tuple(-a for a in v)


def _primitive(vec: Sequence) -> Vec:
    """Clear denominators and divide by the gcd.  Orientation preserved."""
    fracs = [Fraction(v) for v in vec]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def _canon_line(vec: Sequence) -> Vec:
    """Primitive vector with positive leading entry: canonical form for a
    line direction, where both signs generate the same set."""
    p = _primitive(vec)
    for v in p:
        if v:
            return p if v > 0 else _neg(p)
    return p


def _rank(vectors: Iterable[Sequence]) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    rank = 0
    col = 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        rows[rank] = [a / lead for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _row_basis(vectors: Iterable[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon basis of the span, rows with leading entry 1."""
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    basis: list[list[Fraction]] = []
    for row in rows:
        row = row[:]
        for b in basis:
            lead = next(i for i, v in enumerate(b) if v)
            if row[lead]:
                f = row[lead]
                row = [a - f * c for a, c in zip(row, b)]
        if any(row):
            lead_val = next(v for v in row if v)
            row = [a / lead_val for a in row]
            basis.append(row)
            basis.sort(key=lambda b: next(i for i, v in enumerate(b) if v))
            # re-reduce upward so the basis stays in reduced form
            for i, b in enumerate(basis):
                lead = next(k for k, v in enumerate(b) if v)
                for j, other in enumerate(basis):
                    if i != j and other[lead]:
                        f = other[lead]
                        basis[j] = [a - f * c for a, c in zip(other, b)]
    return [b for b in basis if any(b)]


def _reduce_mod(vec: Sequence, basis: list[list[Fraction]]) -> Vec:
    """Canonical coset representative of vec modulo the span of basis."""
    row = [Fraction(v) for v in vec]
    for b in basis:
        lead = next(i for i, v in enumerate(b) if v)
        if row[lead]:
            f = row[lead]
            row = [a - f * c for a, c in zip(row, b)]
    return _primitive(row)


def in_cone_lp(generators: Sequence[Sequence], x: Sequence) -> bool:
    """Is x a nonnegative rational combination of the generators?

    Phase-I simplex with Bland's rule; exact Fractions throughout.
    """
    d = len(x)
    cols = [[Fraction(g[i]) for i in range(d)] for g in generators]
    m = len(cols)
    A = [[cols[j][i] for j in range(m)] for i in range(d)]
    b = [Fraction(v) for v in x]
    for i in range(d):
        if b[i] < 0:
            b[i] = -b[i]
            A[i] = [-a for a in A[i]]
    for i in range(d):
        A[i] += [Fraction(1 if k == i else 0) for k in range(d)]
    basis = list(range(m, m + d))
    obj = [sum(A[i][j] for i in range(d)) for j in range(m + d)]
    for k in range(d):
        obj[m + k] -= 1
    objval = sum(b)
    while True:
        enter = next((j for j in range(m + d) if obj[j] > 0), None)
        if enter is None:
            break
        pr = None
        best = None
        for i in range(d):
            a = A[i][enter]
            if a > 0:
                ratio = b[i] / a
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[pr]):
                    best, pr = ratio, i
        if pr is None:
            # cannot happen: the phase-I objective is bounded below by 0
            raise RuntimeError("unbounded phase-I simplex")
        piv = A[pr][enter]
        A[pr] = [a / piv for a in A[pr]]
        b[pr] /= piv
        for i in range(d):
            if i != pr and A[i][enter]:
                f = A[i][enter]
                A[i] = [a - f * p for a, p in zip(A[i], A[pr])]
                b[i] -= f * b[pr]
        f = obj[enter]
        obj = [o - f * p for o, p in zip(obj, A[pr])]
        objval -= f * b[pr]
        basis[pr] = enter
    return objval == 0


def _dual_description(normals: Sequence[Sequence], dim: int):
    """Generators of {x : <x, h> >= 0 for every h}.

    Returns (rays, lineality): primitive ray vectors of the pointed part
    and a basis of line directions contained in the cone.
    """
    lineality: list[Vec] = [
        tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)
    ]
    rays: list[Vec] = []
    done: list[Vec] = []
    for raw in normals:
        h = _primitive(raw)
        if not any(h):
            continue
        lvals = [_dot(l, h) for l in lineality]
        if any(lvals):
            idx = next(i for i, v in enumerate(lvals) if v)
            lstar, a = lineality[idx], lvals[idx]
            if a < 0:
                lstar, a = _neg(lstar), -a
            new_lin = []
            for i, (l, v) in enumerate(zip(lineality, lvals)):
                if i == idx:
                    continue
                if v:
                    l = _canon_line(tuple(a * x - v * y
                                          for x, y in zip(l, lstar)))
                new_lin.append(l)
            lineality = new_lin
            rays = [_primitive(tuple(a * x - _dot(r, h) * y
                                     for x, y in zip(r, lstar)))
                    for r in rays]
            rays.append(_primitive(lstar))
        else:
            vals = [_dot(r, h) for r in rays]
            if any(v < 0 for v in vals):
                pos = [i for i, v in enumerate(vals) if v > 0]
                neg = [i for i, v in enumerate(vals) if v < 0]
                zero = [i for i, v in enumerate(vals) if v == 0]
                zsets = [frozenset(k for k, hk in enumerate(done)
                                   if _dot(r, hk) == 0) for r in rays]
                fresh: list[Vec] = []
                for i in pos:
                    for j in neg:
                        common = zsets[i] & zsets[j]
                        if any(t != i and t != j and common <= zsets[t]
                               for t in range(len(rays))):
                            continue  # not adjacent
                        fresh.append(_primitive(
                            tuple(vals[i] * rj - vals[j] * ri
                                  for ri, rj in zip(rays[i], rays[j]))))
                kept = [rays[i] for i in pos] + [rays[i] for i in zero]
                seen = set(kept)
                for w in fresh:
                    if w not in seen:
                        seen.add(w)
                        kept.append(w)
                rays = kept
        done.append(h)
    return rays, lineality


class ConePoly:
    """A rational polyhedral cone, described by generators, facet normals,
    or both.  Whichever description is missing is computed on demand and
    cached; recomputation under concurrent first access is harmless since
    the results are equal.
    """

    def __init__(self, ambient_dim: int,
                 generators: Sequence[Sequence] | None = None,
                 facets: Sequence[Sequence] | None = None) -> None:
        if generators is None and facets is None:
            raise ValueError("a cone needs generators or facet normals")
        self.ambient_dim = ambient_dim
        self._generators = self._clean(generators)
        self._facets = self._clean(facets)

    def _clean(self, vecs) -> tuple[Vec, ...] | None:
        if vecs is None:
            return None
        out: list[Vec] = []
        seen = set()
        for v in vecs:
            if len(v) != self.ambient_dim:
                raise ValueError(
                    f"vector {tuple(v)} does not have dimension {self.ambient_dim}"
                )
            p = _primitive(v)
            if any(p) and p not in seen:
                seen.add(p)
                out.append(p)
        return tuple(out)

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence],
                        ambient_dim: int | None = None) -> "ConePoly":
        generators = list(generators)
        if ambient_dim is None:
            if not generators:
                raise ValueError("ambient_dim required for the zero cone")
            ambient_dim = len(generators[0])
        return cls(ambient_dim, generators=generators)

    @classmethod
    def from_facets(cls, facets: Sequence[Sequence],
                    ambient_dim: int | None = None) -> "ConePoly":
        facets = list(facets)
        if ambient_dim is None:
            if not facets:
                raise ValueError("ambient_dim required without facet data")
            ambient_dim = len(facets[0])
        return cls(ambient_dim, facets=facets)

    def rays(self) -> tuple[Vec, ...]:
        """Generators; computed from the facet description if absent."""
        if self._generators is None:
            rays, lin = _dual_description(self._facets, self.ambient_dim)
            gens = list(rays)
            for l in lin:
                gens.append(l)
                gens.append(_neg(l))
            self._generators = tuple(sorted(gens))
        return self._generators

    def facet_normals(self) -> tuple[Vec, ...]:
        """Halfspace normals with x in cone iff all <x, n> >= 0.

        Computed from the generators if absent; lineality directions of the
        dual cone contribute both signs (equality constraints).
        """
        if self._facets is None:
            rays, lin = _dual_description(self._generators, self.ambient_dim)
            normals = list(rays)
            for l in lin:
                normals.append(l)
                normals.append(_neg(l))
            self._facets = tuple(sorted(normals))
        return self._facets

    def contains(self, x: Sequence, via: str = "facets") -> bool:
        """Membership, by facet signs or by the simplex route."""
        if via == "facets":
            return all(_dot(x, n) >= 0 for n in self.facet_normals())
        if via == "lp":
            return in_cone_lp(self.rays(), x)
        raise ValueError(f"unknown membership route {via!r}")

    def span_rank(self) -> int:
        return _rank(self.rays()) if self.rays() else 0


def dual_cone(c: ConePoly, form: Sequence[Sequence] | None = None) -> ConePoly:
    """The cone {x : form(x, g) >= 0 for every generator g of c}.

    With form omitted the standard dot product is used; otherwise form is a
    symmetric integer matrix (for the lattice models, see lattice_form).
    The result carries materialized generators (and its defining normals).
    """
    gens = c.rays()
    if form is None:
        normals = list(gens)
    else:
        normals = [tuple(_dot(row, g) for row in form) for g in gens]
        # symmetric form: form(x, g) = <x, form @ g>
    if not gens:
        # dual of the zero cone is everything
        dim = c.ambient_dim
        basis = [tuple(1 if j == i else 0 for j in range(dim))
                 for i in range(dim)]
        everything = ConePoly(dim, generators=basis + [_neg(b) for b in basis],
                              facets=[])
        return everything
    dual = ConePoly.from_facets(normals, c.ambient_dim)
    dual.rays()  # materialize the generator description now
    return dual


def lattice_form(model: SurfaceModel) -> tuple[Vec, ...]:
    """Matrix of the intersection pairing in the model basis."""
    n = model.rank
    if model.kind == "BlowupP2":
        return tuple(
            tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n))
            for i in range(n)
        )
    if model.size == 2:
        return ((0, 1), (1, 0))
    raise ValueError(f"no bilinear pairing on {model}")


def extremal_rays(c: ConePoly) -> list[Vec]:
    """A minimal generating set of primitive rays, sorted.

    For a pointed cone this is the unique set of extremal rays, each kept
    exactly when it is not a nonnegative combination of the others (the
    simplex route).  A cone with lineality returns a canonical line basis
    in both signs plus the extremal rays of the pointed quotient.
    """
    gens = [g for g in c.rays()]
    if not gens:
        return []
    lin_members = [g for g in gens if in_cone_lp(gens, _neg(g))]
    if not lin_members:
        return sorted(g for g in gens
                      if not in_cone_lp([h for h in gens if h != g], g))
    basis = _row_basis(lin_members)
    reduced = []
    seen = set()
    for g in gens:
        q = _reduce_mod(g, basis)
        if any(q) and q not in seen:
            seen.add(q)
            reduced.append(q)
    quotient_extremal = [g for g in reduced
                         if not in_cone_lp([h for h in reduced if h != g], g)]
    lines = [_canon_line(b) for b in basis]
    out = sorted(set(lines) | {_neg(l) for l in lines} | set(quotient_extremal))
    return out


def is_simplicial(c: ConePoly) -> bool:
    """True when the extremal ray count equals the dimension of the span."""
    rays = extremal_rays(c)
    return len(rays) == _rank(rays)


def _extremal_count_capped(gens: Sequence[Vec], cap: int) -> int:
    """Number of extremal generators, stopping once the count exceeds cap."""
    count = 0
    for g in gens:
        if not in_cone_lp([h for h in gens if h != g], g):
            count += 1
            if count > cap:
                return count
    return count


@dataclass(frozen=True)
class ConeReport:
    model: SurfaceModel
    nef: ConePoly
    psef: ConePoly
    equal: bool
    mori_simplicial: bool
    picard_number: int


def psef_generators(model: SurfaceModel) -> tuple[DivisorClass, ...]:
    """Classical generator table for the pseudo-effective cone."""
    if model.kind == "BlowupP2":
        r = model.size
        if r == 0:
            return (DivisorClass(model, (1,)),)
        if r == 1:
            return (DivisorClass(model, (0, 1)), DivisorClass(model, (1, -1)))
        return enumerate_exceptional(r).members
    if model.size == 2:
        return (DivisorClass(model, (1, 0)), DivisorClass(model, (0, 1)))
    raise ValueError(f"no cone report for {model}")


def mori_cone(model: SurfaceModel) -> ConePoly:
    """Cone of curve classes: the psef cone on a blow-up surface, the
    nonnegative orthant on ProductP1(n)."""
    if model.kind == "BlowupP2":
        return ConePoly.from_generators(
            [c.coords for c in psef_generators(model)], model.rank)
    n = model.size
    basis = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    return ConePoly.from_generators(basis, n)


def surface_cone_report(model: SurfaceModel) -> ConeReport:
    """Nef/psef comparison for BlowupP2(r), 0 <= r <= 8, or ProductP1(2)."""
    gens = psef_generators(model)  # raises for unsupported models
    minus_k = -canonical_class(model)
    for g in gens:
        if pairing(minus_k, g) <= 0:
            raise RuntimeError(
                f"psef generator table corrupt: -K.{g} not positive")
    coords = [g.coords for g in gens]
    form = lattice_form(model)
    nef_facets = [tuple(_dot(row, v) for row in form) for v in coords]
    psef = ConePoly.from_generators(coords, model.rank)
    nef = ConePoly.from_facets(nef_facets, model.rank)
    small = model.kind != "BlowupP2" or model.size <= 2
    if small:
        nef.rays()  # materialize: cheap here, huge for the larger blow-ups

    # psef inside nef: every generator must pair >= 0 with every generator;
    # the diagonal is checked first since a negative square settles it
    psef_in_nef = all(_dot(v, f) >= 0 for v, f in zip(coords, nef_facets)) \
        and all(_dot(v, f) >= 0 for v in coords for f in nef_facets)
    equal = psef_in_nef and all(
        psef.contains(r, via="facets") for r in nef.rays())

    mori = mori_cone(model)
    dim = mori.span_rank()
    mori_simplicial = _extremal_count_capped(mori.rays(), dim) == dim

    return ConeReport(
        model=model,
        nef=nef,
        psef=psef,
        equal=equal,
        mori_simplicial=mori_simplicial,
        picard_number=model.rank,
    )
