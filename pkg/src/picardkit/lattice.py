"""Lattice models for the two surface families the toolkit computes on.

Two kinds of model are supported:

* ``BlowupP2(r)``: the Picard lattice of the blow-up of P^2 at r points,
  0 <= r <= 8, with basis (H, E_1, ..., E_r), H^2 = 1, E_i^2 = -1, mixed
  products 0, and canonical class K = -3H + sum E_i.
* ``ProductP1(n)``: the lattice of (P^1)^n with basis (H_1, ..., H_n) and
  canonical class K = sum (-2) H_i.  For n >= 3 only the top multilinear
  form is defined; n = 2 additionally carries the hyperbolic surface pairing
  H_1.H_2 = 1, H_i^2 = 0.

All coordinates are Python integers, so arithmetic never overflows silently;
there is no fixed-width fast path anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

BLOWUP = "BlowupP2"
PRODUCT = "ProductP1"


@dataclass(frozen=True)
class SurfaceModel:
    """A Picard lattice model, identified by kind and size (r or n)."""

    kind: str
    size: int

    def __post_init__(self) -> None:
        if self.kind == BLOWUP:
            if not 0 <= self.size <= 8:
                raise ValueError(f"BlowupP2 needs 0 <= r <= 8, got {self.size}")
        elif self.kind == PRODUCT:
            if self.size < 1:
                raise ValueError(f"ProductP1 needs n >= 1, got {self.size}")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @staticmethod
    def blowup_p2(r: int) -> "SurfaceModel":
        return SurfaceModel(BLOWUP, r)

    @staticmethod
    def product_p1(n: int) -> "SurfaceModel":
        return SurfaceModel(PRODUCT, n)

    @property
    def rank(self) -> int:
        return self.size + 1 if self.kind == BLOWUP else self.size

    @property
    def basis_labels(self) -> tuple[str, ...]:
        if self.kind == BLOWUP:
            return ("H",) + tuple(f"E{i}" for i in range(1, self.size + 1))
        return tuple(f"H{i}" for i in range(1, self.size + 1))

    def __str__(self) -> str:
        return f"{self.kind}({self.size})"


@dataclass(frozen=True)
class DivisorClass:
    """An integer coordinate vector in a model's basis.

    Equality is coordinate-wise within one model; classes from different
    models never compare equal (the model participates in the comparison).
    """

    model: SurfaceModel
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        if any(not isinstance(c, int) for c in coords):
            raise ValueError("divisor class coordinates must be integers")
        if len(coords) != self.model.rank:
            raise ValueError(
                f"expected {self.model.rank} coordinates for {self.model}, "
                f"got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    @staticmethod
    def from_curve(model: SurfaceModel, degree: int,
                   mults: Sequence[int] = ()) -> "DivisorClass":
        """Class dH - sum(m_i E_i) of a plane curve on a BlowupP2 model.

        Mults shorter than r are padded with zeros on the right.
        """
        if model.kind != BLOWUP:
            raise ValueError("from_curve needs a BlowupP2 model")
        if len(mults) > model.size:
            raise ValueError("more multiplicities than blown-up points")
        m = tuple(mults) + (0,) * (model.size - len(mults))
        return DivisorClass(model, (degree,) + tuple(-v for v in m))

    @property
    def degree(self) -> int:
        """H-coefficient on blow-up models, first coordinate otherwise."""
        return self.coords[0]

    def multiplicities(self) -> tuple[int, ...]:
        if self.model.kind != BLOWUP:
            raise ValueError("multiplicities only make sense on BlowupP2")
        return tuple(-c for c in self.coords[1:])

    def _same_model(self, other: "DivisorClass") -> None:
        if not isinstance(other, DivisorClass):
            raise TypeError(f"expected DivisorClass, got {type(other).__name__}")
        if other.model != self.model:
            raise ValueError(
                f"classes live in different models: {self.model} vs {other.model}"
            )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_model(other)
        return DivisorClass(self.model,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_model(other)
        return DivisorClass(self.model,
                            tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.model, tuple(-a for a in self.coords))

    def __mul__(self, scalar: int) -> "DivisorClass":
        if not isinstance(scalar, int):
            return NotImplemented
        return DivisorClass(self.model, tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = []
        for label, c in zip(self.model.basis_labels, self.coords):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            if not parts:
                parts.append(("-" if c < 0 else "") + mag + label)
            else:
                parts.append(("- " if c < 0 else "+ ") + mag + label)
        return " ".join(parts) if parts else "0"


def canonical_class(model: SurfaceModel) -> DivisorClass:
    """K = -3H + sum E_i on blow-ups, sum (-2) H_i on products."""
    if model.kind == BLOWUP:
        return DivisorClass(model, (-3,) + (1,) * model.size)
    return DivisorClass(model, (-2,) * model.size)


def pairing(a: DivisorClass, b: DivisorClass) -> int:
    """Intersection number of two classes on a surface model.

    On BlowupP2(r) this is the signature-(1, r) form
    a_0 b_0 - sum_{i>=1} a_i b_i.  On ProductP1(2) the hyperbolic form
    a_0 b_1 + a_1 b_0 is provided as a convenience; higher products have no
    meaningful bilinear form and must go through top_intersection.
    """
    a._same_model(b)
    model = a.model
    if model.kind == BLOWUP:
        return a.coords[0] * b.coords[0] - sum(
            x * y for x, y in zip(a.coords[1:], b.coords[1:])
        )
    if model.size == 2:
        return a.coords[0] * b.coords[1] + a.coords[1] * b.coords[0]
    raise ValueError(
        f"pairing is undefined on {model}; use top_intersection"
    )


def adjunction_genus(c: DivisorClass) -> Fraction:
    """Arithmetic genus (c^2 + c.K)/2 + 1 from the adjunction formula.

    The result may be negative or non-integral for classes that are not
    curve classes; interpreting that is the caller's business.
    """
    if c.model.kind != BLOWUP:
        raise ValueError("adjunction_genus needs a BlowupP2 model")
    k = canonical_class(c.model)
    return Fraction(pairing(c, c) + pairing(c, k), 2) + 1


def _permanent(rows: list[tuple[int, ...]]) -> int:
    """Permanent by Ryser's inclusion-exclusion formula.

    O(2^n n) additions; n <= 10 throughout this package, so this is instant
    and avoids the n! blow-up of the Leibniz expansion.
    """
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for mask in range(1, 1 << n):
        prod = 1
        for row in rows:
            s = 0
            m = mask
            j = 0
            while m:
                if m & 1:
                    s += row[j]
                m >>= 1
                j += 1
            prod *= s
            if prod == 0:
                break
        if bin(mask).count("1") % 2 == n % 2:
            total += prod
        else:
            total -= prod
    return total


def top_intersection(model: SurfaceModel,
                     classes: Iterable[DivisorClass]) -> int:
    """Top multilinear form H_{i_1}...H_{i_n} on ProductP1(n).

    Equals the permanent of the n x n matrix whose rows are the coordinate
    vectors: a product of basis classes is 1 when all indices are distinct
    and 0 otherwise.
    """
    if model.kind != PRODUCT:
        raise ValueError("top_intersection needs a ProductP1 model")
    rows = []
    for c in classes:
        if not isinstance(c, DivisorClass):
            raise TypeError(f"expected DivisorClass, got {type(c).__name__}")
        if c.model != model:
            raise ValueError(f"class of {c.model} passed to {model}")
        rows.append(c.coords)
    if len(rows) != model.size:
        raise ValueError(
            f"top_intersection on {model} needs exactly {model.size} classes, "
            f"got {len(rows)}"
        )
    return _permanent(rows)
