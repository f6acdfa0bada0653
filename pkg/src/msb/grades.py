"""Grades, barcodes, and signed barcodes.

A grade is a point of R^n, recording the birth coordinate of a free
summand whose support is the upset ``{x : grade <= x}``.  A barcode is a
finite multiset of grades of one common dimension, and a signed barcode
is an ordered pair of barcodes (positive part, negative part).  The two
parts of a signed barcode may share bars; cancelling shared bars with
multiplicity is the reduction operation, whose output is the canonical
reduced representative.

Coordinates are floats compared exactly (no tolerance), so multiset
semantics are well defined.  All objects are immutable after
construction and every operation is a pure function.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Iterator


class DimensionMismatch(ValueError):
    """Raised when combining objects whose grade dimensions differ."""


#: A grade is a tuple of finite floats.
Grade = tuple


def as_grade(coords: Iterable[float]) -> Grade:
    """Normalize ``coords`` to a grade (tuple of finite floats)."""
    g = tuple(float(c) for c in coords)
    if not g:
        raise ValueError("a grade needs at least one coordinate")
    for c in g:
        if not math.isfinite(c):
            raise ValueError("grade coordinates must be finite, got %r" % (c,))
    return g


def _same_dim(a: Grade, b: Grade) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(
            "grade dimensions differ: %d vs %d" % (len(a), len(b))
        )


def leq(a: Grade, b: Grade) -> bool:
    """Componentwise partial order on grades of equal dimension."""
    _same_dim(a, b)
    return all(x <= y for x, y in zip(a, b))


def join(*grades: Grade) -> Grade:
    """Componentwise maximum (least upper bound) of one or more grades."""
    first = grades[0]
    for g in grades[1:]:
        _same_dim(first, g)
    return tuple(max(cs) for cs in zip(*grades))


def dist_inf(a: Grade, b: Grade) -> float:
    """l-infinity distance between two grades."""
    _same_dim(a, b)
    return max(abs(x - y) for x, y in zip(a, b))


def dist_one(a: Grade, b: Grade) -> float:
    """l1 distance between two grades."""
    _same_dim(a, b)
    return sum(abs(x - y) for x, y in zip(a, b))


def _merge_dims(*dims: int | None) -> int | None:
    out: int | None = None
    for d in dims:
        if d is None:
            continue
        if out is None:
            out = d
        elif out != d:
            raise DimensionMismatch(
                "grade dimensions differ: %d vs %d" % (out, d)
            )
    return out


class Barcode:
    """A finite multiset of grades of one common dimension.

    Bars are stored sorted lexicographically, so two barcodes are equal
    exactly when they are equal as multisets, and serialization is
    canonical.  ``dim`` is ``None`` for an empty barcode constructed
    without an explicit dimension; such a barcode is compatible with
    any dimension.
    """

    __slots__ = ("bars", "dim")

    def __init__(self, bars: Iterable[Iterable[float]] = (), dim: int | None = None):
        norm = sorted(as_grade(b) for b in bars)
        if norm:
            d = len(norm[0])
            for g in norm:
                if len(g) != d:
                    raise DimensionMismatch(
                        "bars of dimension %d and %d in one barcode" % (d, len(g))
                    )
            dim = _merge_dims(dim, d)
        object.__setattr__(self, "bars", tuple(norm))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("Barcode is immutable")

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self) -> Iterator[Grade]:
        return iter(self.bars)

    def __getitem__(self, i):
        return self.bars[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Barcode):
            return NotImplemented
        return self.bars == other.bars

    def __hash__(self) -> int:
        return hash(self.bars)

    def __repr__(self) -> str:
        return "Barcode(%r)" % (list(self.bars),)

    def counts(self) -> Counter:
        """Multiplicity of each distinct bar."""
        return Counter(self.bars)


def _as_barcode(b) -> Barcode:
    return b if isinstance(b, Barcode) else Barcode(b)


def barcode_union(b1: Barcode, b2: Barcode) -> Barcode:
    """Multiset union (sum of multiplicities) of two barcodes."""
    b1 = _as_barcode(b1)
    b2 = _as_barcode(b2)
    dim = _merge_dims(b1.dim, b2.dim)
    return Barcode(b1.bars + b2.bars, dim=dim)


def barcode_eq(b1: Barcode, b2: Barcode) -> bool:
    """Multiset equality with multiplicity, coordinates compared exactly."""
    return _as_barcode(b1).bars == _as_barcode(b2).bars


class SignedBarcode:
    """An ordered pair of barcodes of equal dimension.

    The positive part collects bars in even homological degrees, the
    negative part bars in odd degrees.  The pair is not required to be
    reduced: the same bar may occur on both sides.
    """

    __slots__ = ("positive", "negative")

    def __init__(self, positive=(), negative=()):
        pos = _as_barcode(positive)
        neg = _as_barcode(negative)
        _merge_dims(pos.dim, neg.dim)
        object.__setattr__(self, "positive", pos)
        object.__setattr__(self, "negative", neg)

    def __setattr__(self, name, value):
        raise AttributeError("SignedBarcode is immutable")

    @property
    def dim(self) -> int | None:
        return _merge_dims(self.positive.dim, self.negative.dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedBarcode):
            return NotImplemented
        return self.positive == other.positive and self.negative == other.negative

    def __hash__(self) -> int:
        return hash((self.positive, self.negative))

    def __repr__(self) -> str:
        return "SignedBarcode(%r, %r)" % (
            list(self.positive.bars),
            list(self.negative.bars),
        )


def reduce_signed(s: SignedBarcode) -> SignedBarcode:
    """Cancel bars shared by both parts, respecting multiplicity.

    The result is the unique representative with disjoint parts; what
    was removed from the positive side equals what was removed from the
    negative side, as multisets.
    """
    pos = s.positive.counts()
    neg = s.negative.counts()
    common = pos & neg
    pos.subtract(common)
    neg.subtract(common)
    dim = s.dim
    return SignedBarcode(
        Barcode([g for g, c in pos.items() for _ in range(c)], dim=dim),
        Barcode([g for g, c in neg.items() for _ in range(c)], dim=dim),
    )
