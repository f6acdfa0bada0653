"""Grades, barcodes, signed barcodes, and cancellation."""

import math

import pytest

from msb import (
    Barcode,
    DimensionMismatch,
    SignedBarcode,
    SplitMix64,
    as_grade,
    barcode_eq,
    barcode_union,
    betti,
    dist_inf,
    dist_one,
    gen_one_param_interval,
    gen_staircase,
    hilbert_eval,
    join,
    leq,
    reduce_signed,
)
from msb.algebra import direct_sum


def random_barcode(rng, max_bars=6, grid=8, dim=2):
    k = rng.below(max_bars + 1)
    return Barcode(
        [tuple(float(rng.below(grid)) for _ in range(dim)) for _ in range(k)],
        dim=dim,
    )


def test_as_grade_validates():
    assert as_grade([0, 1.5]) == (0.0, 1.5)
    with pytest.raises(ValueError):
        as_grade([float("nan")])
    with pytest.raises(ValueError):
        as_grade([float("inf"), 0.0])
    with pytest.raises(ValueError):
        as_grade([])


def test_leq_and_join():
    assert leq((0.0, 0.0), (1.0, 1.0))
    assert not leq((1.0, 0.0), (0.0, 1.0))
    assert not leq((0.0, 1.0), (1.0, 0.0))
    assert join((1.0, 0.0), (0.0, 2.0)) == (1.0, 2.0)
    with pytest.raises(DimensionMismatch):
        leq((0.0,), (0.0, 0.0))


def test_distances_between_grades():
    assert dist_inf((0.0, 0.0), (1.0, 2.0)) == 2.0
    assert dist_one((0.0, 0.0), (1.0, 2.0)) == 3.0
    assert dist_inf((0.5,), (0.25,)) == 0.25


def test_partial_order_properties():
    # reflexive, antisymmetric, transitive on random triples
    rng = SplitMix64(7)
    for _ in range(300):
        a = (float(rng.below(4)), float(rng.below(4)))
        b = (float(rng.below(4)), float(rng.below(4)))
        c = (float(rng.below(4)), float(rng.below(4)))
        assert leq(a, a)
        if leq(a, b) and leq(b, a):
            assert a == b
        if leq(a, b) and leq(b, c):
            assert leq(a, c)


def test_barcode_is_sorted_and_immutable():
    b = Barcode([(1.0, 0.0), (0.0, 1.0), (1.0, 0.0)])
    assert b.bars == ((0.0, 1.0), (1.0, 0.0), (1.0, 0.0))
    assert len(b) == 3
    assert b[0] == (0.0, 1.0)
    with pytest.raises(AttributeError):
        b.bars = ()


def test_barcode_dimension_consistency():
    with pytest.raises(DimensionMismatch):
        Barcode([(0.0, 0.0), (1.0,)])
    assert Barcode([]).dim is None
    assert Barcode([], dim=2).dim == 2


def test_union_multiplicity_add():
    a = Barcode([(0.0, 0.0)])
    assert barcode_union(a, a).bars == ((0.0, 0.0), (0.0, 0.0))


def test_union_identity():
    a = Barcode([(0.0, 0.0)])
    assert barcode_union(a, Barcode([])).bars == ((0.0, 0.0),)


def test_union_distinct_bars():
    got = barcode_union(Barcode([(1.0, 0.0)]), Barcode([(0.0, 1.0)]))
    assert got.bars == ((0.0, 1.0), (1.0, 0.0))


def test_union_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        barcode_union(Barcode([(0.0,)]), Barcode([(0.0, 0.0)]))


def test_union_commutative_associative():
    rng = SplitMix64(11)
    for _ in range(200):
        a = random_barcode(rng)
        b = random_barcode(rng)
        c = random_barcode(rng)
        assert barcode_eq(barcode_union(a, b), barcode_union(b, a))
        assert barcode_eq(
            barcode_union(barcode_union(a, b), c),
            barcode_union(a, barcode_union(b, c)),
        )
        assert len(barcode_union(a, b)) == len(a) + len(b)


def test_eq_order_insensitive():
    assert barcode_eq(
        Barcode([(0.0, 0.0), (1.0, 1.0)]), Barcode([(1.0, 1.0), (0.0, 0.0)])
    )


def test_eq_counts_multiplicity():
    assert not barcode_eq(
        Barcode([(0.0, 0.0)]), Barcode([(0.0, 0.0), (0.0, 0.0)])
    )


def test_eq_on_interval_sum_betti():
    # two different sums of one-parameter intervals, same positive part
    m = direct_sum(gen_one_param_interval(0, 2), gen_one_param_interval(1, 3))
    n = direct_sum(gen_one_param_interval(0, 3), gen_one_param_interval(1, 2))
    assert barcode_eq(betti(m).signed.positive, betti(n).signed.positive)
    assert betti(m).signed.positive.bars == ((0.0,), (1.0,))


def test_signed_barcode_shape():
    s = SignedBarcode(Barcode([(0.0, 0.0)]), Barcode([(1.0, 1.0)]))
    assert s.dim == 2
    with pytest.raises(DimensionMismatch):
        SignedBarcode(Barcode([(0.0,)]), Barcode([(1.0, 1.0)]))
    # shared bars are allowed
    shared = SignedBarcode(Barcode([(0.0, 0.0)]), Barcode([(0.0, 0.0)]))
    assert len(shared.positive) == len(shared.negative) == 1


def test_reduce_full_cancellation():
    a = Barcode([(0.5, 0.5)])
    got = reduce_signed(SignedBarcode(a, a))
    assert got.positive.bars == () and got.negative.bars == ()


def test_reduce_cancels_one_copy():
    s = SignedBarcode(
        Barcode([(0.0, 0.0), (1.0, 1.0), (1.0, 1.0)]), Barcode([(1.0, 1.0)])
    )
    got = reduce_signed(s)
    assert got.positive.bars == ((0.0, 0.0), (1.0, 1.0))
    assert got.negative.bars == ()


def test_reduce_leaves_disjoint_staircase_alone():
    for k in (2, 3):
        s = betti(gen_staircase(k)).signed
        got = reduce_signed(s)
        assert barcode_eq(got.positive, s.positive)
        assert barcode_eq(got.negative, s.negative)


def test_reduce_idempotent_and_disjoint():
    rng = SplitMix64(13)
    for _ in range(200):
        s = SignedBarcode(random_barcode(rng, grid=3), random_barcode(rng, grid=3))
        r = reduce_signed(s)
        r2 = reduce_signed(r)
        assert barcode_eq(r.positive, r2.positive)
        assert barcode_eq(r.negative, r2.negative)
        # disjoint parts after reduction
        assert not set(r.positive.bars) & set(r.negative.bars)
        # cancellation removed equal counts from both sides
        assert len(s.positive) - len(r.positive) == len(s.negative) - len(r.negative)


def test_reduce_preserves_hilbert_function():
    rng = SplitMix64(17)
    for _ in range(200):
        s = SignedBarcode(random_barcode(rng, grid=3), random_barcode(rng, grid=3))
        r = reduce_signed(s)
        for _ in range(20):
            x = (float(rng.below(4)), float(rng.below(4)))
            assert hilbert_eval(s, x) == hilbert_eval(r, x)


def test_barcode_counts():
    b = Barcode([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
    assert b.counts() == {(0.0, 0.0): 2, (1.0, 0.0): 1}


def test_infinite_coordinates_rejected_everywhere():
    with pytest.raises(ValueError):
        Barcode([(math.inf, 0.0)])
