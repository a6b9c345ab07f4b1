from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockqsp.fockseq import Sequence, Support, move_e, move_f
from fockqsp.weights import (
    ChargeOutOfRange,
    Family,
    LieType,
    NotDominant,
    ParityMismatch,
    RankOutOfRange,
    Weight,
    dominant_weights,
    embed,
    extract,
    in_image,
    is_dominant,
    rho,
    seq_to_partition,
    shift,
    stabilize,
    weight_from_text,
)

C3 = LieType(Family.C, 3)
A3 = LieType(Family.A, 3)
BI2 = LieType(Family.B_INT, 2)
BH2 = LieType(Family.B_HALF, 2)


def W(t, *coords):
    return Weight.of(t, coords)


def test_rho():
    assert rho(C3).coords == (3, 2, 1)
    assert rho(BI2).coords == (Fraction(3, 2), Fraction(1, 2))
    assert rho(BH2) == Weight(BH2, rho(BI2).coords2)
    assert rho(A3).coords == (0, -1, -2)


def test_rank_bounds():
    with pytest.raises(RankOutOfRange):
        LieType(Family.C, 2)
    with pytest.raises(RankOutOfRange):
        LieType(Family.B_INT, 1)
    assert LieType(Family.C, 1, relaxed=True).rank == 1


def test_is_dominant():
    assert is_dominant(C3, W(C3, 2, 2, 0))
    assert not is_dominant(C3, W(C3, 1, 2, 0))
    # half-integer weights sit on sequences over Z
    assert is_dominant(BI2, W(BI2, "3/2", "1/2"))
    assert not is_dominant(BI2, W(BI2, "1/2", "3/2"))
    # integer weights sit on sequences over H
    assert is_dominant(BH2, W(BH2, 1, 0))
    assert not is_dominant(BH2, W(BH2, 0, -1))


def test_parity_is_checked():
    with pytest.raises(ParityMismatch):
        is_dominant(BI2, W(BI2, 1, 0))
    with pytest.raises(ParityMismatch):
        is_dominant(BH2, W(BH2, "3/2", "1/2"))
    with pytest.raises(ParityMismatch):
        is_dominant(C3, W(C3, "1/2", 0, 0))


def test_embed_examples():
    assert embed(C3, Weight.zero(C3)) == Sequence.from_cells(Support.INT, 1, [2, 4, 6])
    assert embed(C3, Weight.zero(C3)).charge == 3
    assert embed(A3, Weight.zero(A3)) == Sequence.vacuum(Support.INT, 0)
    b = embed(BH2, Weight.zero(BH2))
    assert b == Sequence.from_cells(Support.HALF, 0, [1, 3])
    assert b.support is Support.HALF and b.charge == 2
    assert embed(BI2, W(BI2, "1/2", "1/2")) == Sequence.from_cells(Support.INT, 1, [2, 4])
    with pytest.raises(NotDominant):
        embed(C3, W(C3, 0, 1, 0))


def test_extract_examples():
    assert extract(C3, Sequence(Support.INT, 0, "0111")) is None  # a(0) = 0
    # f at 1/2 empties the cell 0, which every embedded sequence needs
    assert move_f(Fraction(1, 2), embed(C3, Weight.zero(C3))) is None
    b = move_f(Fraction(1, 2), embed(C3, W(C3, 1, 1, 1)))
    assert b is not None and extract(C3, b) is None
    lam = W(C3, 2, 1, 0)
    assert extract(C3, embed(C3, lam)) == lam


@pytest.mark.parametrize("t", [C3, LieType(Family.C, 4), BI2, BH2, LieType(Family.B_INT, 3), LieType(Family.B_HALF, 4)])
def test_embed_round_trip_and_injectivity(t):
    ws = dominant_weights(t, 6 if t.rank == 4 else 8)
    seqs = [embed(t, w) for w in ws]
    assert len(set(seqs)) == len(ws)
    for w, a in zip(ws, seqs):
        assert extract(t, a) == w
        assert a.charge == t.rank


@pytest.mark.parametrize("t", [C3, BI2, BH2, LieType(Family.B_INT, 3), LieType(Family.B_HALF, 3)])
def test_single_moves_match_dominance(t):
    """e/f at lam_bar_i -/+ 1/2 stays in the image exactly when lam -/+ eps_i is dominant."""
    for lam in dominant_weights(t, 6):
        a = embed(t, lam)
        shifted = (lam + rho(t)).coords2
        hits_e, hits_f = set(), set()
        for j in range(a.left - 3, a.right + 4, 2):
            for kind, mover, hits in (("e", move_e, hits_e), ("f", move_f, hits_f)):
                b = mover(Fraction(j, 2), a)
                if b is not None and in_image(t, b):
                    hits.add(j)
        for i, x in enumerate(shifted):
            minus, plus = lam.plus_eps(i, -1), lam.plus_eps(i, 1)
            assert ((x - 1) in hits_e) == is_dominant(t, minus)
            assert ((x + 1) in hits_f) == is_dominant(t, plus)
            if is_dominant(t, minus):
                assert extract(t, move_e(Fraction(x - 1, 2), a)) == minus
        assert len(hits_e) == sum(is_dominant(t, lam.plus_eps(i, -1)) for i in range(t.rank))
        assert len(hits_f) == sum(is_dominant(t, lam.plus_eps(i, 1)) for i in range(t.rank))


def test_partition_view():
    assert seq_to_partition(embed(A3, W(A3, 3, 1, 0))) == (3, 1)
    assert seq_to_partition(Sequence.vacuum(Support.INT, 0)) == ()


def test_shift_examples():
    a = embed(C3, W(C3, 2, 1, 0))
    assert shift(a, 0, 5) == a
    assert shift(a, 2, 5).charge == a.charge - 10
    assert shift(shift(a, 1, 5), -1, 5) == a
    assert shift(a, 1, 5).at(0) == a.at(10)


@settings(max_examples=200)
@given(st.integers(-3, 3), st.integers(4, 9), st.text(alphabet="01", max_size=12), st.integers(-6, 6))
def test_shift_commutes_with_moves(m, ell, bits, start):
    a = Sequence(Support.INT, 2 * start, bits)
    for j in range(a.left - 3, a.right + 4, 2):
        i = Fraction(j, 2)
        for mover in (move_e, move_f):
            b = mover(i, a)
            c = mover(i - m * ell, shift(a, m, ell))
            assert (b is None) == (c is None)
            if b is not None:
                assert shift(b, m, ell) == c


def test_stabilize_examples():
    m, lam = stabilize(Sequence.vacuum(Support.INT, 1), 0, 5, Family.C)
    assert m == 0 and lam.type.rank == 1 and lam.coords2 == (0,)
    a = Sequence.from_cells(Support.INT, -4, [-2, 0, 2])  # single 0 at -2, 1 at 1; charge 0
    m, lam = stabilize(a, 0, 5, Family.C)
    assert (m, lam.type.rank, lam.coords) == (1, 5, (1, 1, 1, 0, 0))
    assert shift(embed(lam.type, lam), m, 5) == a
    with pytest.raises(ChargeOutOfRange):
        stabilize(Sequence.vacuum(Support.INT, 5), 0, 5, Family.C)


@settings(max_examples=200)
@given(
    st.sampled_from([Family.C, Family.B_INT, Family.B_HALF]),
    st.integers(4, 8),
    st.integers(0, 3),
    st.text(alphabet="01", max_size=14),
    st.integers(-8, 2),
    st.integers(0, 7),
)
def test_stabilize_round_trips(family, ell, reserve, bits, start, k):
    k %= ell
    a0 = Sequence(family.support, 2 * start + family.support.cell_parity, bits)
    a = a0.translate(k - a0.charge)
    m, lam = stabilize(a, reserve, ell, family)
    assert shift(embed(lam.type, lam), m, ell) == a
    assert lam.type.rank == m * ell + k
    assert 2 * m * ell > 2 * reserve - a.left
    if m > 0 and (m - 1) * ell + k >= 1:
        assert 2 * (m - 1) * ell <= 2 * reserve - a.left


def test_weight_text_and_json():
    w = weight_from_text(BI2, "3/2,1/2")
    assert w.to_json() == {"family": "B_INT", "rank": 2, "coords": ["3/2", "1/2"]}
    assert weight_from_text(C3, "1, 0, 0").labels() == [1, 0, 0]


def test_dominant_weights_order_and_count():
    ws = dominant_weights(C3, 2)
    assert ws == sorted(ws, key=lambda w: w.coords2)
    assert len(ws) == 10  # partitions with at most 3 parts and largest part <= 2
    assert len(dominant_weights(BI2, Fraction(5, 2))) == 6
