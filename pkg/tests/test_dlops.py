from __future__ import annotations

import pytest

from metawhit.cgaction import algebra_of, box_points
from metawhit.dlops import (
    cs_rhs, dl_closed_form, dl_simple, dl_word, rank1_whittaker_closed_form, star_reduce,
    symmetrizer, twisted_expand, verify_braid_dl, verify_fg, whittaker_full,
)
from metawhit.galgebra import RationalElement
from metawhit.metastruct import MetaplecticData


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("kappa", [1, 2])
def test_rank_one_closed_form(n, kappa):
    md = MetaplecticData.build("A1", n, kappa)
    alg = algebra_of(md)
    for k in range(0, 4):
        assert dl_simple(md, 0, alg.e((k,))) == dl_closed_form(md, 0, (k,))


def test_a1_n2_example():
    md = MetaplecticData.build("A1", 2)
    alg = algebra_of(md)
    v, g1 = alg.ring.v(), alg.ring.g(1)
    expect = alg.e((0,), 1 - v) + alg.e((-2,), 1 - v) + alg.e((-3,), v * g1)
    assert dl_simple(md, 0, alg.e((2,))) == expect


def test_zero_pairing_sign():
    md = MetaplecticData.build("A1", 1)
    alg = algebra_of(md)
    # g_Q collapses to -1 at n = 1
    assert dl_simple(md, 0, alg.one()) == alg.e((-1,), -alg.ring.v())
    assert symmetrizer(md, (0,)) == alg.one() - alg.e((-1,), alg.ring.v())


def test_negative_pairing_is_rejected_by_closed_form():
    with pytest.raises(ValueError):
        dl_closed_form(MetaplecticData.build("A1", 2), 0, (-1,))


def test_whittaker_a1_n3():
    md = MetaplecticData.build("A1", 3)
    alg = algebra_of(md)
    v = alg.ring.v()
    res = whittaker_full(md, (1,))
    assert res.formal == alg.e((1,), v) - alg.e((-2,), v * v)
    assert res.closed_form_equal


@pytest.mark.parametrize("n", [1, 2, 3])
def test_whittaker_matches_rank_one_formula(n):
    md = MetaplecticData.build("A1", n)
    for L in range(5):
        P = symmetrizer(md, (L,))
        # the dominant coweight (L,) pairs to 2L with a
        assert P == rank1_whittaker_closed_form(md, 0, (L,))


def test_nondominant_whittaker_is_zero():
    md = MetaplecticData.build("A2", 2)
    res = whittaker_full(md, (-1, 2), q=5, gauss=[-1, 5 ** 0.5])
    assert not res.dominant and res.formal.is_zero() and res.numeric == {}


def test_per_w_pieces_sum_to_total():
    md = MetaplecticData.build("A2", 2)
    alg = algebra_of(md)
    res = whittaker_full(md, (1, 1), per_w=True)
    total = alg.zero()
    for piece in res.per_w.values():
        total = total + piece
    scale = alg.const(alg.ring.v(2 * md.rs.rho_pairing((1, 1))))
    assert total * scale == res.formal
    assert len(res.per_w) == 6


@pytest.mark.parametrize("label, n", [("A2", 2), ("A2", 3), ("B2", 2)])
def test_symmetrizer_identity(label, n):
    md = MetaplecticData.build(label, n)
    for lam in md.rs.dominant_box(1):
        assert RationalElement(symmetrizer(md, lam)) == cs_rhs(md, lam)


def test_dl_braid_a2():
    md = MetaplecticData.build("A2", 2)
    assert verify_braid_dl(md, 2).ok
    alg = algebra_of(md)
    for lam in box_points(2, 1):
        assert dl_word(md, (0, 1, 0), alg.e(lam)) == dl_word(md, (1, 0, 1), alg.e(lam))


def test_star_reduce():
    assert star_reduce((0, 0, 1, 0, 0, 1)) == ()
    assert star_reduce((0, 1, 1, 0, 1)) == (1,)


def test_twisted_expansion_top_word():
    md = MetaplecticData.build("A2", 2)
    coeffs = twisted_expand(md, (0, 1, 0)).coeffs
    assert set(coeffs) >= {(0, 1, 0), (0,), (1,), ()}


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_fg(label):
    for n in (2, 3):
        assert verify_fg(MetaplecticData.build(label, n)).ok
    assert verify_fg(MetaplecticData.build(label, 1)).ok
    assert verify_fg(MetaplecticData.build(label, 2), metaplectic=False, b_sign=-1).ok
