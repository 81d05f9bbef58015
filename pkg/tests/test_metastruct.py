from __future__ import annotations

import pytest

from metawhit.metastruct import MetaplecticData, hermite_basis, rank2_classify, rank2_iso
from metawhit.rootsys import CartanSpec, build_root_system


def test_bilinear_examples():
    a1 = MetaplecticData.build("A1", 2)
    assert a1.B((1,), (1,)) == 2
    assert a1.B((0,), (1,)) == 0
    a2 = MetaplecticData.build("A2", 1)
    assert a2.B((1, 0), (0, 1)) == -1
    with pytest.raises(ValueError):
        a2.B((1, 0), (2, 1))


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "B3", "C3"])
@pytest.mark.parametrize("kappa", [1, 2])
def test_symmetry_and_orbit_invariance(label, kappa):
    md = MetaplecticData.build(label, 6, kappa)
    rs = md.rs
    for i in range(rs.rank):
        for j in range(rs.rank):
            assert md.B(rs.simple_coroot(i), rs.simple_coroot(j)) == md.B(rs.simple_coroot(j), rs.simple_coroot(i))
    for g in rs.coroots:
        for w in rs.weyl:
            assert md.Q(rs.apply(w, g)) == md.Q(g)
            assert md.n_of(rs.apply(w, g)) == md.n_of(g)


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2", "A3"])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_rescaled_coroots_lie_in_lambda0(label, n):
    md = MetaplecticData.build(label, n)
    for g in md.rs.coroots:
        assert md.in_lambda0(tuple(md.n_of(g) * x for x in g))
    basis = md.lambda0_basis
    assert len(basis) == md.rank
    assert all(md.in_lambda0(b) for b in basis)


def test_n_values():
    assert set(MetaplecticData.build("A2", 3).n_table.values()) == {3}
    b2 = MetaplecticData.build("B2", 2)
    by_q = {b2.Q(g): b2.n_of(g) for g in b2.rs.coroots}
    assert by_q == {1: 2, 2: 1}
    md = MetaplecticData.build("B2", 4, kappa=2)
    assert {md.Q(g): md.n_of(g) for g in md.rs.coroots} == {2: 2, 4: 1}


def test_lambda0_examples():
    assert MetaplecticData.build("A1", 2).lambda0_basis == [(1,)]
    assert MetaplecticData.build("A1", 3).lambda0_basis == [(3,)]
    assert sorted(MetaplecticData.build("A2", 1).lambda0_basis) == [(0, 1), (1, 0)]
    md = MetaplecticData.build("A1", 3)
    assert [k for k in range(-6, 7) if md.in_lambda0((k,))] == [-6, -3, 0, 3, 6]


def test_residue():
    md = MetaplecticData.build("A1", 3)
    assert md.residue(5, (1,)) == 2
    assert md.residue(-5, (1,)) == 1
    assert md.residue(0, (1,)) == 0
    for k in range(-20, 21):
        r = md.residue(k, (1,))
        assert 0 <= r < 3 and (k - r) % 3 == 0


def test_hermite_basis_spans():
    (a, b), (c, d) = hermite_basis([(2, 0), (0, 2), (1, 1)])
    assert abs(a * d - b * c) == 2


@pytest.mark.parametrize("label, verdict, ratio", [("A2", "A2", 1), ("B2", "B2", 2), ("G2", "G2", 3)])
def test_rank2_classify(label, verdict, ratio):
    cls = rank2_classify(MetaplecticData.build(label, 1))
    assert cls.verdict == verdict
    assert cls.ratio == ratio
    assert cls.B_short_long == -ratio


def test_rank2_orthogonal():
    rs = build_root_system(CartanSpec.from_matrix([[2, 0], [0, 2]]))
    md = MetaplecticData(rs, 2)
    assert rank2_classify(md).verdict == "orthogonal"
    with pytest.raises(ValueError):
        rank2_iso(md)


@pytest.mark.parametrize("label, n, swapped", [("A2", 2, False), ("A2", 5, False), ("B2", 2, True), ("G2", 3, True), ("B2", 3, False)])
def test_rank2_iso(label, n, swapped):
    iso = rank2_iso(MetaplecticData.build(label, n))
    assert iso.swapped is swapped
    assert iso.q_ratio_source == iso.q_ratio_target


def test_echo_shape():
    data = MetaplecticData.build("A2", 2).echo()
    assert data["q_values"] == {"0,1": 1, "1,0": 1, "1,1": 1}
    assert data["n_table"] == {"0,1": 2, "1,0": 2, "1,1": 2}


def test_rejects_bad_degree():
    with pytest.raises(ValueError):
        MetaplecticData.build("A2", 0)
    with pytest.raises(ValueError):
        MetaplecticData.build("A2", 2, kappa=0)
