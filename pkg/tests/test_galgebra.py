from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from metawhit.dlops import b_func, c_func
from metawhit.galgebra import (
    GroupAlgebra, InexactDivision, Inexpansible, RationalElement, rat_equal, series_expand,
)
from metawhit.metastruct import MetaplecticData
from metawhit.rootsys import build_root_system

from strategies import elements


def test_cancellation_example():
    A = GroupAlgebra(1, 1)
    x = A.e((1,))
    assert rat_equal(RationalElement(A.one() - x * x, A.one() - x), RationalElement(A.one() + x))


def test_b_plus_c():
    md = MetaplecticData.build("A1", 3)
    A = GroupAlgebra(1, 3)
    v = A.ring.v()
    lhs = b_func(md, (1,)) + c_func(md, (1,))
    assert lhs == RationalElement((A.one() - A.e((-3,))) * v, A.binomial(1, (3,)))


def test_weyl_action_of_reflection():
    rs = build_root_system("A2")
    A = GroupAlgebra(2, 1)
    v = A.ring.v()
    f = A.e((0, 1)) + A.e((1, 0), v)
    g = A.e((1, 1)) + A.e((-1, 0), v)
    assert f.weyl_act(rs.simple_reflection(0).matrix) == g


def test_exact_division():
    A = GroupAlgebra(1, 2)
    x = A.e((2,))
    f = (A.one() - x) * (A.e((-1,)) + A.e((3,), A.ring.v()))
    assert f.divide_binomial(1, A.key((2,))) == A.e((-1,)) + A.e((3,), A.ring.v())
    with pytest.raises(InexactDivision):
        A.e((1,)).divide_binomial(1, A.key((2,)))
    with pytest.raises(ZeroDivisionError):
        RationalElement(A.one(), A.zero())


def test_series_of_geometric_kernel():
    A = GroupAlgebra(1, 2)
    v = A.ring.v()
    x = RationalElement(A.const(1 - v), A.binomial(1, (2,)))
    s = series_expand(x, (1,), cutoff=4, step=2)
    got = s.as_dict()
    for j in range(5):
        assert got[(2 * j,)] == 1 - v
    assert all(lam[0] % 2 == 0 for lam in got)
    assert s.is_exact_at((8,)) and not s.is_exact_at((100,))


def test_series_flips_backwards_factors():
    A = GroupAlgebra(1, 1)
    x = RationalElement(A.one(), A.binomial(1, (-1,)))
    got = series_expand(x, (1,), cutoff=3).as_dict()
    assert got[(1,)] == -1 and got[(2,)] == -1
    assert (0,) not in got


def test_series_rejects_off_line_factors():
    A = GroupAlgebra(2, 1)
    x = RationalElement(A.one(), A.binomial(1, (0, 1)))
    with pytest.raises(Inexpansible):
        series_expand(x, (1, 0), cutoff=3)


def test_polynomial_conversion():
    A = GroupAlgebra(1, 1)
    x = RationalElement(A.one() - A.e((3,)), A.binomial(1, (1,)))
    assert x.is_polynomial()
    assert x.to_polynomial() == A.one() + A.e((1,)) + A.e((2,))
    y = RationalElement(A.one(), A.binomial(1, (1,)))
    assert not y.is_polynomial()
    with pytest.raises(InexactDivision):
        y.to_polynomial()


def test_json_shape():
    A = GroupAlgebra(1, 2)
    data = A.e((1,), A.ring.g(1)).to_json()
    assert data == {"terms": [{"coweight": [1], "coeff": [{"v": 0, "g": [1], "c": "1"}]}]}


ALG = GroupAlgebra(2, 3)
A2 = build_root_system("A2")


@settings(max_examples=80, deadline=None)
@given(elements(ALG), elements(ALG), st.sampled_from(A2.weyl), st.sampled_from(A2.weyl))
def test_weyl_action_is_an_automorphism(f, g, w, u):
    assert (f * g).weyl_act(w.matrix) == f.weyl_act(w.matrix) * g.weyl_act(w.matrix)
    assert (f + g).weyl_act(w.matrix) == f.weyl_act(w.matrix) + g.weyl_act(w.matrix)
    wu = A2.multiply(w, u)
    assert f.weyl_act(wu.matrix) == f.weyl_act(u.matrix).weyl_act(w.matrix)


@settings(max_examples=60, deadline=None)
@given(elements(ALG), elements(ALG), elements(ALG), st.integers(1, 3), st.integers(-2, 2))
def test_fraction_equality(f, g, h, a, b):
    den = ALG.binomial(1, (a, b))
    x = RationalElement(f, den)
    assert x == RationalElement(f * den, den * den)
    assert x == x
    y = RationalElement(g, den)
    assert (x == y) == (f == g)
    if not h.is_zero():
        assert RationalElement(f * h, den * h) == x
    assert x + y == RationalElement(f + g, den)
