"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from metawhit.galgebra import GroupAlgebra
from metawhit.gausscoeff import CoeffRing

scalars = st.integers(-3, 3).map(Fraction) | st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def coeffs(draw, ring: CoeffRing, max_terms: int = 3):
    out = ring.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        out = out + ring.v(draw(st.integers(-2, 2))) * ring.g(draw(st.integers(0, ring.n - 1))) * draw(scalars)
    return out


@st.composite
def elements(draw, alg: GroupAlgebra, bound: int = 2, max_terms: int = 3):
    items = []
    for _ in range(draw(st.integers(0, max_terms))):
        lam = tuple(draw(st.integers(-bound, bound)) for _ in range(alg.rank))
        items.append((lam, draw(coeffs(alg.ring, 2))))
    return alg.from_items(items)
