"""
Irreducible characters of the dual root system by Freudenthal's recursion.

Weights are coweights in simple-coroot coordinates; the roots of the dual
system are the coroots and the invariant form is ``RootSystem.form``.  This is
an oracle for the ``n = 1`` degeneration of the symmetrizer identity and does
not share code with the Demazure-Lusztig operators.

>>> from metawhit.rootsys import build_root_system
>>> ch = freudenthal_character(build_root_system("A2"), (1, 1))
>>> len(ch), ch[(0, 0)]
(7, 2)
"""

from __future__ import annotations

__all__ = ["freudenthal_character", "weyl_numerator", "character_element"]

from fractions import Fraction
from typing import Sequence

from .galgebra import AlgebraElement, GroupAlgebra
from .rootsys import Coweight, RootSystem


def _rho(rs: RootSystem) -> tuple[Fraction, ...]:
    total = [Fraction(0)] * rs.rank
    for g in rs.positive_coroots:
        for t, x in enumerate(g):
            total[t] += x
    return tuple(x / 2 for x in total)


def _add(x, y, c=1):
    return tuple(a + c * b for a, b in zip(x, y))


def freudenthal_character(rs: RootSystem, lam: Sequence[int]) -> dict[Coweight, int]:
    """Weight multiplicities of the irreducible module with highest weight ``lam``."""
    lam = tuple(lam)
    if not rs.is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    rho = _rho(rs)
    lr = _add(lam, rho)
    top = rs.form(lr, lr)
    mult: dict[Coweight, int] = {lam: 1}
    level = [lam]
    while level:
        candidates = sorted({_add(mu, rs.simple_coroot(i), -1) for mu in level for i in range(rs.rank)})
        nxt = []
        for mu in candidates:
            acc = Fraction(0)
            for g in rs.positive_coroots:
                up = _add(mu, g)
                while all(u <= l for u, l in zip(up, lam)):
                    acc += mult.get(up, 0) * rs.form(up, g)
                    up = _add(up, g)
            mr = _add(mu, rho)
            gap = top - rs.form(mr, mr)
            if acc == 0:
                continue
            if gap <= 0:
                raise ArithmeticError(f"degenerate Freudenthal denominator at {mu}")
            value = 2 * acc / gap
            if value.denominator != 1:
                raise ArithmeticError(f"non-integral multiplicity {value} at {mu}")
            if value:
                mult[mu] = int(value)
                nxt.append(mu)
        level = nxt
    return mult


def weyl_numerator(rs: RootSystem, lam: Sequence[int]) -> dict[Coweight, int]:
    """``sum_w (-1)^{l(w)} e^{w(lam + rho) - rho}`` (integral since ``w rho - rho`` is)."""
    rho = _rho(rs)
    lr = _add(tuple(lam), rho)
    out: dict[Coweight, int] = {}
    for w in rs.weyl:
        img = rs.apply(w, lr)
        pt = tuple(int(x) for x in _add(img, rho, -1))
        out[pt] = out.get(pt, 0) + (-1) ** w.length
    return {k: v for k, v in out.items() if v}


def character_element(alg: GroupAlgebra, table: dict[Coweight, int]) -> AlgebraElement:
    return alg.from_items(sorted(table.items()))
