"""
The metaplectic star action of simple reflections on the fraction field.

For a simple root ``a`` with ``m = n(a)``, ``Q = Q(a)`` and ``k = <lam, a>``::

    w_a * e^lam = e^{w_a lam} / (1 - v e^{-m a})
                  * [ (1 - v) e^{res_m(k) a}
                      - v g_{Q + kQ} e^{(m - 1) a} (1 - e^{-m a}) ]

extended linearly over numerators and by ``w_a * (f / h) = (w_a * f) / h^{w_a}``
over denominators.  Words act right to left.
"""

from __future__ import annotations

__all__ = [
    "cg_simple", "cg_word", "cg_monomial_numerator", "verify_h_linearity",
    "verify_braid_cg", "verify_involution", "BraidReport", "braid_order", "algebra_of",
]

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .galgebra import AlgebraElement, GroupAlgebra, Key, RationalElement
from .metastruct import MetaplecticData
from .rootsys import Coweight


def algebra_of(md: MetaplecticData) -> GroupAlgebra:
    return GroupAlgebra(md.rank, md.n)


def braid_order(md: MetaplecticData, i: int = 0, j: int = 1) -> int:
    c = md.rs.cartan
    return {0: 2, 1: 3, 2: 4, 3: 6}[c[i][j] * c[j][i]]


def _as_rational(f) -> RationalElement:
    return f if isinstance(f, RationalElement) else RationalElement(f)


class _Simple:
    """Per-root cache of monomial images."""

    def __init__(self, md: MetaplecticData, i: int):
        self.md = md
        self.i = i
        self.alg = algebra_of(md)
        self.q = md.simple_Q(i)
        self.m = md.simple_n(i)
        rs = md.rs
        self.a = rs.simple_coroot(i)
        self.matrix = rs.simple_reflection(i).matrix
        ring = self.alg.ring
        self.v = ring.v_mono(1)
        self.one = ring.one_mono
        # 1 - v e^{-m a}
        self.den = self.alg.binomial(ring.v(), tuple(-self.m * x for x in self.a))
        self._images: dict[Coweight, list[tuple[Coweight, tuple, int]]] = {}

    def image(self, lam: Coweight) -> list[tuple[Coweight, tuple, int]]:
        """Numerator of ``w_a * e^lam`` as ``(coweight, coefficient monomial, scalar)`` triples."""
        out = self._images.get(lam)
        if out is not None:
            return out
        rs, ring, m, i = self.md.rs, self.alg.ring, self.m, self.i
        k = rs.pairing(lam, i)
        base = list(rs.reflect(i, lam))
        res = k % m

        def at(shift: int) -> Coweight:
            t = list(base)
            t[i] += shift
            return tuple(t)

        sign, gm = ring.g_mono(self.q + k * self.q)
        vg = ring.mono_mul(self.v, gm)
        acc: dict[tuple[Coweight, tuple], int] = {}
        for key, c in (
            ((at(res), self.one), 1),
            ((at(res), self.v), -1),
            ((at(m - 1), vg), -sign),
            ((at(-1), vg), sign),
        ):
            acc[key] = acc.get(key, 0) + c
        out = [(lamb, mono, c) for (lamb, mono), c in acc.items() if c]
        self._images[lam] = out
        return out

    def numerator(self, f: AlgebraElement) -> AlgebraElement:
        """``sum_lam c_lam * N_lam`` where ``w_a * e^lam = N_lam / (1 - v e^{-m a})``."""
        r = self.alg.rank
        mono_mul = self.alg.ring.mono_mul
        out: dict[Key, object] = {}
        get = out.get
        for k, c in f.terms.items():
            lam, mono = k[:r], k[r:]
            for lam2, mono2, c2 in self.image(lam):
                key = lam2 + mono_mul(mono, mono2)
                out[key] = get(key, 0) + c * c2
        return AlgebraElement(self.alg, out)


def simple_data(md: MetaplecticData, i: int) -> _Simple:
    cache = md.__dict__.setdefault("_cg_simple", {})
    data = cache.get(i)
    if data is None:
        data = cache[i] = _Simple(md, i)
    return data


def cg_monomial_numerator(md: MetaplecticData, i: int, lam: Sequence[int]) -> AlgebraElement:
    """Numerator ``N`` of ``w_a * e^lam = N / (1 - v e^{-n(a) a})``."""
    sd = simple_data(md, i)
    return sd.numerator(sd.alg.e(tuple(lam)))


def cg_simple(md: MetaplecticData, i: int, f: RationalElement | AlgebraElement) -> RationalElement:
    """``w_{a_i} * f``."""
    f = _as_rational(f)
    sd = simple_data(md, i)
    out = RationalElement(sd.numerator(f.num), sd.den)
    for factor, mult in f.den_factors.items():
        img = factor.weyl_act(sd.matrix)
        for _ in range(mult):
            out = out / img
    return out


def cg_word(md: MetaplecticData, word: Iterable[int], f: RationalElement | AlgebraElement) -> RationalElement:
    """``w_{b_1} * ... * w_{b_r} * f`` for ``word = (b_1, ..., b_r)``."""
    out = _as_rational(f)
    for i in reversed(tuple(word)):
        out = cg_simple(md, i, out)
    return out


def verify_involution(md: MetaplecticData, i: int, f: RationalElement | AlgebraElement) -> bool:
    return cg_simple(md, i, cg_simple(md, i, f)) == _as_rational(f)


def verify_h_linearity(
    md: MetaplecticData, i: int, h: AlgebraElement, f: RationalElement | AlgebraElement
) -> bool:
    """Check ``w_a * (h f) = h^{w_a} (w_a * f)`` for ``h`` supported on ``Lambda_0``."""
    for lam in h.support():
        if not md.in_lambda0(lam):
            raise ValueError(f"h has support {lam} outside Lambda_0")
    f = _as_rational(f)
    sd = simple_data(md, i)
    lhs = cg_simple(md, i, f * h)
    rhs = cg_simple(md, i, f) * h.weyl_act(sd.matrix)
    return lhs == rhs


@dataclass
class BraidReport:
    cases: int = 0
    failures: list[Coweight] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"cases": self.cases, "failures": [list(x) for x in self.failures], "ok": self.ok}


def alternating(start: int, other: int, m: int) -> tuple[int, ...]:
    return tuple(start if t % 2 == 0 else other for t in range(m))


def box_points(rank: int, bound: int) -> list[Coweight]:
    return list(product(range(-bound, bound + 1), repeat=rank))


def verify_braid_cg(md: MetaplecticData, bound: int = 2, pairs: Sequence[tuple[int, int]] | None = None) -> BraidReport:
    """Compare both alternating ``m``-fold star words on every ``e^lam`` in a box."""
    alg = algebra_of(md)
    if pairs is None:
        pairs = [(i, j) for i in range(md.rank) for j in range(i + 1, md.rank)]
    report = BraidReport()
    for i, j in pairs:
        m = braid_order(md, i, j)
        left, right = alternating(i, j, m), alternating(j, i, m)
        for lam in box_points(md.rank, bound):
            f = alg.e(lam)
            report.cases += 1
            if cg_word(md, left, f) != cg_word(md, right, f):
                report.failures.append(lam)
    return report
