"""
Spherical Demazure-Lusztig operators and the spherical function.

These use the ordinary Weyl action with

    cc(a) = (1 - v e^{m a}) / (1 - e^{m a}),   bb(a) = (v - 1) / (1 - e^{m a}),

``m = n(a)``, and ``T_a f = cc(a) w_a(f) + bb(a) f``.  The spherical function is
computed two ways: as ``v^{<rho, lam>} sum_{w in W^lam} T_w(e^lam)`` and as
``v^{<rho, lam>} / W_lam(v) * sum_w Gamma^w e^{w lam}`` with

    Gamma = prod_{a > 0} (1 - v e^{-n(a) a}) / (1 - e^{-n(a) a}).
"""

from __future__ import annotations

__all__ = [
    "sph_simple", "sph_word", "gamma", "gamma_sum", "spherical_function", "SphericalResult",
    "verify_macdonald", "MacdonaldReport", "verify_hecke", "verify_stabilizer",
    "verify_coset_collapse", "symmetrizer_coefficients", "verify_braid_sph",
]

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cgaction import BraidReport, algebra_of, alternating, box_points, braid_order
from .galgebra import AlgebraElement, InexactDivision, RationalElement
from .gausscoeff import CoeffElement
from .metastruct import MetaplecticData
from .rootsys import Coweight


def _scaled(md: MetaplecticData, g: Sequence[int]) -> Coweight:
    m = md.n_of(g)
    return tuple(m * x for x in g)


def sph_simple(md: MetaplecticData, i: int, f: AlgebraElement | RationalElement):
    """``T_a f``.

    A polynomial input gives a polynomial whenever the division by
    ``1 - e^{n(a) a}`` is exact (always the case on ``Lambda_0``), and a
    fraction otherwise.
    """
    alg = algebra_of(md)
    rs = md.rs
    a = rs.simple_coroot(i)
    s = _scaled(md, a)
    matrix = rs.simple_reflection(i).matrix
    v = alg.ring.v()
    if isinstance(f, AlgebraElement):
        num = f.weyl_act(matrix) * alg.binomial(v, s) + f * (v - 1)
        try:
            return num.divide_binomial(1, alg.key(s))
        except InexactDivision:
            return RationalElement(num, alg.binomial(1, s))
    den = alg.binomial(1, s)
    cc = RationalElement(alg.binomial(v, s), den)
    bb = RationalElement(alg.const(v - 1), den)
    return cc * f.weyl_act(matrix) + bb * f


def sph_word(md: MetaplecticData, word: Iterable[int], f):
    out = f
    for i in reversed(tuple(word)):
        out = sph_simple(md, i, out)
    return out


def gamma(md: MetaplecticData) -> RationalElement:
    alg = algebra_of(md)
    v = alg.ring.v()
    out = RationalElement(alg.one())
    for g in md.rs.positive_coroots:
        neg = tuple(-x for x in _scaled(md, g))
        out = out * RationalElement(alg.binomial(v, neg), alg.binomial(1, neg))
    return out


def gamma_sum(md: MetaplecticData, lam: Sequence[int] | None = None) -> RationalElement:
    """``sum_w Gamma^w e^{w lam}`` (``lam = 0`` by default)."""
    alg = algebra_of(md)
    lam = tuple(lam) if lam is not None else (0,) * md.rank
    base = gamma(md)
    total = RationalElement(alg.zero())
    for w in md.rs.weyl:
        total = total + base.weyl_act(w.matrix) * alg.e(md.rs.apply(w, lam))
    return total


def _poincare_in_v(md: MetaplecticData, elements) -> CoeffElement:
    ring = algebra_of(md).ring
    counts = md.rs.poincare_polynomial(elements).counts
    out = ring.zero()
    for k, c in enumerate(counts):
        if c:
            out = out + ring.v(k) * c
    return out


@dataclass
class SphericalResult:
    lam: Coweight
    formal: AlgebraElement | RationalElement   # v^{<rho, lam>} sum_{W^lam} T_w(e^lam)
    routes_agree: bool
    polynomial: bool
    numeric: dict[Coweight, complex] | None = None


def spherical_function(
    md: MetaplecticData, lam: Sequence[int], q=None, gauss: Sequence[complex] | None = None
) -> SphericalResult:
    lam = tuple(lam)
    if not md.rs.is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    alg = algebra_of(md)
    stab, reps = md.rs.stabilizer_and_cosets(lam)
    total = alg.zero()
    f = alg.e(lam)
    for w in reps:
        total = total + sph_word(md, w.reduced_word, f)
    scale = alg.const(alg.ring.v(md.rs.rho_pairing(lam)))
    formal = total * scale
    w_lam = alg.const(_poincare_in_v(md, stab))
    agree = gamma_sum(md, lam) == total * w_lam
    if isinstance(formal, RationalElement):
        try:
            formal = formal.to_polynomial()
        except InexactDivision:
            pass
    polynomial = isinstance(formal, AlgebraElement)
    out = SphericalResult(lam, formal, agree, polynomial)
    if q is not None and polynomial:
        if gauss is None:
            gauss = [complex(-1)] + [complex(0)] * (md.n - 1)
        out.numeric = formal.specialize(q, gauss)
    return out


@dataclass
class MacdonaldReport:
    identity: str = "zero-case"
    gamma_sum_ok: bool = False
    m_is_one: bool = False
    mismatched: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.gamma_sum_ok and self.m_is_one

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "ok": self.ok,
            "gamma_sum_ok": self.gamma_sum_ok,
            "m_is_one": self.m_is_one,
            "mismatched": [list(w) for w in self.mismatched],
        }


def symmetrizer_coefficients(md: MetaplecticData) -> dict[int, RationalElement]:
    """Coefficients of ``sum_w T_w`` in the twisted group algebra over ``W``.

    Keys are Weyl element ids; ``f[w] g[u] = f g^w [wu]``.
    """
    rs = md.rs
    alg = algebra_of(md)
    v = alg.ring.v()
    letters = {}
    for i in range(md.rank):
        s = _scaled(md, rs.simple_coroot(i))
        den = alg.binomial(1, s)
        letters[i] = {
            rs.simple_reflection(i).id: RationalElement(alg.binomial(v, s), den),
            0: RationalElement(alg.const(v - 1), den),
        }
    memo: dict[tuple[int, ...], dict[int, RationalElement]] = {(): {0: RationalElement(alg.one())}}

    def expand(word: tuple[int, ...]) -> dict[int, RationalElement]:
        if word in memo:
            return memo[word]
        # T_{b_1} (T_{b_2} ... T_{b_r}) so multiply the letter on the left
        rest = expand(word[1:])
        out: dict[int, RationalElement] = {}
        for u, f in letters[word[0]].items():
            wu = rs.weyl[u]
            for x, g in rest.items():
                key = rs.multiply(wu, rs.weyl[x]).id
                term = f * g.weyl_act(wu.matrix)
                out[key] = out[key] + term if key in out else term
        memo[word] = out
        return out

    theta: dict[int, RationalElement] = {}
    for w in rs.weyl:
        for key, val in expand(w.reduced_word).items():
            theta[key] = theta[key] + val if key in theta else val
    return theta


def verify_macdonald(md: MetaplecticData) -> MacdonaldReport:
    """``sum_w Gamma^w = W(v)`` and ``sum_w T_w = sum_w Gamma^w [w]`` in the twisted algebra."""
    alg = algebra_of(md)
    report = MacdonaldReport()
    total_w = alg.const(_poincare_in_v(md, md.rs.weyl))
    report.gamma_sum_ok = gamma_sum(md) == RationalElement(total_w)
    theta = symmetrizer_coefficients(md)
    base = gamma(md)
    for w in md.rs.weyl:
        if theta.get(w.id, RationalElement(alg.zero())) != base.weyl_act(w.matrix):
            report.mismatched.append(w.reduced_word)
    report.m_is_one = not report.mismatched
    return report


def verify_hecke(md: MetaplecticData, bound: int = 2) -> BraidReport:
    """``(T_a + 1)(T_a - v) e^lam = 0`` for every simple root and ``lam`` in a box."""
    alg = algebra_of(md)
    v = alg.const(alg.ring.v())
    report = BraidReport()
    for i in range(md.rank):
        for lam in box_points(md.rank, bound):
            report.cases += 1
            f = alg.e(lam)
            g = sph_simple(md, i, f) - f * v
            if not (sph_simple(md, i, g) + g).is_zero():
                report.failures.append(lam)
    return report


def verify_stabilizer(md: MetaplecticData, lam: Sequence[int]) -> bool:
    """``T_w(e^lam) = v^{l(w)} e^lam`` for every ``w`` fixing ``lam``."""
    alg = algebra_of(md)
    stab, _ = md.rs.stabilizer_and_cosets(lam)
    f = alg.e(tuple(lam))
    return all(
        sph_word(md, w.reduced_word, f) == f * alg.const(alg.ring.v(w.length)) for w in stab
    )


def verify_coset_collapse(md: MetaplecticData, lam: Sequence[int]) -> bool:
    """``sum_W T_w(e^lam) = W_lam(v) sum_{W^lam} T_w(e^lam)``."""
    alg = algebra_of(md)
    lam = tuple(lam)
    stab, reps = md.rs.stabilizer_and_cosets(lam)
    f = alg.e(lam)
    full = alg.zero()
    for w in md.rs.weyl:
        full = full + sph_word(md, w.reduced_word, f)
    part = alg.zero()
    for w in reps:
        part = part + sph_word(md, w.reduced_word, f)
    return full == part * alg.const(_poincare_in_v(md, stab))


def verify_braid_sph(md: MetaplecticData, bound: int = 2) -> BraidReport:
    alg = algebra_of(md)
    report = BraidReport()
    for i in range(md.rank):
        for j in range(i + 1, md.rank):
            m = braid_order(md, i, j)
            left, right = alternating(i, j, m), alternating(j, i, m)
            for lam in box_points(md.rank, bound):
                report.cases += 1
                f = alg.e(lam)
                if sph_word(md, left, f) != sph_word(md, right, f):
                    report.failures.append(lam)
    return report
