"""
Metaplectic Demazure-Lusztig operators and the Whittaker function.

With ``m = n(a)``::

    b(a) = (v - 1) / (1 - e^{m a})
    c(a) = (1 - v e^{-m a}) / (1 - e^{m a})
    T_a f = c(a) (w_a * f) + b(a) f

``T_a`` preserves polynomials; every application here ends with an exact
division which raises ``InexactDivision`` if that ever fails.

The symmetrizer ``P = sum_w T_w`` is compared against the alternating star sum

    (Delta_v / Delta) sum_w (-1)^{l(w)} e^{-sum_{b in R(w^-1)} n(b) b} (w * e^lam)

and the Whittaker function is ``v^{<rho, lam>} P(e^lam)`` (``v = 1/q``).
"""

from __future__ import annotations

__all__ = [
    "b_func", "c_func", "dl_simple", "dl_word", "dl_closed_form", "symmetrizer",
    "cs_rhs", "delta", "whittaker_full", "WhittakerResult", "verify_braid_dl",
    "twisted_expand", "TwistedExpansion", "verify_fg", "FgReport", "star_reduce",
    "rank1_whittaker_closed_form", "verify_quadratic_relation",
]

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .cgaction import (
    BraidReport, algebra_of, alternating, box_points, braid_order, cg_simple, simple_data,
)
from .galgebra import AlgebraElement, RationalElement
from .metastruct import MetaplecticData
from .rootsys import Coweight


def _scaled(md: MetaplecticData, g: Sequence[int], metaplectic: bool = True) -> Coweight:
    m = md.n_of(g) if metaplectic else 1
    return tuple(m * x for x in g)


def b_func(md: MetaplecticData, g: Sequence[int], metaplectic: bool = True, sign: int = 1) -> RationalElement:
    """``b(g) = (v - 1) / (1 - e^{n(g) g})``; ``sign=-1`` gives ``(1 - v) / (1 - e^{g})``."""
    alg = algebra_of(md)
    ring = alg.ring
    num = alg.const(ring.v() - 1) if sign > 0 else alg.const(1 - ring.v())
    return RationalElement(num, alg.binomial(1, _scaled(md, g, metaplectic)))


def c_func(md: MetaplecticData, g: Sequence[int], metaplectic: bool = True) -> RationalElement:
    """``c(g) = (1 - v e^{-n(g) g}) / (1 - e^{n(g) g})``."""
    alg = algebra_of(md)
    s = _scaled(md, g, metaplectic)
    return RationalElement(alg.binomial(alg.ring.v(), tuple(-x for x in s)), alg.binomial(1, s))


def dl_simple(md: MetaplecticData, i: int, f: AlgebraElement | RationalElement) -> AlgebraElement:
    """``T_{a_i} f`` as a polynomial."""
    sd = simple_data(md, i)
    alg = sd.alg
    if isinstance(f, RationalElement):
        if f.den_factors:
            a = sd.a
            out = c_func(md, a) * cg_simple(md, i, f) + b_func(md, a) * f
            return out.to_polynomial()
        f = f.num
    num = sd.numerator(f) + f * (alg.ring.v() - 1)
    delta = alg.key(tuple(sd.m * x for x in sd.a))
    return num.divide_binomial(1, delta)


def dl_word(md: MetaplecticData, word: Iterable[int], f: AlgebraElement) -> AlgebraElement:
    """``T_{b_1} ... T_{b_r} f`` (rightmost letter first)."""
    out = f
    for i in reversed(tuple(word)):
        out = dl_simple(md, i, out)
    return out


def dl_closed_form(md: MetaplecticData, i: int, lam: Sequence[int]) -> AlgebraElement:
    """Closed form of ``T_{a_i}(e^lam)`` for ``<lam, a_i> >= 0``.

    For ``k = <lam, a_i> > 0`` the terms are ``(1 - v) e^{lam - j m a}`` for
    ``0 < j m <= k`` plus ``v g_{Q + kQ} e^{w_a lam - a}``; at ``k = 0`` only the
    last term survives, with a plus sign.
    """
    rs = md.rs
    alg = algebra_of(md)
    ring = alg.ring
    lam = tuple(lam)
    k = rs.pairing(lam, i)
    if k < 0:
        raise ValueError("closed form is only provided for <lam, a> >= 0")
    m, q = md.simple_n(i), md.simple_Q(i)
    a = rs.simple_coroot(i)
    out = alg.zero()
    j = 1
    while j * m <= k:
        out = out + alg.e(tuple(x - j * m * y for x, y in zip(lam, a)), 1 - ring.v())
        j += 1
    tail = tuple(x - y for x, y in zip(rs.reflect(i, lam), a))
    return out + alg.e(tail, ring.v() * ring.g(q + k * q))


def _suffix_memo(md: MetaplecticData, step: Callable, start) -> Callable[[tuple[int, ...]], object]:
    memo: dict[tuple[int, ...], object] = {(): start}

    def value(word: tuple[int, ...]):
        if word not in memo:
            memo[word] = step(word[0], value(word[1:]))
        return memo[word]

    return value


def _require_dominant(md: MetaplecticData, lam: Sequence[int]) -> Coweight:
    lam = tuple(lam)
    if len(lam) != md.rank:
        raise ValueError(f"coweight {lam} has the wrong rank")
    if not md.rs.is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    return lam


def t_w_values(md: MetaplecticData, lam: Sequence[int]) -> dict[int, AlgebraElement]:
    """``T_w(e^lam)`` for every ``w`` (canonical reduced words), keyed by element id."""
    alg = algebra_of(md)
    value = _suffix_memo(md, lambda i, f: dl_simple(md, i, f), alg.e(tuple(lam)))
    return {w.id: value(w.reduced_word) for w in md.rs.weyl}


def symmetrizer(md: MetaplecticData, lam: Sequence[int]) -> AlgebraElement:
    """``P(e^lam) = sum_w T_w(e^lam)`` for dominant ``lam``."""
    lam = _require_dominant(md, lam)
    out = algebra_of(md).zero()
    for val in t_w_values(md, lam).values():
        out = out + val
    return out


def delta(md: MetaplecticData, with_v: bool) -> RationalElement:
    """``prod_{a > 0} (1 - v e^{-n(a) a})`` if ``with_v``, else with ``v`` replaced by 1."""
    alg = algebra_of(md)
    c = alg.ring.v() if with_v else 1
    out = RationalElement(alg.one())
    for g in md.rs.positive_coroots:
        out = out * RationalElement(alg.binomial(c, tuple(-x for x in _scaled(md, g))))
    return out


def cs_rhs(md: MetaplecticData, lam: Sequence[int]) -> RationalElement:
    """The alternating star sum side of the symmetrizer identity."""
    lam = _require_dominant(md, lam)
    rs = md.rs
    alg = algebra_of(md)
    value = _suffix_memo(md, lambda i, f: cg_simple(md, i, f), RationalElement(alg.e(lam)))
    total = RationalElement(alg.zero())
    for w in rs.weyl:
        shift = [0] * md.rank
        for b in rs.inversions(rs.inverse(w)):
            nb = md.n_of(b)
            for t in range(md.rank):
                shift[t] -= nb * b[t]
        term = value(w.reduced_word) * alg.e(tuple(shift), (-1) ** w.length)
        total = total + term
    ratio = RationalElement(delta(md, True).num)
    for g in rs.positive_coroots:
        ratio = ratio / alg.binomial(1, tuple(-x for x in _scaled(md, g)))
    return ratio * total


@dataclass
class WhittakerResult:
    """Whittaker function values at ``pi^lam`` for one dominant ``lam``."""
    lam: Coweight
    dominant: bool
    formal: AlgebraElement                     # v^{<rho, lam>} P(e^lam)
    per_w: dict[tuple[int, ...], AlgebraElement] = field(default_factory=dict)
    closed_form_equal: bool | None = None
    numeric: dict[Coweight, complex] | None = None


def whittaker_full(
    md: MetaplecticData,
    lam: Sequence[int],
    q=None,
    gauss: Sequence[complex] | None = None,
    per_w: bool = False,
    check: bool = True,
) -> WhittakerResult:
    """``q^{-<rho, lam>} sum_w T_w(e^lam)``, formal in ``v`` and optionally specialized.

    Non-dominant ``lam`` gives the zero element.
    """
    lam = tuple(lam)
    alg = algebra_of(md)
    if not md.rs.is_dominant(lam):
        return WhittakerResult(lam, False, alg.zero(), numeric={} if q is not None else None)
    values = t_w_values(md, lam)
    P = alg.zero()
    for val in values.values():
        P = P + val
    scale = alg.const(alg.ring.v(md.rs.rho_pairing(lam)))
    result = WhittakerResult(lam, True, P * scale)
    if per_w:
        # the w-indexed pieces q^{<rho, lam>} T_w(e^lam), written as v^{-<rho, lam>} T_w
        unscale = alg.const(alg.ring.v(-md.rs.rho_pairing(lam)))
        result.per_w = {md.rs.weyl[i].reduced_word: val * unscale for i, val in values.items()}
    if check:
        result.closed_form_equal = cs_rhs(md, lam) == P
    if q is not None:
        if gauss is None:
            raise ValueError("numeric evaluation needs a Gauss table")
        result.numeric = result.formal.specialize(q, gauss)
    return result


def rank1_whittaker_closed_form(md: MetaplecticData, i: int, lam: Sequence[int]) -> AlgebraElement:
    """``e^lam + (1 - v) sum e^{lam - k a} + v g_{Q(1 + <lam, a>)} e^{w_a lam - a}``.

    The sum runs over ``1 <= k <= <lam, a>`` with ``n | kQ``.  This is
    ``(1 + T_a)(e^lam)`` written out for one simple root.
    """
    rs = md.rs
    alg = algebra_of(md)
    ring = alg.ring
    lam = tuple(lam)
    L = rs.pairing(lam, i)
    a = rs.simple_coroot(i)
    q = md.simple_Q(i)
    out = alg.e(lam)
    for k in range(1, L + 1):
        if (k * q) % md.n == 0:
            out = out + alg.e(tuple(x - k * y for x, y in zip(lam, a)), 1 - ring.v())
    tail = tuple(x - (L + 1) * y for x, y in zip(lam, a))
    return out + alg.e(tail, ring.v() * ring.g(q * (1 + L)))


def verify_braid_dl(md: MetaplecticData, bound: int = 2) -> BraidReport:
    """Both alternating ``m``-fold products of ``T`` agree on every ``e^lam`` of a box."""
    alg = algebra_of(md)
    report = BraidReport()
    for i in range(md.rank):
        for j in range(i + 1, md.rank):
            m = braid_order(md, i, j)
            left, right = alternating(i, j, m), alternating(j, i, m)
            for lam in box_points(md.rank, bound):
                report.cases += 1
                f = alg.e(lam)
                if dl_word(md, left, f) != dl_word(md, right, f):
                    report.failures.append(lam)
    return report


def verify_quadratic_relation(md: MetaplecticData, i: int, lam: Sequence[int]) -> bool:
    """Whether ``(T_a + 1)(T_a - v) e^lam = 0``."""
    alg = algebra_of(md)
    f = alg.e(tuple(lam))
    v = alg.const(alg.ring.v())
    g = dl_simple(md, i, f) - f * v
    return (dl_simple(md, i, g) + g).is_zero()


# -- twisted expansions over the free product <s, t | s^2 = t^2 = 1> ---------

def star_reduce(word: Iterable[int]) -> tuple[int, ...]:
    """Reduce a word in the free product of order-two groups (cancel equal neighbours)."""
    out: list[int] = []
    for x in word:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass
class TwistedExpansion:
    coeffs: dict[tuple[int, ...], RationalElement]

    def __getitem__(self, word: tuple[int, ...]) -> RationalElement:
        return self.coeffs[word]


def _letter(md: MetaplecticData, i: int, metaplectic: bool, b_sign: int) -> dict[tuple[int, ...], RationalElement]:
    a = md.rs.simple_coroot(i)
    return {(i,): c_func(md, a, metaplectic), (): b_func(md, a, metaplectic, b_sign)}


def twisted_expand(
    md: MetaplecticData, word: Sequence[int], metaplectic: bool = True, b_sign: int = 1
) -> TwistedExpansion:
    """Expand ``T_{b_1} ... T_{b_r}`` with ``f[w] g[w'] = f g^w [w * w']``.

    ``g^w`` is the ordinary action of the image of ``w`` in the Weyl group.
    ``metaplectic=False`` uses ``b, c`` of ``g`` itself rather than of
    ``n(g) g``; ``b_sign=-1`` flips the sign of ``b``.
    """
    rs = md.rs
    current: dict[tuple[int, ...], RationalElement] = {(): RationalElement(algebra_of(md).one())}
    for i in word:
        letter = _letter(md, i, metaplectic, b_sign)
        nxt: dict[tuple[int, ...], RationalElement] = {}
        for w, f in current.items():
            matrix = rs.from_word(w).matrix
            for w2, g in letter.items():
                key = star_reduce(w + w2)
                term = f * g.weyl_act(matrix)
                nxt[key] = nxt[key] + term if key in nxt else term
        current = nxt
    return TwistedExpansion(current)


@dataclass
class FgReport:
    words: int = 0
    mismatched: list[tuple[int, ...]] = field(default_factory=list)
    top_ok: bool = False

    @property
    def ok(self) -> bool:
        return not self.mismatched and self.top_ok

    def to_json(self) -> dict:
        return {
            "words": self.words,
            "mismatched": [list(w) for w in self.mismatched],
            "top_ok": self.top_ok,
            "ok": self.ok,
        }


def verify_fg(md: MetaplecticData, metaplectic: bool = True, b_sign: int = 1) -> FgReport:
    """Compare the twisted expansions of both alternating products in rank two."""
    if md.rank != 2:
        raise ValueError("rank-two data required")
    m = braid_order(md)
    left, right = alternating(0, 1, m), alternating(1, 0, m)
    f = twisted_expand(md, left, metaplectic, b_sign).coeffs
    g = twisted_expand(md, right, metaplectic, b_sign).coeffs
    report = FgReport()
    zero = RationalElement(algebra_of(md).zero())
    for y in sorted(set(f) | set(g)):
        if y in (left, right):
            continue
        report.words += 1
        if f.get(y, zero) != g.get(y, zero):
            report.mismatched.append(y)
    top = RationalElement(algebra_of(md).one())
    for gamma in md.rs.positive_coroots:
        top = top * c_func(md, gamma, metaplectic)
    report.top_ok = f[left] == g[right] == top
    return report
