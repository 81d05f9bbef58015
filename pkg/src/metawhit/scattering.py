"""
Coefficient series of a simple intertwiner and the two-term scattering rule.

For a simple root ``a`` with ``m = n(a)``, ``Q = Q(a)`` and ``k = <xi, a>`` the
weighted coefficients of ``I_a`` applied to the basis function at ``xi`` are

    exceptional  at w_a xi - a:      q^{-1} G_{(k + 1) Q} q^{1 + k}
    regular      at w_a xi + j a:    (1 - q^{-1}) q^{-j + k},  j >= 0, j = k mod m

each multiplied by ``q^{<rho, mu>}`` at the point ``mu``.  The same numbers come
out of expanding ``q^{<rho, xi>} c(a) (w_a * e^xi)`` in positive powers of
``e^{m a}``; ``verify_intertwiner`` compares the two.

For a finite family ``F = sum a_xi e^xi`` the coefficient of ``e^mu`` in
``c(a) (w_a * F)`` is

    (1 - q^{-1}) sum_{j >= 0} a_{mu + nu + j m a}  +  q^{-1} G_{-Q - B(mu, a)} a_{w_a mu - a}

with ``nu = (res_m(<mu, a>) - <mu, a>) a``.
"""

from __future__ import annotations

__all__ = [
    "GammaSeries", "gamma_series", "IntertwinerReport", "verify_intertwiner",
    "TauPair", "tau_coeffs", "mcnamara_pair", "verify_mcnamara_match", "ceiling_identity",
    "ScatteringReport", "verify_scattering_relation", "random_family",
]

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cgaction import algebra_of, cg_simple
from .dlops import c_func
from .galgebra import AlgebraElement, RationalElement, series_expand
from .gausscoeff import CoeffElement, specialize
from .metastruct import MetaplecticData
from .rootsys import Coweight

TOL = 1e-9


def _along(lam: Sequence[int], i: int, t: int) -> Coweight:
    out = list(lam)
    out[i] += t
    return tuple(out)


def _gauss_value(gauss: Sequence[complex], index: int) -> complex:
    return gauss[index % len(gauss)]


@dataclass
class GammaSeries:
    """Weighted coefficients of ``Gamma_{a, xi}``; ``regular`` is keyed by ``j``."""
    root: int
    base: Coweight
    exceptional: tuple[Coweight, complex]
    regular: list[tuple[int, complex]]
    reflected: Coweight                      # w_a xi

    def points(self) -> dict[Coweight, complex]:
        out = {self.exceptional[0]: self.exceptional[1]}
        for j, c in self.regular:
            out[_along(self.reflected, self.root, j)] = c
        return out


def gamma_series(
    md: MetaplecticData, i: int, xi: Sequence[int], cutoff: int, q, gauss: Sequence[complex]
) -> GammaSeries:
    rs = md.rs
    xi = tuple(xi)
    k = rs.pairing(xi, i)
    m, Q = md.simple_n(i), md.simple_Q(i)
    q = complex(q)
    base = rs.reflect(i, xi)
    exc_pt = _along(base, i, -1)
    exc = q ** rs.rho_pairing(exc_pt) * q ** -1 * _gauss_value(gauss, (k + 1) * Q) * q ** (1 + k)
    regular = []
    for j in range(cutoff * m + 1):
        if (j - k) % m:
            continue
        pt = _along(base, i, j)
        regular.append((j, q ** rs.rho_pairing(pt) * (1 - 1 / q) * q ** (-j + k)))
    return GammaSeries(i, xi, (exc_pt, exc), regular, base)


@dataclass
class IntertwinerReport:
    root: int
    xi: Coweight
    compared: int = 0
    max_residual: float = 0.0
    residuals: dict[Coweight, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.compared > 0 and self.max_residual < TOL

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "xi": list(self.xi),
            "compared": self.compared,
            "max_residual": self.max_residual,
            "residuals": [[list(k), v] for k, v in sorted(self.residuals.items())],
            "ok": self.ok,
        }


def _scaled_root(md: MetaplecticData, i: int) -> Coweight:
    m = md.simple_n(i)
    return tuple(m * x for x in md.rs.simple_coroot(i))


def _intertwined(md: MetaplecticData, i: int, f: AlgebraElement | RationalElement) -> RationalElement:
    """``c(a) (w_a * f)`` with the shared ``1 - v e^{-m a}`` cancelled."""
    out = c_func(md, md.rs.simple_coroot(i)) * cg_simple(md, i, f)
    alg = algebra_of(md)
    shared = alg.binomial(alg.ring.v(), tuple(-x for x in _scaled_root(md, i)))
    (_, _), norm = shared.normalize()
    while out.den_factors.get(norm, 0):
        out = out.cancel_known(norm)
    return out


def verify_intertwiner(
    md: MetaplecticData, i: int, xi: Sequence[int], cutoff: int, q, gauss: Sequence[complex]
) -> IntertwinerReport:
    """Series of ``q^{<rho, xi>} c(a) (w_a * e^xi)`` against ``gamma_series``."""
    xi = tuple(xi)
    alg = algebra_of(md)
    rs = md.rs
    a = rs.simple_coroot(i)
    sl = series_expand(_intertwined(md, i, alg.e(xi)), a, cutoff, step=md.simple_n(i))
    weight = complex(q) ** rs.rho_pairing(xi)
    lhs = {lam: weight * c for lam, c in sl.specialize(q, gauss).items()}
    gs = gamma_series(md, i, xi, cutoff, q, gauss)
    rhs = gs.points()
    # regular points are listed up to j = cutoff * m
    reach = sl.position(_along(gs.reflected, i, cutoff * md.simple_n(i) + 1))
    report = IntertwinerReport(i, xi)
    for lam in sorted(set(lhs) | set(rhs)):
        pos = sl.position(lam)
        if not sl.is_exact_at(lam) or pos >= reach:
            continue
        res = abs(lhs.get(lam, 0) - rhs.get(lam, 0))
        report.residuals[lam] = res
        report.compared += 1
        report.max_residual = max(report.max_residual, res)
    return report


@dataclass
class TauPair:
    """The two scattering coefficients at ``mu`` for a simple root.

    ``tau_diag`` is ``(1 - v) e^{nu} / (1 - e^{-m a})`` with ``nu`` as in the
    module docstring; ``tau_off`` is ``v g_{-Q - B(mu, a)}``.  The coefficient
    identity itself uses the shifts ``nu + j m a`` (``j >= 0``), which is
    ``tau_diag`` read with ``e^{-m a}`` replaced by ``e^{m a}``;
    ``diag_index`` recognizes them.
    """
    root: int
    mu: Coweight
    tau_diag: RationalElement
    tau_off: CoeffElement
    nu: Coweight
    step: Coweight

    def diag_index(self, shift: Sequence[int]) -> int | None:
        """``j`` with ``shift = nu + j m a`` and ``j >= 0``, or ``None``."""
        d = [x - y for x, y in zip(shift, self.nu)]
        t = next(p for p, s in enumerate(self.step) if s)
        j, rem = divmod(d[t], self.step[t])
        if rem or j < 0 or any(x != j * s for x, s in zip(d, self.step)):
            return None
        return j


def tau_coeffs(md: MetaplecticData, i: int, mu: Sequence[int]) -> TauPair:
    rs = md.rs
    alg = algebra_of(md)
    ring = alg.ring
    mu = tuple(mu)
    a = rs.simple_coroot(i)
    k = rs.pairing(mu, i)
    Q = md.simple_Q(i)
    nu = tuple((md.residue(k, a) - k) * x for x in a)
    step = _scaled_root(md, i)
    diag = RationalElement(alg.e(nu, 1 - ring.v()), alg.binomial(1, tuple(-x for x in step)))
    off = ring.v() * ring.g(-Q - md.B(mu, a))
    return TauPair(i, mu, diag, off, nu, step)


def ceiling_identity(k: int, n: int) -> bool:
    """``k + res_n(-k) = ceil(k / n) n``."""
    return k + (-k) % n == -(-k // n) * n


def mcnamara_pair(md: MetaplecticData, i: int, mu: Sequence[int]) -> tuple[RationalElement, CoeffElement]:
    """``(tau1, tau2)`` written directly in the ceiling form."""
    rs = md.rs
    alg = algebra_of(md)
    ring = alg.ring
    mu = tuple(mu)
    a = rs.simple_coroot(i)
    m, Q = md.simple_n(i), md.simple_Q(i)
    B = md.B(mu, a)
    top = -(-B // (m * Q)) * m
    tau1 = RationalElement(alg.e(tuple(top * x for x in a), 1 - ring.v()), alg.binomial(1, _scaled_root(md, i)))
    tau2 = ring.v() * ring.g(-Q + B)
    return tau1, tau2


def _mirrored(md: MetaplecticData, i: int, mu: Sequence[int]) -> tuple[RationalElement, CoeffElement]:
    """``tau_coeffs`` with ``a`` sent to ``-a`` in every pairing and in the denominator.

    The pairing ``<mu, a>`` becomes ``-<mu, a>`` (so ``B`` changes sign) while
    the exponent is still measured along ``a``.
    """
    rs = md.rs
    alg = algebra_of(md)
    ring = alg.ring
    a = rs.simple_coroot(i)
    k = -rs.pairing(tuple(mu), i)
    Q = md.simple_Q(i)
    shift = -k + md.residue(k, a)
    diag = RationalElement(alg.e(tuple(shift * x for x in a), 1 - ring.v()), alg.binomial(1, _scaled_root(md, i)))
    off = ring.v() * ring.g(-Q - k * Q)
    return diag, off


def verify_mcnamara_match(md: MetaplecticData, i: int, mu: Sequence[int], k_range: int = 20) -> bool:
    m = md.simple_n(i)
    if not all(ceiling_identity(k, m) for k in range(-k_range, k_range + 1)):
        return False
    d1, o1 = _mirrored(md, i, mu)
    d2, o2 = mcnamara_pair(md, i, mu)
    return d1 == d2 and o1 == o2


@dataclass
class ScatteringReport:
    root: int
    families: int = 0
    points: int = 0
    max_residual: float = 0.0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.families > 0 and not self.failures

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "families": self.families,
            "points": self.points,
            "max_residual": self.max_residual,
            "failures": self.failures,
            "ok": self.ok,
        }


def random_family(
    md: MetaplecticData, rng: random.Random, terms: int = 4, bound: int = 2
) -> dict[Coweight, complex]:
    """``terms`` distinct points of the box with small Gaussian-integer coefficients."""
    r = md.rank
    pts: set[Coweight] = set()
    while len(pts) < terms:
        pts.add(tuple(rng.randint(-bound, bound) for _ in range(r)))
    out = {}
    for pt in sorted(pts):
        out[pt] = complex(rng.randint(-5, 5), rng.randint(-5, 5)) or 1 + 0j
    return out


def _window(md: MetaplecticData, family: Mapping[Coweight, complex], i: int, margin: int) -> list[Coweight]:
    """Points within ``margin`` of the family's reflected support along the root line."""
    rs = md.rs
    pts: set[Coweight] = set()
    for xi in family:
        for t in range(-margin - 1, margin + 1):
            pts.add(_along(xi, i, t))
            pts.add(_along(rs.reflect(i, xi), i, t))
    return sorted(pts)


def _family_side(
    md: MetaplecticData, i: int, family: Mapping[Coweight, complex], mu: Coweight, q, gauss
) -> complex:
    pair = tau_coeffs(md, i, mu)
    diag = 0j
    for xi, c in family.items():
        if pair.diag_index(tuple(x - y for x, y in zip(xi, mu))) is not None:
            diag += c
    diag *= 1 - 1 / complex(q)
    off = specialize(pair.tau_off, q, gauss)
    return diag + off * family.get(_along(md.rs.reflect(i, mu), i, -1), 0)


def verify_scattering_relation(
    md: MetaplecticData,
    i: int,
    families: Sequence[Mapping[Coweight, complex]],
    q,
    gauss: Sequence[complex],
    cutoff: int | None = None,
    margin: int = 3,
) -> ScatteringReport:
    """Coefficientwise check of the two-term rule on a window around each family.

    The left side expands ``c(a) (w_a * F)`` for the basis monomials once and
    combines them with the family's complex coefficients.  With ``cutoff=None``
    each expansion is lengthened until it is exact on the whole window; a fixed
    cutoff that falls short raises ``ValueError``.
    """
    rs = md.rs
    alg = algebra_of(md)
    a = rs.simple_coroot(i)
    m = md.simple_n(i)
    report = ScatteringReport(i)
    cache: dict[Coweight, tuple[dict[Coweight, complex], int]] = {}

    def expansion(xi: Coweight, need: int):
        hit = cache.get(xi)
        if hit is not None and hit[1] > need:
            return hit
        length = cutoff if cutoff is not None else 4
        while True:
            sl = series_expand(_intertwined(md, i, alg.e(xi)), a, length, step=m)
            if sl.exact_below > need or cutoff is not None:
                break
            length *= 2
        cache[xi] = (sl.specialize(q, gauss), sl.exact_below)
        return cache[xi]

    for family in families:
        report.families += 1
        window = _window(md, family, i, margin)
        need = max(sum(x * y for x, y in zip(mu, a)) for mu in window)
        pieces = [(c, *expansion(xi, need)) for xi, c in family.items()]
        exact_below = min(e for _, _, e in pieces)
        for mu in window:
            pos = sum(x * y for x, y in zip(mu, a))
            if pos >= exact_below:
                raise ValueError(
                    f"window point {mu} lies beyond the exact part of the expansion; raise the cutoff"
                )
            lhs = sum(c * coeffs.get(mu, 0) for c, coeffs, _ in pieces)
            rhs = _family_side(md, i, family, mu, q, gauss)
            res = abs(lhs - rhs)
            report.points += 1
            report.max_residual = max(report.max_residual, res)
            if res >= TOL:
                report.failures.append({"mu": list(mu), "lhs": [lhs.real, lhs.imag], "rhs": [rhs.real, rhs.imag]})
    return report
