"""
Brute-force numeric oracle over residue rings of ``Z_p``.

The residue field is ``F_p`` with ``p = 1 mod 2n``.  The power residue symbol
``(u, pi)`` is modelled by the order-``n`` character ``chi(g^j) = exp(2 pi i j / n)``
for a fixed primitive root ``g``, and the additive character of conductor ``O``
by ``psi(x / p^j) = exp(2 pi i x / p^j)``.

Gauss sums are ``G_k = sum_{u in F_p^*} chi(u)^{-k} exp(-2 pi i u / p)``.  The
rank-one integrals ``I_a(k)`` are finite sums over ``(Z/p^m)^*``.  Two sign
conventions (the exponent of ``chi`` and whether ``psi`` sees ``r`` or
``r^{-1}``) are fixed once by matching a single boundary case and then held
fixed; every other value is an independent check.
"""

from __future__ import annotations

__all__ = [
    "OracleConfig", "NumericGaussTable", "OracleError", "gauss_numeric",
    "rank1_integral", "rank1_whittaker_oracle", "calibrate", "Calibration",
    "MAX_RING_EXPONENT",
]

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from sympy.ntheory import isprime, primitive_root

MAX_RING_EXPONENT = 4


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    p: int
    n: int
    kappa: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise OracleError("n must be positive")
        if not isprime(self.p):
            raise OracleError(f"{self.p} is not prime")
        if (self.p - 1) % (2 * self.n):
            raise OracleError(f"p = {self.p} is not 1 mod 2n = {2 * self.n}")

    @cached_property
    def primitive_root(self) -> int:
        return primitive_root(self.p)

    @cached_property
    def dlog(self) -> dict[int, int]:
        """Discrete logarithm to base ``primitive_root`` on ``F_p^*``."""
        out = {}
        x = 1
        for j in range(self.p - 1):
            out[x] = j
            x = x * self.primitive_root % self.p
        return out

    def chi(self, u: int, power: int = 1) -> complex:
        """``chi(u)^power`` for ``u`` prime to ``p``."""
        j = self.dlog[u % self.p]
        return cmath.exp(2j * math.pi * ((j * power) % self.n) / self.n)


@dataclass
class NumericGaussTable:
    p: int
    n: int
    values: list[complex]

    def __getitem__(self, k: int) -> complex:
        return self.values[k % self.n]

    def product_defects(self) -> dict[int, float]:
        """``|G_k G_{n-k} - p|`` for ``n`` not dividing ``k``."""
        return {k: abs(self[k] * self[self.n - k] - self.p) for k in range(1, self.n)}


def _exp_frac(x: int, m: int) -> complex:
    return cmath.exp(2j * math.pi * x / m)


def _fsum_complex(terms) -> complex:
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def gauss_numeric(cfg: OracleConfig) -> NumericGaussTable:
    p, n = cfg.p, cfg.n
    additive = {u: _exp_frac(-u, p) for u in range(1, p)}
    values = []
    for k in range(n):
        values.append(_fsum_complex(cfg.chi(u, -k) * additive[u] for u in range(1, p)))
    return NumericGaussTable(p, n, values)


@dataclass(frozen=True)
class Calibration:
    s: int
    t: int
    reference: tuple[int, int, int, int]       # (p, n, kappa, pairing)
    candidates: tuple[tuple[int, int], ...]    # every (s, t) matching the reference


def _integral(cfg: OracleConfig, pairing: int, k: int, s: int, t: int) -> complex:
    if k < 1:
        raise OracleError("k must be positive")
    m = max(1, k - pairing)
    if m > MAX_RING_EXPONENT:
        raise OracleError(f"residue ring Z/{cfg.p}^{m} exceeds the enumeration bound")
    p = cfg.p
    modulus = p ** m
    conductor = k - pairing            # psi sees x / p^conductor
    power = k * cfg.kappa * s
    terms = []
    for r in range(1, modulus):
        if r % p == 0:
            continue
        x = r if t > 0 else pow(r, -1, modulus)
        phase = _exp_frac(x % p ** conductor, p ** conductor) if conductor > 0 else 1
        terms.append(cfg.chi(r, power) * phase)
    return _fsum_complex(terms) / modulus


def _boundary_target(cfg: OracleConfig, pairing: int) -> complex:
    return gauss_numeric(cfg)[cfg.kappa * (pairing + 1)] / cfg.p


@lru_cache(maxsize=None)
def calibrate(p: int = 7, n: int = 3, kappa: int = 1, pairing: int = 0) -> Calibration:
    """Choose ``(s, t)`` so that ``I_a(pairing + 1) = p^{-1} G_{kappa (pairing + 1)}``.

    The default reference ``p = 7, n = 3`` has ``G_1 != G_2``, which separates
    the character orientations.
    """
    cfg = OracleConfig(p, n, kappa)
    target = _boundary_target(cfg, pairing)
    hits = tuple(
        (s, t)
        for s in (1, -1)
        for t in (1, -1)
        if abs(_integral(cfg, pairing, pairing + 1, s, t) - target) < 1e-9
    )
    if not hits:
        raise OracleError("no orientation reproduces the boundary Gauss sum")
    s, t = hits[0]
    return Calibration(s, t, (p, n, kappa, pairing), hits)


def rank1_integral(cfg: OracleConfig, pairing: int, k: int) -> tuple[int, complex]:
    """``(-k, I_a(k))``: the shift along ``a`` and the integral value."""
    cal = calibrate()
    return -k, _integral(cfg, pairing, k, cal.s, cal.t)


@dataclass
class Rank1Table:
    """``q^{-<rho, lam>} W(pi^lam)`` as ``{j: coefficient of e^{lam + j a}}``."""
    p: int
    n: int
    kappa: int
    pairing: int
    coeffs: dict[int, complex] = field(default_factory=dict)
    calibration: Calibration | None = None

    def nonzero(self, tol: float = 1e-8) -> dict[int, complex]:
        return {j: c for j, c in sorted(self.coeffs.items()) if abs(c) > tol}


def rank1_whittaker_oracle(cfg: OracleConfig, pairing: int) -> Rank1Table:
    """Sum ``e^lam + sum_k I_a(k) e^{lam - k a}`` over every ``k`` the ring bound allows."""
    if pairing < 0:
        raise OracleError("pairing must be nonnegative")
    if pairing > 4:
        raise OracleError("pairing above 4 is outside the oracle range")
    table = Rank1Table(cfg.p, cfg.n, cfg.kappa, pairing, {0: 1 + 0j}, calibrate())
    for k in range(1, pairing + MAX_RING_EXPONENT + 1):
        shift, value = rank1_integral(cfg, pairing, k)
        table.coeffs[shift] = value
    return table
