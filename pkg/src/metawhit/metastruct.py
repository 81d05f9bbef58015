"""
Metaplectic arithmetic attached to a root system and a cover degree ``n``.

``Q`` is the W-invariant quadratic form on the coroot lattice with
``Q(short coroot) = kappa``; ``B(lam, g) = <lam, g> Q(g)`` is its polar form
evaluated against a coroot; ``n(g) = n / gcd(n, Q(g))``.  The sublattice
``Lambda_0`` is cut out by ``B(lam, a_i) = 0 mod n`` for all simple coroots.

>>> md = MetaplecticData.build("B2", n=2)
>>> md.n_of((1, 0)), md.n_of((0, 1))
(2, 1)
"""

from __future__ import annotations

__all__ = [
    "MetaplecticData", "Rank2Classification", "Rank2Iso",
    "bilinear_B", "n_of_coroot", "lambda0_basis", "residue",
    "rank2_classify", "rank2_iso", "hermite_basis",
]

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Sequence

from .rootsys import CartanSpec, Coweight, RootSystem, build_root_system


def hermite_basis(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form basis of the lattice spanned by ``generators``."""
    rows = [list(g) for g in generators if any(g)]
    if not rows:
        return []
    dim = len(rows[0])
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            col += 1
            continue
        # Euclid on the pivot column
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            nxt = [pivot]
            for r in live[1:]:
                q = r[col] // pivot[col]
                red = [a - q * b for a, b in zip(r, pivot)]
                if red[col] != 0:
                    nxt.append(red)
                elif any(red):
                    rest.append(red)
            live = nxt
        pivot = live[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)
        rows = rest
        col += 1
    # reduce entries above each pivot
    for i, row in enumerate(basis):
        c = next(j for j, a in enumerate(row) if a)
        for k in range(i):
            q = basis[k][c] // row[c]
            basis[k] = [a - q * b for a, b in zip(basis[k], row)]
    return [tuple(r) for r in basis]


@dataclass
class MetaplecticData:
    """Cover degree, quadratic form and derived tables for one root system."""
    rs: RootSystem
    n: int
    kappa: int = 1
    q_values: dict[Coweight, int] = field(init=False)
    n_table: dict[Coweight, int] = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("cover degree n must be positive")
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")
        self.q_values = {g: self.kappa * self.rs.squared_length(g) for g in self.rs.coroots}
        self.n_table = {g: self.n // gcd(self.n, q) for g, q in self.q_values.items()}

    @classmethod
    def build(cls, cartan: str | CartanSpec | RootSystem, n: int, kappa: int = 1) -> MetaplecticData:
        rs = cartan if isinstance(cartan, RootSystem) else build_root_system(cartan)
        return cls(rs, n, kappa)

    @property
    def rank(self) -> int:
        return self.rs.rank

    def _check(self, g: Sequence[int]) -> Coweight:
        g = tuple(g)
        if g not in self.q_values:
            raise ValueError(f"{g} is not a coroot")
        return g

    def Q(self, g: Sequence[int]) -> int:
        return self.q_values[self._check(g)]

    def Q_form(self, lam: Sequence[int]) -> int:
        """``Q`` on an arbitrary coweight (``B(x, x) = 2 Q(x)``)."""
        return self.kappa * self.rs.form(lam, lam) // 2

    def B(self, lam: Sequence[int], g: Sequence[int]) -> int:
        g = self._check(g)
        return self.rs.root_pairing(lam, g) * self.q_values[g]

    def B_form(self, x: Sequence[int], y: Sequence[int]) -> int:
        """The polar form on arbitrary coweights."""
        return self.kappa * self.rs.form(x, y)

    def n_of(self, g: Sequence[int]) -> int:
        return self.n_table[self._check(g)]

    def simple_Q(self, i: int) -> int:
        return self.q_values[self.rs.simple_coroot(i)]

    def simple_n(self, i: int) -> int:
        return self.n_table[self.rs.simple_coroot(i)]

    def residue(self, k: int, g: Sequence[int]) -> int:
        return k % self.n_of(g)

    def in_lambda0(self, lam: Sequence[int]) -> bool:
        return all(
            self.B(lam, self.rs.simple_coroot(i)) % self.n == 0 for i in range(self.rank)
        )

    @cached_property
    def lambda0_basis(self) -> list[Coweight]:
        r = self.rank
        gens = [tuple(self.n if j == i else 0 for j in range(r)) for i in range(r)]
        for lam in product(range(self.n), repeat=r):
            if any(lam) and self.in_lambda0(lam):
                gens.append(lam)
        return hermite_basis(gens)

    @cached_property
    def lambda_tilde_basis(self) -> list[Coweight] | None:
        if self.rank != 2:
            return None
        return [
            tuple(self.simple_n(i) * x for x in self.rs.simple_coroot(i)) for i in range(2)
        ]

    def echo(self) -> dict:
        return {
            "n": self.n,
            "kappa": self.kappa,
            "q_values": {",".join(map(str, g)): q for g, q in sorted(self.q_values.items()) if sum(g) > 0},
            "n_table": {",".join(map(str, g)): m for g, m in sorted(self.n_table.items()) if sum(g) > 0},
            "lambda0_basis": [list(b) for b in self.lambda0_basis],
        }


def bilinear_B(md: MetaplecticData, lam: Sequence[int], g: Sequence[int]) -> int:
    return md.B(lam, g)


def n_of_coroot(md: MetaplecticData, g: Sequence[int]) -> int:
    return md.n_of(g)


def lambda0_basis(md: MetaplecticData) -> list[Coweight]:
    return md.lambda0_basis


def residue(md: MetaplecticData, k: int, g: Sequence[int]) -> int:
    return md.residue(k, g)


@dataclass(frozen=True)
class Rank2Classification:
    verdict: str               # "A2", "B2", "G2" or "orthogonal"
    ratio: int | None          # Q(long) / Q(short)
    short: Coweight | None     # the shorter simple coroot
    B_short_long: int


def rank2_classify(md: MetaplecticData) -> Rank2Classification:
    """Decide which rank-two case holds from ``Q`` and ``B`` alone."""
    if md.rank != 2:
        raise ValueError("rank-two data required")
    a, b = md.rs.simple_coroot(0), md.rs.simple_coroot(1)
    bab = md.B(a, b)
    if bab == 0:
        return Rank2Classification("orthogonal", None, None, 0)
    qa, qb = md.Q(a), md.Q(b)
    short, qs, ql = (a, qa, qb) if qa <= qb else (b, qb, qa)
    ratio = Fraction(ql, qs)
    if ratio.denominator != 1 or ratio not in (1, 2, 3):
        raise ValueError(f"unexpected Q ratio {ratio}")
    ratio = int(ratio)
    if bab != -ratio * qs:
        raise ValueError(f"B(a, b) = {bab} does not match ratio {ratio}")
    return Rank2Classification({1: "A2", 2: "B2", 3: "G2"}[ratio], ratio, short, bab)


@dataclass(frozen=True)
class Rank2Iso:
    """Assignment of the basis ``n(a)a, n(b)b`` of the rescaled lattice to ``a, b``."""
    swapped: bool
    images: dict[Coweight, Coweight]
    q_ratio_source: Fraction
    q_ratio_target: Fraction


def rank2_iso(md: MetaplecticData) -> Rank2Iso:
    """The generator assignment identifying the rescaled rank-two system.

    When ``n(a) = n(b)`` the rescaled basis maps to ``a, b`` in order; otherwise
    the two generators trade places, and the ratio of ``Q`` values of the
    rescaled basis equals the inverse ratio on the original basis.
    """
    cls = rank2_classify(md)
    if cls.verdict == "orthogonal":
        raise ValueError("the orthogonal case has no such isomorphism")
    a, b = md.rs.simple_coroot(0), md.rs.simple_coroot(1)
    na, nb = md.n_of(a), md.n_of(b)
    ta = tuple(na * x for x in a)
    tb = tuple(nb * x for x in b)
    swapped = na != nb
    images = {ta: b, tb: a} if swapped else {ta: a, tb: b}
    src = Fraction(md.Q_form(tb), md.Q_form(ta))
    tgt = Fraction(md.Q_form(images[tb]), md.Q_form(images[ta]))
    if src != tgt:
        raise AssertionError(f"Q ratios disagree: {src} vs {tgt}")
    return Rank2Iso(swapped, images, src, tgt)
