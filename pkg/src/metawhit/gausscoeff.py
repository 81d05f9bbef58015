"""
The coefficient ring generated by ``v`` and Gauss symbols ``g_0, ..., g_{n-1}``.

The relations are ``g_0 = -1``, ``g_i g_{n-i} = v^{-1}`` and, for even ``n``,
``g_{n/2}^2 = v^{-1}``.  This ring is a Laurent ring in ``v`` and ``g_i`` for
``1 <= i < n/2``, extended by ``h = g_{n/2}`` with ``h^2 = v^{-1}`` when ``n`` is
even.  Monomials are stored as exponent tuples in that presentation::

    (v_exp, e_1, ..., e_k[, h])      k = (n - 1) // 2

with ``e_i`` of either sign, so multiplication is tuple addition followed by a
single ``h^2 -> v^{-1}`` fix.  ``GaussMonomial`` gives the equivalent
nonnegative form ``v^j * prod g_i^{e_i}`` over indices ``1..n-1``.

>>> R = CoeffRing(3)
>>> R.g(1) * R.g(2) == R.v() ** -1
True
>>> R.g(0)
CoeffElement(n=3, -1)
"""

from __future__ import annotations

__all__ = [
    "CoeffRing", "CoeffElement", "GaussMonomial",
    "coeff_mul", "coeff_is_zero", "specialize", "Scalar",
]

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Mono = tuple[int, ...]


def _scalar(x) -> Scalar:
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return _scalar(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return _scalar(Fraction(x))
    raise TypeError(f"not an exact rational: {x!r}")


def scalar_inverse(c: Scalar) -> Scalar:
    if c == 1 or c == -1:
        return c
    return _scalar(Fraction(1) / c)


@dataclass(frozen=True)
class GaussMonomial:
    """``v^{v_exp} * prod_i g_i^{g_exp[i-1]}`` with nonnegative ``g_exp`` over ``1..n-1``."""
    v_exp: int
    g_exp: tuple[int, ...]


class CoeffRing:
    """Parent object fixing the cover degree ``n``."""

    _cache: dict[int, "CoeffRing"] = {}

    def __new__(cls, n: int) -> CoeffRing:
        if n < 1:
            raise ValueError("n must be positive")
        if n not in cls._cache:
            obj = super().__new__(cls)
            obj._setup(n)
            cls._cache[n] = obj
        return cls._cache[n]

    def _setup(self, n: int) -> None:
        self.n = n
        self.k = (n - 1) // 2
        self.even = n % 2 == 0
        self.width = 1 + self.k + (1 if self.even else 0)
        self.one_mono: Mono = (0,) * self.width

    def __repr__(self) -> str:
        return f"CoeffRing({self.n})"

    def __reduce__(self):
        return (CoeffRing, (self.n,))

    # -- monomials ------------------------------------------------------------

    def mono_mul(self, a: Mono, b: Mono) -> Mono:
        s = tuple(x + y for x, y in zip(a, b))
        if self.even and s[-1] >= 2:
            s = (s[0] - 1,) + s[1:-1] + (s[-1] - 2,)
        return s

    def mono_inv(self, a: Mono) -> Mono:
        if self.even:
            h = a[-1]
            return (-a[0] + h,) + tuple(-x for x in a[1:-1]) + (h,)
        return tuple(-x for x in a)

    @lru_cache(maxsize=None)
    def g_mono(self, index: int) -> tuple[int, Mono]:
        """``g_index`` as ``(sign, monomial)``; indices are read mod ``n``."""
        i = index % self.n
        m = [0] * self.width
        if i == 0:
            return -1, self.one_mono
        if i <= self.k:
            m[i] = 1
        elif self.even and 2 * i == self.n:
            m[-1] = 1
        else:
            # g_i = v^{-1} g_{n-i}^{-1}
            m[0] = -1
            m[self.n - i] = -1
        return 1, tuple(m)

    def v_mono(self, j: int = 1) -> Mono:
        return (j,) + (0,) * (self.width - 1)

    def to_gauss_monomial(self, m: Mono) -> GaussMonomial:
        g = [0] * max(self.n - 1, 0)
        v = m[0]
        for i in range(1, self.k + 1):
            e = m[i]
            if e > 0:
                g[i - 1] = e
            elif e < 0:
                # g_i^{-1} = v g_{n-i}
                g[self.n - i - 1] = -e
                v -= e
        if self.even and m[-1]:
            g[self.n // 2 - 1] = 1
        return GaussMonomial(v, tuple(g))

    def from_gauss_monomial(self, gm: GaussMonomial | tuple[int, Sequence[int]]) -> tuple[int, Mono]:
        if isinstance(gm, GaussMonomial):
            v_exp, g_exp = gm.v_exp, gm.g_exp
        else:
            v_exp, g_exp = gm
        sign, mono = 1, self.v_mono(v_exp)
        for idx, e in enumerate(g_exp, start=1):
            if e < 0:
                raise ValueError("Gauss exponents must be nonnegative")
            s, m = self.g_mono(idx)
            for _ in range(e):
                sign *= s
                mono = self.mono_mul(mono, m)
        return sign, mono

    # -- element constructors -------------------------------------------------

    def zero(self) -> CoeffElement:
        return CoeffElement(self, {})

    def one(self) -> CoeffElement:
        return self.scalar(1)

    def scalar(self, c) -> CoeffElement:
        c = _scalar(c)
        return CoeffElement(self, {self.one_mono: c} if c else {})

    def v(self, j: int = 1) -> CoeffElement:
        return CoeffElement(self, {self.v_mono(j): 1})

    def g(self, index: int) -> CoeffElement:
        sign, m = self.g_mono(index)
        return CoeffElement(self, {m: sign})

    def monomial(self, v_exp: int, g_exp: Sequence[int], c=1) -> CoeffElement:
        sign, m = self.from_gauss_monomial((v_exp, g_exp))
        return CoeffElement(self, {m: sign * _scalar(c)} if c else {})

    def from_json(self, data: Iterable[Mapping]) -> CoeffElement:
        out = self.zero()
        for t in data:
            out = out + self.monomial(int(t["v"]), [int(x) for x in t["g"]], _scalar(Fraction(str(t["c"]))))
        return out


class CoeffElement:
    """An element of the coefficient ring: sparse ``monomial -> rational`` map."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: CoeffRing, terms: dict[Mono, Scalar]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash: int | None = None

    def _coerce(self, other) -> CoeffElement:
        if isinstance(other, CoeffElement):
            if other.ring is not self.ring:
                raise ValueError(f"mismatched cover degrees {self.ring.n} and {other.ring.n}")
            return other
        return self.ring.scalar(other)

    def __add__(self, other) -> CoeffElement:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return CoeffElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> CoeffElement:
        return CoeffElement(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> CoeffElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> CoeffElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> CoeffElement:
        other = self._coerce(other)
        mul = self.ring.mono_mul
        out: dict[Mono, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return CoeffElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CoeffElement:
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            (m, c), = self.terms.items()
            base = CoeffElement(self.ring, {self.ring.mono_inv(m): scalar_inverse(c)})
            return base ** (-e)
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.n, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def gauss_terms(self) -> list[tuple[GaussMonomial, Scalar]]:
        """Terms in nonnegative Gauss form, canonically ordered."""
        out = [(self.ring.to_gauss_monomial(m), c) for m, c in self.terms.items()]
        out.sort(key=lambda t: (t[0].v_exp, t[0].g_exp))
        return out

    def to_json(self) -> list[dict]:
        return [
            {"v": gm.v_exp, "g": list(gm.g_exp), "c": str(Fraction(c))}
            for gm, c in self.gauss_terms()
        ]

    def specialize(self, q, gauss: Sequence[complex]) -> complex:
        return specialize(self, q, gauss)

    def __repr__(self) -> str:
        return f"CoeffElement(n={self.ring.n}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for gm, c in self.gauss_terms():
            factors = []
            if gm.v_exp:
                factors.append("v" if gm.v_exp == 1 else f"v^{gm.v_exp}")
            for i, e in enumerate(gm.g_exp, start=1):
                if e:
                    factors.append(f"g{i}" if e == 1 else f"g{i}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def coeff_mul(x: CoeffElement, y: CoeffElement) -> CoeffElement:
    return x * y


def coeff_is_zero(x: CoeffElement) -> bool:
    return x.is_zero()


def _mono_value(ring: CoeffRing, m: Mono, q, gauss: Sequence[complex]) -> complex:
    val = complex(Fraction(1, 1) / Fraction(q) ** m[0]) if m[0] >= 0 else complex(Fraction(q) ** -m[0])
    for i in range(1, ring.k + 1):
        if m[i]:
            val *= gauss[i] ** m[i]
    if ring.even and m[-1]:
        val *= gauss[ring.n // 2]
    return val


def specialize(x: CoeffElement, q, gauss: Sequence[complex] | None) -> complex:
    """Evaluate at ``v = 1/q`` and ``g_k = gauss[k]``."""
    if gauss is None:
        raise ValueError("a numeric Gauss table is required")
    gauss = list(gauss)
    if len(gauss) != x.ring.n:
        raise ValueError(f"Gauss table has {len(gauss)} entries, expected {x.ring.n}")
    total = 0j
    for m, c in x.terms.items():
        total += complex(float(c)) * _mono_value(x.ring, m, q, gauss)
    return total

