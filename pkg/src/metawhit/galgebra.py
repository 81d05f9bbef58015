"""
The group algebra of the coroot lattice over the Gauss coefficient ring, its
fraction field, and one-direction series expansion.

An element is a sparse map from flat keys to rationals.  A key concatenates the
coweight coordinates with the coefficient-ring monomial (see
``gausscoeff``), so a product of two terms is a single tuple addition.
``AlgebraElement.coeff`` and ``AlgebraElement.items`` give the
``coweight -> CoeffElement`` view.

Fractions keep their denominators as a multiset of normalized factors.  They
are never reduced; equality cancels identical factors and then
cross-multiplies.

>>> A = GroupAlgebra(1, 1)
>>> x = A.e((1,))
>>> lhs = RationalElement(A.one() - x * x, A.one() - x)
>>> lhs == RationalElement(A.one() + x)
True
"""

from __future__ import annotations

__all__ = [
    "GroupAlgebra", "AlgebraElement", "RationalElement", "SeriesSlice",
    "InexactDivision", "Inexpansible", "alg_weyl_act", "rat_equal", "series_expand",
]

from collections import Counter, defaultdict
from dataclasses import dataclass
from operator import add
from typing import Iterable, Mapping, Sequence

from .gausscoeff import CoeffElement, CoeffRing, Scalar, _scalar, scalar_inverse, specialize

Key = tuple[int, ...]
Coweight = tuple[int, ...]


class InexactDivision(ArithmeticError):
    """A division that was required to be exact left a remainder."""


class Inexpansible(ValueError):
    """A denominator is not a product of binomials along the requested direction."""


class GroupAlgebra:
    """Parent for ``C_v[Lambda]``: the rank of the lattice and the cover degree."""

    _cache: dict[tuple[int, int], "GroupAlgebra"] = {}

    def __new__(cls, rank: int, n: int) -> GroupAlgebra:
        key = (rank, n)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj._setup(rank, n)
            cls._cache[key] = obj
        return cls._cache[key]

    def _setup(self, rank: int, n: int) -> None:
        self.rank = rank
        self.ring = CoeffRing(n)
        self.n = n
        self.even = self.ring.even
        self.width = rank + self.ring.width
        self.zero_key: Key = (0,) * self.width
        # position of the v exponent inside a flat key
        self.vpos = rank

    def __repr__(self) -> str:
        return f"GroupAlgebra(rank={self.rank}, n={self.n})"

    def __reduce__(self):
        return (GroupAlgebra, (self.rank, self.n))

    # -- keys -----------------------------------------------------------------

    def kmul(self, a: Key, b: Key) -> Key:
        s = tuple(map(add, a, b))
        if self.even and s[-1] >= 2:
            r = self.rank
            s = s[:r] + (s[r] - 1,) + s[r + 1:-1] + (s[-1] - 2,)
        return s

    def kinv(self, a: Key) -> Key:
        r = self.rank
        return tuple(-x for x in a[:r]) + self.ring.mono_inv(a[r:])

    def key(self, lam: Sequence[int], mono: Sequence[int] | None = None) -> Key:
        if len(lam) != self.rank:
            raise ValueError(f"coweight {tuple(lam)} has the wrong rank")
        return tuple(lam) + (tuple(mono) if mono is not None else self.ring.one_mono)

    # -- constructors ---------------------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {self.zero_key: 1})

    def e(self, lam: Sequence[int], coeff: CoeffElement | Scalar = 1) -> AlgebraElement:
        """The monomial ``coeff * e^lam``."""
        lam = tuple(lam)
        if isinstance(coeff, CoeffElement):
            if coeff.ring is not self.ring:
                raise ValueError("coefficient ring mismatch")
            return AlgebraElement(self, {lam + m: c for m, c in coeff.terms.items()})
        c = _scalar(coeff)
        return AlgebraElement(self, {self.key(lam): c} if c else {})

    def const(self, coeff: CoeffElement | Scalar) -> AlgebraElement:
        return self.e(self.zero_key[: self.rank], coeff)

    def from_items(self, items: Iterable[tuple[Sequence[int], CoeffElement | Scalar]]) -> AlgebraElement:
        out: dict[Key, Scalar] = {}
        for lam, coeff in items:
            for k, c in self.e(lam, coeff).terms.items():
                out[k] = out.get(k, 0) + c
        return AlgebraElement(self, out)

    def binomial(self, c: CoeffElement | Scalar, lam: Sequence[int]) -> AlgebraElement:
        """``1 - c * e^lam``."""
        return self.one() - self.e(lam, c)


class AlgebraElement:
    """A finitely supported sum of ``coeff * e^lam``."""

    __slots__ = ("parent", "terms", "_hash")

    def __init__(self, parent: GroupAlgebra, terms: dict[Key, Scalar]):
        self.parent = parent
        self.terms = {k: c for k, c in terms.items() if c}
        self._hash: int | None = None

    # -- views ----------------------------------------------------------------

    @property
    def ring(self) -> CoeffRing:
        return self.parent.ring

    def support(self) -> list[Coweight]:
        r = self.parent.rank
        return sorted({k[:r] for k in self.terms})

    def coeff(self, lam: Sequence[int]) -> CoeffElement:
        r = self.parent.rank
        lam = tuple(lam)
        return CoeffElement(self.ring, {k[r:]: c for k, c in self.terms.items() if k[:r] == lam})

    def items(self) -> list[tuple[Coweight, CoeffElement]]:
        """``(coweight, coefficient)`` pairs in lexicographic coweight order."""
        r = self.parent.rank
        grouped: dict[Coweight, dict] = defaultdict(dict)
        for k, c in self.terms.items():
            grouped[k[:r]][k[r:]] = c
        return [(lam, CoeffElement(self.ring, grouped[lam])) for lam in sorted(grouped)]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            if other.parent is not self.parent:
                raise ValueError(f"mismatched algebras {self.parent} and {other.parent}")
            return other
        if isinstance(other, CoeffElement):
            return self.parent.const(other)
        return self.parent.const(_scalar(other))

    def __add__(self, other) -> AlgebraElement:
        if isinstance(other, RationalElement):
            return NotImplemented
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return AlgebraElement(self.parent, out)

    __radd__ = __add__

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.parent, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> AlgebraElement:
        if isinstance(other, RationalElement):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> AlgebraElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> AlgebraElement:
        if isinstance(other, RationalElement):
            return NotImplemented
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict[Key, Scalar] = {}
        get = out.get
        if self.parent.even:
            kmul = self.parent.kmul
            for k2, c2 in b.items():
                for k1, c1 in a.items():
                    k = kmul(k1, k2)
                    out[k] = get(k, 0) + c1 * c2
        else:
            for k2, c2 in b.items():
                for k1, c1 in a.items():
                    k = tuple(map(add, k1, k2))
                    out[k] = get(k, 0) + c1 * c2
        return AlgebraElement(self.parent, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> AlgebraElement:
        if e < 0:
            unit = self.as_unit()
            if unit is None:
                raise ValueError("only monomials are invertible")
            k, c = unit
            return AlgebraElement(self.parent, {self.parent.kinv(k): scalar_inverse(c)}) ** (-e)
        out = self.parent.one()
        for _ in range(e):
            out = out * self
        return out

    def __truediv__(self, other) -> RationalElement:
        return RationalElement(self) / other

    def scale(self, c: Scalar) -> AlgebraElement:
        return AlgebraElement(self.parent, {k: c * x for k, x in self.terms.items()})

    def shift(self, key: Key, c: Scalar = 1) -> AlgebraElement:
        """Multiply by the unit monomial ``c * X^key``."""
        kmul = self.parent.kmul
        return AlgebraElement(self.parent, {kmul(k, key): c * x for k, x in self.terms.items()})

    def shift_lattice(self, mu: Sequence[int]) -> AlgebraElement:
        """Multiply by ``e^mu``."""
        r = self.parent.rank
        mu = tuple(mu)
        return AlgebraElement(
            self.parent,
            {tuple(map(add, k[:r], mu)) + k[r:]: c for k, c in self.terms.items()},
        )

    def as_unit(self) -> tuple[Key, Scalar] | None:
        if len(self.terms) != 1:
            return None
        (k, c), = self.terms.items()
        return k, c

    def weyl_act(self, matrix: Sequence[Sequence[int]]) -> AlgebraElement:
        """Relabel exponents by the linear map ``matrix`` (coefficients untouched)."""
        r = self.parent.rank
        cache: dict[Coweight, Coweight] = {}
        out: dict[Key, Scalar] = {}
        for k, c in self.terms.items():
            lam = k[:r]
            img = cache.get(lam)
            if img is None:
                img = tuple(sum(row[j] * lam[j] for j in range(r)) for row in matrix)
                cache[lam] = img
            nk = img + k[r:]
            out[nk] = out.get(nk, 0) + c
        return AlgebraElement(self.parent, out)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalElement):
            return other == self
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- normalization and exact division -------------------------------------

    def normalize(self) -> tuple[tuple[Key, Scalar], AlgebraElement]:
        """Split off a unit so the remaining factor has its least term equal to ``1``.

        Returns ``((key, c), f)`` with ``self == c * X^key * f``.
        """
        if not self.terms:
            raise ZeroDivisionError("cannot normalize zero")
        k0 = min(self.terms)
        c0 = self.terms[k0]
        inv = self.parent.kinv(k0)
        f = self.shift(inv, scalar_inverse(c0)) if (k0 != self.parent.zero_key or c0 != 1) else self
        return (k0, c0), f

    def divide_binomial(self, c: Scalar, delta: Key) -> AlgebraElement:
        """Exact quotient by ``1 - c * X^delta``; raises ``InexactDivision`` otherwise."""
        if self.parent.even and delta[-1]:
            raise ValueError("binomial shift may not involve g_{n/2}")
        j = next((i for i, x in enumerate(delta) if x), None)
        if j is None:
            raise ValueError("binomial shift must be nonzero")
        dj = delta[j]
        chains: dict[Key, dict[int, Scalar]] = defaultdict(dict)
        for k, a in self.terms.items():
            t = k[j] // dj
            rep = tuple(x - t * d for x, d in zip(k, delta))
            chains[rep][t] = a
        out: dict[Key, Scalar] = {}
        for rep, chain in chains.items():
            lo, hi = min(chain), max(chain)
            prev: Scalar = 0
            for t in range(lo, hi + 1):
                cur = chain.get(t, 0) + c * prev
                if t == hi:
                    if cur:
                        raise InexactDivision("binomial does not divide")
                elif cur:
                    out[tuple(x + t * d for x, d in zip(rep, delta))] = cur
                prev = cur
        return AlgebraElement(self.parent, out)

    def binomial_shape(self) -> tuple[Scalar, Key] | None:
        """If ``self`` is ``1 - c * X^delta`` return ``(c, delta)``."""
        if len(self.terms) != 2 or self.terms.get(self.parent.zero_key) != 1:
            return None
        for k, a in self.terms.items():
            if k != self.parent.zero_key:
                if self.parent.even and k[-1]:
                    return None
                return -a, k
        return None

    def divide(self, f: AlgebraElement) -> AlgebraElement:
        """Exact quotient by a unit or a binomial."""
        unit = f.as_unit()
        if unit is not None:
            k, c = unit
            return self.shift(self.parent.kinv(k), scalar_inverse(c))
        (k0, c0), g = f.normalize()
        shape = g.binomial_shape()
        if shape is None:
            raise InexactDivision("only division by binomials is supported")
        q = self.divide_binomial(*shape)
        return q.shift(self.parent.kinv(k0), scalar_inverse(c0))

    # -- output ---------------------------------------------------------------

    def specialize(self, q, gauss: Sequence[complex]) -> dict[Coweight, complex]:
        out = {}
        for lam, coeff in self.items():
            val = specialize(coeff, q, gauss)
            out[lam] = val
        return out

    def to_json(self) -> dict:
        return {"terms": [{"coweight": list(lam), "coeff": c.to_json()} for lam, c in self.items()]}

    def __repr__(self) -> str:
        return f"AlgebraElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam, c in self.items():
            mono = "e^(" + ",".join(map(str, lam)) + ")"
            cs = str(c)
            if cs == "1":
                parts.append(mono)
            elif " " in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def alg_weyl_act(w, f: AlgebraElement) -> AlgebraElement:
    return f.weyl_act(w.matrix)


class RationalElement:
    """A fraction ``num / prod(factor ** mult)``.

    Denominator factors are normalized (least term ``1``) so identical factors
    can be recognized; the unit removed during normalization is moved into the
    numerator.
    """

    __slots__ = ("num", "den_factors")

    def __init__(
        self,
        num: AlgebraElement,
        den: AlgebraElement | Scalar | None = None,
        _factors: Mapping[AlgebraElement, int] | None = None,
    ):
        self.den_factors: Counter[AlgebraElement] = Counter()
        if _factors is not None:
            self.num = num
            self.den_factors.update(_factors)
            return
        if den is None:
            self.num = num
            return
        if not isinstance(den, AlgebraElement):
            den = num.parent.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        (k0, c0), f = den.normalize()
        self.num = num.shift(num.parent.kinv(k0), scalar_inverse(c0))
        if f != num.parent.one():
            self.den_factors[f] += 1

    @classmethod
    def from_factors(cls, num: AlgebraElement, factors: Iterable[AlgebraElement]) -> RationalElement:
        out = cls(num)
        for f in factors:
            out = out / f
        return out

    @property
    def parent(self) -> GroupAlgebra:
        return self.num.parent

    @property
    def den(self) -> AlgebraElement:
        out = self.parent.one()
        for f, m in sorted(self.den_factors.items(), key=lambda t: sorted(t[0].terms)):
            out = out * f ** m
        return out

    def _coerce(self, other) -> RationalElement:
        if isinstance(other, RationalElement):
            if other.parent is not self.parent:
                raise ValueError("mismatched algebras")
            return other
        if isinstance(other, AlgebraElement):
            return RationalElement(other)
        return RationalElement(self.num._coerce(other))

    def __add__(self, other) -> RationalElement:
        other = self._coerce(other)
        common = self.den_factors | other.den_factors
        left = self.num * _product(self.parent, common - self.den_factors)
        right = other.num * _product(self.parent, common - other.den_factors)
        return RationalElement(left + right, _factors=common)

    __radd__ = __add__

    def __neg__(self) -> RationalElement:
        return RationalElement(-self.num, _factors=self.den_factors)

    def __sub__(self, other) -> RationalElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalElement:
        other = self._coerce(other)
        factors = self.den_factors + other.den_factors
        return RationalElement(self.num * other.num, _factors=factors)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalElement:
        if isinstance(other, RationalElement):
            if other.num.is_zero():
                raise ZeroDivisionError("division by zero fraction")
            inv = RationalElement(_product(self.parent, other.den_factors))
            return (self * inv) / other.num
        if not isinstance(other, AlgebraElement):
            other = self.parent.const(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        (k0, c0), f = other.normalize()
        num = self.num.shift(self.parent.kinv(k0), scalar_inverse(c0))
        factors = Counter(self.den_factors)
        if f != self.parent.one():
            factors[f] += 1
        return RationalElement(num, _factors=factors)

    def cancel_known(self, factor: AlgebraElement) -> RationalElement:
        """Divide the numerator exactly by ``factor`` and drop one copy of it below."""
        if self.den_factors.get(factor, 0) == 0:
            raise KeyError("factor not present in the denominator")
        factors = Counter(self.den_factors)
        factors[factor] -= 1
        return RationalElement(self.num.divide(factor), _factors=+factors)

    def weyl_act(self, matrix) -> RationalElement:
        out = RationalElement(self.num.weyl_act(matrix))
        for f, m in self.den_factors.items():
            g = f.weyl_act(matrix)
            for _ in range(m):
                out = out / g
        return out

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        shared = self.den_factors & other.den_factors
        lhs = self.num * _product(self.parent, other.den_factors - shared)
        rhs = other.num * _product(self.parent, self.den_factors - shared)
        return lhs == rhs

    __hash__ = None  # type: ignore[assignment]

    def is_polynomial(self) -> bool:
        try:
            self.to_polynomial()
        except InexactDivision:
            return False
        return True

    def to_polynomial(self) -> AlgebraElement:
        """The numerator divided exactly by every denominator factor."""
        out = self.num
        for f, m in self.den_factors.items():
            for _ in range(m):
                out = out.divide(f)
        return out

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self) -> str:
        if not self.den_factors:
            return f"RationalElement({self.num})"
        dens = " * ".join(
            f"({f})" + (f"^{m}" if m > 1 else "")
            for f, m in sorted(self.den_factors.items(), key=lambda t: sorted(t[0].terms))
        )
        return f"RationalElement(({self.num}) / {dens})"


def _product(parent: GroupAlgebra, factors: Mapping[AlgebraElement, int]) -> AlgebraElement:
    out = parent.one()
    for f, m in factors.items():
        for _ in range(m):
            out = out * f
    return out


def rat_equal(x: RationalElement, y: RationalElement) -> bool:
    return x == y


@dataclass
class SeriesSlice:
    """Coefficients of a one-direction expansion that are exact at the cutoff.

    ``coeffs`` lists every lattice point ``lam`` with ``bound_key(lam) <
    exact_below`` whose coefficient is nonzero; points in that region that are
    absent have coefficient zero.
    """
    direction: Coweight
    step: int
    cutoff: int
    coeffs: list[tuple[Coweight, CoeffElement]]
    exact_below: int

    def position(self, lam: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(lam, self.direction))

    def is_exact_at(self, lam: Sequence[int]) -> bool:
        return self.position(lam) < self.exact_below

    def as_dict(self) -> dict[Coweight, CoeffElement]:
        return dict(self.coeffs)

    def specialize(self, q, gauss: Sequence[complex]) -> dict[Coweight, complex]:
        return {lam: specialize(c, q, gauss) for lam, c in self.coeffs}


def _split_into_binomials(f: AlgebraElement, line: Coweight) -> tuple[tuple[Key, Scalar], list[tuple[Scalar, Key]]]:
    """Write ``f = unit * prod(1 - c X^delta)`` with each ``delta`` along ``line``.

    Binomials are found by trial division with ``c`` in ``{1, v}``.
    """
    parent = f.parent
    shape = f.binomial_shape()
    if shape is not None:
        return (parent.zero_key, 1), [shape]
    r = parent.rank
    span = max(abs(x) for k in f.terms for x in k[:r]) + 1
    found: list[tuple[Scalar, Key]] = []
    current = f
    while current.as_unit() is None:
        for p in range(1, span + 1):
            hit = None
            for coeff_key in (parent.ring.one_mono, parent.ring.v_mono(1)):
                for sign in (1, -1):
                    delta = tuple(sign * p * x for x in line) + coeff_key
                    try:
                        hit = current.divide_binomial(1, delta), delta
                    except InexactDivision:
                        continue
                    break
                if hit:
                    break
            if hit:
                break
        else:
            raise Inexpansible("denominator is not a product of binomials along the direction")
        current, delta = hit
        found.append((1, delta))
    unit = current.as_unit()
    assert unit is not None
    return unit, found


def series_expand(x: RationalElement, direction: Sequence[int], cutoff: int, step: int = 1) -> SeriesSlice:
    """Expand ``x`` in positive powers of ``e^{step * direction}``.

    Each denominator factor must be ``1 - c X^delta`` with the lattice part of
    ``delta`` a nonzero multiple of ``step * direction``.  Factors pointing the
    other way are rewritten as ``-u (1 - u^{-1})`` first.
    """
    parent = x.parent
    r = parent.rank
    direction = tuple(direction)
    line = tuple(step * d for d in direction)
    line_norm = sum(a * a for a in line)
    if line_norm == 0:
        raise ValueError("direction must be nonzero")
    num = x.num
    gens: list[tuple[Scalar, Key, int]] = []
    for f, m in x.den_factors.items():
        (uk, uc), binomials = _split_into_binomials(f, line)
        for _ in range(m):
            num = num.shift(parent.kinv(uk), scalar_inverse(uc))
        for c, delta in binomials * m:
            lat = delta[:r]
            dot = sum(a * b for a, b in zip(lat, line))
            if dot == 0 or any(a * line_norm != b * dot for a, b in zip(lat, line)):
                raise Inexpansible(f"factor exponent {lat} is not along {line}")
            p = dot // line_norm
            if dot % line_norm:
                raise Inexpansible(f"factor exponent {lat} is not an integral multiple of {line}")
            if p > 0:
                gens.append((c, delta, p))
            else:
                # 1/(1 - u) = -u^{-1} / (1 - u^{-1})
                inv = parent.kinv(delta)
                num = num.shift(inv, -scalar_inverse(c))
                gens.append((scalar_inverse(c), inv, -p))
    if num.is_zero():
        return SeriesSlice(direction, step, cutoff, [], 0)
    dir_norm = sum(a * a for a in direction)
    positions = [sum(a * b for a, b in zip(k[:r], direction)) for k in num.terms]
    low = min(positions)
    if gens:
        min_p = min(p for _, _, p in gens)
        exact_below = low + (cutoff + 1) * min_p * step * dir_norm
    else:
        exact_below = max(positions) + 1
    result = num
    for c, delta, _ in gens:
        series: dict[Key, Scalar] = {parent.zero_key: 1}
        term_key, term_c = parent.zero_key, 1
        for _ in range(cutoff):
            term_key = parent.kmul(term_key, delta)
            term_c = term_c * c
            series[term_key] = series.get(term_key, 0) + term_c
        result = result * AlgebraElement(parent, series)
    coeffs = [
        (lam, coeff)
        for lam, coeff in result.items()
        if sum(a * b for a, b in zip(lam, direction)) < exact_below
    ]
    return SeriesSlice(direction, step, cutoff, coeffs, exact_below)
