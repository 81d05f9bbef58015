"""
Finite root systems in coroot-lattice coordinates, with a fully enumerated
Weyl group and reduced-word bookkeeping.

Coweights are integer vectors in the basis of simple coroots.  The Cartan
matrix follows the convention ``C[i][j] = <a_i^vee, a_j>``, so the pairing of a
coweight ``lam`` with the simple root ``a_j`` is ``sum_i lam[i] * C[i][j]``.

>>> rs = build_root_system(CartanSpec.from_label("A2"))
>>> len(rs.weyl), rs.positive_coroots
(6, [(1, 0), (0, 1), (1, 1)])
>>> rs.apply(rs.simple_reflection(0), (0, 1))
(1, 1)
"""

from __future__ import annotations

__all__ = [
    "Coweight", "CartanSpec", "WeylElement", "RootSystem", "PoincarePolynomial",
    "RootSystemError", "build_root_system", "cartan_matrix_for",
]

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Coweight = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

# Weyl groups up to this order keep every reduced word of every element.
ALL_WORDS_LIMIT = 48


class RootSystemError(ValueError):
    """Raised for Cartan data that is not of finite type."""


def cartan_matrix_for(kind: str, rank: int) -> Matrix:
    """Cartan matrix of a classical or G2 type, ``C[i][j] = <a_i^vee, a_j>``."""
    kind = kind.upper()
    if rank < 1:
        raise RootSystemError("rank must be positive")
    c = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        c[i][i] = 2
    for i in range(rank - 1):
        c[i][i + 1] = c[i + 1][i] = -1
    if kind == "A":
        pass
    elif kind == "B" and rank >= 2:
        # the last simple root is short, so its coroot is long
        c[rank - 1][rank - 2] = -2
    elif kind == "C" and rank >= 2:
        c[rank - 2][rank - 1] = -2
    elif kind == "D" and rank >= 4:
        c[rank - 2][rank - 1] = c[rank - 1][rank - 2] = 0
        c[rank - 3][rank - 1] = c[rank - 1][rank - 3] = -1
    elif kind == "G" and rank == 2:
        # a_1 short, a_2 long
        c[0][1] = -3
    else:
        raise RootSystemError(f"unsupported Cartan type {kind}{rank}")
    return tuple(tuple(row) for row in c)


@dataclass(frozen=True)
class CartanSpec:
    """A Cartan matrix together with a display label."""
    label: str
    matrix: Matrix

    @classmethod
    def from_label(cls, label: str) -> CartanSpec:
        m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", label)
        if not m:
            raise RootSystemError(f"cannot parse Cartan type {label!r}")
        kind, rank = m.group(1).upper(), int(m.group(2))
        return cls(f"{kind}{rank}", cartan_matrix_for(kind, rank))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]], label: str = "custom") -> CartanSpec:
        return cls(label, tuple(tuple(int(x) for x in row) for row in matrix))

    @property
    def rank(self) -> int:
        return len(self.matrix)


def _symmetrizer(c: Matrix) -> list[Fraction]:
    """Squared lengths ``d`` of the simple coroots, ``C[i][j] d_j = C[j][i] d_i``.

    Each connected component is scaled so its shortest coroot has ``d = 1``.
    """
    r = len(c)
    d: list[Fraction | None] = [None] * r
    components: list[list[int]] = []
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(r):
                if j == i or c[i][j] == 0:
                    continue
                dj = Fraction(c[j][i]) * d[i] / c[i][j]
                if d[j] is None:
                    d[j] = dj
                    comp.append(j)
                    queue.append(j)
                elif d[j] != dj:
                    raise RootSystemError("Cartan matrix is not symmetrizable")
        components.append(comp)
    out = [x for x in d if x is not None]
    for comp in components:
        low = min(out[i] for i in comp)
        for i in comp:
            out[i] /= low
    return out


def _leading_minors_positive(s: list[list[Fraction]]) -> bool:
    a = [row[:] for row in s]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def _validate(c: Matrix) -> list[int]:
    r = len(c)
    if r == 0 or any(len(row) != r for row in c):
        raise RootSystemError("Cartan matrix must be square and nonempty")
    if r > 4:
        raise RootSystemError("rank above 4 is not supported")
    for i in range(r):
        if c[i][i] != 2:
            raise RootSystemError("diagonal entries must equal 2")
        for j in range(r):
            if i != j and (c[i][j] > 0 or (c[i][j] == 0) != (c[j][i] == 0)):
                raise RootSystemError("off-diagonal entries must be <= 0 with a symmetric zero pattern")
    d = _symmetrizer(c)
    sym = [[Fraction(c[i][j]) * d[j] for j in range(r)] for i in range(r)]
    if not _leading_minors_positive(sym):
        raise RootSystemError("Cartan matrix is not of finite type (symmetrization not positive definite)")
    if any(x.denominator != 1 for x in d):
        raise RootSystemError("unexpected non-integral length ratio")
    return [int(x) for x in d]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _matvec(m: Matrix, x: Sequence[int]) -> Coweight:
    return tuple(sum(mi * xi for mi, xi in zip(row, x)) for row in m)


@dataclass(frozen=True, eq=False)
class WeylElement:
    """An element of the enumerated Weyl group.

    Equality and hashing go through ``id``, which is the index into
    ``RootSystem.weyl`` (elements are deduplicated by matrix).
    """
    id: int
    matrix: Matrix
    reduced_word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.reduced_word)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeylElement) and other.matrix == self.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        word = "".join(f"s{i + 1}" for i in self.reduced_word) or "1"
        return f"WeylElement({word})"


@dataclass(frozen=True)
class PoincarePolynomial:
    """``sum_w x^{l(w)}``, stored as the length census ``counts[k] = #{w : l(w) = k}``.

    The value at ``x = v^{-1}`` is the Poincare series of the set; ``W(v)``
    means evaluating at ``x = v``.
    """
    counts: tuple[int, ...]

    def __call__(self, x):
        total = 0
        power = 1
        for c in self.counts:
            total = total + c * power
            power = power * x
        return total

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.counts):
            if not c:
                continue
            mono = "" if k == 0 else ("v^-1" if k == 1 else f"v^-{k}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(parts) or "0"


@dataclass
class RootSystem:
    """Finite root system data in simple-coroot coordinates."""
    spec: CartanSpec
    coroot_lengths: list[int]
    positive_coroots: list[Coweight]
    weyl: list[WeylElement]
    _index: dict[Matrix, int] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def cartan(self) -> Matrix:
        return self.spec.matrix

    @property
    def identity(self) -> WeylElement:
        return self.weyl[0]

    # -- pairings -------------------------------------------------------------

    def pairing(self, lam: Sequence[int], i: int) -> int:
        """``<lam, a_i>`` for the simple root ``a_i``."""
        c = self.spec.matrix
        return sum(lam[j] * c[j][i] for j in range(len(lam)))

    def form(self, x: Sequence[int], y: Sequence[int]) -> int:
        """W-invariant form with ``form(a_i^vee, a_i^vee) = 2 d_i``."""
        c, d, r = self.spec.matrix, self.coroot_lengths, self.rank
        return sum(x[i] * y[j] * c[i][j] * d[j] for i in range(r) for j in range(r))

    def squared_length(self, coroot: Sequence[int]) -> int:
        """Normalized squared length (1 for the short coroots of each component)."""
        return self.form(coroot, coroot) // 2

    def root_pairing(self, lam: Sequence[int], coroot: Sequence[int]) -> int:
        """``<lam, gamma>`` where ``gamma`` is the root dual to ``coroot``."""
        num = 2 * self.form(lam, coroot)
        den = self.form(coroot, coroot)
        if num % den:
            raise ValueError(f"{tuple(coroot)} is not a coroot")
        return num // den

    def rho_pairing(self, lam: Sequence[int]) -> int:
        return sum(lam)

    def is_dominant(self, lam: Sequence[int]) -> bool:
        return all(self.pairing(lam, i) >= 0 for i in range(self.rank))

    @cached_property
    def coroots(self) -> list[Coweight]:
        return self.positive_coroots + [tuple(-x for x in g) for g in self.positive_coroots]

    @cached_property
    def _coroot_set(self) -> frozenset[Coweight]:
        return frozenset(self.coroots)

    def is_coroot(self, g: Sequence[int]) -> bool:
        return tuple(g) in self._coroot_set

    def simple_coroot(self, i: int) -> Coweight:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    # -- group structure ------------------------------------------------------

    def simple_reflection(self, i: int) -> WeylElement:
        return self.weyl[self._simple_ids[i]]

    @cached_property
    def _simple_ids(self) -> list[int]:
        return [self._index[_reflection_matrix(self.spec.matrix, i)] for i in range(self.rank)]

    def apply(self, w: WeylElement, lam: Sequence[int]) -> Coweight:
        return _matvec(w.matrix, lam)

    def reflect(self, i: int, lam: Sequence[int]) -> Coweight:
        k = self.pairing(lam, i)
        out = list(lam)
        out[i] -= k
        return tuple(out)

    def element(self, matrix: Matrix) -> WeylElement:
        return self.weyl[self._index[matrix]]

    def multiply(self, w: WeylElement, u: WeylElement) -> WeylElement:
        return self.element(_matmul(w.matrix, u.matrix))

    def from_word(self, word: Iterable[int]) -> WeylElement:
        m = self.identity.matrix
        for i in word:
            m = _matmul(m, self.simple_reflection(i).matrix)
        return self.element(m)

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.from_word(reversed(w.reduced_word))

    @cached_property
    def longest(self) -> WeylElement:
        return max(self.weyl, key=lambda w: w.length)

    def inversions(self, w: WeylElement) -> set[Coweight]:
        """``{g > 0 : w g < 0}`` among positive coroots."""
        out = set()
        for g in self.positive_coroots:
            wg = self.apply(w, g)
            if all(x <= 0 for x in wg):
                out.add(g)
        return out

    @cached_property
    def all_reduced_words(self) -> dict[int, list[tuple[int, ...]]] | None:
        """Every reduced word of every element, or ``None`` when ``|W|`` exceeds the limit."""
        if len(self.weyl) > ALL_WORDS_LIMIT:
            return None
        words: dict[int, list[tuple[int, ...]]] = {0: [()]}
        for w in sorted(self.weyl, key=lambda x: (x.length, x.id)):
            if w.id == 0:
                continue
            found = []
            for i in range(self.rank):
                u = self.multiply(w, self.simple_reflection(i))
                if u.length == w.length - 1:
                    found.extend(word + (i,) for word in words[u.id])
            words[w.id] = sorted(found)
        return words

    def stabilizer_and_cosets(self, lam: Sequence[int]) -> tuple[list[WeylElement], list[WeylElement]]:
        """Stabilizer ``W_lam`` and the minimal-length transversal ``W^lam`` of ``W / W_lam``."""
        lam = tuple(lam)
        if not self.is_dominant(lam):
            raise ValueError(f"{lam} is not dominant")
        stab = [w for w in self.weyl if self.apply(w, lam) == lam]
        best: dict[Coweight, WeylElement] = {}
        for w in self.weyl:
            key = self.apply(w, lam)
            if key not in best or (w.length, w.id) < (best[key].length, best[key].id):
                best[key] = w
        reps = sorted(best.values(), key=lambda w: w.id)
        return stab, reps

    def poincare_polynomial(self, elements: Iterable[WeylElement]) -> PoincarePolynomial:
        counts: list[int] = []
        for w in elements:
            while len(counts) <= w.length:
                counts.append(0)
            counts[w.length] += 1
        return PoincarePolynomial(tuple(counts) or (0,))

    def dominant_box(self, bound: int) -> list[Coweight]:
        """Dominant coweights with all coordinates in ``0..bound``."""
        from itertools import product
        return [lam for lam in product(range(bound + 1), repeat=self.rank) if self.is_dominant(lam)]


def _reflection_matrix(c: Matrix, i: int) -> Matrix:
    r = len(c)
    rows = []
    for a in range(r):
        row = [1 if a == b else 0 for b in range(r)]
        if a == i:
            for b in range(r):
                row[b] -= c[b][i]
        rows.append(tuple(row))
    return tuple(rows)


def build_root_system(spec: CartanSpec | str) -> RootSystem:
    """Enumerate the Weyl group breadth-first and collect the positive coroots.

    The BFS processes each level in lexicographic order of the words found so
    far, so the first word reaching an element is its lexicographically least
    reduced word.
    """
    if isinstance(spec, str):
        spec = CartanSpec.from_label(spec)
    lengths = _validate(spec.matrix)
    r = spec.rank
    gens = [_reflection_matrix(spec.matrix, i) for i in range(r)]
    ident: Matrix = tuple(tuple(1 if a == b else 0 for b in range(r)) for a in range(r))
    index: dict[Matrix, int] = {ident: 0}
    elements = [WeylElement(0, ident, ())]
    level = [elements[0]]
    while level:
        nxt = []
        for x in level:
            for i in range(r):
                m = _matmul(x.matrix, gens[i])
                if m in index:
                    continue
                w = WeylElement(len(elements), m, x.reduced_word + (i,))
                index[m] = w.id
                elements.append(w)
                nxt.append(w)
            if len(elements) > 100_000:
                raise RootSystemError("Weyl group too large")
        level = sorted(nxt, key=lambda w: w.reduced_word)

    seen = set()
    for w in elements:
        for i in range(r):
            g = _matvec(w.matrix, tuple(1 if j == i else 0 for j in range(r)))
            if all(x >= 0 for x in g):
                seen.add(g)
    positive = sorted(seen, key=lambda g: (sum(g), tuple(-x for x in g)))
    return RootSystem(spec, lengths, positive, elements, index)
