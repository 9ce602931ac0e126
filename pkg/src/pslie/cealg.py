"""Finite-dimensional Lie algebras over Q and their Chevalley-Eilenberg complex."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .exactla import BettiTable, FiniteComplex, Matrix, as_scalar, betti, format_scalar
from .simplicial import InputError


class JacobiError(ValueError):
    """Raised when a CE computation is requested on a non-Lie bracket."""

    def __init__(self, triple):
        super().__init__(f"Jacobi identity fails on basis triple {triple}")
        self.triple = triple


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]
    value: tuple[Fraction, ...]  # [[x_i,x_j],x_k] + cyclic, in basis coordinates


class LieAlgebra:
    """Structure constants [x_i, x_j] = Σ_k c(i,j,k) x_k, stored for i < j."""

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]] | None = None, name: str = ""):
        if dim < 0:
            raise InputError("Lie algebra dimension must be non-negative")
        self.dim = dim
        self.name = name
        consts: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < j < dim):
                raise InputError(f"bracket pair ({i}, {j}) must satisfy 0 <= i < j < {dim}")
            row = {}
            for k, c in coeffs.items():
                if not 0 <= k < dim:
                    raise InputError(f"bracket coefficient index {k} out of range")
                c = as_scalar(c)
                if c:
                    row[k] = c
            if row:
                consts[i, j] = row
        self._c = consts

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self._c.get((i, j), {}).get(k, Fraction(0))
        return -self._c.get((j, i), {}).get(k, Fraction(0))

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return dict(self._c.get((i, j), {}))
        return {k: -v for k, v in self._c.get((j, i), {}).items()}

    def bracket(self, x: Sequence[object], y: Sequence[object]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for (i, j), row in self._c.items():
            w = x[i] * y[j] - x[j] * y[i]
            if w:
                for k, c in row.items():
                    out[k] += w * c
        return out

    @property
    def is_abelian(self) -> bool:
        return not self._c

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.dim == other.dim and self._c == other._c

    def __hash__(self) -> int:
        return hash((self.dim, frozenset((ij, frozenset(row.items())) for ij, row in self._c.items())))

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'dim=%d' % self.dim})"

    # --- serialization ---

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "brackets": [
                {"i": i, "j": j, "coeffs": {str(k): format_scalar(c) for k, c in sorted(row.items())}}
                for (i, j), row in sorted(self._c.items())
            ],
        }

    @classmethod
    def from_json(cls, obj, name: str = "") -> "LieAlgebra":
        try:
            dim = obj["dim"]
            raw = obj.get("brackets", [])
            if not isinstance(dim, int) or not isinstance(raw, list):
                raise TypeError
            brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
            for entry in raw:
                i, j = entry["i"], entry["j"]
                if (i, j) in brackets:
                    raise InputError(f"bracket ({i}, {j}) listed twice")
                brackets[i, j] = {int(k): Fraction(str(v)) for k, v in entry["coeffs"].items()}
        except (KeyError, TypeError, AttributeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed Lie algebra JSON: {exc!r}") from None
        return cls(dim, brackets, name=name)

    @classmethod
    def load(cls, path) -> "LieAlgebra":
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: {exc}") from None
        return cls.from_json(obj)


def abelian(m: int) -> LieAlgebra:
    return LieAlgebra(m, name=f"abelian{m}")


def sl2() -> LieAlgebra:
    """Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieAlgebra(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, name="sl2")


def heisenberg() -> LieAlgebra:
    """h₃: [x0, x1] = x2."""
    return LieAlgebra(3, {(0, 1): {2: 1}}, name="h3")


def validate(g: LieAlgebra) -> JacobiViolation | None:
    """First basis triple i<j<k where the Jacobi sum is nonzero, or ``None``."""
    m = g.dim
    for i, j, k in combinations(range(m), 3):
        total = [Fraction(0)] * m
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l, x in g.bracket_basis(a, b).items():
                for r, y in g.bracket_basis(l, c).items():
                    total[r] += x * y
        if any(total):
            return JacobiViolation((i, j, k), tuple(total))
    return None


def subsets(m: int, q: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), q)) if 0 <= q <= m else []


def _insert_sign(k: int, rest: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    if k in rest:
        return 0, ()
    pos = sum(1 for x in rest if x < k)
    return (-1) ** pos, tuple(sorted(rest + (k,)))


def ce_differential(g: LieAlgebra, q: int, force: bool = False) -> Matrix:
    """d: Λ^q g* -> Λ^{q+1} g* in lexicographic subset bases.

    (dω)(x_{i_0},...,x_{i_q}) = Σ_{a<b} (-1)^{a+b} ω([x_{i_a}, x_{i_b}], x_{i_0},..^a..^b..)
    """
    if not force:
        bad = validate(g)
        if bad is not None:
            raise JacobiError(bad.triple)
    m = g.dim
    cols = {s: i for i, s in enumerate(subsets(m, q))}
    rows = subsets(m, q + 1)
    entries: dict[tuple[int, int], Fraction] = {}
    for r, idx in enumerate(rows):
        for a, b in combinations(range(q + 1), 2):
            rest = idx[:a] + idx[a + 1:b] + idx[b + 1:]
            for k, c in g.bracket_basis(idx[a], idx[b]).items():
                sign, col = _insert_sign(k, rest)
                if sign:
                    key = (r, cols[col])
                    entries[key] = entries.get(key, 0) + (-1) ** (a + b) * sign * c
    return Matrix(len(rows), len(cols), entries)


def ce_complex(g: LieAlgebra, force: bool = False) -> FiniteComplex:
    m = g.dim
    return FiniteComplex(tuple(comb(m, q) for q in range(m + 1)), tuple(ce_differential(g, q, force) for q in range(m)))


def ce_betti(g: LieAlgebra) -> BettiTable:
    return betti(ce_complex(g))


def ce_square_zero(g: LieAlgebra) -> bool:
    """Whether d∘d = 0 in every degree, computed without the Jacobi guard."""
    return ce_complex(g, force=True).check_square_zero()


@dataclass(frozen=True)
class CEElement:
    """An element of Λ^q g*: values on increasing basis subsets."""

    dim: int
    degree: int
    values: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, v in self.values.items():
            s = tuple(s)
            if len(s) != self.degree or list(s) != sorted(set(s)) or any(not 0 <= i < self.dim for i in s):
                raise InputError(f"bad index subset {s} for a {self.degree}-cochain on dim {self.dim}")
            v = as_scalar(v)
            if v:
                clean[s] = v
        object.__setattr__(self, "values", clean)

    @classmethod
    def from_vector(cls, dim: int, degree: int, v: Sequence[object]) -> "CEElement":
        return cls(dim, degree, dict(zip(subsets(dim, degree), v)))

    def to_vector(self) -> list[Fraction]:
        return [self.values.get(s, Fraction(0)) for s in subsets(self.dim, self.degree)]


def differential_element(g: LieAlgebra, w: CEElement) -> CEElement:
    return CEElement.from_vector(g.dim, w.degree + 1, ce_differential(g, w.degree).apply(w.to_vector()))
