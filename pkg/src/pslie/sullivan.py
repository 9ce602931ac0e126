"""Polynomial differential forms on a single simplex.

A form on the n-simplex is written in reduced barycentric coordinates
t_1..t_n (t_0 = 1 - t_1 - ... - t_n is eliminated), so each term is
``coeff * t^a * dt_S`` with ``a`` an exponent vector of length n and ``S`` an
increasing tuple drawn from 1..n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .exactla import Matrix, as_scalar, format_scalar
from .simplicial import InputError, Simplex, positions

Term = tuple  # (exponents, dt-indices)


def _merge_sign(s: Sequence[int], t: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted union of dt_S ∧ dt_T (sign 0 if they overlap)."""
    if set(s) & set(t):
        return 0, ()
    # count inversions between the two increasing lists
    inversions = 0
    j = 0
    for x in s:
        while j < len(t) and t[j] < x:
            j += 1
        inversions += j
    return (-1 if inversions % 2 else 1), tuple(sorted(s + t))


class PolyForm:
    """A p-form with polynomial coefficients on the standard n-simplex."""

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms: Mapping[Term, object] | None = None):
        self.n = n
        self.p = p
        clean: dict[Term, Fraction] = {}
        for (a, s), c in (terms or {}).items():
            a, s = tuple(a), tuple(s)
            if len(a) != n:
                raise ValueError(f"exponent vector {a} has wrong length for n={n}")
            if len(s) != p or list(s) != sorted(set(s)) or any(not 1 <= i <= n for i in s):
                raise ValueError(f"bad dt index set {s} for a {p}-form on a {n}-simplex")
            c = as_scalar(c)
            if c:
                clean[a, s] = clean.get((a, s), 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, n: int, p: int, terms: dict[Term, Fraction]) -> "PolyForm":
        f = cls.__new__(cls)
        f.n, f.p = n, p
        f.terms = {k: v for k, v in terms.items() if v}
        return f

    # --- constructors ---

    @classmethod
    def zero(cls, n: int, p: int = 0) -> "PolyForm":
        return cls._raw(n, p, {})

    @classmethod
    def constant(cls, n: int, c=1) -> "PolyForm":
        return cls(n, 0, {((0,) * n, ()): c})

    @classmethod
    def coordinate(cls, n: int, i: int) -> "PolyForm":
        """t_i for 1 <= i <= n, or t_0 = 1 - Σ t_i for i = 0."""
        if i == 0:
            terms = {((0,) * n, ()): Fraction(1)}
            for j in range(1, n + 1):
                terms[_unit(n, j), ()] = Fraction(-1)
            return cls._raw(n, 0, terms)
        if not 1 <= i <= n:
            raise InputError(f"no coordinate t_{i} on a {n}-simplex")
        return cls._raw(n, 0, {(_unit(n, i), ()): Fraction(1)})

    @classmethod
    def dcoordinate(cls, n: int, i: int) -> "PolyForm":
        """dt_i, with dt_0 = -Σ dt_i."""
        zero = (0,) * n
        if i == 0:
            return cls._raw(n, 1, {(zero, (j,)): Fraction(-1) for j in range(1, n + 1)})
        if not 1 <= i <= n:
            raise InputError(f"no coordinate t_{i} on a {n}-simplex")
        return cls._raw(n, 1, {(zero, (i,)): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], dts: Sequence[int] = (), coeff=1) -> "PolyForm":
        return cls(len(exponents), len(dts), {(tuple(exponents), tuple(dts)): coeff})

    # --- arithmetic ---

    def _check(self, other: "PolyForm"):
        if not isinstance(other, PolyForm):
            raise TypeError(f"expected PolyForm, got {type(other).__name__}")
        if other.n != self.n:
            raise InputError(f"simplex dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        if self.p != other.p and self.terms and other.terms:
            raise InputError("cannot add forms of different degree")
        p = self.p if self.terms else other.p
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PolyForm._raw(self.n, p, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm._raw(self.n, self.p, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        c = as_scalar(c)
        return PolyForm._raw(self.n, self.p, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, PolyForm):
            return wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __xor__(self, other: "PolyForm") -> "PolyForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.terms and not other.terms:
            return True
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.p, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"PolyForm(n={self.n}, p={self.p}, {render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    @property
    def coefficient_degree(self) -> int:
        return max((sum(a) for a, _ in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Term, Fraction]]:
        return sorted(self.terms.items())


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(1, n + 1))


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    a._check(b)
    out: dict[Term, Fraction] = {}
    for (ea, sa), ca in a.terms.items():
        for (eb, sb), cb in b.terms.items():
            sign, s = _merge_sign(sa, sb)
            if not sign:
                continue
            key = (tuple(x + y for x, y in zip(ea, eb)), s)
            out[key] = out.get(key, 0) + sign * ca * cb
    return PolyForm._raw(a.n, a.p + b.p, out)


def differential(a: PolyForm) -> PolyForm:
    out: dict[Term, Fraction] = {}
    for (e, s), c in a.terms.items():
        for i in range(1, a.n + 1):
            k = e[i - 1]
            if not k or i in s:
                continue
            sign, s2 = _merge_sign((i,), s)
            e2 = e[: i - 1] + (k - 1,) + e[i:]
            key = (e2, s2)
            out[key] = out.get(key, 0) + sign * k * c
    return PolyForm._raw(a.n, a.p + 1, out)


def partial(a: PolyForm, i: int) -> PolyForm:
    """Coefficientwise ∂/∂t_i."""
    out: dict[Term, Fraction] = {}
    for (e, s), c in a.terms.items():
        k = e[i - 1]
        if k:
            key = (e[: i - 1] + (k - 1,) + e[i:], s)
            out[key] = out.get(key, 0) + k * c
    return PolyForm._raw(a.n, a.p, out)


def evaluate(a: PolyForm, point: Sequence[object]) -> PolyForm:
    """Substitute numeric values for t_1..t_n in the coefficients (dt's kept)."""
    point = [as_scalar(x) for x in point]
    out: dict[Term, Fraction] = {}
    zero = (0,) * a.n
    for (e, s), c in a.terms.items():
        v = c
        for x, k in zip(point, e):
            if k:
                v *= x**k
        out[zero, s] = out.get((zero, s), 0) + v
    return PolyForm._raw(a.n, a.p, out)


# --- faces ---------------------------------------------------------------


class FaceInclusion:
    """Order-preserving inclusion of a face τ into a simplex σ."""

    __slots__ = ("source", "target", "positions")

    def __init__(self, source: Simplex, target: Simplex):
        self.source = tuple(source)
        self.target = tuple(target)
        self.positions = positions(self.source, self.target)

    @classmethod
    def standard(cls, n: int, face_positions: Sequence[int]) -> "FaceInclusion":
        return cls(tuple(face_positions), tuple(range(n + 1)))

    @property
    def source_dim(self) -> int:
        return len(self.source) - 1

    @property
    def target_dim(self) -> int:
        return len(self.target) - 1

    def compose(self, outer: "FaceInclusion") -> "FaceInclusion":
        """υ ⊆ τ (self) followed by τ ⊆ σ (outer)."""
        if outer.source != self.target:
            raise InputError("inclusions do not compose")
        return FaceInclusion(self.source, outer.target)

    def __repr__(self) -> str:
        return f"FaceInclusion({list(self.source)} ⊆ {list(self.target)})"


@lru_cache(maxsize=None)
def _substitution(n: int, pos: tuple[int, ...]) -> tuple[tuple[PolyForm, ...], tuple[PolyForm, ...]]:
    """Images of t_1..t_n and dt_1..dt_n of σ under pullback to the face at ``pos``."""
    m = len(pos) - 1
    where = {i: j for j, i in enumerate(pos)}
    coords, dcoords = [], []
    for i in range(1, n + 1):
        j = where.get(i)
        if j is None:
            coords.append(PolyForm.zero(m, 0))
            dcoords.append(PolyForm.zero(m, 1))
        else:
            coords.append(PolyForm.coordinate(m, j))
            dcoords.append(PolyForm.dcoordinate(m, j))
    return tuple(coords), tuple(dcoords)


def _pullback_positions(n: int, pos: tuple[int, ...], a: PolyForm) -> PolyForm:
    if a.n != n:
        raise InputError(f"form lives on a {a.n}-simplex, inclusion targets a {n}-simplex")
    if list(pos) != sorted(set(pos)) or not pos or pos[-1] > n or pos[0] < 0:
        raise InputError(f"invalid face positions {pos}")
    m = len(pos) - 1
    coords, dcoords = _substitution(n, pos)
    out = PolyForm.zero(m, a.p)
    powers: dict[tuple[int, int], PolyForm] = {}

    def power(i: int, k: int) -> PolyForm:
        if (i, k) not in powers:
            powers[i, k] = PolyForm.constant(m) if k == 0 else wedge(power(i, k - 1), coords[i - 1])
        return powers[i, k]

    for (e, s), c in a.terms.items():
        img = PolyForm.constant(m, c)
        for i, k in enumerate(e, start=1):
            if k:
                img = wedge(img, power(i, k))
                if not img:
                    break
        for i in s:
            if not img:
                break
            img = wedge(img, dcoords[i - 1])
        if img:
            out = out + PolyForm._raw(m, a.p, img.terms)
    return PolyForm._raw(m, a.p, out.terms)


def pullback(inc: FaceInclusion, a: PolyForm) -> PolyForm:
    return _pullback_positions(inc.target_dim, inc.positions, a)


def pullback_standard(n: int, face_positions: Sequence[int], a: PolyForm) -> PolyForm:
    return _pullback_positions(n, tuple(face_positions), a)


# --- integration and Whitney forms ------------------------------------------


def integrate_monomial(exponents: Sequence[int]) -> Fraction:
    """∫ t^a dt_1...dt_n over {t_i >= 0, Σ t_i <= 1}: Π a_i! / (n + Σ a_i)!."""
    num = 1
    for k in exponents:
        num *= factorial(k)
    return Fraction(num, factorial(len(exponents) + sum(exponents)))


def integrate(a: PolyForm) -> Fraction:
    """Integral of a top-degree form, dt_1∧...∧dt_n positively oriented."""
    if a.p != a.n and a.terms:
        raise InputError(f"can only integrate top-degree forms (got p={a.p} on n={a.n})")
    if a.p != a.n:
        return Fraction(0)
    return sum((c * integrate_monomial(e) for (e, _), c in a.terms.items()), Fraction(0))


def whitney(n: int, face: Sequence[int]) -> PolyForm:
    """Whitney form p! Σ_k (-1)^k λ_{i_k} dλ_{i_0}∧..^k..∧dλ_{i_p} of a face of Δⁿ."""
    face = tuple(face)
    if not face or list(face) != sorted(set(face)) or face[-1] > n or face[0] < 0:
        raise InputError(f"{face} is not a face of the standard {n}-simplex")
    p = len(face) - 1
    out = PolyForm.zero(n, p)
    for k, ik in enumerate(face):
        term = PolyForm.coordinate(n, ik)
        for j, ij in enumerate(face):
            if j != k:
                term = wedge(term, PolyForm.dcoordinate(n, ij))
        out = out + (term if k % 2 == 0 else -term)
    return out.scale(factorial(p))


# --- finite-dimensional truncation -----------------------------------------


@lru_cache(maxsize=None)
def exponent_vectors(n: int, D: int) -> tuple[tuple[int, ...], ...]:
    """All a ∈ N^n with Σ a <= D, lexicographic."""
    if n == 0:
        return ((),)

    def rec(k: int, budget: int):
        if k == 0:
            yield ()
            return
        for first in range(budget + 1):
            for rest in rec(k - 1, budget - first):
                yield (first,) + rest

    return tuple(rec(n, D))


@lru_cache(maxsize=None)
def monomial_index(n: int, p: int, D: int) -> tuple[tuple[Term, ...], dict]:
    if p < 0 or p > n or D < 0:
        return (), {}
    keys = tuple(
        (a, s) for a in exponent_vectors(n, D) for s in combinations(range(1, n + 1), p)
    )
    return keys, {k: i for i, k in enumerate(keys)}


def monomial_basis(n: int, p: int, D: int) -> list[PolyForm]:
    """t^a dt_S with Σ a <= D and |S| = p, ordered lexicographically in (a, S)."""
    keys, _ = monomial_index(n, p, D)
    return [PolyForm._raw(n, p, {k: Fraction(1)}) for k in keys]


def basis_size(n: int, p: int, D: int) -> int:
    if p < 0 or p > n or D < 0:
        return 0
    return comb(n + D, D) * comb(n, p)


def to_coordinates(a: PolyForm, D: int) -> list[Fraction]:
    keys, idx = monomial_index(a.n, a.p, D)
    v = [Fraction(0)] * len(keys)
    for k, c in a.terms.items():
        if k not in idx:
            raise ValueError(f"term {k} exceeds coefficient cap {D}")
        v[idx[k]] = c
    return v


def from_coordinates(n: int, p: int, D: int, v: Sequence[object]) -> PolyForm:
    keys, _ = monomial_index(n, p, D)
    if len(v) != len(keys):
        raise ValueError("coordinate vector has wrong length")
    return PolyForm._raw(n, p, {k: as_scalar(c) for k, c in zip(keys, v) if c})


@lru_cache(maxsize=None)
def differential_matrix(n: int, p: int, D: int, target_cap: int | None = None) -> Matrix:
    """d in monomial coordinates, (n, p, D) -> (n, p+1, target_cap).

    ``target_cap`` defaults to ``D``; ``D - 1`` is the smallest cap that
    still holds the image, since d lowers coefficient degree by one.
    """
    tcap = D if target_cap is None else target_cap
    src, _ = monomial_index(n, p, D)
    tkeys, tgt = monomial_index(n, p + 1, tcap)
    entries = {}
    for col, key in enumerate(src):
        for k, c in differential(PolyForm._raw(n, p, {key: Fraction(1)})).terms.items():
            if k not in tgt:
                raise ValueError(f"d of {key} leaves coefficient cap {tcap}")
            entries[tgt[k], col] = c
    return Matrix(len(tkeys), len(src), entries)


@lru_cache(maxsize=None)
def pullback_matrix(n: int, pos: tuple[int, ...], p: int, D: int) -> Matrix:
    """Pullback to the face at ``pos`` in monomial coordinates."""
    m = len(pos) - 1
    src, _ = monomial_index(n, p, D)
    tkeys, tgt = monomial_index(m, p, D)
    entries = {}
    for col, key in enumerate(src):
        for k, c in _pullback_positions(n, pos, PolyForm._raw(n, p, {key: Fraction(1)})).terms.items():
            entries[tgt[k], col] = c
    return Matrix(len(tkeys), len(src), entries)


@lru_cache(maxsize=None)
def integration_row(n: int, D: int) -> Matrix:
    """1 x basis_size(n, n, D) row vector of monomial integrals."""
    keys, _ = monomial_index(n, n, D)
    return Matrix(1, len(keys), {(0, i): integrate_monomial(a) for i, (a, _) in enumerate(keys)})


# --- rendering -------------------------------------------------------------


def render_term(exponents: Sequence[int], dts: Sequence[int], coeff: Fraction) -> str:
    mono = [f"t{i}" if k == 1 else f"t{i}^{k}" for i, k in enumerate(exponents, start=1) if k]
    dt = "∧".join(f"dt{i}" for i in dts)
    parts = [] if coeff == 1 and (mono or dt) else [format_scalar(coeff)]
    parts.extend(mono)
    if dt:
        parts.append(dt)
    return "·".join(parts)


def render(a: PolyForm) -> str:
    """Text such as ``3/2·t1^2·dt2 - t2·dt1``; terms sorted by (exponents, dt set)."""
    if not a.terms:
        return "0"
    out = ""
    for (e, s), c in a.sorted_terms():
        if not out:
            out = render_term(e, s, c) if c != -1 or not (any(e) or s) else "-" + render_term(e, s, -c)
        elif c < 0:
            out += " - " + render_term(e, s, -c)
        else:
            out += " + " + render_term(e, s, c)
    return out


def random_polyform(rng, n: int, p: int, D: int, density: float = 0.5, bound: int = 5) -> PolyForm:
    """Random form with small rational coefficients (``rng`` is a :class:`random.Random`)."""
    keys, _ = monomial_index(n, p, D)
    terms = {}
    for k in keys:
        if rng.random() < density:
            terms[k] = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
    return PolyForm(n, p, terms)

