"""The trivial transitive Lie algebroid TK ⊕ (K × g) over a simplicial base.

Forms are elements of the tensor complex Ω_ps(K) ⊗ Λg* with differential

    d(α ⊗ χ) = dα ⊗ χ + (-1)^{deg α} α ⊗ d_g χ.

The unsigned sum d_TM ⊗ id + id ⊗ d_g does not square to zero; the Koszul
sign above is the one that makes the tensor complex agree with the intrinsic
Lie algebroid differential, which :func:`koszul_check` verifies pointwise.

Sections live on a single top simplex in reduced coordinates: a vector part
X = Σ X^i ∂/∂t_i and a fiber part f: σ -> g, both with polynomial components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb
from typing import Sequence

from .cealg import LieAlgebra, ce_betti, ce_differential, subsets, validate, JacobiError
from .exactla import (
    BettiTable,
    FiniteComplex,
    Matrix,
    betti,
    block_matrix,
    convolve,
    kron,
)
from .psforms import _differential, basis_at_level, ps_betti, restriction, truncation_level
from .simplicial import InputError, Simplex, SimplicialComplex
from .sullivan import PolyForm, from_coordinates, partial, random_polyform


@dataclass(frozen=True)
class TrivialAlgebroid:
    base: SimplicialComplex
    fiber: LieAlgebra

    def __post_init__(self):
        bad = validate(self.fiber)
        if bad is not None:
            raise JacobiError(bad.triple)

    @property
    def rank(self) -> int:
        return self.fiber.dim

    def level(self, D: int) -> int:
        return truncation_level(D, self.base.dim)


# --- sections --------------------------------------------------------------


def _poly(n: int, x) -> PolyForm:
    if isinstance(x, PolyForm):
        if x.n != n or (x.terms and x.p != 0):
            raise InputError("section components must be functions on the same simplex")
        return x
    return PolyForm.constant(n, x)


@dataclass(frozen=True)
class Section:
    """A section (X, f) over an n-simplex, X tangent, f fiber-valued."""

    n: int
    vector: tuple
    fiber: tuple

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(_poly(self.n, x) for x in self.vector))
        object.__setattr__(self, "fiber", tuple(_poly(self.n, x) for x in self.fiber))
        if len(self.vector) != self.n:
            raise InputError(f"vector part needs {self.n} components, got {len(self.vector)}")

    @classmethod
    def zero(cls, n: int, m: int) -> "Section":
        return cls(n, (0,) * n, (0,) * m)

    def _check(self, other: "Section"):
        if self.n != other.n or len(self.fiber) != len(other.fiber):
            raise InputError("sections live on different simplices or algebroids")

    def __add__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(self.n, tuple(a + b for a, b in zip(self.vector, other.vector)),
                       tuple(a + b for a, b in zip(self.fiber, other.fiber)))

    def __neg__(self) -> "Section":
        return Section(self.n, tuple(-a for a in self.vector), tuple(-a for a in self.fiber))

    def __sub__(self, other: "Section") -> "Section":
        return self + (-other)

    def times(self, f: PolyForm) -> "Section":
        """f·ξ for a function f."""
        f = _poly(self.n, f)
        return Section(self.n, tuple(f * a for a in self.vector), tuple(f * a for a in self.fiber))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return self.n == other.n and self.vector == other.vector and self.fiber == other.fiber

    def __hash__(self):
        return hash((self.n, self.vector, self.fiber))


def anchor(s: Section) -> tuple:
    """γ(X, f) = X."""
    return s.vector


def tangent_lift(n: int, m: int, vector: Sequence) -> Section:
    """Right inverse of the anchor: X ↦ (X, 0)."""
    return Section(n, tuple(vector), (0,) * m)


def derivative(vector: Sequence[PolyForm], f: PolyForm) -> PolyForm:
    """X·f = Σ X^i ∂f/∂t_i (coefficientwise on forms)."""
    out = PolyForm.zero(f.n, f.p)
    for i, x in enumerate(vector, start=1):
        if x:
            d = partial(f, i)
            if d:
                out = out + x * d
    return out


def vector_bracket(x: Sequence[PolyForm], y: Sequence[PolyForm]) -> tuple:
    return tuple(derivative(x, yi) - derivative(y, xi) for xi, yi in zip(x, y))


def fiber_bracket(g: LieAlgebra, f: Sequence[PolyForm], h: Sequence[PolyForm], n: int) -> tuple:
    """Pointwise [f, h]_g of two g-valued functions."""
    out = [PolyForm.zero(n) for _ in range(g.dim)]
    for i, j in combinations(range(g.dim), 2):
        coeffs = g.bracket_basis(i, j)
        if not coeffs:
            continue
        w = f[i] * h[j] - f[j] * h[i]
        if not w:
            continue
        for k, c in coeffs.items():
            out[k] = out[k] + w.scale(c)
    return tuple(out)


def section_bracket(g: LieAlgebra, a: Section, b: Section) -> Section:
    """[(X, f), (Y, h)] = ([X, Y], X·h - Y·f + [f, h]_g)."""
    a._check(b)
    if len(a.fiber) != g.dim:
        raise InputError("section fiber rank does not match the Lie algebra")
    vec = vector_bracket(a.vector, b.vector)
    br = fiber_bracket(g, a.fiber, b.fiber, a.n)
    fib = tuple(derivative(a.vector, hk) - derivative(b.vector, fk) + bk for fk, hk, bk in zip(a.fiber, b.fiber, br))
    return Section(a.n, vec, fib)


def random_section(rng, n: int, m: int, degree: int = 2) -> Section:
    return Section(n, tuple(random_polyform(rng, n, 0, degree) for _ in range(n)),
                   tuple(random_polyform(rng, n, 0, degree) for _ in range(m)))


# --- tensor complex --------------------------------------------------------


def bidegrees(A: TrivialAlgebroid, r: int) -> list[tuple[int, int]]:
    top = max(A.base.dim, 0)
    return [(p, r - p) for p in range(top + 1) if 0 <= r - p <= A.rank]


def block_sizes(A: TrivialAlgebroid, r: int, level: int) -> list[int]:
    return [basis_at_level(A.base, p, level).dim * comb(A.rank, q) for p, q in bidegrees(A, r)]


def tensor_differential(A: TrivialAlgebroid, r: int, D: int, level: int | None = None) -> Matrix:
    """Degree-r differential of Ω_ps(K) ⊗ Λg*; a (p,q) block goes to (p+1,q) and (p,q+1)."""
    lv = A.level(D) if level is None else level
    return _tensor_differential(A.base, A.fiber, r, lv)


@lru_cache(maxsize=None)
def _ce(g: LieAlgebra, q: int) -> Matrix:
    return ce_differential(g, q)


def _tensor_differential(base: SimplicialComplex, g: LieAlgebra, r: int, lv: int) -> Matrix:
    A = _Shape(base, g)
    src = bidegrees(A, r)
    tgt = bidegrees(A, r + 1)
    m = g.dim
    blocks = {}
    for a, (p, q) in enumerate(src):
        nps = basis_at_level(base, p, lv).dim
        for b, (p2, q2) in enumerate(tgt):
            if (p2, q2) == (p + 1, q):
                blocks[b, a] = kron(_differential(base, p, lv), Matrix.identity(comb(m, q)))
            elif (p2, q2) == (p, q + 1):
                blocks[b, a] = kron(Matrix.identity(nps), _ce(g, q)).scale((-1) ** p)
    return block_matrix(block_sizes(A, r + 1, lv), block_sizes(A, r, lv), blocks)


@dataclass(frozen=True)
class _Shape:
    """Base/fiber pair without the Jacobi check (used internally after validation)."""

    base: SimplicialComplex
    fiber: LieAlgebra

    @property
    def rank(self) -> int:
        return self.fiber.dim


def tensor_complex(A: TrivialAlgebroid, D: int, rmax: int | None = None, level: int | None = None) -> FiniteComplex:
    lv = A.level(D) if level is None else level
    top = max(A.base.dim, 0) + A.rank if rmax is None else rmax
    dims = tuple(sum(block_sizes(A, r, lv)) for r in range(top + 1))
    return FiniteComplex(dims, tuple(_tensor_differential(A.base, A.fiber, r, lv) for r in range(top)))


def algebroid_betti(A: TrivialAlgebroid, D: int, rmax: int | None = None) -> BettiTable:
    return betti(tensor_complex(A, D, rmax))


@dataclass(frozen=True)
class KunnethReport:
    tensor_betti: BettiTable
    base_betti: BettiTable
    fiber_betti: BettiTable
    convolution: BettiTable

    @property
    def ok(self) -> bool:
        return self.tensor_betti == self.convolution


def kunneth_check(A: TrivialAlgebroid, D: int) -> KunnethReport:
    """Ranks of the tensor differential against the convolution of the factor Betti tables."""
    base = ps_betti(A.base, D)
    fib = ce_betti(A.fiber)
    return KunnethReport(algebroid_betti(A, D), base, fib, convolve(base, fib))


def tensor_restriction(A: TrivialAlgebroid, sub: SimplicialComplex, r: int, D: int, level: int | None = None) -> Matrix:
    """Restriction ⊗ id from the tensor complex over the base to the one over ``sub``."""
    lv = A.level(D) if level is None else level
    B = _Shape(sub, A.fiber)
    src = bidegrees(A, r)
    tgt = bidegrees(B, r)
    blocks = {}
    for a, (p, q) in enumerate(src):
        if (p, q) in tgt:
            b = tgt.index((p, q))
            blocks[b, a] = kron(restriction(A.base, sub, p, 0, level=lv), Matrix.identity(comb(A.rank, q)))
    return block_matrix(block_sizes(B, r, lv), block_sizes(A, r, lv), blocks)


# --- algebroid forms and the Koszul formula --------------------------------


@dataclass(frozen=True)
class AlgebroidForm:
    """A degree-r element of the tensor complex, as per-bidegree coordinate blocks.

    Block (p, q) holds coordinates in ps_basis(p) ⊗ Λ^q g*, index i·C(m,q) + j.
    """

    algebroid: TrivialAlgebroid
    degree: int
    level: int
    blocks: dict

    @classmethod
    def from_vector(cls, A: TrivialAlgebroid, r: int, level: int, v: Sequence) -> "AlgebroidForm":
        sizes = block_sizes(A, r, level)
        if len(v) != sum(sizes):
            raise InputError("coordinate vector does not match the degree-r space")
        blocks, off = {}, 0
        for pq, n in zip(bidegrees(A, r), sizes):
            blocks[pq] = [Fraction(x) for x in v[off:off + n]]
            off += n
        return cls(A, r, level, blocks)

    def to_vector(self) -> list[Fraction]:
        out = []
        for pq, n in zip(bidegrees(self.algebroid, self.degree), block_sizes(self.algebroid, self.degree, self.level)):
            block = self.blocks.get(pq, [Fraction(0)] * n)
            if len(block) != n:
                raise InputError(f"block {pq} has {len(block)} entries, expected {n}")
            out.extend(block)
        return out


def random_algebroid_form(rng, A: TrivialAlgebroid, r: int, D: int, bound: int = 4) -> AlgebroidForm:
    lv = A.level(D)
    n = sum(block_sizes(A, r, lv))
    v = [Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) if rng.random() < 0.6 else Fraction(0) for _ in range(n)]
    return AlgebroidForm.from_vector(A, r, lv, v)


def _det(rows: list[list[PolyForm]], n: int) -> PolyForm:
    size = len(rows)
    if size == 0:
        return PolyForm.constant(n)
    out = PolyForm.zero(n)
    for perm in permutations(range(size)):
        term = PolyForm.constant(n, _perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if not term:
                break
        out = out + term
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def pair_form(alpha: PolyForm, vectors: Sequence[Sequence[PolyForm]]) -> PolyForm:
    """α(X_1, ..., X_p) for a p-form α and vector fields X_k, dt_S(X..) = det[X_k^{S_l}]."""
    n = alpha.n
    out = PolyForm.zero(n)
    for (e, s), c in alpha.terms.items():
        coeff = PolyForm._raw(n, 0, {(e, ()): c})
        out = out + coeff * _det([[X[i - 1] for i in s] for X in vectors], n)
    return out


def pair_covector(subset: Sequence[int], fibers: Sequence[Sequence[PolyForm]], n: int) -> PolyForm:
    """e^J(f_1, ..., f_q) = det[f_k^{J_l}]."""
    return _det([[f[j] for j in subset] for f in fibers], n)


def evaluate_form(w: AlgebroidForm, simplex: Simplex, sections: Sequence[Section]) -> PolyForm:
    """ω(ξ_1, ..., ξ_r) on a top simplex, a polynomial function there.

    For α ⊗ χ of bidegree (p, q) the value is the shuffle sum
    Σ sign(P) α(X_P) χ(f_P') over p-element position sets P.
    """
    A = w.algebroid
    r = w.degree
    if len(sections) != r:
        raise InputError(f"a degree-{r} form needs {r} sections")
    simplex = tuple(simplex)
    if simplex not in A.base.top_simplices:
        raise InputError(f"{list(simplex)} is not a top simplex of the base")
    n = len(simplex) - 1
    if any(s.n != n or len(s.fiber) != A.rank for s in sections):
        raise InputError("sections do not match the simplex or fiber")
    total = PolyForm.zero(n)
    for (p, q), coords in w.blocks.items():
        if not any(coords):
            continue
        b = basis_at_level(A.base, p, w.level)
        local = b.local_matrix(simplex)
        subs = subsets(A.rank, q)
        nq = len(subs)
        for P in combinations(range(r), p):
            rest = [i for i in range(r) if i not in P]
            sign = (-1) ** sum(pi - i for i, pi in enumerate(P))
            vecs = [sections[i].vector for i in P]
            fibs = [sections[i].fiber for i in rest]
            chis = [pair_covector(J, fibs, n) for J in subs]
            # fold the ps coordinates into one local p-form per covector
            for j in range(nq):
                if not chis[j]:
                    continue
                ps_coords = [coords[i * nq + j] for i in range(b.dim)]
                if not any(ps_coords):
                    continue
                alpha = from_coordinates(n, p, b.cap, local.apply(ps_coords))
                val = pair_form(alpha, vecs) * chis[j]
                total = total + (val if sign > 0 else -val)
    return total


def koszul_differential(w: AlgebroidForm, simplex: Simplex, sections: Sequence[Section]) -> PolyForm:
    """(dω)(ξ_0..ξ_r) by the intrinsic formula

    Σ_i (-1)^i γ(ξ_i)(ω(..ξ̂_i..)) + Σ_{i<j} (-1)^{i+j} ω([ξ_i, ξ_j], ..ξ̂_i..ξ̂_j..).
    """
    g = w.algebroid.fiber
    r = w.degree
    if len(sections) != r + 1:
        raise InputError(f"dω of a degree-{r} form takes {r + 1} sections")
    n = sections[0].n
    total = PolyForm.zero(n)
    for i, xi in enumerate(sections):
        rest = [s for k, s in enumerate(sections) if k != i]
        term = derivative(anchor(xi), evaluate_form(w, simplex, rest))
        total = total + (term if i % 2 == 0 else -term)
    for i, j in combinations(range(r + 1), 2):
        br = section_bracket(g, sections[i], sections[j])
        rest = [s for k, s in enumerate(sections) if k not in (i, j)]
        term = evaluate_form(w, simplex, [br] + rest)
        total = total + (term if (i + j) % 2 == 0 else -term)
    return total


@dataclass(frozen=True)
class KoszulResult:
    koszul: PolyForm
    tensor: PolyForm

    @property
    def agree(self) -> bool:
        return self.koszul == self.tensor


def koszul_check(w: AlgebroidForm, simplex: Simplex, sections: Sequence[Section]) -> KoszulResult:
    """Evaluate dω on r+1 sections intrinsically and via :func:`tensor_differential`."""
    if w.degree > 2:
        raise NotImplementedError("koszul_check is limited to forms of degree <= 2")
    A = w.algebroid
    dv = _tensor_differential(A.base, A.fiber, w.degree, w.level).apply(w.to_vector())
    dw = AlgebroidForm.from_vector(A, w.degree + 1, w.level, dv)
    return KoszulResult(koszul_differential(w, simplex, sections), evaluate_form(dw, simplex, sections))
