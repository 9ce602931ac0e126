"""Piecewise polynomial forms on a simplicial complex.

A piecewise p-form is a family {ω_σ} of polynomial p-forms, one per simplex,
such that pulling ω_σ back to any face τ gives ω_τ.

Truncation. Everything is computed in the finite-dimensional subcomplex of
forms whose total polynomial degree (each t_i and each dt_i counting 1) is at
most a level L. d preserves total degree and face pullbacks are affine, so
this is a subcomplex; on one simplex it is acyclic because the Koszul
homotopy preserves homogeneous degree. A plain cap on coefficient degree is
*not* acyclic (t1·dt1 on an interval is closed with no primitive under the
cap), which is why the cap is on total degree. The user-facing cap D maps to
L = D + max(dim K, 1) - 1: at D = 1 the level is dim K, the smallest level
holding every Whitney form, and p-forms have coefficient degree <= L - p.

Coordinates: the unknowns are the monomial coefficients on the top
(maximal) simplices, stacked in lexicographic order of the tops. A basis of
the compatible families is the kernel of the matching conditions on shared
faces; a compatible vector is expressed in that basis by reading off its
free columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

from .exactla import (
    BettiTable,
    FiniteComplex,
    Matrix,
    StructuralError,
    betti,
    free_columns,
    kernel_basis,
    rank,
    vstack,
)
from .simplicial import InputError, Simplex, SimplicialComplex, coboundary_matrix, positions, simplicial_betti
from .sullivan import (
    PolyForm,
    basis_size,
    differential_matrix,
    from_coordinates,
    integration_row,
    pullback,
    FaceInclusion,
    pullback_matrix,
    render,
    to_coordinates,
    whitney,
)


@dataclass(frozen=True, eq=False)
class PiecewiseForm:
    complex: SimplicialComplex
    degree: int
    components: dict = field(repr=False)  # Simplex -> PolyForm

    def component(self, s: Simplex) -> PolyForm:
        s = tuple(s)
        if s not in self.components:
            if s in self.complex:
                return PolyForm.zero(len(s) - 1, self.degree)
            raise InputError(f"{list(s)} is not a simplex of the complex")
        return self.components[s]

    def facet_mismatches(self) -> list[tuple[Simplex, Simplex]]:
        """Facet inclusions τ ⊂ σ where pullback(ω_σ) != ω_τ."""
        bad = []
        for s in self.complex.simplices():
            for k in range(len(s)):
                t = s[:k] + s[k + 1:]
                if t and pullback(FaceInclusion(t, s), self.component(s)) != self.component(t):
                    bad.append((t, s))
        return bad

    def is_compatible(self) -> bool:
        return not self.facet_mismatches()

    def render(self) -> str:
        lines = []
        for s in self.complex.simplices():
            c = self.component(s)
            if c:
                lines.append(f"[{','.join(map(str, s))}]: {render(c)}")
        return "\n".join(lines) if lines else "0"


def truncation_level(D: int, dim: int) -> int:
    """Total-degree level used for cap D on a complex of dimension ``dim``."""
    if D < 0:
        raise InputError("coefficient cap must be non-negative")
    return D + max(dim, 1) - 1


class PsBasis:
    """Basis of the piecewise p-forms on ``k`` of total polynomial degree <= ``level``."""

    def __init__(self, k: SimplicialComplex, p: int, level: int):
        self.complex = k
        self.p = p
        self.level = level
        self.cap = level - p  # coefficient-degree cap for p-forms
        self.tops = tuple(k.top_simplices)
        self.offsets: dict[Simplex, int] = {}
        n = 0
        for t in self.tops:
            self.offsets[t] = n
            n += basis_size(len(t) - 1, p, self.cap)
        self.ncoords = n
        self.constraint = self._constraints()
        basis = kernel_basis(self.constraint)
        self.embedding = Matrix.from_columns(basis, n)
        self.free = tuple(free_columns(self.constraint))
        if len(self.free) != len(basis):
            raise StructuralError("free columns disagree with kernel dimension")

    @property
    def dim(self) -> int:
        return self.embedding.cols

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"PsBasis(p={self.p}, level={self.level}, dim={self.dim}, tops={len(self.tops)})"

    def block_size(self, t: Simplex) -> int:
        return basis_size(len(t) - 1, self.p, self.cap)

    def _slice(self, t: Simplex) -> Matrix:
        """Selector from stacked coordinates to the block of top simplex ``t``."""
        off = self.offsets[t]
        size = self.block_size(t)
        return Matrix(size, self.ncoords, {(i, off + i): 1 for i in range(size)})

    def _constraints(self) -> Matrix:
        blocks = []
        for a, b in combinations(self.tops, 2):
            shared = tuple(sorted(set(a) & set(b)))
            if not shared or len(shared) - 1 < self.p:
                continue
            pa = pullback_matrix(len(a) - 1, positions(shared, a), self.p, self.cap) @ self._slice(a)
            pb = pullback_matrix(len(b) - 1, positions(shared, b), self.p, self.cap) @ self._slice(b)
            blocks.append(pa - pb)
        return vstack(blocks, cols=self.ncoords)

    def host(self, s: Simplex) -> Simplex:
        """First top simplex containing ``s``."""
        tops = self.complex.cofaces_top(s)
        if not tops:
            raise InputError(f"{list(s)} is not a simplex of the complex")
        return tops[0]

    def stacked_to_local(self, s: Simplex) -> Matrix:
        """Stacked top coordinates -> monomial coordinates of the component on ``s``."""
        s = tuple(s)
        t = self.host(s)
        return pullback_matrix(len(t) - 1, positions(s, t), self.p, self.cap) @ self._slice(t)

    @lru_cache(maxsize=None)
    def local_matrix(self, s: Simplex) -> Matrix:
        """Basis coordinates -> monomial coordinates of the component on ``s``."""
        return self.stacked_to_local(s) @ self.embedding

    def coordinates_of_stacked(self, stacked: Matrix) -> Matrix:
        """Express columns of stacked coordinates in this basis (they must be compatible)."""
        if stacked.rows != self.ncoords:
            raise ValueError("stacked coordinates have the wrong length")
        if not (self.constraint @ stacked).is_zero():
            raise StructuralError(f"image is not a compatible piecewise {self.p}-form")
        return stacked.select_rows(self.free)

    def element(self, coords: Sequence[object]) -> PiecewiseForm:
        comps = {}
        for s in self.complex.simplices():
            n = len(s) - 1
            if n < self.p:
                continue
            comps[s] = from_coordinates(n, self.p, self.cap, self.local_matrix(s).apply(list(coords)))
        return PiecewiseForm(self.complex, self.p, comps)

    @cached_property
    def elements(self) -> list[PiecewiseForm]:
        out = []
        for i in range(self.dim):
            e = [Fraction(0)] * self.dim
            e[i] = Fraction(1)
            out.append(self.element(e))
        return out

    def coordinates(self, w: PiecewiseForm) -> list[Fraction]:
        """Basis coordinates of a piecewise form (its top components determine it)."""
        if w.degree != self.p:
            raise InputError("degree mismatch")
        stacked = []
        for t in self.tops:
            if len(t) - 1 >= self.p:
                stacked.extend(to_coordinates(w.component(t), self.cap))
        col = Matrix.from_columns([stacked], self.ncoords)
        return self.coordinates_of_stacked(col).column(0)


def _level(k: SimplicialComplex, D: int, level: int | None) -> int:
    return truncation_level(D, k.dim) if level is None else level


@lru_cache(maxsize=None)
def basis_at_level(k: SimplicialComplex, p: int, level: int) -> PsBasis:
    return PsBasis(k, p, level)


def ps_basis(k: SimplicialComplex, p: int, D: int, level: int | None = None) -> PsBasis:
    """Piecewise p-forms at cap D (or at an explicit total-degree ``level``)."""
    return basis_at_level(k, p, _level(k, D, level))


@lru_cache(maxsize=None)
def _differential(k: SimplicialComplex, p: int, level: int) -> Matrix:
    src = basis_at_level(k, p, level)
    tgt = basis_at_level(k, p + 1, level)
    blocks = []
    for t in tgt.tops:
        n = len(t) - 1
        blocks.append(differential_matrix(n, p, src.cap, tgt.cap) @ src._slice(t) @ src.embedding)
    stacked = vstack(blocks, cols=src.dim)
    return tgt.coordinates_of_stacked(stacked)


def ps_differential(k: SimplicialComplex, p: int, D: int, level: int | None = None) -> Matrix:
    """d_ps from ps_basis(k, p, D) to ps_basis(k, p+1, D)."""
    return _differential(k, p, _level(k, D, level))


def ps_complex(k: SimplicialComplex, D: int, pmax: int | None = None, level: int | None = None) -> FiniteComplex:
    lv = _level(k, D, level)
    top = max(k.dim, 0) if pmax is None else pmax
    dims = tuple(basis_at_level(k, p, lv).dim for p in range(top + 1))
    return FiniteComplex(dims, tuple(_differential(k, p, lv) for p in range(top)))


def ps_betti(k: SimplicialComplex, D: int, pmax: int | None = None) -> BettiTable:
    return betti(ps_complex(k, D, pmax))


@lru_cache(maxsize=None)
def _integration(k: SimplicialComplex, p: int, level: int) -> Matrix:
    b = basis_at_level(k, p, level)
    rows = [integration_row(p, b.cap) @ b.local_matrix(s) for s in k.simplices(p)]
    return vstack(rows, cols=b.dim)


def integration_map(k: SimplicialComplex, p: int, D: int, level: int | None = None) -> Matrix:
    """I: ps_basis(k, p, D) -> simplicial p-cochains, I(ω)(ρ) = ∫_ρ ω_ρ."""
    return _integration(k, p, _level(k, D, level))


@lru_cache(maxsize=None)
def _whitney(k: SimplicialComplex, p: int, level: int) -> Matrix:
    b = basis_at_level(k, p, level)
    columns = []
    for rho in k.simplices(p):
        v = [Fraction(0)] * b.ncoords
        for t in k.cofaces_top(rho):
            off = b.offsets[t]
            for i, c in enumerate(to_coordinates(whitney(len(t) - 1, positions(rho, t)), b.cap)):
                v[off + i] = c
        columns.append(v)
    stacked = Matrix.from_columns(columns, b.ncoords)
    return b.coordinates_of_stacked(stacked)


def whitney_map(k: SimplicialComplex, p: int, D: int = 1, level: int | None = None) -> Matrix:
    """W: simplicial p-cochains -> ps_basis(k, p, D), elementary cochain ↦ Whitney form."""
    lv = _level(k, D, level)
    if lv < max(k.dim, 0):
        raise InputError(f"Whitney forms need total-degree level >= {k.dim}; got {lv}")
    try:
        return _whitney(k, p, lv)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def restriction(k: SimplicialComplex, l: SimplicialComplex, p: int, D: int, level: int | None = None) -> Matrix:
    """ps_basis(k, p, D) -> basis of l at the same level (dropping components outside ``l``)."""
    if not l.is_subcomplex_of(k):
        raise InputError("restriction target is not a subcomplex")
    return _restriction(k, l, p, _level(k, D, level))


@lru_cache(maxsize=None)
def _restriction(k: SimplicialComplex, l: SimplicialComplex, p: int, level: int) -> Matrix:
    src = basis_at_level(k, p, level)
    tgt = basis_at_level(l, p, level)
    blocks = [src.stacked_to_local(t) @ src.embedding for t in tgt.tops if len(t) - 1 >= p]
    stacked = vstack(blocks, cols=src.dim)
    return tgt.coordinates_of_stacked(stacked)


@dataclass(frozen=True)
class Certificate:
    """Evidence that integration induces an isomorphism onto simplicial cohomology."""

    D: int
    ps_betti: BettiTable
    simplicial_betti: BettiTable
    integration_after_whitney_is_identity: bool
    stokes: bool
    whitney_is_cochain_map: bool

    @property
    def ok(self) -> bool:
        return (
            self.ps_betti == self.simplicial_betti
            and self.integration_after_whitney_is_identity
            and self.stokes
            and self.whitney_is_cochain_map
        )


def certificate(k: SimplicialComplex, D: int) -> Certificate:
    """I∘W = id, δ∘I = I∘d, W∘δ = d∘W and matching Betti numbers, all exact."""
    top = max(k.dim, 0)
    lv = truncation_level(D, k.dim)
    iw = stokes = wd = True
    with_whitney = lv >= top
    for p in range(top + 1):
        if with_whitney:
            iw &= _integration(k, p, lv) @ _whitney(k, p, lv) == Matrix.identity(k.count(p))
        if p < top:
            delta = coboundary_matrix(k, p)
            stokes &= delta @ _integration(k, p, lv) == _integration(k, p + 1, lv) @ _differential(k, p, lv)
            if with_whitney:
                wd &= _whitney(k, p + 1, lv) @ delta == _differential(k, p, lv) @ _whitney(k, p, lv)
    return Certificate(D, ps_betti(k, D), simplicial_betti(k), bool(iw and with_whitney), bool(stokes), bool(wd and with_whitney))


def cohomology_map_rank(f: Matrix, d_src: Matrix, d_tgt_in: Matrix) -> int:
    """Rank on cohomology of a cochain map f: C -> C' in one degree.

    ``d_src`` is the differential out of the source degree, ``d_tgt_in`` the
    differential into the target degree: rank = dim(f(Z) + B') - dim B'.
    """
    cocycles = kernel_basis(d_src)
    image = [f.apply(z) for z in cocycles]
    bnd = d_tgt_in.columns()
    n = f.rows
    base = rank(d_tgt_in)
    if not image:
        return 0
    return rank(Matrix.from_columns(image + bnd, n)) - base


def integration_rank_on_cohomology(k: SimplicialComplex, p: int, D: int) -> int:
    """Rank of the map induced by I on H^p."""
    lv = truncation_level(D, k.dim)
    delta_in = coboundary_matrix(k, p - 1) if p >= 1 else Matrix.zeros(k.count(p), 0)
    return cohomology_map_rank(_integration(k, p, lv), _differential(k, p, lv), delta_in)
