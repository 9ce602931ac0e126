"""Mayer-Vietoris sequences for a cover of a complex by two closed subcomplexes.

For K = K1 ∪ K2 with W = K1 ∩ K2 the sequence

    0 -> Ω(K) --i--> Ω(K1) ⊕ Ω(K2) --j--> Ω(W) -> 0,
    i(ω) = (ω|K1, ω|K2),  j(a, b) = a|W - b|W,

is checked for exactness degree by degree with exact ranks, and the long
exact cohomology sequence is assembled with the connecting map computed by
the lift / differentiate / pull-back zigzag. Coefficients are either trivial
(piecewise forms) or a Lie algebra g (the tensor complex Ω_ps ⊗ Λg*). All
pieces use the truncation level of the ambient complex.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .algebroid import _Shape, _tensor_differential, block_sizes, tensor_restriction, TrivialAlgebroid
from .cealg import LieAlgebra
from .exactla import Matrix, StructuralError, block_matrix, hstack, kernel_basis, rank, solve, vstack
from .psforms import _differential, _integration, _whitney, basis_at_level, cohomology_map_rank, restriction, truncation_level
from .simplicial import InputError, SimplicialComplex, coboundary_matrix

COVER_NOTE = "closed-subcomplex cover (K1, K2 closed; W = K1 ∩ K2)"


class TruncationObstruction(RuntimeError):
    """A cocycle on W has no lift through j at the current truncation level."""


@dataclass(frozen=True)
class MVSetup:
    K: SimplicialComplex
    K1: SimplicialComplex
    K2: SimplicialComplex
    D: int = 2
    fiber: Optional[LieAlgebra] = None

    def __post_init__(self):
        if self.D < 0:
            raise InputError("coefficient cap must be non-negative")
        for name, piece in (("K1", self.K1), ("K2", self.K2)):
            if not piece.is_subcomplex_of(self.K):
                raise InputError(f"{name} is not a subcomplex of K")
        if self.K1.union(self.K2) != self.K:
            missing = sorted(set(self.K.simplices()) - set(self.K1.simplices()) - set(self.K2.simplices()))
            raise InputError(f"K1 ∪ K2 misses simplices of K, e.g. {list(missing[0])}")
        if self.fiber is not None:
            TrivialAlgebroid(self.K, self.fiber)  # validates Jacobi

    @classmethod
    def from_tops(cls, K: SimplicialComplex, tops1, tops2, D: int = 2, fiber: LieAlgebra | None = None) -> "MVSetup":
        return cls(K, K.subcomplex(tops1), K.subcomplex(tops2), D, fiber)

    @cached_property
    def W(self) -> SimplicialComplex:
        return self.K1.intersection(self.K2)

    @property
    def level(self) -> int:
        return truncation_level(self.D, self.K.dim)

    @property
    def default_pmax(self) -> int:
        return max(self.K.dim, 0) + (self.fiber.dim if self.fiber is not None else 0)

    def with_cap(self, D: int) -> "MVSetup":
        return MVSetup(self.K, self.K1, self.K2, D, self.fiber)

    # --- the cochain model on any piece ---

    def dim(self, L: SimplicialComplex, r: int) -> int:
        if r < 0:
            return 0
        if self.fiber is None:
            return basis_at_level(L, r, self.level).dim
        return sum(block_sizes(_Shape(L, self.fiber), r, self.level))

    def d(self, L: SimplicialComplex, r: int) -> Matrix:
        """Differential C^r(L) -> C^{r+1}(L); the zero map into C^0 for r = -1."""
        if r < 0:
            return Matrix.zeros(self.dim(L, 0), 0)
        if self.fiber is None:
            return _differential(L, r, self.level)
        return _tensor_differential(L, self.fiber, r, self.level)

    def res(self, L: SimplicialComplex, sub: SimplicialComplex, r: int) -> Matrix:
        if r < 0:
            return Matrix.zeros(0, 0)
        if self.fiber is None:
            return restriction(L, sub, r, self.D, level=self.level)
        return tensor_restriction(_Shape(L, self.fiber), sub, r, self.D, level=self.level)

    def d_middle(self, r: int) -> Matrix:
        a, b = self.d(self.K1, r), self.d(self.K2, r)
        return block_matrix([a.rows, b.rows], [a.cols, b.cols], {(0, 0): a, (1, 1): b})


def mv_short_sequence(s: MVSetup, p: int) -> tuple[Matrix, Matrix]:
    """(i, j) in degree p; j∘i = 0 is checked before returning."""
    i = vstack([s.res(s.K, s.K1, p), s.res(s.K, s.K2, p)], cols=s.dim(s.K, p))
    j = hstack([s.res(s.K1, s.W, p), -s.res(s.K2, s.W, p)], rows=s.dim(s.W, p))
    if not (j @ i).is_zero():
        raise StructuralError(f"j∘i != 0 in degree {p}")
    return i, j


@dataclass(frozen=True)
class DegreeRecord:
    degree: int
    dim_K: int
    dim_middle: int
    dim_W: int
    rank_i: int
    rank_j: int
    i_injective: bool
    middle_exact: bool
    j_surjective: bool

    @property
    def exact(self) -> bool:
        return self.i_injective and self.middle_exact and self.j_surjective


def short_exactness(s: MVSetup, p: int) -> DegreeRecord:
    i, j = mv_short_sequence(s, p)
    ri, rj = rank(i), rank(j)
    mid = i.rows
    # ker j = im i: equal dimensions, and im i ⊆ ker j (stacking adds nothing)
    ker_j = kernel_basis(j)
    cols = ker_j + i.columns()
    stacked_rank = rank(Matrix.from_columns(cols, mid)) if cols else 0
    middle = len(ker_j) == ri and stacked_rank == ri
    return DegreeRecord(p, i.cols, mid, j.rows, ri, rj, ri == i.cols, middle, rj == j.rows)


@dataclass(frozen=True)
class ConnectingMap:
    """δ: H^p(W) -> H^{p+1}(K) at cochain level.

    ``cochains`` has one column per basis cocycle of Z^p(W) (in the order of
    the kernel basis of d_W) holding a representative in C^{p+1}(K).
    """

    degree: int
    cochains: Matrix
    rank: int
    well_defined: bool


def connecting_homomorphism(s: MVSetup, p: int) -> ConnectingMap:
    for q in (p, p + 1):
        rec = short_exactness(s, q)
        if not rec.exact:
            if not rec.j_surjective:
                raise TruncationObstruction(f"j is not surjective in degree {q} at D={s.D}")
            raise StructuralError(f"short sequence not exact in degree {q}")
    i0, j0 = mv_short_sequence(s, p)
    i1, _ = mv_short_sequence(s, p + 1)
    dmid = s.d_middle(p)
    nK = s.dim(s.K, p + 1)

    def zigzag(x) -> list[Fraction]:
        w = solve(i1, dmid.apply(x))
        if w is None:
            raise StructuralError("d of a lift does not come from K")
        return w

    columns = []
    for z in kernel_basis(s.d(s.W, p)):
        x = solve(j0, z)
        if x is None:
            raise TruncationObstruction(f"cocycle on W has no lift at D={s.D}")
        columns.append(zigzag(x))
    bnd = s.d(s.K, p).columns()
    base = rank(s.d(s.K, p))

    def in_boundaries(vectors) -> bool:
        if not vectors:
            return True
        return rank(Matrix.from_columns(vectors + bnd, nK)) == base

    # lifts differ by elements of ker j = im i, whose zigzag image must be exact
    well_defined = in_boundaries([zigzag(k) for k in kernel_basis(j0)])
    rk = rank(Matrix.from_columns(columns + bnd, nK)) - base if columns else 0
    return ConnectingMap(p, Matrix.from_columns(columns, nK) if columns else Matrix.zeros(nK, 0), rk, well_defined)


@dataclass(frozen=True)
class LESNode:
    label: str
    degree: int
    dim: int
    rank_in: int
    rank_out: int

    @property
    def exact(self) -> bool:
        return self.rank_in + self.rank_out == self.dim


def _cohomology_dim(s: MVSetup, L: SimplicialComplex, r: int) -> int:
    return s.dim(L, r) - rank(s.d(L, r)) - rank(s.d(L, r - 1))


def les_exactness_check(s: MVSetup, pmax: int) -> list[LESNode]:
    """Nodes H^r(K), H^r(K1)⊕H^r(K2), H^r(W) for r = 0..pmax with ranks of the adjacent maps."""
    alpha, beta, delta = [], [], []
    for r in range(pmax + 1):
        i, j = mv_short_sequence(s, r)
        alpha.append(cohomology_map_rank(i, s.d(s.K, r), s.d_middle(r - 1) if r else Matrix.zeros(i.rows, 0)))
        beta.append(cohomology_map_rank(j, s.d_middle(r), s.d(s.W, r - 1)))
        delta.append(connecting_homomorphism(s, r).rank)
    nodes = []
    for r in range(pmax + 1):
        hK = _cohomology_dim(s, s.K, r)
        hM = _cohomology_dim(s, s.K1, r) + _cohomology_dim(s, s.K2, r)
        hW = _cohomology_dim(s, s.W, r)
        nodes.append(LESNode("H(K)", r, hK, delta[r - 1] if r else 0, alpha[r]))
        nodes.append(LESNode("H(K1)+H(K2)", r, hM, alpha[r], beta[r]))
        nodes.append(LESNode("H(W)", r, hW, beta[r], delta[r]))
    return nodes


@dataclass
class MVReport:
    cover: str
    D_requested: int
    D_used: int
    level: int
    coefficients: str
    degrees: list = field(default_factory=list)
    connecting_ranks: list = field(default_factory=list)
    connecting_well_defined: list = field(default_factory=list)
    les: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def short_exact(self) -> bool:
        return all(r.exact for r in self.degrees)

    @property
    def long_exact(self) -> bool:
        return bool(self.les) and all(n.exact for n in self.les)

    @property
    def ok(self) -> bool:
        return self.short_exact and self.long_exact and all(self.connecting_well_defined)

    def to_json(self) -> dict:
        return {
            "cover": self.cover,
            "D_requested": self.D_requested,
            "D_used": self.D_used,
            "level": self.level,
            "coefficients": self.coefficients,
            "degrees": [dict(asdict(r), exact=r.exact) for r in self.degrees],
            "connecting_ranks": list(self.connecting_ranks),
            "connecting_well_defined": list(self.connecting_well_defined),
            "les": [dict(asdict(n), exact=n.exact) for n in self.les],
            "short_exact": self.short_exact,
            "long_exact": self.long_exact,
            "notes": list(self.notes),
        }


def _report(s: MVSetup, pmax: int, requested: int) -> MVReport:
    rep = MVReport(
        COVER_NOTE,
        requested,
        s.D,
        s.level,
        "trivial" if s.fiber is None else (s.fiber.name or f"lie algebra of dim {s.fiber.dim}"),
    )
    rep.degrees = [short_exactness(s, p) for p in range(pmax + 2)]
    if all(r.exact for r in rep.degrees):
        for p in range(pmax + 1):
            cm = connecting_homomorphism(s, p)
            rep.connecting_ranks.append(cm.rank)
            rep.connecting_well_defined.append(cm.well_defined)
        rep.les = les_exactness_check(s, pmax)
    return rep


def mv_exactness_report(s: MVSetup, pmax: int | None = None) -> MVReport:
    """Exactness verdicts up to degree pmax + 1 and the long sequence up to pmax.

    If j fails to be surjective at cap D the whole report is recomputed once at D + 1.
    """
    pmax = s.default_pmax if pmax is None else pmax
    rep = _report(s, pmax, s.D)
    failing = [r.degree for r in rep.degrees if not r.j_surjective]
    if failing:
        note = f"truncation obstruction at D={s.D} in degrees {failing}; retried at D={s.D + 1}"
        rep = _report(s.with_cap(s.D + 1), pmax, s.D)
        rep.notes.append(note)
        still = [r.degree for r in rep.degrees if not r.j_surjective]
        if still:
            rep.notes.append(f"truncation obstruction persists at D={s.D + 1} in degrees {still}")
    return rep


def simplicial_connecting(s: MVSetup, p: int) -> Matrix:
    """δ transported to simplicial cochains (trivial coefficients only).

    Column c: Whitney form of the c-th basis simplicial p-cocycle of W, pushed
    through the zigzag, integrated over the (p+1)-simplices of K. Comparing
    these columns modulo simplicial coboundaries at two caps checks that the
    connecting map does not depend on the truncation.
    """
    if s.fiber is not None:
        raise InputError("simplicial comparison is only defined for trivial coefficients")
    i0, j0 = mv_short_sequence(s, p)
    i1, _ = mv_short_sequence(s, p + 1)
    dmid = s.d_middle(p)
    whit = _whitney(s.W, p, s.level)
    integ = _integration(s.K, p + 1, s.level)
    columns = []
    for c in kernel_basis(coboundary_matrix(s.W, p)):
        x = solve(j0, whit.apply(c))
        if x is None:
            raise TruncationObstruction(f"Whitney cocycle on W has no lift at D={s.D}")
        w = solve(i1, dmid.apply(x))
        if w is None:
            raise StructuralError("d of a lift does not come from K")
        columns.append(integ.apply(w))
    n = s.K.count(p + 1)
    return Matrix.from_columns(columns, n) if columns else Matrix.zeros(n, 0)
