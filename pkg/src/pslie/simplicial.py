"""Finite abstract simplicial complexes and their simplicial cochain complex."""

from __future__ import annotations

import json
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .exactla import BettiTable, FiniteComplex, Matrix, betti

Simplex = tuple  # strictly increasing tuple of non-negative ints


class InputError(ValueError):
    """Malformed user input (bad simplex, cover or file contents)."""


def as_simplex(vertices: Iterable[int]) -> Simplex:
    vs = list(vertices)
    if not vs:
        raise InputError("a simplex needs at least one vertex")
    for v in vs:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InputError(f"vertex {v!r} is not a non-negative integer")
    if len(set(vs)) != len(vs):
        raise InputError(f"duplicate vertex in simplex {vs}")
    return tuple(sorted(vs))


def faces(s: Simplex, dim: int | None = None) -> list[Simplex]:
    """Nonempty faces of ``s`` (all of them, or only those of dimension ``dim``)."""
    if dim is not None:
        return list(combinations(s, dim + 1)) if 0 <= dim < len(s) else []
    return [f for k in range(1, len(s) + 1) for f in combinations(s, k)]


def boundary_faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces, the k-th one omitting vertex k."""
    return [s[:k] + s[k + 1:] for k in range(len(s))] if len(s) > 1 else []


def positions(face: Simplex, simplex: Simplex) -> tuple[int, ...]:
    """Index of each vertex of ``face`` inside ``simplex``."""
    index = {v: i for i, v in enumerate(simplex)}
    try:
        return tuple(index[v] for v in face)
    except KeyError:
        raise InputError(f"{face} is not a face of {simplex}") from None


class SimplicialComplex:
    """A face-closed set of simplices, stored by dimension in lexicographic order."""

    __slots__ = ("_by_dim", "_all", "__dict__")

    def __init__(self, simplices: Iterable[Simplex] = ()):
        closure: set[Simplex] = set()
        for s in simplices:
            s = as_simplex(s)
            if s not in closure:
                closure.update(faces(s))
        by_dim: dict[int, list[Simplex]] = {}
        for s in closure:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self._by_dim = {d: sorted(ss) for d, ss in by_dim.items()}
        self._all = frozenset(closure)

    @classmethod
    def from_top_simplices(cls, tops: Iterable[Sequence[int]]) -> "SimplicialComplex":
        return cls(as_simplex(t) for t in tops)

    @classmethod
    def simplex(cls, n: int) -> "SimplicialComplex":
        return cls([tuple(range(n + 1))])

    @classmethod
    def simplex_boundary(cls, n: int) -> "SimplicialComplex":
        return cls(faces(tuple(range(n + 1)), n - 1))

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def simplices(self, p: int | None = None) -> list[Simplex]:
        if p is None:
            return [s for d in sorted(self._by_dim) for s in self._by_dim[d]]
        return list(self._by_dim.get(p, ()))

    def count(self, p: int) -> int:
        return len(self._by_dim.get(p, ()))

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices(0)]

    @property
    def vertex_count(self) -> int:
        return self.count(0)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._all

    def __len__(self) -> int:
        return len(self._all)

    def __iter__(self):
        return iter(self.simplices())

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._all == other._all

    def __hash__(self) -> int:
        return hash(self._all)

    def __repr__(self) -> str:
        return f"SimplicialComplex({self.top_simplices})"

    def is_empty(self) -> bool:
        return not self._all

    @cached_property
    def top_simplices(self) -> list[Simplex]:
        """Maximal simplices, sorted lexicographically."""
        covered: set[Simplex] = set()
        for s in self._all:
            covered.update(boundary_faces(s))
        return sorted(s for s in self._all if s not in covered)

    @cached_property
    def index(self) -> dict[Simplex, int]:
        """Position of each simplex within its own dimension."""
        return {s: i for ss in self._by_dim.values() for i, s in enumerate(ss)}

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self._all <= other._all

    def subcomplex(self, tops: Iterable[Sequence[int]]) -> "SimplicialComplex":
        tops = [as_simplex(t) for t in tops]
        for t in tops:
            if t not in self._all:
                raise InputError(f"{list(t)} is not a simplex of the complex")
        return SimplicialComplex(tops)

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self._all | other._all)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        # an intersection of face-closed sets is face-closed
        return SimplicialComplex(self._all & other._all)

    def cofaces_top(self, s: Simplex) -> list[Simplex]:
        """Top simplices containing ``s``."""
        vs = set(s)
        return [t for t in self.top_simplices if vs <= set(t)]

    # --- serialization ---

    def to_json(self) -> dict:
        return {"top_simplices": [list(t) for t in self.top_simplices]}

    @classmethod
    def from_json(cls, obj) -> "SimplicialComplex":
        if not isinstance(obj, dict) or "top_simplices" not in obj:
            raise InputError('complex JSON must be an object with a "top_simplices" list')
        tops = obj["top_simplices"]
        if not isinstance(tops, list) or not all(isinstance(t, list) for t in tops):
            raise InputError('"top_simplices" must be a list of integer lists')
        return cls.from_top_simplices(tops)

    @classmethod
    def load(cls, path) -> "SimplicialComplex":
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: {exc}") from None
        return cls.from_json(obj)


def coboundary_matrix(k: SimplicialComplex, p: int) -> Matrix:
    """Matrix of δ: C^p -> C^{p+1}, rows (p+1)-simplices, columns p-simplices."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    cols = k.index
    entries = {}
    for r, s in enumerate(k.simplices(p + 1)):
        for j, f in enumerate(boundary_faces(s)):
            entries[r, cols[f]] = (-1) ** j
    return Matrix(k.count(p + 1), k.count(p), entries)


def cochain_complex(k: SimplicialComplex, pmax: int | None = None) -> FiniteComplex:
    top = max(k.dim, 0) if pmax is None else pmax
    dims = tuple(k.count(p) for p in range(top + 1))
    return FiniteComplex(dims, tuple(coboundary_matrix(k, p) for p in range(top)))


def simplicial_betti(k: SimplicialComplex, pmax: int | None = None) -> BettiTable:
    return betti(cochain_complex(k, pmax))


def path_graph(n_edges: int) -> SimplicialComplex:
    return SimplicialComplex.from_top_simplices([[i, i + 1] for i in range(n_edges)])
