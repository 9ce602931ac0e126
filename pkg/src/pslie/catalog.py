"""Named example complexes and Lie algebras used by the CLI and the verify suite."""

from __future__ import annotations

from fractions import Fraction

from .cealg import LieAlgebra, abelian, heisenberg, sl2, validate
from .simplicial import SimplicialComplex, path_graph

COMPLEXES = {
    "simplex1": lambda: SimplicialComplex.simplex(1),
    "simplex2": lambda: SimplicialComplex.simplex(2),
    "simplex3": lambda: SimplicialComplex.simplex(3),
    "boundary2": lambda: SimplicialComplex.simplex_boundary(2),
    "boundary3": lambda: SimplicialComplex.simplex_boundary(3),
    "path2": lambda: path_graph(2),
}

ALGEBRAS = {
    "abelian2": lambda: abelian(2),
    "h3": heisenberg,
    "sl2": sl2,
}

# name -> (complex name, K1 tops, K2 tops)
COVERS = {
    "boundary2_arcs": ("boundary2", [[0, 1], [1, 2]], [[0, 2]]),
    "path2_split": ("path2", [[0, 1]], [[1, 2]]),
}


def complexes() -> dict[str, SimplicialComplex]:
    return {name: make() for name, make in COMPLEXES.items()}


def algebras() -> dict[str, LieAlgebra]:
    return {name: make() for name, make in ALGEBRAS.items()}


def random_non_lie(rng, dim: int = 3, bound: int = 2) -> LieAlgebra:
    """Random antisymmetric bracket that violates Jacobi (redrawn until it does)."""
    while True:
        brackets = {}
        for i in range(dim):
            for j in range(i + 1, dim):
                brackets[i, j] = {k: Fraction(rng.randint(-bound, bound)) for k in range(dim)}
        g = LieAlgebra(dim, brackets, name="random-non-lie")
        if validate(g) is not None:
            return g
