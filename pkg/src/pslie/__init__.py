"""Exact piecewise polynomial forms on simplicial complexes, Lie algebra
cohomology, and the de Rham complex of a trivial Lie algebroid."""

from .algebroid import TrivialAlgebroid, algebroid_betti, koszul_check, kunneth_check, tensor_differential
from .cealg import JacobiError, LieAlgebra, abelian, ce_betti, heisenberg, sl2, validate
from .exactla import Matrix, StructuralError, betti, kernel_basis, rank, rref
from .mv import MVSetup, mv_exactness_report
from .psforms import certificate, ps_betti, ps_complex
from .simplicial import InputError, SimplicialComplex, simplicial_betti
from .sullivan import PolyForm

__version__ = "0.1.0"
