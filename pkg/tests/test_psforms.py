from fractions import Fraction
from itertools import combinations

import pytest

import frozen
from oracles import sympy_rank
from pslie.exactla import Matrix
from pslie.psforms import (
    PiecewiseForm,
    certificate,
    integration_map,
    integration_rank_on_cohomology,
    ps_basis,
    ps_betti,
    ps_complex,
    ps_differential,
    restriction,
    truncation_level,
    whitney_map,
)
from pslie.simplicial import InputError, SimplicialComplex, coboundary_matrix, path_graph, positions
from pslie.sullivan import PolyForm, monomial_basis, pullback_standard, to_coordinates

F = Fraction


def K(name):
    return SimplicialComplex.from_top_simplices(frozen.COMPLEX_TOPS[name])


def independent_dim(k, p, level):
    """Dimension of compatible families from form-level pullbacks and a sympy rank."""
    cap = level - p
    tops = k.top_simplices
    cols = []  # (top, basis form)
    for t in tops:
        cols += [(t, b) for b in monomial_basis(len(t) - 1, p, cap)]
    rows = []
    for a, b in combinations(tops, 2):
        shared = tuple(sorted(set(a) & set(b)))
        if len(shared) - 1 < p:
            continue
        m = len(shared) - 1
        nkeys = len(to_coordinates(PolyForm.zero(m, p), cap))
        block = [[0] * len(cols) for _ in range(nkeys)]
        for j, (t, form) in enumerate(cols):
            if t not in (a, b):
                continue
            img = pullback_standard(len(t) - 1, positions(shared, t), form)
            sign = 1 if t == a else -1
            for i, c in enumerate(to_coordinates(img, cap)):
                block[i][j] += sign * c
        rows += block
    return len(cols) - (sympy_rank(rows) if rows else 0)


def test_dimension_examples():
    assert ps_basis(SimplicialComplex.simplex(1), 0, 1).dim == 2
    assert ps_basis(path_graph(2), 0, 1).dim == 3
    # with total-degree truncation, D=0 on a 1-dimensional complex holds only
    # constants, so 1-forms (which need degree 1 for dt) are absent
    assert ps_basis(SimplicialComplex.simplex_boundary(2), 1, 0).dim == 0
    assert ps_basis(SimplicialComplex.simplex_boundary(2), 1, 1).dim == 3


@pytest.mark.parametrize("name", ["path2", "boundary2", "boundary3", "mixed", "simplex2"])
@pytest.mark.parametrize("D", [1, 2])
def test_dimensions_against_independent_constraints(name, D):
    k = K(name)
    lv = truncation_level(D, k.dim)
    for p in range(k.dim + 1):
        assert ps_basis(k, p, D).dim == independent_dim(k, p, lv)


@pytest.mark.parametrize("name", sorted(frozen.COMPLEX_TOPS))
@pytest.mark.parametrize("D", [0, 1, 2])
def test_square_zero(name, D):
    assert ps_complex(K(name), D).check_square_zero()


@pytest.mark.parametrize("name", sorted(frozen.SIMPLICIAL_BETTI))
@pytest.mark.parametrize("D", [1, 2, 3])
def test_betti_matches_simplicial_oracle(name, D):
    assert ps_betti(K(name), D) == frozen.SIMPLICIAL_BETTI[name]


def test_betti_examples():
    assert ps_betti(SimplicialComplex.simplex(2), 2) == (1, 0, 0)
    assert ps_betti(SimplicialComplex.simplex_boundary(2), 1) == (1, 1)
    assert ps_betti(SimplicialComplex.simplex_boundary(3), 1) == (1, 0, 1)


def test_basis_elements_are_compatible():
    k = K("mixed")
    for p in range(3):
        b = ps_basis(k, p, 1)
        for i, w in enumerate(b.elements):
            assert w.is_compatible()
            e = [F(0)] * b.dim
            e[i] = F(1)
            assert b.coordinates(w) == e


def test_differential_on_interval():
    k = SimplicialComplex.simplex(1)
    b0, b1 = ps_basis(k, 0, 1), ps_basis(k, 1, 1)
    t1 = b0.coordinates(_single(k, 0, PolyForm.coordinate(1, 1)))
    dt1 = b1.coordinates(_single(k, 1, PolyForm.dcoordinate(1, 1)))
    assert ps_differential(k, 0, 1) @ t1 == dt1


def _single(k, p, form):
    return PiecewiseForm(k, p, {k.top_simplices[0]: form})


def test_tent_function():
    k = path_graph(2)
    b0, b1 = ps_basis(k, 0, 1), ps_basis(k, 1, 1)
    s = PolyForm.coordinate(1, 1)
    # tent at vertex 1: t on edge 01 (t=1 at vertex 1), 1 - t on edge 12
    tent = b0.element(b0.coordinates(_pw(k, 0, {(0, 1): s, (1, 2): PolyForm.constant(1) - s})))
    assert tent.is_compatible()
    dtent = b1.element(ps_differential(k, 0, 1) @ b0.coordinates(tent))
    assert dtent.component((0, 1)) == PolyForm.dcoordinate(1, 1)
    assert dtent.component((1, 2)) == -PolyForm.dcoordinate(1, 1)


def _pw(k, p, comps):
    full = dict(comps)
    for s in k.simplices():
        if len(s) - 1 >= p and s not in full:
            t = k.cofaces_top(s)[0]
            full[s] = pullback_standard(len(t) - 1, positions(s, t), comps[t])
    return PiecewiseForm(k, p, full)


def test_integration_examples():
    k = SimplicialComplex.simplex_boundary(2)
    b0 = ps_basis(k, 0, 2)
    one = b0.coordinates(_pw(k, 0, {t: PolyForm.constant(1) for t in k.top_simplices}))
    assert integration_map(k, 0, 2) @ one == [1, 1, 1]
    # Stokes on Δ¹: I(d t1²) = δ I(t1²) = 1 on the edge
    line = SimplicialComplex.simplex(1)
    sq = ps_basis(line, 0, 2).coordinates(_single(line, 0, PolyForm.monomial((2,))))
    lhs = integration_map(line, 1, 2) @ (ps_differential(line, 0, 2) @ sq)
    rhs = coboundary_matrix(line, 0) @ (integration_map(line, 0, 2) @ sq)
    assert lhs == rhs == [1]


def test_whitney_examples():
    line = SimplicialComplex.simplex(1)
    w0 = ps_basis(line, 0, 1).element(whitney_map(line, 0) @ [1, 0])
    assert w0.component((0, 1)) == PolyForm.constant(1) - PolyForm.coordinate(1, 1)
    k = SimplicialComplex.simplex_boundary(2)
    for p in (0, 1):
        n = k.count(p)
        assert integration_map(k, p, 1) @ whitney_map(k, p) == Matrix.identity(n)
        for j in range(n):
            e = [0] * n
            e[j] = 1
            assert integration_map(k, p, 1) @ (whitney_map(k, p) @ e) == e
    assert whitney_map(k, 1) @ coboundary_matrix(k, 0) == ps_differential(k, 0, 1) @ whitney_map(k, 0)
    with pytest.raises(InputError):
        whitney_map(SimplicialComplex.simplex(3), 1, level=1)


@pytest.mark.parametrize("name", sorted(frozen.COMPLEX_TOPS))
@pytest.mark.parametrize("D", [1, 2])
def test_certificate(name, D):
    cert = certificate(K(name), D)
    assert cert.ok
    assert cert.simplicial_betti == frozen.SIMPLICIAL_BETTI[name]


@pytest.mark.parametrize("name", ["boundary2", "boundary3", "mixed"])
def test_integration_is_iso_on_cohomology(name):
    k = K(name)
    for p, b in enumerate(frozen.SIMPLICIAL_BETTI[name]):
        assert integration_rank_on_cohomology(k, p, 2) == b


def test_restriction():
    k = SimplicialComplex.simplex_boundary(2)
    for p in (0, 1):
        assert restriction(k, k, p, 1) == Matrix.identity(ps_basis(k, p, 1).dim)
    vertex = SimplicialComplex.from_top_simplices([[1]])
    b0 = ps_basis(k, 0, 1)
    r = restriction(k, vertex, 0, 1)
    for i, w in enumerate(b0.elements):
        value = w.component((1,))
        assert r.column(i) == to_coordinates(value, 0)
    arc = k.subcomplex([[0, 1], [1, 2]])
    assert restriction(k, arc, 1, 1) @ ps_differential(k, 0, 1) == ps_differential(arc, 0, 0, level=truncation_level(1, 1)) @ restriction(k, arc, 0, 1)
    with pytest.raises(InputError):
        restriction(arc, k, 0, 1)


def test_d_zero_can_lose_cohomology():
    # the circle needs level >= 1 to see its 1-cocycle
    assert ps_betti(SimplicialComplex.simplex_boundary(2), 0) == (1, 0)
    assert not certificate(SimplicialComplex.simplex_boundary(2), 0).ok


def test_empty_and_point():
    empty = SimplicialComplex.from_top_simplices([])
    assert ps_betti(empty, 2) == (0,)
    assert certificate(empty, 2).ok
    point = SimplicialComplex.from_top_simplices([[0]])
    assert ps_betti(point, 0) == (1,)
