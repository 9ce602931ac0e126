import pytest

from oracles import convolve, sympy_rank
from pslie.cealg import ce_betti, sl2
from pslie.exactla import Matrix, kernel_basis, rank
from pslie.mv import (
    MVSetup,
    connecting_homomorphism,
    les_exactness_check,
    mv_exactness_report,
    mv_short_sequence,
    short_exactness,
    simplicial_connecting,
)
from pslie.simplicial import InputError, SimplicialComplex, coboundary_matrix, path_graph


def circle_arcs(D=1, fiber=None):
    return MVSetup.from_tops(SimplicialComplex.simplex_boundary(2), [[0, 1], [1, 2]], [[0, 2]], D, fiber)


def path_split(D=1, fiber=None):
    return MVSetup.from_tops(path_graph(2), [[0, 1]], [[1, 2]], D, fiber)


def test_arc_split_dimensions():
    s = circle_arcs(1)
    assert s.W == SimplicialComplex.from_top_simplices([[0], [2]])
    rec = short_exactness(s, 0)
    assert (rec.dim_K, rec.dim_middle, rec.dim_W) == (3, 5, 2)
    assert (rec.rank_i, rec.rank_j) == (3, 2)
    assert rec.exact


def test_identical_pieces():
    k = SimplicialComplex.simplex_boundary(2)
    s = MVSetup(k, k, k, 1)
    for p in (0, 1):
        i, j = mv_short_sequence(s, p)
        n = i.cols
        assert i == Matrix.from_columns([[1 if r in (c, c + n) else 0 for r in range(2 * n)] for c in range(n)], 2 * n)
        assert short_exactness(s, p).exact
    assert mv_exactness_report(s).ok


def test_empty_intersection():
    k = SimplicialComplex.from_top_simplices([[0, 1], [2, 3]])
    s = MVSetup.from_tops(k, [[0, 1]], [[2, 3]], 1)
    for p in (0, 1):
        i, j = mv_short_sequence(s, p)
        assert j.rows == 0 and rank(i) == i.cols == i.rows
    assert all(connecting_homomorphism(s, p).rank == 0 for p in (0, 1))
    assert mv_exactness_report(s).ok


@pytest.mark.parametrize("make", [circle_arcs, path_split])
@pytest.mark.parametrize("D", [1, 2])
@pytest.mark.parametrize("fiber", [None, "sl2"])
def test_exactness(make, D, fiber):
    s = make(D, sl2() if fiber else None)
    rep = mv_exactness_report(s)
    assert rep.short_exact and rep.long_exact and rep.ok
    assert rep.D_used == D and not rep.notes


def test_connecting_rank_on_circle():
    for D in (1, 2, 3):
        assert connecting_homomorphism(circle_arcs(D), 0).rank == 1
        assert connecting_homomorphism(circle_arcs(D), 0).well_defined


def test_path_split_h1_vanishes():
    rep = mv_exactness_report(path_split(1))
    assert [n.dim for n in rep.les if n.degree == 1] == [0, 0, 0]
    assert rep.connecting_ranks[0] == 0


def test_contractible_rank_formula():
    # K1 the whole triangle, K2 one of its edges
    k = SimplicialComplex.simplex(2)
    s = MVSetup.from_tops(k, [[0, 1, 2]], [[0, 1]], 1)
    nodes = les_exactness_check(s, 2)
    for p in range(2):
        hW = next(n.dim for n in nodes if n.label == "H(W)" and n.degree == p)
        into_W = next(n.rank_in for n in nodes if n.label == "H(W)" and n.degree == p)
        assert connecting_homomorphism(s, p).rank == hW - into_W


def test_six_nodes_on_circle():
    nodes = les_exactness_check(circle_arcs(1), 1)
    assert len(nodes) == 6 and all(n.exact for n in nodes)
    assert [n.dim for n in nodes] == [1, 2, 2, 1, 0, 0]


def test_sl2_middle_terms_are_convolutions():
    s = circle_arcs(1, sl2())
    nodes = les_exactness_check(s, 4)
    assert all(n.exact for n in nodes)
    # both pieces are contractible, so each contributes H(sl2)
    piece = convolve((1, 0), ce_betti(sl2()))
    middle = [n.dim for n in nodes if n.label == "H(K1)+H(K2)"]
    assert middle == [2 * b for b in piece]
    circle = convolve((1, 1), ce_betti(sl2()))
    assert [n.dim for n in nodes if n.label == "H(K)"] == list(circle)


def test_degenerate_cover():
    k = SimplicialComplex.simplex_boundary(2)
    s = MVSetup.from_tops(k, k.top_simplices, [[0, 2]], 1)
    rep = mv_exactness_report(s)
    assert rep.ok
    # H(K) -> H(K)⊕H(K2) is injective in every degree
    assert all(n.rank_out == n.dim for n in rep.les if n.label == "H(K)")


def test_invalid_covers():
    k = SimplicialComplex.simplex_boundary(2)
    with pytest.raises(InputError):
        MVSetup.from_tops(k, [[0, 1]], [[1, 2]])
    with pytest.raises(InputError):
        MVSetup.from_tops(k, [[0, 1, 2]], [[1, 2]])
    with pytest.raises(InputError):
        MVSetup(k, SimplicialComplex.simplex(2), k)


def _simplicial_zigzag(k, k1, k2, w, p):
    """Classical MV connecting map on simplicial cochains, independent of forms."""
    idx_w = {s: i for i, s in enumerate(w.simplices(p))}
    cols = []
    for z in kernel_basis(coboundary_matrix(w, p)):
        # lift: put z on K1 (extended by zero), nothing on K2, so j(lift) = z
        lift = {s: z[idx_w[s]] for s in w.simplices(p)}
        # δ on K1 of the lift, glued with 0 on K2, is a cochain on K
        out = []
        for s in k.simplices(p + 1):
            if s in k1:
                faces = [s[:i] + s[i + 1:] for i in range(len(s))]
                out.append(sum((-1) ** i * lift.get(f, 0) for i, f in enumerate(faces)))
            else:
                out.append(0)
        cols.append(out)
    return cols


def test_connecting_map_matches_simplicial_zigzag():
    for D in (1, 2, 3):
        s = circle_arcs(D)
        ours = simplicial_connecting(s, 0)
        ref = _simplicial_zigzag(s.K, s.K1, s.K2, s.W, 0)
        bnd = coboundary_matrix(s.K, 0)
        n = s.K.count(1)
        for c, r in zip(ours.columns(), ref):
            diff = [a - b for a, b in zip(c, r)]
            base = sympy_rank(bnd.to_dense())
            assert sympy_rank(Matrix.from_columns(bnd.columns() + [diff], n).to_dense()) == base
