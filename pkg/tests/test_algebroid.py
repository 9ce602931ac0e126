import random
from fractions import Fraction
from math import comb

import pytest

import frozen
from pslie.algebroid import (
    AlgebroidForm,
    Section,
    TrivialAlgebroid,
    algebroid_betti,
    anchor,
    bidegrees,
    block_sizes,
    derivative,
    evaluate_form,
    koszul_check,
    kunneth_check,
    random_algebroid_form,
    random_section,
    section_bracket,
    tangent_lift,
    tensor_complex,
    tensor_differential,
)
from pslie.cealg import JacobiError, LieAlgebra, abelian, ce_differential, heisenberg, sl2
from pslie.exactla import Matrix, block_matrix, kron
from pslie.psforms import PiecewiseForm, ps_basis, ps_differential
from pslie.simplicial import SimplicialComplex
from pslie.sullivan import PolyForm

F = Fraction


def K(name):
    return SimplicialComplex.from_top_simplices(frozen.COMPLEX_TOPS[name])


def algebra(name):
    dim, brackets = frozen.ALGEBRAS[name]
    return LieAlgebra(dim, brackets, name=name)


def t(n, i):
    return PolyForm.coordinate(n, i)


def test_bracket_examples():
    g = abelian(2)
    a = Section(2, (1, 2), (3, 4))
    b = Section(2, (5, 0), (0, 7))
    assert section_bracket(g, a, b) == Section.zero(2, 2)
    d1 = tangent_lift(2, 3, (1, 0))
    d2 = tangent_lift(2, 3, (0, 1))
    assert section_bracket(sl2(), d1, d2) == Section.zero(2, 3)


def test_leibniz_example():
    g = heisenberg()
    xi = tangent_lift(2, 3, (1, 0))
    eta = Section(2, (0, 0), (1, 0, 0))
    f = t(2, 1)
    lhs = section_bracket(g, xi, eta.times(f))
    assert lhs == Section(2, (0, 0), (1, 0, 0))
    assert lhs == eta.times(derivative(anchor(xi), f)) + section_bracket(g, xi, eta).times(f)


def test_fiber_bracket_is_pointwise():
    g = sl2()
    a = Section(1, (0,), (0, 1, 0))
    b = Section(1, (0,), (0, 0, t(1, 1)))
    # [e, t·f] = t·h
    assert section_bracket(g, a, b) == Section(1, (0,), (t(1, 1), 0, 0))


@pytest.mark.parametrize("seed", range(10))
def test_axioms_on_random_sections(seed):
    rng = random.Random(seed)
    g = sl2()
    a, b, c = (random_section(rng, 2, 3, degree=2) for _ in range(3))
    f = PolyForm.coordinate(2, 1) * PolyForm.coordinate(2, 2)
    br = lambda x, y: section_bracket(g, x, y)  # noqa: E731
    assert br(a, b) == -br(b, a)
    assert br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b) == Section.zero(2, 3)
    assert br(a, b.times(f)) == b.times(derivative(anchor(a), f)) + br(a, b).times(f)
    assert anchor(tangent_lift(2, 3, a.vector)) == a.vector


def test_non_lie_fiber_rejected():
    with pytest.raises(JacobiError):
        TrivialAlgebroid(K("simplex1"), LieAlgebra(*frozen.NON_LIE))


@pytest.mark.parametrize("base", ["simplex1", "simplex2", "boundary2", "path2"])
@pytest.mark.parametrize("fiber", ["h3", "sl2", "abelian2"])
@pytest.mark.parametrize("D", [0, 1, 2])
def test_square_zero(base, fiber, D):
    assert tensor_complex(TrivialAlgebroid(K(base), algebra(fiber)), D).check_square_zero()


def _unsigned(A, r, D):
    lv = A.level(D)
    src, tgt = bidegrees(A, r), bidegrees(A, r + 1)
    blocks = {}
    for a, (p, q) in enumerate(src):
        for b, pq in enumerate(tgt):
            if pq == (p + 1, q):
                blocks[b, a] = kron(ps_differential(A.base, p, D), Matrix.identity(comb(A.rank, q)))
            elif pq == (p, q + 1):
                blocks[b, a] = kron(Matrix.identity(ps_basis(A.base, p, D).dim), ce_differential(A.fiber, q))
    return block_matrix(block_sizes(A, r + 1, lv), block_sizes(A, r, lv), blocks)


def test_unsigned_sum_is_not_a_differential():
    A = TrivialAlgebroid(K("simplex1"), heisenberg())
    assert not all((_unsigned(A, r + 1, 1) @ _unsigned(A, r, 1)).is_zero() for r in range(3))
    assert all((tensor_differential(A, r + 1, 1) @ tensor_differential(A, r, 1)).is_zero() for r in range(3))


def test_abelian_fiber_reduces_to_ps():
    # d_g = 0, so only the d_ps ⊗ id blocks remain and the sign is irrelevant
    A = TrivialAlgebroid(K("boundary2"), abelian(2))
    for r in range(3):
        assert tensor_differential(A, r, 1) == _unsigned(A, r, 1)


def test_point_base_reduces_to_ce():
    A = TrivialAlgebroid(SimplicialComplex.from_top_simplices([[0]]), sl2())
    for q in range(3):
        assert tensor_differential(A, q, 2) == ce_differential(sl2(), q)
    assert algebroid_betti(A, 2) == (1, 0, 0, 1)


@pytest.mark.parametrize("pair", sorted(frozen.KUNNETH))
def test_kunneth_against_oracle(pair):
    base, fiber = pair
    rep = kunneth_check(TrivialAlgebroid(K(base), algebra(fiber)), 2)
    assert rep.tensor_betti == frozen.KUNNETH[pair]
    assert rep.ok


@pytest.mark.parametrize("base", sorted(frozen.COMPLEX_TOPS))
@pytest.mark.parametrize("fiber", ["h3", "sl2", "abelian2"])
def test_kunneth_all_pairs(base, fiber):
    assert kunneth_check(TrivialAlgebroid(K(base), algebra(fiber)), 2).ok


def test_koszul_on_functions():
    A = TrivialAlgebroid(SimplicialComplex.simplex(2), heisenberg())
    rng = random.Random(3)
    w = random_algebroid_form(rng, A, 0, 2)
    xi = random_section(rng, 2, 3)
    res = koszul_check(w, (0, 1, 2), [xi])
    F_ = evaluate_form(w, (0, 1, 2), [])
    assert res.agree and res.koszul == derivative(anchor(xi), F_)


def test_koszul_degree_one_constants():
    g = sl2()
    A = TrivialAlgebroid(SimplicialComplex.simplex(2), g)
    lv = A.level(2)
    n0 = ps_basis(A.base, 0, 2).dim
    one = ps_basis(A.base, 0, 2).coordinates(_const(A.base))
    for chi in range(3):
        # 1 ⊗ x_chi* sits in block (0, 1) at index i·3 + chi
        v = [F(0)] * sum(block_sizes(A, 1, lv))
        for i, c in enumerate(one):
            v[i * 3 + chi] = c
        w = AlgebroidForm.from_vector(A, 1, lv, v)
        for a in range(3):
            for b in range(3):
                xa = Section(2, (0, 0), tuple(1 if k == a else 0 for k in range(3)))
                xb = Section(2, (0, 0), tuple(1 if k == b else 0 for k in range(3)))
                res = koszul_check(w, (0, 1, 2), [xa, xb])
                expected = -g.bracket_basis(a, b).get(chi, F(0))
                assert res.agree
                assert res.koszul == PolyForm.constant(2, expected)
    assert n0 == len(one)


def _const(k):
    return PiecewiseForm(k, 0, {k.top_simplices[0]: PolyForm.constant(2)})


@pytest.mark.parametrize("fiber", ["h3", "sl2"])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_koszul_random(fiber, r):
    A = TrivialAlgebroid(SimplicialComplex.simplex(2), algebra(fiber))
    rng = random.Random(100 + r)
    for _ in range(3):
        w = random_algebroid_form(rng, A, r, 2)
        secs = [random_section(rng, 2, 3, degree=1) for _ in range(r + 1)]
        assert koszul_check(w, (0, 1, 2), secs).agree


def test_koszul_limited_to_degree_two():
    A = TrivialAlgebroid(SimplicialComplex.simplex(1), heisenberg())
    w = random_algebroid_form(random.Random(0), A, 3, 1)
    with pytest.raises(NotImplementedError):
        koszul_check(w, (0, 1), [random_section(random.Random(1), 1, 3) for _ in range(4)])
