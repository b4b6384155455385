import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilcoh.checks import random_finite_gmodule, random_gmodule
from weilcoh.errors import NotAutomorphism
from weilcoh.fga import abelian_group, cokernel, compose, cyclic, free, is_exact, make_hom, trivial, zero_hom
from weilcoh.gmod import (
    QMod,
    canonical_invariants_to_coinvariants,
    coinvariants,
    cup_e,
    group_cohomology,
    invariants,
    make_gmodule,
    rational_coinvariants_tower,
    rational_gamma_star,
    tensor_N,
    trivial_module,
)
from weilcoh.matrix import Matrix

Z = free(1)
SWAP = make_gmodule(free(2), Matrix.from_rows([[0, 1], [1, 0]]))
Z5_2 = make_gmodule(cyclic(5), Matrix.from_rows([[2]]))


def brute_fixed(m):
    g = m.underlying
    return [x for x in g.elements() if g.equal(m.act(x), x)]


def test_make_gmodule_examples():
    neg = make_gmodule(Z, Matrix.from_rows([[-1]]))
    assert neg.phi_inverse.matrix.to_rows() == [[-1]]
    with pytest.raises(NotAutomorphism):
        make_gmodule(Z, Matrix.from_rows([[2]]))
    assert Z5_2.underlying.reduce(Z5_2.phi_inverse.matrix.column(0)) == (3,)
    with pytest.raises(NotAutomorphism):
        make_gmodule(cyclic(5), Matrix.from_rows([[5]]))


def test_invariants_examples():
    H0, _ = invariants(trivial_module(Z))
    assert H0.structure() == ((), 1)
    H0, _ = invariants(Z5_2)
    assert H0.is_trivial() and len(brute_fixed(Z5_2)) == 1
    H0, emb = invariants(SWAP)
    assert H0.structure() == ((), 1)
    assert emb.matrix.column(0) in ((1, 1), (-1, -1))


def test_coinvariants_examples():
    H1, _ = coinvariants(trivial_module(Z))
    assert H1.structure() == ((), 1)
    assert coinvariants(Z5_2)[0].is_trivial()
    H1, proj = coinvariants(SWAP)
    assert H1.structure() == ((), 1)
    # (x, y) -> x + y up to sign
    a, b = proj.image_raw((1, 0)), proj.image_raw((0, 1))
    assert H1.equal(a, b) and not H1.is_zero(a)


def test_group_cohomology_examples():
    assert group_cohomology(0, trivial_module(Z)).structure() == ((), 1)
    assert group_cohomology(2, SWAP).is_trivial()
    m = make_gmodule(cyclic(4), Matrix.from_rows([[3]]))
    assert group_cohomology(1, m).structure() == ((2,), 0)
    with pytest.raises(ValueError):
        group_cohomology(-1, m)


def test_tensor_N_examples():
    t = tensor_N(trivial_module(Z))
    assert t.module.phi.matrix.to_rows() == [[1, 1], [0, 1]]
    assert tensor_N(trivial_module(trivial())).module.underlying.is_trivial()
    t = tensor_N(make_gmodule(cyclic(3), Matrix.from_rows([[2]])))
    assert t.module.phi.matrix.to_rows() == [[2, 2], [0, 2]]


def test_cup_e_examples():
    e = cup_e(trivial_module(Z))
    assert e.matrix.to_rows() in ([[1]], [[-1]]) and e.is_isomorphism()
    # Z(1,1) -> Z, (x, x) -> 2x: injective with cokernel Z/2
    e = cup_e(SWAP)
    assert e.equals(canonical_invariants_to_coinvariants(SWAP))
    assert e.is_injective() and not e.is_surjective()
    e = cup_e(Z5_2)
    assert e.source.is_trivial() and e.target.is_trivial()


def test_cup_e_swap_cokernel_is_Z2():
    C, _ = cokernel(cup_e(SWAP))
    assert C.structure() == ((2,), 0)


def test_qmod_examples():
    assert rational_gamma_star(QMod(1, [[3]])).dimension == 0
    assert rational_gamma_star(QMod(1, [[1]])).dimension == 1
    assert rational_gamma_star(QMod(2, [[1, 0], [0, 2]])).dimension == 1
    assert rational_coinvariants_tower(QMod(1, [[3]])).dimension == 0
    assert rational_coinvariants_tower(QMod(1, [[-1]])).dimension == 1
    assert rational_coinvariants_tower(QMod(2, [[1, 1], [0, 1]])).dimension == 1


def test_qmod_finite_order_keeps_everything():
    rot = QMod(2, [[0, -1], [1, 0]])
    assert rational_gamma_star(rot).dimension == 2
    assert rational_coinvariants_tower(rot).dimension == 2


# properties --------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_ses_exact_and_equivariant(seed):
    m = random_gmodule(random.Random(seed))
    t = tensor_N(m)
    A, B = m.underlying, t.module.underlying
    seq = [zero_hom(trivial(), A), t.inclusion, t.projection, zero_hom(A, trivial())]
    assert is_exact(seq)
    assert compose(t.module.phi, t.inclusion).equals(compose(t.inclusion, m.phi))
    assert compose(t.projection, t.module.phi).equals(compose(m.phi, t.projection))
    assert compose(t.module.phi, t.module.phi_inverse).equals(make_hom(B, B, Matrix.identity(B.num_generators)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_cup_e_is_canonical_map(seed):
    m = random_gmodule(random.Random(seed))
    assert cup_e(m).equals(canonical_invariants_to_coinvariants(m))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_invariants_match_brute_force(seed):
    m = random_finite_gmodule(random.Random(seed), max_order=60)
    H0, _ = invariants(m)
    H1, _ = coinvariants(m)
    fixed = brute_fixed(m)
    assert H0.order == len(fixed)
    # |M^G| = |M_G| for finite M (the difference map phi - 1 is an endomorphism)
    assert H1.order == H0.order


def test_phi_inverse_composes_to_identity():
    rng = random.Random(7)
    for _ in range(30):
        m = random_finite_gmodule(rng)
        g = m.underlying
        for x in g.generators():
            assert g.equal(m.phi_inverse.image_raw(m.phi.image_raw(x)), x)


def test_abelian_group_module_with_mixed_part():
    g = abelian_group([0, 4])
    # (x, y) -> (x, y + x) is an automorphism of Z + Z/4
    m = make_gmodule(g, Matrix.from_rows([[1, 0], [1, 1]]))
    # phi - 1 sends (x, y) to (0, x): kernel 4Z + Z/4, cokernel Z
    H0, _ = invariants(m)
    assert H0.structure() == ((4,), 1)
    assert coinvariants(m)[0].structure() == ((), 1)
    assert cup_e(m).equals(canonical_invariants_to_coinvariants(m))
