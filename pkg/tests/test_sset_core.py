import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ssetlab.corpus import circle, double_cover
from ssetlab.errors import InvalidParameter
from ssetlab.homotopy import pi_zero
from ssetlab.limits import coproduct, is_monomorphism, product, pullback
from ssetlab.sset import (NormalSimplex, SimplexId, SimplicialSet, compose, empty_set,
                          identity, identity_violations, is_isomorphism, skeleton, terminal_map,
                          validate)
from ssetlab.standard import (boundary, boundary_inclusion, discrete, horn, horn_inclusion,
                              pair_groupoid_nerve, point, simplex)


@pytest.mark.parametrize("p", range(5))
def test_simplex_counts_match_oracle(p):
    D = simplex(p)
    for n in range(p + 3):
        assert len(D.generators_in(n)) == oracles.nondegenerate_count_simplex(p, n)
        # all simplices, degenerate included, are the monotone sequences
        assert len(D.simplices(n)) == len(oracles.monotone_sequences(n, p))


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 2), (1, 3)])
def test_product_counts_match_oracle(p, q):
    P = product(simplex(p), simplex(q)).obj
    for n in range(p + q + 2):
        assert len(P.generators_in(n)) == oracles.nondegenerate_count_product(p, q, n)
    assert len(P.generators_in(p + q)) == oracles.binomial(p + q, p)


def test_boundary_and_horn_sizes():
    # [TRIVIAL] ∂Δ^p drops the top cell, Λ^p_k drops one more face
    for p in range(1, 5):
        assert len(boundary(p)) == len(simplex(p)) - 1
        for k in range(p + 1):
            assert len(horn(p, k)) == len(simplex(p)) - 2


OBJECTS = [simplex(2), boundary(3), horn(3, 1), product(simplex(1), simplex(2)).obj,
           circle().obj, double_cover().source, pair_groupoid_nerve("ab", 3)]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(OBJECTS), st.integers(0, 4), st.data())
def test_simplicial_identities_random(X, n, data):
    zs = X.simplices(n)
    z = data.draw(st.sampled_from(zs))
    assert list(identity_violations(X, z)) == []


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(OBJECTS), st.integers(1, 4), st.data())
def test_ez_normal_form_unique(X, n, data):
    z = data.draw(st.sampled_from(X.simplices(n)))
    i = data.draw(st.integers(0, n))
    y = X.degeneracy(z, i)
    assert y.word and list(y.word) == sorted(set(y.word), reverse=True)
    assert y.base == z.base
    # a degenerate simplex is recovered by any face that undoes the degeneracy
    assert X.face(y, i) == z


def test_simplices_are_distinct_and_sorted():
    X = product(horn(2, 1), simplex(1)).obj
    for n in range(5):
        zs = X.simplices(n)
        assert len(set(zs)) == len(zs)


def test_face_index_out_of_range():
    D = simplex(2)
    top = D.simplices(2)[-1]
    with pytest.raises(InvalidParameter):
        D.face(top, 3)
    with pytest.raises(InvalidParameter):
        D.face(D.simplices(0)[0], 0)
    with pytest.raises(InvalidParameter):
        D.degeneracy(top, 5)


def test_validate_rejects_bad_presentation():
    a, b = SimplexId("a", 0), SimplexId("b", 0)
    e = SimplexId("e", 1)
    t = SimplexId("t", 2)
    # the 2-cell's faces do not fit together: d0 d1 != d0 d0
    faces = {a: (), b: (), e: (NormalSimplex((), b), NormalSimplex((), a)),
             t: (NormalSimplex((), e), NormalSimplex((), e), NormalSimplex((), e))}
    X = SimplicialSet("bad", faces)
    rep = validate(X, 3)
    assert not rep.valid
    assert any("d0 d1" in v.message or "!=" in v.message for v in rep.violations)


def test_validate_corpus_objects(corpus):
    for X in corpus.objects.values():
        assert validate(X, 4).valid


def test_empty_set():
    E = empty_set()
    assert len(E) == 0 and E.dim == -1
    assert E.simplices(3) == []
    assert validate(E).valid
    assert product(E, simplex(2)).obj.generators == []


def test_circle_pushout():
    S = circle()
    C = S.obj
    assert C.counts() == (2, 2)
    assert len(pi_zero(C)) == 1
    # the legs agree on the glued boundary
    j = boundary_inclusion(1)
    assert compose(S.leg_b, j).images == compose(S.leg_c, j).images
    assert validate(C, 4).valid


def test_double_cover_fibers():
    cover = double_cover()
    assert cover.source.counts() == (4, 4)
    assert not cover.commutes()
    assert len(pi_zero(cover.source)) == 1


def test_coproduct_and_pullback():
    K = coproduct([simplex(1), point()], ["a", "b"])
    assert K.obj.counts() == (3, 1)
    assert len(pi_zero(K.obj)) == 2
    pb = pullback(horn_inclusion(2, 1), identity(simplex(2)))
    assert is_isomorphism(pb.proj1)


def test_skeleton_and_monomorphism():
    D = simplex(3)
    sk = skeleton(D, 1)
    assert sk.dim == 1 and len(sk) == 10
    assert is_monomorphism(boundary_inclusion(3))
    assert not is_monomorphism(terminal_map(discrete(2), point()))
