import random

import pytest

from ssetlab.bundles import (AutComplexView, all_trivializations, extend_bundle_staged, fiber,
                             find_isomorphism, is_f_bundle, trivialize_over_horn,
                             twisted_discrete_bundle)
from ssetlab.corpus import circle, double_cover
from ssetlab.correction import correction_or_raise, solve_boundary_lift_via_correction
from ssetlab.errors import InsufficientFillers, InvalidInput
from ssetlab.lifting import SquareEnumeration, solve_lift
from ssetlab.limits import product
from ssetlab.sset import terminal_map
from ssetlab.standard import boundary, boundary_inclusion, discrete, horn, point, simplex


def test_fiber_and_isomorphism():
    cover = double_cover()
    F = fiber(cover, cover.target.vertices()[0].name)
    assert F.counts() == (2,)
    assert find_isomorphism(F, discrete(2)) is not None
    assert find_isomorphism(F, point()) is None


def test_double_cover_is_bundle_not_product():
    v = is_f_bundle(double_cover(), 2)
    assert v.holds and v.witness.verify()
    # the twist is global: no trivialization over the whole circle
    triv, complete = all_trivializations(double_cover())
    assert triv == [] and complete


def test_non_bundle_detected():
    # ∂Δ1 -> Δ1 has point fibers, but over the edge the pullback is not Δ1 × pt
    pi = terminal_map(discrete(2), point())
    assert is_f_bundle(pi, 2).holds
    bad = boundary_inclusion(1)
    v = is_f_bundle(bad, 1)
    assert v.fails


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_horn_trivialization_against_exhaustive(k, m):
    rng = random.Random(100 * k + m)
    pi = twisted_discrete_bundle(horn(2, k), m, rng)
    triv = trivialize_over_horn(pi, 2, k)
    assert triv.verify(pi)
    every, complete = all_trivializations(pi)
    assert complete
    # [DERIVED] a trivial bundle with connected base and m-point fiber has m! trivializations
    assert len(every) == [1, 1, 2, 6][m]
    assert any(t.images == triv.phi.images for t in every)


def test_horn_trivialization_wrong_base():
    pi = twisted_discrete_bundle(horn(2, 1), 2, random.Random(0))
    with pytest.raises(InvalidInput):
        trivialize_over_horn(pi, 2, 0)


def test_aut_complex():
    A = AutComplexView(discrete(3))
    assert len(A.degree(0)) == 6 and len(A.degree(1)) == 6
    B = AutComplexView(simplex(1))
    # Δ0 × Δ1 has exactly one automorphism over Δ0
    assert len(B.degree(0)) == 1


def test_extend_bundle_discrete_fiber():
    pi = twisted_discrete_bundle(boundary(1), 2, random.Random(3))
    ext = extend_bundle_staged(pi, 1, 1)
    assert ext.cartesian.holds
    assert ext.trace is not None


def test_correction_agrees_with_search():
    P = product(simplex(1), discrete(2))
    pi = P.proj1
    seen = 0
    for n in (0, 1):
        for sq in SquareEnumeration(boundary_inclusion(n), pi):
            direct = solve_lift(sq)
            out = solve_boundary_lift_via_correction(pi, sq)
            assert (out.status == "lift") == direct.found
            if out.trace is not None:
                assert out.trace.replay() == []
                assert sq.is_lift(out.trace.l)
            seen += 1
    assert seen > 0


def test_correction_input_checks():
    cover = double_cover()
    sq = next(iter(SquareEnumeration(boundary_inclusion(1), cover)))
    with pytest.raises(InvalidInput):
        solve_boundary_lift_via_correction(terminal_map(circle().obj, point()), sq)
    trace = correction_or_raise(cover, sq)
    assert sq.is_lift(trace.l)
    with pytest.raises(InsufficientFillers):
        correction_or_raise(cover, sq, budget=1)
