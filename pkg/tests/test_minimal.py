import pytest

from ssetlab.corpus import double_cover
from ssetlab.errors import InvalidInput
from ssetlab.limits import product
from ssetlab.minimal import (acyclic_fibration_check, are_p_related, fiber_triviality,
                             is_minimal, minimal_subfibration, section_and_deformation)
from ssetlab.sset import identity, terminal_map
from ssetlab.standard import (boundary_inclusion, discrete, horn_inclusion, pair_groupoid_nerve,
                              point, simplex)


def test_identity_is_its_own_minimal_model():
    res = minimal_subfibration(identity(simplex(2)), 2)
    assert res.verify()
    assert res.E.counts() == simplex(2).counts()
    assert is_minimal(res.phi, 2).holds


def test_contractible_fiber_collapses():
    # the groupoid nerve is contractible, so its minimal model is a point
    E2 = pair_groupoid_nerve("ab", 3)
    f = terminal_map(E2, point())
    res = minimal_subfibration(f, 2, truncated_at=3)
    assert res.verify() and len(res.identities()) == 5
    assert res.E.counts() == (1,)
    assert is_minimal(res.phi, 2).holds
    assert not is_minimal(f, 2).holds


def test_projection_with_discrete_fiber_is_minimal():
    P = product(simplex(1), discrete(2))
    res = minimal_subfibration(P.proj1, 2)
    assert res.E.counts() == P.obj.counts()
    assert is_minimal(P.proj1, 2).holds


def test_gate_rejects_non_fibration():
    with pytest.raises(InvalidInput):
        minimal_subfibration(horn_inclusion(2, 1), 2)


def test_p_relatedness():
    E2 = pair_groupoid_nerve("ab", 3)
    f = terminal_map(E2, point())
    a, b = E2.vertices()
    za, zb = E2.simplex(a.name), E2.simplex(b.name)
    assert are_p_related(f, za, zb).holds
    assert are_p_related(f, za, za).holds
    D = discrete(2)
    g = terminal_map(D, point())
    x, y = (D.simplex(v.name) for v in D.vertices())
    assert are_p_related(g, x, y).fails


def test_section_and_deformation():
    v, s, h = section_and_deformation(terminal_map(simplex(1), point()), 2)
    assert v.holds and h.replay()
    v, s, h = section_and_deformation(terminal_map(discrete(2), point()), 2)
    assert v.fails
    v, _, _ = section_and_deformation(boundary_inclusion(1), 2)
    assert v.fails


def test_acyclic_fibration_check_is_coherent():
    for f, expected in [(terminal_map(pair_groupoid_nerve("ab", 3), point()), "holds"),
                        (double_cover(), "fails"), (identity(simplex(1)), "holds")]:
        rep = acyclic_fibration_check(f, 2)
        assert rep.acyclic.status.value == expected
        assert rep.coherent
        if expected == "holds":
            assert rep.converse.holds


def test_fiber_triviality():
    assert fiber_triviality(point(), 2).holds
    assert fiber_triviality(discrete(2), 2).fails
