import pytest

from ssetlab.corpus import circle
from ssetlab.errors import InvalidInput
from ssetlab.homotopy import (are_homotopic, cylinder, discrete_targets, find_homotopy_inverse,
                              function_complex, homotopy_set, induced_map, is_weak_equivalence_against,
                              pi_zero)
from ssetlab.lifting import is_kan_complex_up_to
from ssetlab.limits import coproduct, product
from ssetlab.sset import compose, constant_map, identity, terminal_map
from ssetlab.standard import boundary, boundary_inclusion, discrete, horn, point, simplex, vertex_map


def test_cylinder_counts():
    # [DERIVED] Δ1×Δ1 has 4 vertices, 5 edges, 2 triangles
    cyl = cylinder(simplex(1))
    assert cyl.obj.counts() == (4, 5, 2)
    assert compose(cyl.proj, cyl.e0).images == identity(simplex(1)).images


def test_endpoints_of_interval_are_homotopic():
    D1 = simplex(1)
    a = vertex_map(D1, "0")
    b = vertex_map(D1, "1")
    v = are_homotopic(a, b)
    assert v.holds
    h, forward = v.witness
    assert forward and h.replay()
    # the reverse direction exists only as a closure step
    assert are_homotopic(b, a).holds


def test_discrete_points_not_homotopic():
    D = discrete(2)
    a, b = (constant_map(point(), D, v) for v in D.vertices())
    assert are_homotopic(a, b).fails
    with pytest.raises(InvalidInput):
        are_homotopic(a, identity(D))


def test_homotopy_set_counts_components():
    for X, want in [(simplex(2), 2), (discrete(2), 4), (circle().obj, 2), (boundary(2), 2)]:
        t = homotopy_set(X, discrete(2))
        # [DERIVED] [X, Z] for discrete Z is Z^{π0 X}
        assert len(t) == want == 2 ** len(pi_zero(X))
        assert t.complete


def test_homotopy_chain_replays():
    t = homotopy_set(simplex(1), simplex(1))
    a, b = constant_map(simplex(1), simplex(1), simplex(1).gen("0")), identity(simplex(1))
    assert t.class_of(a) == t.class_of(b)
    chain = t.chain(a, b)
    assert chain is not None and chain.replay()


def test_induced_map_and_weq():
    T = discrete_targets()
    assert all(t.certificate.holds for t in T)
    assert is_weak_equivalence_against(terminal_map(simplex(2), point()), T).verdict.holds
    rep = is_weak_equivalence_against(boundary_inclusion(1), T)
    assert rep.verdict.fails
    f = terminal_map(discrete(2), point())
    ty, tx = homotopy_set(point(), discrete(3)), homotopy_set(discrete(2), discrete(3))
    sharp = induced_map(f, ty, tx)
    assert len(sharp) == 3 and len(tx) == 9


def test_weq_rejects_uncertified_target():
    from ssetlab.homotopy import KanTarget
    bad = KanTarget(horn(2, 1), is_kan_complex_up_to(horn(2, 1), 1))
    rep = is_weak_equivalence_against(identity(point()), [bad])
    assert rep.rejected == [horn(2, 1).name]
    assert rep.verdict.inconclusive


def test_homotopy_inverse_of_collapse():
    res = find_homotopy_inverse(terminal_map(simplex(1), point()))
    assert res.status == "found"
    assert res.source_chain.replay() and res.target_chain.replay()
    res = find_homotopy_inverse(terminal_map(discrete(2), point()))
    assert res.status == "none"


def test_function_complex_degrees():
    V = function_complex(point(), discrete(2), 1)
    assert len(V.degree(0)) == 2 and len(V.degree(1)) == 2
    with pytest.raises(InvalidInput):
        V.degree(2)
    W = function_complex(discrete(2), simplex(1), 1)
    # [DERIVED] Hom(2pt × Δ1, Δ1) = (monotone maps [1]->[1])^2 = 9
    assert len(W.degree(1)) == 9
    assert len(W.degree(0)) == 4


def test_pi_zero():
    K = coproduct([simplex(1), circle().obj, point()], ["a", "b", "c"])
    assert len(pi_zero(K.obj)) == 3
    assert len(pi_zero(product(boundary(1), simplex(1)).obj)) == 2
