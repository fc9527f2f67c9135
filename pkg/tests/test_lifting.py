import pytest

import oracles
from ssetlab.corpus import double_cover
from ssetlab.errors import CertificateRejected, InvalidInput
from ssetlab.lifting import (AnodyneTrace, LiftingSquare, MapFamily, SquareEnumeration, TraceCell,
                             all_lifts, check_llp_against, compose_traces, has_rlp,
                             identity_square, is_kan_complex_up_to, is_kan_fibration_up_to,
                             pushout_trace, raw_images, replay_anodyne, solve_lift)
from ssetlab.search import enumerate_maps
from ssetlab.sset import compose, constant_map, identity, terminal_map
from ssetlab.standard import (boundary, boundary_inclusion, discrete, horn, horn_inclusion,
                              pair_groupoid_nerve, point, simplex, vertex_map)


def test_enumerate_maps_matches_brute_force():
    for A, X in [(simplex(1), horn(2, 1)), (boundary(2), simplex(2)), (horn(2, 0), boundary(2)),
                 (simplex(2), simplex(1))]:
        got = {m.key() for m in enumerate_maps(A, X).maps}
        want = {m.key() for m in oracles.all_maps_brute(A, X)}
        assert got == want


@pytest.mark.parametrize("p,k,q", [(1, 0, "cover"), (2, 1, "Δ1"), (2, 0, "Δ1"), (2, 2, "pt⊔pt")])
def test_all_lifts_match_brute_force(p, k, q):
    j = horn_inclusion(p, k)
    q = {"cover": double_cover(), "Δ1": terminal_map(simplex(1), point()),
         "pt⊔pt": terminal_map(discrete(2), point())}[q]
    for sq in SquareEnumeration(j, q):
        lifts, complete = all_lifts(sq)
        assert complete
        assert {m.key() for m in lifts} == {m.key() for m in oracles.lifts_brute(sq)}


def test_inner_horn_in_boundary_has_no_filler():
    # ∂Δ2 is not Kan: the spine 0->1->2 has no composite filling
    v = is_kan_complex_up_to(boundary(2), 2)
    assert v.fails
    sq = v.witness["square"]
    assert solve_lift(sq).status == "none"
    assert oracles.lifts_brute(sq) == []


def test_kan_complexes():
    assert is_kan_complex_up_to(point(), 3).holds
    assert is_kan_complex_up_to(discrete(3), 3).holds
    assert is_kan_complex_up_to(pair_groupoid_nerve("ab", 3), 2).holds
    # the nerve of a poset has inner fillers only
    assert is_kan_complex_up_to(simplex(1), 1).holds
    assert is_kan_complex_up_to(simplex(1), 2).fails


def test_double_cover_is_fibration():
    assert is_kan_fibration_up_to(double_cover(), 2).holds


def test_boundary_rlp_of_collapse():
    # Δ1 -> Δ0 is not a trivial fibration: two vertices over one point need an edge back
    f = terminal_map(simplex(1), point())
    assert has_rlp(f, MapFamily.boundaries(1), 1).fails
    assert has_rlp(identity(simplex(1)), MapFamily.boundaries(2), 2).holds


def test_non_commuting_square_rejected():
    i = boundary_inclusion(1)
    p = identity(simplex(1))
    top = constant_map(boundary(1), simplex(1), simplex(1).gen("0"))
    bottom = constant_map(simplex(1), simplex(1), simplex(1).gen("1"))
    sq = LiftingSquare(i, p, top, bottom)
    assert not sq.commutes()
    with pytest.raises(InvalidInput):
        solve_lift(sq)
    with pytest.raises(InvalidInput):
        LiftingSquare(i, p, bottom, top)


def test_reverse_order_agrees():
    q = terminal_map(horn(2, 1), point())
    for sq in SquareEnumeration(horn_inclusion(2, 0), q):
        a, b = solve_lift(sq), solve_lift(sq, reverse=True)
        assert a.status == b.status


def test_identity_square_lifts():
    assert solve_lift(identity_square(horn(2, 1))).found


def _horn_trace(p, k):
    H = horn(p, k)
    return AnodyneTrace(f"t{p}{k}", H, [[TraceCell("horn", p, k, raw_images(identity(H)))]])


def test_replay_and_composition():
    tr = _horn_trace(2, 1)
    r = replay_anodyne(tr)
    assert r.result.counts() == simplex(2).counts()
    inner = AnodyneTrace("g", point(), [[TraceCell("horn", 1, 0, {"0": ((), "0")})]])
    assert replay_anodyne(inner).result.counts() == (2, 1)
    pushed = pushout_trace(_horn_trace(1, 0), vertex_map(simplex(1), "1", horn(1, 0)))
    assert replay_anodyne(pushed).result.counts() == (3, 2)
    both = compose_traces(inner, AnodyneTrace("h", replay_anodyne(inner).result, []))
    assert replay_anodyne(both).result.counts() == (2, 1)


def test_replay_rejects_non_horn_and_bad_attachment():
    H = boundary(1)
    with pytest.raises(CertificateRejected):
        replay_anodyne(AnodyneTrace("b", H, [[TraceCell("boundary", 1, None, raw_images(identity(H)))]]))
    bad = {"0": ((), "0")}  # Λ1_0 has one vertex, fine; now point it at a missing name
    with pytest.raises(CertificateRejected):
        replay_anodyne(AnodyneTrace("x", point(), [[TraceCell("horn", 1, 0, {"0": ((), "z")})]]))
    with pytest.raises(CertificateRejected):
        replay_anodyne(AnodyneTrace("y", point(), [[TraceCell("horn", 1, 0, bad | {"q": ((), "0")})]]))


def test_anodyne_llp_against_fibrations():
    tr = _horn_trace(2, 0)
    inc = replay_anodyne(tr).inclusion
    fibs = [terminal_map(discrete(2), point()), double_cover(), identity(simplex(1))]
    rep = check_llp_against(inc, fibs, 2)
    assert rep.verdict.holds
    assert all(r["squares"] == r["solved"] for r in rep.rows)


def test_horn_vs_non_fibration_fails():
    # Λ2_1 -> Δ2 against ∂Δ2 -> Δ0 has an unsolved square
    rep = check_llp_against(horn_inclusion(2, 1), [terminal_map(boundary(2), point())], 2)
    assert rep.verdict.fails
    name, sq = rep.unsolved[0]
    assert solve_lift(sq, reverse=True).status == "none"


def test_family_members():
    assert [m.label for m in MapFamily.horns(2).members()] == ["h1.0", "h1.1", "h2.0", "h2.1", "h2.2"]
    assert [m.label for m in MapFamily.boundaries(2).members()] == ["b0", "b1", "b2"]
    fam = MapFamily.of([horn_inclusion(2, 1), boundary_inclusion(1)])
    assert len(fam.members(1)) == 1
    with pytest.raises(InvalidInput):
        MapFamily("bogus", 1).members()
    assert compose(identity(point()), identity(point())).images == identity(point()).images
