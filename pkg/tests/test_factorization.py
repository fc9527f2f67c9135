import pytest

from ssetlab.errors import InvalidInput
from ssetlab.factorization import (cylinder_union_inclusion, factorize, fibrant_approx_staged,
                                   retract_through_factorization, soa_stage)
from ssetlab.lifting import MapFamily, replay_anodyne
from ssetlab.limits import is_monomorphism
from ssetlab.sset import identity, terminal_map
from ssetlab.standard import boundary, boundary_inclusion, discrete, horn, horn_inclusion, point, simplex


def test_single_stage_counts():
    # Δ0 -> Δ0 against horns of dim 1: one square per horn, an edge pair glued at the point
    st = soa_stage(identity(point()), MapFamily.horns(1), 1)
    assert len(st.attachments) == 2
    assert st.obj.counts() == (3, 2)
    assert not st.right.commutes()


def test_horn_factorization_exact_and_replayable():
    f = terminal_map(discrete(2), point())
    fz = factorize(f, MapFamily.horns(1), 1, 1)
    assert fz.exact() and fz.replay_left()
    assert replay_anodyne(fz.trace).result == fz.obj
    assert not fz.rlp_report.fails


def test_truncated_factorization_fails_above_its_bound():
    # one stage at d=1 leaves unfilled 2-horns
    fz = factorize(identity(point()), MapFamily.horns(1), 1, 1, check_dim=2)
    assert fz.rlp_report.fails
    assert fz.rlp_report.witness["member"].startswith("h2")


def test_boundary_factorization_injective():
    fz = factorize(terminal_map(boundary(1), point()), MapFamily.boundaries(2), 1, 2)
    assert fz.exact()
    assert fz.injectivity.holds and is_monomorphism(fz.left)
    assert fz.trace is None


def test_zero_stages_is_raw_check():
    fz = factorize(identity(simplex(1)), MapFamily.horns(2), 0, 2)
    assert fz.obj == simplex(1)
    assert fz.rlp_report.holds
    with pytest.raises(InvalidInput):
        factorize(identity(point()), MapFamily.horns(1), -1, 1)


def test_fibrant_approximation_of_horn():
    st = fibrant_approx_staged(horn(2, 1), 1, 1)
    assert is_monomorphism(st.inclusion)
    assert st.certificate.holds  # Kan up to degree 1 after one stage
    assert replay_anodyne(st.trace).result == st.obj


def test_retract_through_factorization():
    i = horn_inclusion(1, 0)
    fz = factorize(i, MapFamily.horns(1), 1, 1)
    rd = retract_through_factorization(i, fz)
    assert rd is not None and rd.verify() == []
    with pytest.raises(InvalidInput):
        retract_through_factorization(boundary_inclusion(1), fz)


def test_cylinder_union():
    cu = cylinder_union_inclusion(boundary_inclusion(1))
    # [DERIVED] ∂Δ1×Δ1 ∪ Δ1×∂Δ1 is the boundary square: 4 vertices, 4 edges
    assert cu.obj.counts() == (4, 4)
    assert is_monomorphism(cu.inclusion)
    with pytest.raises(InvalidInput):
        cylinder_union_inclusion(terminal_map(discrete(2), point()))
