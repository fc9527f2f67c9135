"""Boundary lifts for a bundle map by homotopy correction in function complexes.

Given ``v: ∂Δ^n -> E'`` over ``u: Δ^n -> Y'``, start from any lift ``l0`` of
``u``, connect ``l0|∂`` to ``v`` by an edge ``m0`` of Hom(∂Δ^n, E'), cancel
the loop ``a = π'∘m0`` against the image of a loop ``b̃`` at ``v`` through a
2-simplex ``γ``, fill the resulting Λ²₁ horn to get a vertical edge ``m``,
and push ``l0`` along ``m`` with a prism lift ``h``; the far end of ``h`` is
the answer.  Every choice point backtracks, under one shared budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InsufficientFillers, InvalidInput
from .homotopy import FunctionComplexView, cylinder
from .lifting import LiftingSquare
from .limits import product
from .search import DEFAULT_BUDGET, MapSearch, merge_forced
from .sset import SimplicialMap, compose, identity
from .standard import boundary, boundary_inclusion, simplex


class _Budget:
    def __init__(self, total: int):
        self.left = total

    def take(self, search: MapSearch):
        for m in search:
            yield m
            self.left -= search.explored
            search.explored = 0
            if self.left <= 0:
                return
        self.left -= search.explored

    @property
    def exhausted(self) -> bool:
        return self.left <= 0


@dataclass
class CorrectionTrace:
    square: LiftingSquare
    l0: SimplicialMap
    m0: SimplicialMap
    a: SimplicialMap
    b_tilde: SimplicialMap
    b: SimplicialMap
    gamma: SimplicialMap
    delta: SimplicialMap
    m: SimplicialMap
    h: SimplicialMap
    l: SimplicialMap
    view_E: FunctionComplexView = field(repr=False)
    view_Y: FunctionComplexView = field(repr=False)

    def replay(self) -> list[str]:
        """Incidence relations that fail (empty when the trace is sound)."""
        sq, VE, VY = self.square, self.view_E, self.view_Y
        p = sq.p
        n = sq.i.target.dim
        bad = []
        v0 = VE.of_map(sq.top)
        u_bd = VY.of_map(compose(sq.bottom, sq.i))
        l0_bd = VE.of_map(compose(self.l0, sq.i))

        def same(label, x, y):
            if x.images != y.images:
                bad.append(label)

        same("π'∘l0 = u", compose(p, self.l0), sq.bottom)
        same("d1 m0 = l0|∂", VE.face(self.m0, 1), l0_bd)
        same("d0 m0 = v", VE.face(self.m0, 0), v0)
        same("a = π'∘m0", compose(p, self.m0), self.a)
        same("b = π'∘b̃", compose(p, self.b_tilde), self.b)
        same("d0 b̃ = v", VE.face(self.b_tilde, 0), v0)
        same("d1 b̃ = v", VE.face(self.b_tilde, 1), v0)
        same("d0 γ = b", VY.face(self.gamma, 0), self.b)
        same("d1 γ = const", VY.face(self.gamma, 1), VY.degeneracy(u_bd, 0))
        same("d2 γ = a", VY.face(self.gamma, 2), self.a)
        same("d2 δ = m0", VE.face(self.delta, 2), self.m0)
        same("d0 δ = b̃", VE.face(self.delta, 0), self.b_tilde)
        same("π'∘δ = γ", compose(p, self.delta), self.gamma)
        same("m = d1 δ", VE.face(self.delta, 1), self.m)
        cyl = cylinder(sq.i.target)
        same("h|0 = l0", compose(self.h, cyl.e0), self.l0)
        same("h on ∂ = m", compose(self.h, _side(n)), self.m)
        same("π'∘h = u∘proj", compose(p, self.h), compose(sq.bottom, cyl.proj))
        same("l = h|1", compose(self.h, cyl.e1), self.l)
        if not sq.is_lift(self.l):
            bad.append("l solves the square")
        return bad


def _side(n: int) -> SimplicialMap:
    """``∂Δ^n × Δ^1 -> Δ^n × I`` (the function-complex prism sits on the left)."""
    bd = product(boundary(n), simplex(1), f"{boundary(n).name}×Δ1")
    return bd.cross(boundary_inclusion(n), identity(simplex(1)), cylinder(simplex(n)).fp)


@dataclass
class CorrectionOutcome:
    status: str  # "lift" | "none" | "inconclusive"
    trace: CorrectionTrace | None = None
    explored: int = 0


def solve_boundary_lift_via_correction(pi: SimplicialMap, sq: LiftingSquare,
                                       budget: int = DEFAULT_BUDGET) -> CorrectionOutcome:
    if sq.p != pi:
        raise InvalidInput("square is not over the given bundle map")
    if not sq.commutes():
        raise InvalidInput("lifting square does not commute")
    n = sq.i.target.dim
    E, Y = pi.source, pi.target
    B = sq.i.source
    VE = FunctionComplexView(B, E, 2, budget)
    VY = FunctionComplexView(B, Y, 2, budget)
    bud = _Budget(budget)
    v0 = VE.of_map(sq.top)
    u_bd = VY.of_map(compose(sq.bottom, sq.i))
    const_u = VY.degeneracy(u_bd, 0)
    P1E, P2E = VE.prism(1), VE.prism(2)
    P2Y = VY.prism(2)
    cyl = cylinder(sq.i.target)
    side = _side(n)
    e_of = lambda view, v: view._along((v,), 1)  # noqa: E731

    loops = None  # loops b̃ at v, computed once

    for l0 in bud.take(MapSearch(sq.i.target, E, over=(pi, sq.bottom), budget=budget)):
        l0_bd = VE.of_map(compose(l0, sq.i))
        fm0 = merge_forced([(e_of(VE, 0), l0_bd), (e_of(VE, 1), v0)])
        if fm0 is None:
            continue
        for m0 in bud.take(MapSearch(P1E.obj, E, fixed=fm0, budget=budget)):
            a = compose(pi, m0)
            if loops is None:
                fl = merge_forced([(e_of(VE, 0), v0), (e_of(VE, 1), v0)])
                loops = list(bud.take(MapSearch(P1E.obj, E, fixed=fl, budget=budget)))
            for b_tilde in loops:
                b = compose(pi, b_tilde)
                fg = merge_forced([(VY._along((1, 2), 2), b), (VY._along((0, 2), 2), const_u),
                                   (VY._along((0, 1), 2), a)])
                if fg is None:
                    continue
                for gamma in bud.take(MapSearch(P2Y.obj, Y, fixed=fg, budget=budget)):
                    fd = merge_forced([(VE._along((0, 1), 2), m0), (VE._along((1, 2), 2), b_tilde)])
                    if fd is None:
                        break
                    for delta in bud.take(MapSearch(P2E.obj, E, fixed=fd, over=(pi, gamma),
                                                    budget=budget)):
                        m = VE.face(delta, 1)
                        fh = merge_forced([(cyl.e0, l0), (side, m)])
                        if fh is None:
                            continue
                        over = compose(sq.bottom, cyl.proj)
                        for h in bud.take(MapSearch(cyl.obj, E, fixed=fh, over=(pi, over),
                                                    budget=budget)):
                            l = compose(h, cyl.e1).with_name("l")
                            tr = CorrectionTrace(sq, l0, m0, a, b_tilde, b, gamma, delta, m, h, l,
                                                 VE, VY)
                            bad = tr.replay()
                            if bad:
                                raise AssertionError(f"correction trace inconsistent: {bad}")
                            return CorrectionOutcome("lift", tr, budget - bud.left)
                        if bud.exhausted:
                            break
                    if bud.exhausted:
                        break
                if bud.exhausted:
                    break
            if bud.exhausted:
                break
        if bud.exhausted:
            break
    if bud.exhausted:
        return CorrectionOutcome("inconclusive", None, budget)
    return CorrectionOutcome("none", None, budget - bud.left)


def correction_or_raise(pi: SimplicialMap, sq: LiftingSquare, budget: int = DEFAULT_BUDGET) -> CorrectionTrace:
    out = solve_boundary_lift_via_correction(pi, sq, budget)
    if out.trace is None:
        raise InsufficientFillers("correction", f"no trace ({out.status})")
    return out.trace
