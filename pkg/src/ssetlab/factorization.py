"""Staged small-object factorizations and related constructions."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput
from .lifting import (AnodyneTrace, LiftingSquare, MapFamily, SquareEnumeration, TraceCell,
                      cell_label, has_rlp, is_kan_complex_up_to, raw_images, replay_anodyne,
                      solve_lift)
from .limits import Cell, attach_cells, is_degreewise_injective, is_monomorphism, product, pushout
from .search import DEFAULT_BUDGET
from .sset import (NormalSimplex, SimplicialMap, SimplicialSet, compose, identity,
                   terminal_map)
from .standard import boundary, boundary_inclusion, point, simplex
from .verdict import Verdict


@dataclass
class SoaStage:
    n: int
    obj: SimplicialSet
    inclusion: SimplicialMap  # G^{n-1} -> G^n
    right: SimplicialMap  # G^n -> Y
    attachments: list[tuple[str, LiftingSquare]]
    cell_maps: list[SimplicialMap]
    truncated: bool = False


def soa_stage(f: SimplicialMap, fam: MapFamily, d: int, n: int = 1,
              budget: int = DEFAULT_BUDGET) -> SoaStage:
    """Attach one cell for every commuting square from ``fam`` (dims <= d) into ``f``."""
    G, Y = f.source, f.target
    squares: list[tuple[str, LiftingSquare]] = []
    truncated = False
    for member in fam.members(d):
        en = SquareEnumeration(member.inclusion, f, budget)
        squares.extend((member.label, sq) for sq in en)
        truncated = truncated or en.truncated
    cells = [Cell(cell_label(n, idx, label), sq.i, sq.top) for idx, (label, sq) in enumerate(squares)]
    att = attach_cells(G, cells, f"G{n}")
    images = dict(f.images)
    for cell, (_, sq) in zip(cells, squares):
        B = sq.i.target
        for g in B.generators:
            gid = att.obj.gen(f"{cell.label}:{g.name}") if f"{cell.label}:{g.name}" in att.obj else None
            if gid is not None:
                images[gid] = sq.bottom.images[g]
    right = SimplicialMap(att.obj, Y, images, f"p{n}")
    return SoaStage(n, att.obj, att.inclusion, right, squares, att.cell_maps, truncated)


def _stage_aware_rlp(stages: list[SoaStage], f: SimplicialMap, fam: MapFamily, d: int,
                     budget: int, attach_d: int | None = None, frontier: int = 2000) -> Verdict:
    """RLP of the last right map, separating the stage frontier from real failures.

    Squares into ``G^{N-1}`` are exactly the last stage's attachments, so each
    is re-verified against its own cell.  Squares touching the newest cells
    are sampled (at most ``frontier`` of them, small per-square budget); an
    unsolved one only says the tower has not converged, never a failure.
    Members above the attaching dimension, and the case of no stages, are
    checked in full and may fail.
    """
    attach_d = d if attach_d is None else attach_d
    fam = MapFamily(fam.kind, max(fam.bound, d), fam.explicit)
    if not stages:
        return has_rlp(f, fam, d, budget)
    last = stages[-1]
    p, prev = last.right, last.inclusion.source
    counts = {"squares": 0, "cells": 0, "frontier": 0, "frontier_solved": 0}
    for (label, sq), cell in zip(last.attachments, last.cell_maps):
        moved = LiftingSquare(sq.i, p, compose(last.inclusion, sq.top), sq.bottom)
        if not moved.is_lift(cell):
            return Verdict.fail({"member": label, "square": moved}, bound=(len(stages), d),
                                detail=f"cell for a {label} square does not lift it", **counts)
        counts["cells"] += 1
    undecided = last.truncated
    per_square = max(1, budget // 1000)
    for member in fam.members(d):
        en = SquareEnumeration(member.inclusion, p, budget)
        for sq in en:
            counts["squares"] += 1
            if member.inclusion.target.dim > attach_d:
                # no cells of this dimension are ever attached: check directly
                res = solve_lift(sq, budget)
                if res.status == "none":
                    return Verdict.fail({"member": member.label, "square": sq},
                                        bound=(len(stages), d),
                                        detail=f"unsolved {member.label} square", **counts)
                undecided = undecided or not res.found
                continue
            if all(y.base.name in prev for y in sq.top.images.values()):
                continue
            if counts["frontier"] >= frontier:
                undecided = True
                break
            counts["frontier"] += 1
            if solve_lift(sq, per_square).found:
                counts["frontier_solved"] += 1
            else:
                undecided = True
        undecided = undecided or en.truncated
    if undecided:
        return Verdict.unknown(bound=(len(stages), d), detail="squares at the last stage frontier",
                               **counts)
    return Verdict.ok(bound=(len(stages), d), **counts)


@dataclass
class Factorization:
    f: SimplicialMap
    family: str
    N: int
    d: int
    stages: list[SoaStage]
    left: SimplicialMap
    right: SimplicialMap
    trace: AnodyneTrace | None
    rlp_report: Verdict
    raw_rlp: Verdict | None = None
    injectivity: Verdict | None = None

    @property
    def obj(self) -> SimplicialSet:
        return self.left.target

    def exact(self) -> bool:
        return compose(self.right, self.left).images == self.f.images

    def replay_left(self) -> bool:
        if self.trace is None:
            return False
        r = replay_anodyne(self.trace)
        return r.result == self.obj and r.inclusion.images == self.left.images


def factorize(f: SimplicialMap, fam: MapFamily, N: int, d: int, check_dim: int | None = None,
              budget: int = DEFAULT_BUDGET, raw: bool = False) -> Factorization:
    if N < 0:
        raise InvalidInput("number of stages must be non-negative")
    check_dim = d if check_dim is None else check_dim
    stages: list[SoaStage] = []
    current = f
    for n in range(1, N + 1):
        st = soa_stage(current, fam, d, n, budget)
        stages.append(st)
        current = st.right
    G = current.source
    left = SimplicialMap(f.source, G, {g: NormalSimplex((), g) for g in f.source.generators}, "i_N")
    trace = None
    if fam.kind == "horns":
        trace = AnodyneTrace(f"soa_{f.name}", f.source,
                             [[TraceCell("horn", sq.i.target.dim, _horn_k(label), raw_images(sq.top))
                               for label, sq in st.attachments] for st in stages])
    inj = is_degreewise_injective(left, max(G.dim, 0) + 1) if fam.kind == "boundaries" else None
    rlp = _stage_aware_rlp(stages, f, fam, check_dim, budget, attach_d=d)
    raw_v = (has_rlp(current, MapFamily(fam.kind, max(fam.bound, check_dim), fam.explicit),
                     check_dim, budget) if raw else None)
    return Factorization(f, fam.kind, N, d, stages, left, current.with_name("p_N"), trace, rlp,
                         raw_v, inj)


def _horn_k(label: str) -> int:
    return int(label.split(".")[1])


@dataclass
class FibrantApproxStage:
    N: int
    d: int
    inclusion: SimplicialMap
    trace: AnodyneTrace
    certificate: Verdict
    factorization: Factorization

    @property
    def obj(self) -> SimplicialSet:
        return self.inclusion.target


def fibrant_approx_staged(X: SimplicialSet, N: int, d: int,
                          budget: int = DEFAULT_BUDGET) -> FibrantApproxStage:
    fz = factorize(terminal_map(X, point()), MapFamily.horns(d), N, d, budget=budget)
    cert = is_kan_complex_up_to(fz.obj, d, budget)
    return FibrantApproxStage(N, d, fz.left, fz.trace, cert, fz)


@dataclass
class CylinderUnion:
    obj: SimplicialSet
    inclusion: SimplicialMap  # union -> B×I
    cylinder: SimplicialSet


def cylinder_union_inclusion(i: SimplicialMap) -> CylinderUnion:
    """``A×I ∪ B×∂I -> B×I`` for a monomorphism ``i: A -> B``."""
    if not is_monomorphism(i):
        raise InvalidInput("cylinder union needs a degreewise injection")
    A, B = i.source, i.target
    I, dI = simplex(1), boundary(1)
    AI, AdI, BI, BdI = product(A, I), product(A, dI), product(B, I), product(B, dI)
    j = boundary_inclusion(1)
    left = AdI.cross(identity(A), j, AI)
    right = AdI.cross(i, identity(dI), BdI)
    P = pushout(left, right, ("a", "b"), f"{A.name}×I∪{B.name}×∂I")
    to_cyl = P.induced(AI.cross(i, identity(I), BI), BdI.cross(identity(B), j, BI))
    if not is_monomorphism(to_cyl):
        raise AssertionError("cylinder union does not embed")
    return CylinderUnion(P.obj, to_cyl.with_name("union"), BI.obj)


@dataclass
class RetractDiagram:
    """``f: A->B`` as a retract of ``g: C->D`` via ``s0,r0`` (top) and ``s1,r1`` (bottom)."""

    f: SimplicialMap
    g: SimplicialMap
    s0: SimplicialMap
    r0: SimplicialMap
    s1: SimplicialMap
    r1: SimplicialMap

    def verify(self) -> list[str]:
        bad = []
        checks = [
            ("r0 s0 = 1", compose(self.r0, self.s0), identity(self.f.source)),
            ("r1 s1 = 1", compose(self.r1, self.s1), identity(self.f.target)),
            ("g s0 = s1 f", compose(self.g, self.s0), compose(self.s1, self.f)),
            ("f r0 = r1 g", compose(self.f, self.r0), compose(self.r1, self.g)),
        ]
        for label, a, b in checks:
            if a.images != b.images:
                bad.append(label)
        return bad


def retract_through_factorization(i: SimplicialMap, fz: Factorization,
                                  budget: int = DEFAULT_BUDGET) -> RetractDiagram | None:
    """Exhibit ``i`` as a retract of its left leg using a lift against the right leg."""
    if fz.f != i:
        raise InvalidInput("factorization is not of this map")
    sq = LiftingSquare(i, fz.right, fz.left, identity(i.target))
    res = solve_lift(sq, budget)
    if not res.found:
        return None
    A = i.source
    return RetractDiagram(i, fz.left, identity(A), identity(A), res.lift, fz.right)
