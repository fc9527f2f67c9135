"""Lifting problems, lifting-property checks and anodyne construction traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import CertificateRejected, InvalidInput
from .limits import Cell, attach_cells
from .search import DEFAULT_BUDGET, MapSearch, extensions
from .sset import (NormalSimplex, SimplicialMap, SimplicialSet, compose, identity,
                   terminal_map)
from .standard import boundary_inclusion, horn_inclusion, point
from .verdict import Verdict


@dataclass
class LiftingSquare:
    """``p o top == bottom o i`` with ``i: A -> B`` and ``p: X -> Y``."""

    i: SimplicialMap
    p: SimplicialMap
    top: SimplicialMap
    bottom: SimplicialMap

    def __post_init__(self):
        if not (self.top.source == self.i.source and self.top.target == self.p.source
                and self.bottom.source == self.i.target and self.bottom.target == self.p.target):
            raise InvalidInput("square legs do not fit together")

    def commutes(self) -> bool:
        return all(self.p(self.top.images[a]) == self.bottom(self.i.images[a])
                   for a in self.i.source.generators)

    def is_lift(self, diagonal: SimplicialMap) -> bool:
        return (compose(diagonal, self.i).images == self.top.images
                and compose(self.p, diagonal).images == self.bottom.images
                and not diagonal.commutes())


@dataclass
class LiftResult:
    status: str  # "lift" | "none" | "inconclusive"
    lift: SimplicialMap | None = None
    explored: int = 0

    @property
    def found(self) -> bool:
        return self.status == "lift"


def lift_search(sq: LiftingSquare, reverse: bool = False,
                budget: int = DEFAULT_BUDGET) -> MapSearch | None:
    """Search object over all diagonals; None when the top already obstructs."""
    return extensions(sq.i, sq.top, over=(sq.p, sq.bottom), reverse=reverse, budget=budget)


def solve_lift(sq: LiftingSquare, budget: int = DEFAULT_BUDGET, reverse: bool = False) -> LiftResult:
    if not sq.commutes():
        raise InvalidInput("lifting square does not commute")
    search = lift_search(sq, reverse, budget)
    if search is None:
        return LiftResult("none")
    lift = search.first()
    if lift is not None:
        if not sq.is_lift(lift):
            raise AssertionError("search produced an invalid lift")
        return LiftResult("lift", lift.with_name("lift"), search.explored)
    return LiftResult("inconclusive" if search.truncated else "none", None, search.explored)


def all_lifts(sq: LiftingSquare, budget: int = DEFAULT_BUDGET) -> tuple[list[SimplicialMap], bool]:
    search = lift_search(sq, budget=budget)
    if search is None:
        return [], True
    out = list(search)
    return out, not search.truncated


@dataclass(frozen=True)
class FamilyMember:
    label: str
    inclusion: SimplicialMap
    kind: str
    p: int
    k: int | None = None

    @property
    def dim(self) -> int:
        return self.inclusion.target.dim


@dataclass(frozen=True)
class MapFamily:
    kind: str  # "horns" | "boundaries" | "explicit"
    bound: int = 0
    explicit: tuple = ()

    @classmethod
    def horns(cls, d: int) -> "MapFamily":
        return cls("horns", d)

    @classmethod
    def boundaries(cls, d: int) -> "MapFamily":
        return cls("boundaries", d)

    @classmethod
    def of(cls, maps: Sequence[SimplicialMap]) -> "MapFamily":
        return cls("explicit", max((m.target.dim for m in maps), default=0), tuple(maps))

    def members(self, d: int | None = None) -> list[FamilyMember]:
        d = self.bound if d is None else min(d, self.bound)
        if self.kind == "horns":
            return [FamilyMember(f"h{p}.{k}", horn_inclusion(p, k), "horn", p, k)
                    for p in range(1, d + 1) for k in range(p + 1)]
        if self.kind == "boundaries":
            return [FamilyMember(f"b{n}", boundary_inclusion(n), "boundary", n)
                    for n in range(d + 1)]
        if self.kind == "explicit":
            return [FamilyMember(f"e{idx}", m, "explicit", m.target.dim)
                    for idx, m in enumerate(self.explicit) if m.target.dim <= d]
        raise InvalidInput(f"unknown family kind {self.kind!r}")


class SquareEnumeration:
    """All commuting squares from ``j`` into ``p`` (top first, then bottoms)."""

    def __init__(self, j: SimplicialMap, p: SimplicialMap, budget: int = DEFAULT_BUDGET):
        self.j, self.p, self.budget = j, p, budget
        self.truncated = False

    def __iter__(self) -> Iterator[LiftingSquare]:
        j, p = self.j, self.p
        tops = MapSearch(j.source, p.source, budget=self.budget)
        for top in tops:
            bottoms = extensions(j, compose(p, top), budget=self.budget)
            if bottoms is None:
                continue
            for bottom in bottoms:
                yield LiftingSquare(j, p, top, bottom)
            if bottoms.truncated:
                self.truncated = True
        if tops.truncated:
            self.truncated = True


def has_rlp(p: SimplicialMap, fam: MapFamily, d: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Right lifting property of ``p`` against members of dimension <= ``d``."""
    counts: dict[str, int] = {}
    undecided = False
    for member in fam.members(d):
        squares = SquareEnumeration(member.inclusion, p, budget)
        n = 0
        for sq in squares:
            n += 1
            res = solve_lift(sq, budget)
            if res.status == "none":
                counts[member.label] = n
                return Verdict.fail({"member": member.label, "square": sq}, bound=d,
                                    detail=f"no lift against {member.label}", squares=counts)
            if res.status == "inconclusive":
                undecided = True
        counts[member.label] = n
        undecided = undecided or squares.truncated
    if undecided:
        return Verdict.unknown(bound=d, detail="budget exhausted", squares=counts)
    return Verdict.ok(bound=d, squares=counts)


def is_kan_fibration_up_to(f: SimplicialMap, d: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    return has_rlp(f, MapFamily.horns(d), d, budget)


def is_kan_complex_up_to(X: SimplicialSet, d: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    return has_rlp(terminal_map(X, point()), MapFamily.horns(d), d, budget)


# -- anodyne traces ------------------------------------------------------

RawImages = dict  # generator name -> (word, base name)


@dataclass
class TraceCell:
    kind: str  # "horn" for certified cells; anything else is rejected on replay
    p: int
    k: int | None
    attach: RawImages
    attach_name: str = ""

    @property
    def member(self) -> str:
        return f"h{self.p}.{self.k}" if self.kind == "horn" else f"{self.kind[0]}{self.p}"


@dataclass
class AnodyneTrace:
    name: str
    base: SimplicialSet
    stages: list[list[TraceCell]] = field(default_factory=list)


def raw_images(m: SimplicialMap) -> RawImages:
    return {g.name: (y.word, y.base.name) for g, y in m.images.items()}


def bind_raw(raw: RawImages, source: SimplicialSet, target: SimplicialSet, name: str = "") -> SimplicialMap:
    images = {}
    for g in source.generators:
        if g.name not in raw:
            raise InvalidInput(f"{name or 'map'}: no image for {g.name}")
        word, base = raw[g.name]
        images[g] = NormalSimplex(tuple(word), target.gen(base))
    if set(raw) - {g.name for g in source.generators}:
        raise InvalidInput(f"{name or 'map'}: images for unknown generators")
    m = SimplicialMap(source, target, images, name or None)
    bad = m.commutes()
    if bad:
        raise InvalidInput(f"{name or 'map'}: {bad[0]}")
    return m


def cell_label(stage: int, index: int, member: str) -> str:
    return f"c{stage}_{index}_{member}"


@dataclass
class ReplayResult:
    inclusion: SimplicialMap
    objects: list[SimplicialSet]
    stage_inclusions: list[SimplicialMap]
    cell_maps: list[list[SimplicialMap]]
    report: list[str]

    @property
    def result(self) -> SimplicialSet:
        return self.objects[-1]


def replay_anodyne(tr: AnodyneTrace) -> ReplayResult:
    """Rebuild the inclusion of a trace by iterated horn-cell pushouts."""
    current = tr.base
    objects, incls, cells_out, report = [current], [], [], []
    for s, stage in enumerate(tr.stages, start=1):
        cells = []
        for idx, cell in enumerate(stage):
            if cell.kind != "horn":
                raise CertificateRejected(s, f"cell {idx} uses a {cell.kind} inclusion, not a horn")
            try:
                j = horn_inclusion(cell.p, cell.k)
            except Exception as exc:
                raise CertificateRejected(s, f"cell {idx}: {exc}") from None
            try:
                att = bind_raw(cell.attach, j.source, current, cell.attach_name)
            except Exception as exc:
                raise CertificateRejected(s, f"cell {idx}: {exc}") from None
            cells.append(Cell(cell_label(s, idx, cell.member), j, att))
        att = attach_cells(current, cells, f"{tr.name}.G{s}")
        report.append(f"stage {s}: {len(cells)} horn cells, {len(att.obj)} generators")
        current = att.obj
        objects.append(current)
        incls.append(att.inclusion)
        cells_out.append(att.cell_maps)
    total = SimplicialMap(tr.base, current, {g: NormalSimplex((), g) for g in tr.base.generators},
                          f"{tr.name}.incl")
    return ReplayResult(total, objects, incls, cells_out, report)


def _rename_stage_refs(raw: RawImages, offset: int, keep: SimplicialSet) -> RawImages:
    # generators already in the second trace's base keep their names
    return {g: (word, base if base in keep else _shift(base, offset))
            for g, (word, base) in raw.items()}


def _shift(name: str, offset: int) -> str:
    if name.startswith("c") and ":" in name:
        head, rest = name.split(":", 1)
        stage, tail = head[1:].split("_", 1)
        if stage.isdigit():
            return f"c{int(stage) + offset}_{tail}:{rest}"
    return name


def compose_traces(t1: AnodyneTrace, t2: AnodyneTrace, name: str | None = None) -> AnodyneTrace:
    """Trace of the composite of two traced inclusions (``t2`` starts where ``t1`` ends)."""
    r1 = replay_anodyne(t1)
    if r1.result != t2.base:
        raise InvalidInput("second trace does not start at the end of the first")
    off = len(t1.stages)
    stages = [list(st) for st in t1.stages]
    for stage in t2.stages:
        stages.append([TraceCell(c.kind, c.p, c.k, _rename_stage_refs(c.attach, off, t2.base), c.attach_name)
                       for c in stage])
    return AnodyneTrace(name or f"{t1.name}+{t2.name}", t1.base, stages)


def pushout_trace(t: AnodyneTrace, g: SimplicialMap, name: str | None = None) -> AnodyneTrace:
    """Trace of the cobase change of ``t`` along ``g: base -> C``."""
    if g.source != t.base:
        raise InvalidInput("map does not start at the trace base")
    replay = replay_anodyne(t)
    phi = g
    current = g.target
    stages = []
    for s, stage in enumerate(t.stages, start=1):
        src_obj = replay.objects[s - 1]
        new_stage, cells = [], []
        for idx, cell in enumerate(stage):
            j = horn_inclusion(cell.p, cell.k)
            att = compose(phi, bind_raw(cell.attach, j.source, src_obj))
            new_stage.append(TraceCell("horn", cell.p, cell.k, raw_images(att), cell.attach_name))
            cells.append(Cell(cell_label(s, idx, cell.member), j, att))
        att_c = attach_cells(current, cells)
        images = dict(phi.images)
        for g2 in replay.objects[s].generators:
            if g2 not in images:
                images[g2] = NormalSimplex((), att_c.obj.gen(g2.name))
        phi = SimplicialMap(replay.objects[s], att_c.obj, images)
        current = att_c.obj
        stages.append(new_stage)
    return AnodyneTrace(name or f"{t.name}∪{g.target.name}", g.target, stages)


@dataclass
class LLPReport:
    inclusion: str
    bound: int
    rows: list[dict] = field(default_factory=list)
    unsolved: list[tuple[str, LiftingSquare]] = field(default_factory=list)
    truncated: bool = False

    @property
    def verdict(self) -> Verdict:
        if self.unsolved:
            return Verdict.fail(self.unsolved[0], bound=self.bound)
        if self.truncated:
            return Verdict.unknown(bound=self.bound)
        return Verdict.ok(bound=self.bound)


def check_llp_against(i: SimplicialMap, fibrations: Sequence[SimplicialMap], d: int,
                      budget: int = DEFAULT_BUDGET) -> LLPReport:
    """Solve every commuting square from ``i`` into each listed fibration."""
    report = LLPReport(i.name, d)
    for p in fibrations:
        squares = SquareEnumeration(i, p, budget)
        total = solved = 0
        for sq in squares:
            total += 1
            res = solve_lift(sq, budget)
            if res.found:
                solved += 1
            elif res.status == "none":
                report.unsolved.append((p.name, sq))
            else:
                report.truncated = True
        report.truncated = report.truncated or squares.truncated
        report.rows.append({"fibration": p.name, "squares": total, "solved": solved})
    return report


def identity_square(X: SimplicialSet) -> LiftingSquare:
    e = identity(X)
    return LiftingSquare(e, e, e, e)
