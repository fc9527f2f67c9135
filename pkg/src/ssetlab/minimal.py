"""Minimal subfibrations, fiber triviality tables and the acyclic-fibration check."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InsufficientFillers, InvalidInput
from .homotopy import (Homotopy, KanTarget, WeakEquivalenceReport, cylinder, discrete_targets,
                       is_weak_equivalence_against, pi_zero)
from .lifting import LiftingSquare, MapFamily, SquareEnumeration, has_rlp, is_kan_fibration_up_to
from .limits import UnionFind, coproduct, product
from .search import DEFAULT_BUDGET, MapSearch, merge_forced
from .sset import (NormalSimplex, SimplexId, SimplicialMap, SimplicialSet, classifying_map,
                   compose, compose_word, full_degeneracy, identity, inclusion, simplex_key,
                   skeleton)
from .standard import boundary, boundary_inclusion, simplex
from .verdict import Verdict


@dataclass
class _Prism:
    n: int
    top: SimplexId
    cyl: object  # Cylinder of Delta^n
    side: SimplicialMap  # ∂Delta^n × I -> Delta^n × I
    side_proj: SimplicialMap  # ∂Delta^n × I -> ∂Delta^n
    bincl: SimplicialMap


@lru_cache(maxsize=None)
def prism(n: int) -> _Prism:
    D = simplex(n)
    cyl = cylinder(D)
    bd = product(boundary(n), simplex(1))
    bincl = boundary_inclusion(n)
    side = bd.cross(bincl, identity(simplex(1)), cyl.fp)
    return _Prism(n, D.generators_in(n)[0], cyl, side, bd.proj1, bincl)


def _char(X: SimplicialSet, z: NormalSimplex) -> SimplicialMap:
    return classifying_map(X, z, simplex(z.degree))


def _rel_boundary_search(f: SimplicialMap, z: NormalSimplex, w: NormalSimplex | None,
                         side_values: SimplicialMap | None, budget: int, end1=None) -> MapSearch | None:
    """Prisms ``Delta^n × I -> X`` from ``z`` over ``f(z)∘proj`` with prescribed sides/1-end."""
    X = f.source
    P = prism(z.degree)
    zm = _char(X, z)
    pairs = [(P.cyl.e0, zm)]
    if side_values is not None and z.degree:
        pairs.append((P.side, side_values))
    if w is not None:
        pairs.append((P.cyl.e1, _char(X, w)))
    forced = merge_forced(pairs)
    if forced is None:
        return None
    over = compose(_char(f.target, f(z)), P.cyl.proj)
    return MapSearch(P.cyl.obj, X, fixed=forced, over=(f, over), budget=budget)


def are_p_related(f: SimplicialMap, z: NormalSimplex, w: NormalSimplex,
                  budget: int = DEFAULT_BUDGET) -> Verdict:
    """Fiberwise homotopy rel boundary from ``z`` to ``w``; witness is the prism map."""
    X = f.source
    if z.degree != w.degree or X.all_faces(z) != X.all_faces(w) or f(z) != f(w):
        raise InvalidInput("p-relatedness needs equal degree, boundary and image")
    n = z.degree
    P = prism(n)
    if z == w:
        return Verdict.ok(witness=compose(_char(X, z), P.cyl.proj), detail="constant homotopy")
    side = compose(compose(_char(X, z), P.bincl), P.side_proj) if n else None
    search = _rel_boundary_search(f, z, w, side, budget)
    if search is None:
        return Verdict.fail(detail="endpoints incompatible")
    h = search.first()
    if h is not None:
        return Verdict.ok(witness=h)
    if search.truncated:
        return Verdict.unknown(detail="budget exhausted")
    return Verdict.fail(detail="no fiberwise homotopy rel boundary (exhaustive)")


@dataclass
class VerticalHomotopy:
    homotopy: Homotopy
    base: SimplicialMap  # the fibration f

    def is_vertical(self) -> bool:
        cyl = cylinder(self.homotopy.start.source)
        left = compose(self.base, self.homotopy.h)
        right = compose(compose(self.base, self.homotopy.start), cyl.proj)
        return left.images == right.images


@dataclass
class MinimalizationResult:
    f: SimplicialMap
    d: int
    E: SimplicialSet
    i: SimplicialMap  # E -> Xs
    r: SimplicialMap  # Xs -> E
    R: VerticalHomotopy  # Xs × I -> X
    phi: SimplicialMap  # E -> Y
    j: SimplicialMap  # Xs -> X (identity when dim X <= d)
    classes: list[dict]
    waiver: int | None = None
    undecided: list = field(default_factory=list)

    def identities(self) -> dict[str, bool]:
        Xs = self.j.source
        cx, ce = cylinder(Xs), cylinder(self.E)
        R = self.R.homotopy.h
        ji = compose(self.j, self.i)
        i_by_1 = ce.fp.cross(self.i, identity(simplex(1)), cx.fp)
        return {
            "r∘i = 1_E": compose(self.r, self.i).images == identity(self.E).images,
            "R|0 = 1": compose(R, cx.e0).images == self.j.images,
            "R|1 = i∘r": compose(R, cx.e1).images == compose(ji, self.r).images,
            "f∘R = f∘proj": self.R.is_vertical(),
            "R∘(i×1) constant": compose(R, i_by_1).images == compose(ji, ce.proj).images,
        }

    def verify(self) -> bool:
        return all(self.identities().values())


def _fibration_gate(f: SimplicialMap, d: int, budget: int, truncated_at: int | None) -> None:
    if truncated_at is not None:
        return
    v = is_kan_fibration_up_to(f, d, budget)
    if not v.holds:
        raise InvalidInput(f"map is not a verified fibration up to {d} ({v.status.value}); "
                           "declare truncated_at to waive")


def _p_classes(f: SimplicialMap, group: list[NormalSimplex], budget: int, undecided: list):
    uf = UnionFind(simplex_key)
    for z in group:
        uf.find(z)
    for a_idx, a in enumerate(group):
        for b in group[a_idx + 1:]:
            if uf.find(a) == uf.find(b):
                continue
            v = are_p_related(f, a, b, budget)
            if v.holds:
                uf.union(a, b)
            elif v.inconclusive:
                undecided.append((a, b))
    out: dict = {}
    for z in group:
        out.setdefault(uf.find(z), []).append(z)
    return sorted(out.values(), key=lambda c: simplex_key(c[0]))


def minimal_subfibration(f: SimplicialMap, d: int, budget: int = DEFAULT_BUDGET,
                         truncated_at: int | None = None) -> MinimalizationResult:
    """Minimal subfibration with explicit retraction and vertical deformation.

    When ``dim X > d`` the construction is carried out on the d-skeleton
    ``Xs`` of X, and the homotopy lands in X (it needs one more degree).
    """
    _fibration_gate(f, d, budget, truncated_at)
    X = f.source
    Xs = skeleton(X, d) if X.dim > d else X
    j = inclusion(Xs, X).with_name("j")
    chosen: set[str] = set()
    classes: list[dict] = []
    undecided: list = []
    for n in range(min(d, X.dim) + 1):
        groups: dict = {}
        for z in X.simplices(n):
            if all(fz.base.name in chosen for fz in X.all_faces(z)):
                groups.setdefault((X.all_faces(z), f(z)), []).append(z)
        deg_classes = []
        for key in sorted(groups, key=lambda k: simplex_key(groups[k][0])):
            for cls in _p_classes(f, groups[key], budget, undecided):
                deg_classes.append([z.label() for z in cls])
                degenerate = [z for z in cls if z.word]
                if not degenerate:
                    chosen.add(cls[0].base.name)
        classes.append({"degree": n, "classes": deg_classes})
    E = SimplicialSet(f"min({X.name})", {g: X.faces_of(g) for g in X.generators if g.name in chosen})
    i = inclusion(E, Xs).with_name("i")

    R_of: dict[SimplexId, SimplicialMap] = {}
    r_images: dict[SimplexId, NormalSimplex] = {}

    def r_value(y: NormalSimplex) -> NormalSimplex:
        e = r_images[y.base]
        return compose_word(NormalSimplex(e.word, X.gen(e.base.name)), y.word)

    def R_value(a: NormalSimplex, b: NormalSimplex) -> NormalSimplex:
        P = prism(a.base.degree)
        return R_of[a.base](P.cyl.fp.pair(NormalSimplex(a.word, P.top), b))

    for x in Xs.generators:
        n = x.degree
        P = prism(n)
        zx = X.simplex(x.name)
        if x.name in chosen:
            R_of[x] = compose(_char(X, zx), P.cyl.proj)
            r_images[x] = E.simplex(x.name)
            continue
        xm = _char(Xs, Xs.simplex(x.name))
        side = None
        if n:
            side_images = {}
            bfp = product(boundary(n), simplex(1))
            for (c, b), gid in bfp._gens.items():
                side_images[gid] = R_value(xm(P.bincl(c)), b)
            side = SimplicialMap(bfp.obj, X, side_images)
        want_faces = tuple(r_value(fz) for fz in Xs.faces_of(x))
        found = None
        for e in X.face_index(n).get(want_faces, []) if n else X.simplices(0):
            if e.base.name not in chosen or f(e) != f(zx):
                continue
            search = _rel_boundary_search(f, zx, e, side, budget)
            h = search.first() if search is not None else None
            if h is not None:
                found = (e, h)
                break
        if found is None:
            raise InsufficientFillers(f"retraction of {x.name}",
                                      "no prism connects it to a simplex of the subfibration")
        e, h = found
        r_images[x] = NormalSimplex(e.word, E.gen(e.base.name))
        R_of[x] = h
    r = SimplicialMap(Xs, E, r_images, "r")
    cx = cylinder(Xs)
    R = SimplicialMap(cx.obj, X, {gid: R_value(a, b) for (a, b), gid in cx.fp._gens.items()}, "R")
    hom = Homotopy(R, j, compose(j, compose(i, r)))
    phi = compose(f, compose(j, i)).with_name("φ")
    res = MinimalizationResult(f, d, E, i, r, VerticalHomotopy(hom, f), phi, j, classes,
                               truncated_at, undecided)
    bad = [k for k, ok in res.identities().items() if not ok]
    if bad:
        raise AssertionError(f"minimalization witness identities failed: {bad}")
    return res


def is_minimal(f: SimplicialMap, d: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    X = f.source
    undecided = False
    for n in range(min(d, X.dim) + 1):
        groups: dict = {}
        for z in X.simplices(n):
            groups.setdefault((X.all_faces(z), f(z)), []).append(z)
        for group in groups.values():
            for a_idx, a in enumerate(group):
                for b in group[a_idx + 1:]:
                    v = are_p_related(f, a, b, budget)
                    if v.holds:
                        return Verdict.fail((a, b), bound=d, detail=f"p-related pair in degree {n}")
                    undecided = undecided or v.inconclusive
    return Verdict.unknown(bound=d) if undecided else Verdict.ok(bound=d)


@dataclass
class HomotopyGroupReport:
    M: SimplicialSet
    base: str
    n: int
    entries: list[NormalSimplex]
    verdict: Verdict

    @property
    def trivial(self) -> bool:
        return self.verdict.holds


def fiber_homotopy_table(M: SimplicialSet, m: str, n: int, budget: int = DEFAULT_BUDGET) -> HomotopyGroupReport:
    """Simplices of degree ``n`` with every face at the base vertex (components for n = 0)."""
    if m not in M or M.gen(m).degree != 0:
        raise InvalidInput(f"{m!r} is not a vertex of {M.name}")
    if n == 0:
        comps = pi_zero(M)
        entries = [M.simplex(min(c)) for c in comps]
    else:
        base = full_degeneracy(M.gen(m), n - 1)
        entries = [z for z in M.simplices(n) if all(fz == base for fz in M.all_faces(z))]
    v = Verdict.ok(bound=n) if len(entries) == 1 else Verdict.fail(entries, bound=n)
    return HomotopyGroupReport(M, m, n, entries, v)


def fiber_triviality(M: SimplicialSet, d: int) -> Verdict:
    """All tables up to ``d`` at every vertex are singletons."""
    if not M.vertices():
        return Verdict.fail(detail="empty fiber", bound=d)
    for v in M.vertices():
        for n in range(d + 1):
            t = fiber_homotopy_table(M, v.name, n)
            if not t.trivial:
                return Verdict.fail((v.name, n, [z.label() for z in t.entries]), bound=d)
    return Verdict.ok(bound=d)


def bounded_isomorphism(f: SimplicialMap, d: int) -> bool:
    """Bijective on simplices of every degree <= d."""
    for n in range(d + 1):
        imgs = [f(z) for z in f.source.simplices(n)]
        if len(set(imgs)) != len(imgs) or set(imgs) != set(f.target.simplices(n)):
            return False
    return True


@dataclass
class AcyclicReport:
    f: SimplicialMap
    d: int
    rlp: Verdict
    fibration: Verdict
    weak_equivalence: WeakEquivalenceReport
    section: SimplicialMap | None = None
    deformation: Homotopy | None = None
    constructive: Verdict | None = None  # the section/deformation step
    converse: Verdict | None = None  # boundary squares solved from the minimal model
    minimal: MinimalizationResult | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def acyclic(self) -> Verdict:
        return self.rlp

    @property
    def characterization(self) -> Verdict:
        """Fibration, weak equivalence against the family and the section/deformation step."""
        parts = [self.fibration, self.weak_equivalence.verdict, self.constructive]
        if any(p.fails for p in parts):
            return next(p for p in parts if p.fails)
        if any(p.inconclusive for p in parts):
            return Verdict.unknown(bound=self.d)
        return Verdict.ok(bound=self.d)

    @property
    def coherent(self) -> bool:
        return self.rlp.status == self.characterization.status or (
            self.rlp.inconclusive or self.characterization.inconclusive)


def section_and_deformation(f: SimplicialMap, d: int | None = None, budget: int = DEFAULT_BUDGET):
    """A section ``s`` of ``f`` and a vertical homotopy from ``1_X`` to ``s∘f``.

    With ``d`` below the dimension, ``s`` is a section over ``sk_d Y`` only and
    the homotopy lives on ``sk_d X``, matching the degree bound of the lifting
    checks.
    """
    X, Y = f.source, f.target
    Xs = skeleton(X, d) if d is not None and X.dim > d else X
    Ys = skeleton(Y, d) if d is not None and Y.dim > d else Y
    j, jY = inclusion(Xs, X), inclusion(Ys, Y)
    fs = SimplicialMap(Xs, Ys, {g: NormalSimplex(y.word, Ys.gen(y.base.name))
                                for g, y in compose(f, j).images.items()}, "f|")
    cyl = cylinder(Xs)
    sections = MapSearch(Ys, X, over=(f, jY), budget=budget)
    both = coproduct([Xs, Xs], ["0", "1"])
    for s in sections:
        sfj = compose(s, fs)
        ends = both.copair([j, sfj]) if Xs.generators else SimplicialMap(both.obj, X, {})
        forced = merge_forced([(cyl.ends, ends)])
        if forced is None:
            continue
        over = compose(compose(f, j), cyl.proj)
        search = MapSearch(cyl.obj, X, fixed=forced, over=(f, over), budget=budget)
        h = search.first()
        if h is not None:
            return Verdict.ok(bound=d), s.with_name("s"), Homotopy(h.with_name("h"), j, sfj)
        if search.truncated:
            return Verdict.unknown(bound=d, detail="deformation search truncated"), s, None
    if sections.truncated:
        return Verdict.unknown(bound=d, detail="section search truncated"), None, None
    return Verdict.fail(bound=d, detail="no section with a vertical deformation"), None, None


def lift_via_minimal_model(res: MinimalizationResult, sq: LiftingSquare,
                           budget: int = DEFAULT_BUDGET) -> SimplicialMap | None:
    """Solve a boundary square through the minimal model when ``φ`` is bijective.

    The homotopy ``R`` moves the boundary into ``E``, where ``φ^{-1}`` of the
    bottom gives the other end; a prism lift then yields the answer at 0.
    """
    f = res.f
    X = f.source
    n = sq.i.target.dim
    P = prism(n)
    w = MapSearch(simplex(n), res.E, over=(res.phi, sq.bottom), budget=budget).first()
    if w is None:
        return None
    end1 = compose(res.j, compose(res.i, w))
    pairs = [(P.cyl.e1, end1)]
    if n:
        cx = cylinder(res.j.source)
        bfp = product(boundary(n), simplex(1))
        u_s = SimplicialMap(sq.top.source, res.j.source,
                            {g: NormalSimplex(y.word, res.j.source.gen(y.base.name))
                             for g, y in sq.top.images.items()})
        pairs.append((P.side, compose(res.R.homotopy.h, bfp.cross(u_s, identity(simplex(1)), cx.fp))))
    forced = merge_forced(pairs)
    if forced is None:
        return None
    over = compose(sq.bottom, P.cyl.proj)
    H = MapSearch(P.cyl.obj, X, fixed=forced, over=(f, over), budget=budget).first()
    if H is None:
        return None
    lift = compose(H, P.cyl.e0).with_name("l")
    return lift if sq.is_lift(lift) else None


def acyclic_fibration_check(f: SimplicialMap, d: int, budget: int = DEFAULT_BUDGET,
                            targets: list[KanTarget] | None = None,
                            truncated_at: int | None = None) -> AcyclicReport:
    rlp = has_rlp(f, MapFamily.boundaries(d), d, budget)
    fib = is_kan_fibration_up_to(f, d, budget)
    weq = is_weak_equivalence_against(f, targets if targets is not None else discrete_targets(), budget)
    constructive, s, h = section_and_deformation(f, d, budget)
    rep = AcyclicReport(f, d, rlp, fib, weq, s, h, constructive)
    if fib.holds or truncated_at is not None:
        try:
            res = minimal_subfibration(f, d, budget, truncated_at)
        except InsufficientFillers as exc:
            rep.notes.append(str(exc))
            rep.converse = Verdict.unknown(bound=d, detail="insufficient fillers")
            return rep
        rep.minimal = res
        trivial = [fiber_triviality(_fiber_of(res.phi, v.name), d) for v in f.target.vertices()]
        if not all(t.holds for t in trivial) or not bounded_isomorphism(res.phi, d):
            rep.converse = Verdict.fail(detail="minimal fibers are not terminal", bound=d)
            return rep
        solved = total = 0
        for n in range(d + 1):
            for sq in SquareEnumeration(boundary_inclusion(n), f, budget):
                total += 1
                if lift_via_minimal_model(res, sq, budget) is None:
                    rep.converse = Verdict.fail({"square": sq}, bound=d,
                                                detail="prism construction did not close")
                    return rep
                solved += 1
        rep.converse = Verdict.ok(bound=d, squares=total)
    return rep


def _fiber_of(phi: SimplicialMap, v: str) -> SimplicialSet:
    from .bundles import fiber

    return fiber(phi, v)
