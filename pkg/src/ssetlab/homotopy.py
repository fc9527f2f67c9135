"""Homotopies through the cylinder, homotopy sets and function complexes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import InvalidInput
from .limits import FiberProduct, UnionFind, coproduct, product
from .search import DEFAULT_BUDGET, MapSearch, enumerate_maps, extensions
from .sset import (NormalSimplex, SimplicialMap, SimplicialSet, compose, constant_map,
                   identity, word_of)
from .standard import operator_map, simplex
from .verdict import Verdict


@dataclass
class Cylinder:
    X: SimplicialSet
    fp: FiberProduct
    e0: SimplicialMap
    e1: SimplicialMap
    proj: SimplicialMap
    ends: SimplicialMap  # X ⊔ X -> X×I

    @property
    def obj(self) -> SimplicialSet:
        return self.fp.obj


_cyl_cache: dict = {}


def cylinder(X: SimplicialSet) -> Cylinder:
    hit = _cyl_cache.get(X)
    if hit is not None and hit.X.name == X.name:
        return hit
    interval = simplex(1)
    fp = product(X, interval, f"{X.name}×I")
    e = [fp.pair_maps(identity(X), constant_map(X, interval, interval.gen(v)), f"e{v}")
         for v in "01"]
    both = coproduct([X, X], ["0", "1"])
    ends = both.copair(e) if X.generators else SimplicialMap(both.obj, fp.obj, {}, "ends")
    cyl = Cylinder(X, fp, e[0], e[1], fp.proj1.with_name("proj"), ends.with_name("ends"))
    _cyl_cache[X] = cyl
    return cyl


@dataclass
class Homotopy:
    """``h: X×I -> Y`` together with its stored endpoints."""

    h: SimplicialMap
    start: SimplicialMap
    end: SimplicialMap

    @classmethod
    def of(cls, h: SimplicialMap, X: SimplicialSet) -> "Homotopy":
        cyl = cylinder(X)
        if h.source != cyl.obj:
            raise InvalidInput("homotopy source is not the cylinder")
        return cls(h, compose(h, cyl.e0), compose(h, cyl.e1))

    def replay(self) -> bool:
        cyl = cylinder(self.start.source)
        return (compose(self.h, cyl.e0).images == self.start.images
                and compose(self.h, cyl.e1).images == self.end.images
                and not self.h.commutes())


def constant_homotopy(f: SimplicialMap) -> Homotopy:
    cyl = cylinder(f.source)
    return Homotopy(compose(f, cyl.proj).with_name(f"const({f.name})"), f, f)


@dataclass
class HomotopyChain:
    """``f = m_0 ~ m_1 ~ ... ~ m_k = g``; each step records its orientation."""

    maps: list[SimplicialMap]
    steps: list[tuple[Homotopy, bool]] = field(default_factory=list)  # (h, forward)

    @property
    def start(self):
        return self.maps[0]

    @property
    def end(self):
        return self.maps[-1]

    def replay(self) -> bool:
        for (h, forward), a, b in zip(self.steps, self.maps, self.maps[1:]):
            if not h.replay():
                return False
            lo, hi = (a, b) if forward else (b, a)
            if h.start != lo or h.end != hi:
                return False
        return len(self.steps) == len(self.maps) - 1


def homotopies_from(f: SimplicialMap, budget: int = DEFAULT_BUDGET) -> MapSearch:
    """All one-step homotopies starting at ``f``."""
    cyl = cylinder(f.source)
    return extensions(cyl.e0, f, budget=budget)


def _directed(f: SimplicialMap, g: SimplicialMap, budget: int) -> tuple[Homotopy | None, bool]:
    cyl = cylinder(f.source)
    both = coproduct([f.source, f.source], ["0", "1"])
    target = both.copair([f, g]) if f.source.generators else SimplicialMap(both.obj, f.target, {})
    search = extensions(cyl.ends, target, budget=budget)
    if search is None:
        return None, True
    h = search.first()
    if h is not None:
        return Homotopy(h.with_name(f"h({f.name},{g.name})"), f, g), True
    return None, not search.truncated


def are_homotopic(f: SimplicialMap, g: SimplicialMap, budget: int = DEFAULT_BUDGET) -> Verdict:
    """One-step homotopy in either orientation; witness is (Homotopy, forward)."""
    if f.source != g.source or f.target != g.target:
        raise InvalidInput("maps must share source and target")
    if f == g:
        return Verdict.ok(witness=(constant_homotopy(f), True), detail="constant homotopy")
    h, complete1 = _directed(f, g, budget)
    if h is not None:
        return Verdict.ok(witness=(h, True), detail="f to g")
    h, complete2 = _directed(g, f, budget)
    if h is not None:
        return Verdict.ok(witness=(h, False), detail="g to f")
    if complete1 and complete2:
        return Verdict.fail(detail="no one-step homotopy (exhaustive)")
    return Verdict.unknown(detail="budget exhausted")


@dataclass
class HomotopyClassTable:
    X: SimplicialSet
    Z: SimplicialSet
    maps: list[SimplicialMap]
    classes: list[list[int]]
    edges: dict[tuple[int, int], Homotopy]
    complete: bool
    one_step_is_equivalence: bool
    index: dict = field(default_factory=dict, repr=False)
    _class_of: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {m.key(): i for i, m in enumerate(self.maps)}
        self._class_of = {i: c for c, members in enumerate(self.classes) for i in members}

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, m: SimplicialMap) -> int:
        return self._class_of[self.index[m.key()]]

    def representative(self, c: int) -> SimplicialMap:
        return self.maps[self.classes[c][0]]

    def chain(self, a: SimplicialMap, b: SimplicialMap) -> HomotopyChain | None:
        """Shortest witness chain between two maps in the same class."""
        ia, ib = self.index[a.key()], self.index[b.key()]
        adj: dict[int, list[tuple[int, tuple[int, int], bool]]] = {}
        for (u, v) in self.edges:
            adj.setdefault(u, []).append((v, (u, v), True))
            adj.setdefault(v, []).append((u, (u, v), False))
        prev = {ia: None}
        queue = deque([ia])
        while queue:
            u = queue.popleft()
            if u == ib:
                break
            for v, e, fwd in adj.get(u, ()):
                if v not in prev:
                    prev[v] = (u, e, fwd)
                    queue.append(v)
        if ib not in prev:
            return None
        path, steps, cur = [ib], [], ib
        while prev[cur] is not None:
            u, e, fwd = prev[cur]
            steps.append((self.edges[e], fwd))
            path.append(u)
            cur = u
        maps = [self.maps[i] for i in reversed(path)]
        if ia == ib:
            return HomotopyChain(maps, [])
        return HomotopyChain(maps, list(reversed(steps)))

    def as_json(self) -> dict:
        return {"source": self.X.name, "target": self.Z.name, "maps": len(self.maps),
                "classes": {str(c): _map_label(self.representative(c)) for c in range(len(self.classes))},
                "complete": self.complete, "one_step_is_equivalence": self.one_step_is_equivalence}


def _map_label(m: SimplicialMap) -> str:
    return ",".join(f"{g.name}->{y.label()}" for g, y in m.images.items() if g.degree == 0)


def homotopy_set(X: SimplicialSet, Z: SimplicialSet, budget: int = DEFAULT_BUDGET,
                 kan: Verdict | None = None) -> HomotopyClassTable:
    """``[X, Z]`` as the equivalence closure of one-step homotopy.

    If ``kan`` certifies Z up to dim X + 2, the one-step relation is checked
    to already be an equivalence relation.
    """
    enum = enumerate_maps(X, Z, budget)
    maps = enum.maps
    complete = enum.complete
    index = {m.key(): i for i, m in enumerate(maps)}
    edges: dict[tuple[int, int], Homotopy] = {}
    cyl = cylinder(X)
    for i, f in enumerate(maps):
        search = homotopies_from(f, budget)
        for h in search:
            j = index.get(compose(h, cyl.e1).key())
            if j is None:
                complete = False
                continue
            if i != j and (i, j) not in edges:
                edges[(i, j)] = Homotopy(h.with_name(f"h{i}_{j}"), f, maps[j])
        complete = complete and not search.truncated
    uf = UnionFind()
    for i in range(len(maps)):
        uf.find(i)
    for (i, j) in sorted(edges):
        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(maps)):
        groups.setdefault(uf.find(i), []).append(i)
    classes = sorted(groups.values())
    rel = set(edges)
    symmetric = all((j, i) in rel for (i, j) in rel)
    transitive = all((i, k) in rel or i == k for (i, j) in rel for (j2, k) in rel if j2 == j)
    table = HomotopyClassTable(X, Z, maps, classes, edges, complete, symmetric and transitive)
    if kan is not None and kan.holds and kan.bound >= X.dim + 2 and complete:
        if not table.one_step_is_equivalence:
            raise AssertionError(f"one-step homotopy into Kan {Z.name} is not an equivalence")
    return table


def induced_map(f: SimplicialMap, on_target: HomotopyClassTable,
                on_source: HomotopyClassTable) -> list[int]:
    """``f#: [Y,Z] -> [X,Z]`` by precomposition, as class indices."""
    out = []
    for members in on_target.classes:
        imgs = {on_source.class_of(compose(on_target.maps[i], f)) for i in members}
        if len(imgs) != 1:
            raise AssertionError("precomposition does not respect homotopy classes")
        out.append(imgs.pop())
    return out


def pi_zero(X: SimplicialSet) -> list[frozenset[str]]:
    uf = UnionFind()
    for v in X.vertices():
        uf.find(v.name)
    for e in X.generators_in(1):
        a, b = X.faces_of(e)
        uf.union(a.base.name, b.base.name)
    groups: dict = {}
    for v in X.vertices():
        groups.setdefault(uf.find(v.name), set()).add(v.name)
    return sorted((frozenset(g) for g in groups.values()), key=lambda s: min(s))


class FunctionComplexView:
    """Degreewise ``Hom(A x Delta^n, X)``, computed on demand up to ``bound``."""

    def __init__(self, A: SimplicialSet, X: SimplicialSet, bound: int, budget: int = DEFAULT_BUDGET):
        self.A, self.X, self.bound, self.budget = A, X, bound, budget
        self._deg: dict[int, list[SimplicialMap]] = {}
        self.truncated: dict[int, bool] = {}

    @lru_cache(maxsize=None)
    def prism(self, n: int) -> FiberProduct:
        return product(self.A, simplex(n), f"{self.A.name}×Δ{n}")

    @lru_cache(maxsize=None)
    def _along(self, theta: tuple[int, ...], n: int) -> SimplicialMap:
        """``1 x theta: A x Delta^m -> A x Delta^n``."""
        m = len(theta) - 1
        src, tgt = self.prism(m), self.prism(n)
        return src.cross(identity(self.A), operator_map(theta, n), tgt)

    def degree(self, n: int) -> list[SimplicialMap]:
        if n > self.bound:
            raise InvalidInput(f"degree {n} above view bound {self.bound}")
        if n not in self._deg:
            enum = enumerate_maps(self.prism(n).obj, self.X, self.budget)
            self._deg[n] = enum.maps
            self.truncated[n] = not enum.complete
        return self._deg[n]

    def act(self, m: SimplicialMap, theta: tuple[int, ...]) -> SimplicialMap:
        n = next(k for k in range(self.bound + 2) if self.prism(k).obj == m.source)
        return compose(m, self._along(tuple(theta), n))

    def face(self, m: SimplicialMap, i: int) -> SimplicialMap:
        n = self.degree_of(m)
        return self.act(m, tuple(v for v in range(n + 1) if v != i))

    def degeneracy(self, m: SimplicialMap, i: int) -> SimplicialMap:
        n = self.degree_of(m)
        return self.act(m, tuple(v if v <= i else v - 1 for v in range(n + 2)))

    def degree_of(self, m: SimplicialMap) -> int:
        for k in range(self.bound + 1):
            if self.prism(k).obj == m.source:
                return k
        raise InvalidInput("map is not a simplex of this function complex")

    def to_map(self, m: SimplicialMap) -> SimplicialMap:
        """Degree-0 element as a plain map ``A -> X``."""
        fp = self.prism(0)
        return compose(m, fp.pair_maps(identity(self.A), constant_map(self.A, simplex(0), simplex(0).gen("0"))))

    def of_map(self, f: SimplicialMap) -> SimplicialMap:
        return compose(f, self.prism(0).proj1)

    def as_simplicial_set(self, name: str | None = None) -> tuple[SimplicialSet, dict]:
        """Materialize degrees ``<= bound`` as a presentation; returns (set, key -> simplex)."""
        from .sset import SimplexId

        lookup: dict = {}
        faces: dict = {}
        for n in range(self.bound + 1):
            # degenerate elements first: s_i of everything in degree n-1
            if n:
                for m in self.degree(n - 1):
                    z = lookup[m.key()]
                    for i in range(n):
                        d = self.degeneracy(m, i)
                        if d.key() not in lookup:
                            sigma = tuple(v if v <= i else v - 1 for v in range(n + 1))
                            lookup[d.key()] = _degenerate_by(z, sigma)
            k = 0
            for m in self.degree(n):
                if m.key() in lookup:
                    continue
                gid = SimplexId(f"m{n}.{k}", n)
                k += 1
                lookup[m.key()] = NormalSimplex((), gid)
                faces[gid] = tuple(lookup[self.face(m, i).key()] for i in range(n + 1)) if n else ()
        return SimplicialSet(name or f"Hom({self.A.name},{self.X.name})≤{self.bound}", faces), lookup


def _degenerate_by(z: NormalSimplex, sigma: tuple[int, ...]) -> NormalSimplex:
    from .sset import surjection

    inner = surjection(z.word, z.degree)
    return NormalSimplex(word_of(tuple(inner[s] for s in sigma)), z.base)


def function_complex(A: SimplicialSet, X: SimplicialSet, d: int,
                     budget: int = DEFAULT_BUDGET) -> FunctionComplexView:
    return FunctionComplexView(A, X, d, budget)


@dataclass
class InverseResult:
    status: str  # "found" | "none" | "inconclusive"
    g: SimplicialMap | None = None
    source_chain: HomotopyChain | None = None  # g∘f ~ 1_X
    target_chain: HomotopyChain | None = None  # f∘g ~ 1_Y


def find_homotopy_inverse(f: SimplicialMap, budget: int = DEFAULT_BUDGET) -> InverseResult:
    X, Y = f.source, f.target
    tx, ty = homotopy_set(X, X, budget), homotopy_set(Y, Y, budget)
    cands = enumerate_maps(Y, X, budget)
    one_x, one_y = identity(X), identity(Y)
    for g in cands:
        gf, fg = compose(g, f), compose(f, g)
        if tx.class_of(gf) == tx.class_of(one_x) and ty.class_of(fg) == ty.class_of(one_y):
            return InverseResult("found", g, tx.chain(gf, one_x), ty.chain(fg, one_y))
    if cands.complete and tx.complete and ty.complete:
        return InverseResult("none")
    return InverseResult("inconclusive")


@dataclass
class KanTarget:
    obj: SimplicialSet
    certificate: Verdict

    @property
    def name(self) -> str:
        return self.obj.name


@lru_cache(maxsize=None)
def discrete_targets(n: int = 3, d: int = 5) -> tuple[KanTarget, ...]:
    from .lifting import is_kan_complex_up_to
    from .standard import discrete

    out = []
    for k in range(1, n + 1):
        Z = discrete(k)
        out.append(KanTarget(Z, is_kan_complex_up_to(Z, d)))
    return tuple(out)


@dataclass
class WeakEquivalenceReport:
    verdict: Verdict
    rows: list[dict]
    rejected: list[str]
    note: str = "consistent with weak equivalence over the given family only"


def is_weak_equivalence_against(f: SimplicialMap, targets: Sequence[KanTarget],
                                budget: int = DEFAULT_BUDGET) -> WeakEquivalenceReport:
    need = max(f.source.dim, f.target.dim, 0) + 2
    rows, rejected, verdicts = [], [], []
    for t in targets:
        cert = t.certificate
        if cert is None or not cert.holds or cert.bound < need:
            rejected.append(t.name)
            continue
        ty = homotopy_set(f.target, t.obj, budget, cert)
        tx = homotopy_set(f.source, t.obj, budget, cert)
        sharp = induced_map(f, ty, tx)
        inj = len(set(sharp)) == len(sharp)
        surj = set(sharp) == set(range(len(tx)))
        row = {"target": t.name, "classes_target": len(ty), "classes_source": len(tx),
               "injective": inj, "surjective": surj}
        if inj and surj:
            v = Verdict.ok(bound=need) if ty.complete and tx.complete else Verdict.unknown(bound=need)
        elif ty.complete and tx.complete:
            v = Verdict.fail(witness=row, bound=need)
        else:
            v = Verdict.unknown(bound=need)
        row["verdict"] = v.status.value
        rows.append(row)
        verdicts.append(v)
    if any(v.fails for v in verdicts):
        total = next(v for v in verdicts if v.fails)
    elif not verdicts or any(v.inconclusive for v in verdicts):
        total = Verdict.unknown(bound=need, detail="no usable target" if not verdicts else "")
    else:
        total = Verdict.ok(bound=need, detail="bijective on every target of the family")
    return WeakEquivalenceReport(total, rows, rejected)
