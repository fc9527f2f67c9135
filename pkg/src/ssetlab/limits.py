"""Finite limits and colimits, computed degreewise."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInput
from .sset import (NormalSimplex, SimplexId, SimplicialMap, SimplicialSet, compose, id_key,
                   inclusion, section, simplex_key)
from .verdict import Verdict


class FiberProduct:
    """``X x_Y Z`` (plain product when no maps are given).

    A pair of simplices is nondegenerate iff the two degeneracy words share
    no index, so generators are enumerated directly in that form.
    """

    def __init__(self, X: SimplicialSet, Z: SimplicialSet,
                 f: SimplicialMap | None = None, g: SimplicialMap | None = None,
                 name: str | None = None):
        if (f is None) != (g is None):
            raise InvalidInput("fiber product needs both maps or neither")
        if f is not None and (f.source != X or g.source != Z or f.target != g.target):
            raise InvalidInput("maps do not form a cospan")
        self.left, self.right, self.f, self.g = X, Z, f, g
        self._gens: dict[tuple[NormalSimplex, NormalSimplex], SimplexId] = {}
        faces: dict[SimplexId, tuple] = {}
        top = X.dim + Z.dim if X.dim >= 0 and Z.dim >= 0 else -1
        for n in range(top + 1):
            if f is None:
                right = {None: Z.simplices(n)}
            else:
                right = {}
                for b in Z.simplices(n):
                    right.setdefault(g(b), []).append(b)
            for a in X.simplices(n):
                wa = set(a.word)
                for b in right.get(None if f is None else f(a), ()):
                    if wa & set(b.word):
                        continue
                    gid = SimplexId(f"({a.label()},{b.label()})", n)
                    self._gens[(a, b)] = gid
                    faces[gid] = tuple(self.pair(X.face(a, i), Z.face(b, i))
                                       for i in range(n + 1)) if n else ()
        default = f"{X.name}×{Z.name}" if f is None else f"{X.name}×_{f.target.name}{Z.name}"
        self.obj = SimplicialSet(name or default, faces)
        self.proj1 = SimplicialMap(self.obj, X, {gid: a for (a, _), gid in self._gens.items()}, "pr1")
        self.proj2 = SimplicialMap(self.obj, Z, {gid: b for (_, b), gid in self._gens.items()}, "pr2")

    def pair(self, a: NormalSimplex, b: NormalSimplex) -> NormalSimplex:
        common = set(a.word) & set(b.word)
        if not common:
            return NormalSimplex((), self._gens[(a, b)])
        word = tuple(sorted(common, reverse=True))
        theta = section(word, a.degree)
        a0 = self.left.act(a, theta)
        b0 = self.right.act(b, theta)
        return NormalSimplex(word, self._gens[(a0, b0)])

    def pair_maps(self, u: SimplicialMap, v: SimplicialMap, name: str | None = None) -> SimplicialMap:
        """``(u, v): T -> X x_Y Z``."""
        if u.source != v.source:
            raise InvalidInput("pairing needs a common source")
        return SimplicialMap(u.source, self.obj, {t: self.pair(u.images[t], v.images[t])
                                                  for t in u.source.generators},
                             name or f"({u.name},{v.name})")

    def cross(self, u: SimplicialMap, v: SimplicialMap, into: "FiberProduct") -> SimplicialMap:
        """``u x v`` from this product into another."""
        return into.pair_maps(compose(u, self.proj1), compose(v, self.proj2), f"{u.name}×{v.name}")


def product(X: SimplicialSet, Y: SimplicialSet, name: str | None = None) -> FiberProduct:
    return FiberProduct(X, Y, name=name)


def pullback(f: SimplicialMap, g: SimplicialMap, name: str | None = None) -> FiberProduct:
    return FiberProduct(f.source, g.source, f, g, name=name)


@dataclass
class Coproduct:
    obj: SimplicialSet
    injections: list[SimplicialMap]
    tags: list[str]

    def copair(self, maps: Sequence[SimplicialMap]) -> SimplicialMap:
        target = maps[0].target if maps else None
        images = {}
        for tag, m in zip(self.tags, maps):
            for g, y in m.images.items():
                images[self.obj.gen(f"{tag}.{g.name}")] = y
        if target is None:
            raise InvalidInput("copairing an empty family needs an explicit target")
        return SimplicialMap(self.obj, target, images, "copair")


def coproduct(sets: Sequence[SimplicialSet], tags: Sequence[str] | None = None,
              name: str | None = None) -> Coproduct:
    tags = list(tags) if tags is not None else [str(i) for i in range(len(sets))]
    renamed: list[dict[SimplexId, SimplexId]] = []
    faces = {}
    for tag, X in zip(tags, sets):
        ren = {g: SimplexId(f"{tag}.{g.name}", g.degree) for g in X.generators}
        renamed.append(ren)
        for g in X.generators:
            faces[ren[g]] = tuple(NormalSimplex(z.word, ren[z.base]) for z in X.faces_of(g))
    obj = SimplicialSet(name or "⊔".join(X.name for X in sets) or "∅", faces)
    injections = [SimplicialMap(X, obj, {g: NormalSimplex((), ren[g]) for g in X.generators},
                                f"in_{tag}") for tag, X, ren in zip(tags, sets, renamed)]
    return Coproduct(obj, injections, tags)


class UnionFind:
    """Union-find whose roots are always the least element under ``key``."""

    def __init__(self, key=None):
        self.parent: dict = {}
        self.key = key or (lambda x: x)

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry, key=self.key)] = min(rx, ry, key=self.key)


def _node_key(node):
    tag, z = node
    return (tag, simplex_key(z))


class Pushout:
    """``B ⊔_A C`` computed as a degreewise quotient of sets.

    A class is a generator of the pushout when it contains a generator of
    ``B`` or ``C`` and is not of the form ``s_i d_i``; it is named after its
    least generator member, prefixed by the branch tag.
    """

    def __init__(self, f: SimplicialMap, g: SimplicialMap, tags=("b", "c"), name: str | None = None):
        if f.source != g.source:
            raise InvalidInput("pushout needs a common source")
        A, B, C = f.source, f.target, g.target
        self.f, self.g, self.tags = f, g, tuple(tags)
        sides = {tags[0]: B, tags[1]: C}
        uf = UnionFind(_node_key)
        top = max(B.dim, C.dim)
        for n in range(top + 1):
            for a in A.simplices(n):
                uf.union((tags[0], f(a)), (tags[1], g(a)))
        self._nf: dict[tuple[str, SimplexId], NormalSimplex] = {}
        faces: dict[SimplexId, tuple] = {}
        self._source_of: dict[SimplexId, tuple[str, SimplexId]] = {}
        for n in range(top + 1):
            members: dict = {}
            for tag in tags:
                for x in sides[tag].generators_in(n):
                    node = (tag, NormalSimplex((), x))
                    members.setdefault(uf.find(node), []).append((tag, x))
            for root, gens in members.items():
                tag, x = gens[0]
                X = sides[tag]
                z = NormalSimplex((), x)
                degenerate_at = None
                for i in range(n):
                    if uf.find((tag, X.degeneracy(X.face(z, i), i))) == root:
                        degenerate_at = i
                        break
                if degenerate_at is not None:
                    lower = self.normal_form(tag, X.face(z, degenerate_at))
                    value = _degenerate(lower, degenerate_at)
                else:
                    least_tag, least = min(gens, key=lambda m: (m[0], m[1].name))
                    pid = SimplexId(f"{least_tag}.{least.name}", n)
                    faces[pid] = tuple(self.normal_form(least_tag, fz)
                                       for fz in sides[least_tag].faces_of(least))
                    self._source_of[pid] = (least_tag, least)
                    value = NormalSimplex((), pid)
                for m in gens:
                    self._nf[m] = value
        self.obj = SimplicialSet(name or f"{B.name}⊔_{A.name}{C.name}", faces)
        self.leg_b = SimplicialMap(B, self.obj, {x: self._nf[(tags[0], x)] for x in B.generators}, "leg_b")
        self.leg_c = SimplicialMap(C, self.obj, {x: self._nf[(tags[1], x)] for x in C.generators}, "leg_c")

    def normal_form(self, tag: str, z: NormalSimplex) -> NormalSimplex:
        from .sset import compose_word

        return compose_word(self._nf[(tag, z.base)], z.word)

    def induced(self, beta: SimplicialMap, gamma: SimplicialMap) -> SimplicialMap:
        """Universal map out of the pushout for a cocone ``(beta, gamma)``."""
        if beta.target != gamma.target:
            raise InvalidInput("cocone legs must share a target")
        for a in self.f.source.generators:
            z = NormalSimplex((), a)
            if beta(self.f(z)) != gamma(self.g(z)):
                raise InvalidInput("not a cocone")
        images = {}
        for pid, (tag, x) in self._source_of.items():
            images[pid] = (beta if tag == self.tags[0] else gamma).images[x]
        return SimplicialMap(self.obj, beta.target, images, "induced")


def _degenerate(z: NormalSimplex, i: int) -> NormalSimplex:
    from .sset import compose_word

    return compose_word(z, (i,))


def pushout(f: SimplicialMap, g: SimplicialMap, tags=("b", "c"), name: str | None = None) -> Pushout:
    return Pushout(f, g, tags, name)


def subcomplex_generated(X: SimplicialSet, S, name: str | None = None):
    """Smallest sub-presentation containing the simplices ``S``; returns (sub, inclusion)."""
    keep: set[SimplexId] = set()
    stack = [z.base for z in S]
    while stack:
        g = stack.pop()
        if g in keep:
            continue
        keep.add(g)
        stack.extend(z.base for z in X.faces_of(g))
    sub = SimplicialSet(name or f"<{X.name}>", {g: X.faces_of(g) for g in keep})
    return sub, inclusion(sub, X)


def is_degreewise_injective(i: SimplicialMap, d: int) -> Verdict:
    for n in range(d + 1):
        seen: dict[NormalSimplex, NormalSimplex] = {}
        for z in i.source.simplices(n):
            y = i(z)
            if y in seen:
                return Verdict.fail((seen[y], z), bound=d, detail=f"collision in degree {n}")
            seen[y] = z
    return Verdict.ok(bound=d)


def is_monomorphism(i: SimplicialMap) -> bool:
    """Exact test: nondegenerate generators go injectively to generators."""
    seen = set()
    for y in i.images.values():
        if y.word or y.base in seen:
            return False
        seen.add(y.base)
    return True


@dataclass
class Cell:
    label: str
    inclusion: SimplicialMap
    attach: SimplicialMap


@dataclass
class Attachment:
    obj: SimplicialSet
    inclusion: SimplicialMap
    cell_maps: list[SimplicialMap]
    cells: list[Cell]


def attach_cells(X: SimplicialSet, cells: Sequence[Cell], name: str | None = None) -> Attachment:
    """Pushout of ``X`` along a coproduct of monomorphisms ``K_c -> L_c``.

    Old generators keep their names; a new generator ``y`` of cell ``c`` is
    named ``<label>:<y>``.
    """
    faces = {g: X.faces_of(g) for g in X.generators}
    plans = []
    for cell in cells:
        j, att = cell.inclusion, cell.attach
        if att.target != X or att.source != j.source:
            raise InvalidInput(f"cell {cell.label}: attaching map does not fit")
        if not is_monomorphism(j):
            raise InvalidInput(f"cell {cell.label}: left map is not a monomorphism")
        back = {y.base: k for k, y in j.images.items()}
        ids = {g: SimplexId(f"{cell.label}:{g.name}", g.degree)
               for g in j.target.generators if g not in back}
        plans.append((cell, back, ids))

        def translate(z: NormalSimplex, back=back, ids=ids, att=att) -> NormalSimplex:
            if z.base in back:
                return att(NormalSimplex(z.word, back[z.base]))
            return NormalSimplex(z.word, ids[z.base])

        for g, gid in ids.items():
            if gid in faces:
                raise InvalidInput(f"cell label clash at {gid.name}")
            faces[gid] = tuple(translate(fz) for fz in j.target.faces_of(g))
    obj = SimplicialSet(name or f"{X.name}+cells", faces)
    incl = inclusion(X, obj).with_name("i")
    cell_maps = []
    for cell, back, ids in plans:
        images = {}
        for g in cell.inclusion.target.generators:
            images[g] = cell.attach.images[back[g]] if g in back else NormalSimplex((), ids[g])
        cell_maps.append(SimplicialMap(cell.inclusion.target, obj, images, f"cell_{cell.label}"))
    return Attachment(obj, incl, cell_maps, list(cells))


def sorted_ids(ids) -> list[SimplexId]:
    return sorted(ids, key=id_key)
