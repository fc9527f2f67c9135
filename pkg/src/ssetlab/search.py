"""Backtracking enumeration of simplicial maps out of a finite presentation.

Generators are assigned in degree order.  Once the faces of a generator are
assigned, the admissible images are exactly the target simplices with that
face tuple, so candidates come from a per-degree index instead of a scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .sset import NormalSimplex, SimplexId, SimplicialMap, SimplicialSet, compose_word, section

DEFAULT_BUDGET = 200_000


class MapSearch:
    """Iterate over maps ``source -> target`` subject to constraints.

    ``fixed`` pins the images of some generators; ``over=(p, base)`` demands
    ``p o result == base``.  ``budget`` bounds the number of candidate
    assignments tried; when exceeded, iteration stops and ``truncated`` is set.
    """

    def __init__(self, source: SimplicialSet, target: SimplicialSet, *,
                 fixed: Mapping[SimplexId, NormalSimplex] | None = None,
                 over: tuple[SimplicialMap, SimplicialMap] | None = None,
                 reverse: bool = False, nondegenerate: bool = False,
                 budget: int = DEFAULT_BUDGET):
        self.source, self.target = source, target
        self.fixed = dict(fixed or {})
        self.over = over
        self.reverse = reverse
        self.nondegenerate = nondegenerate
        self.budget = budget
        self.explored = 0
        self.truncated = False
        self.exhausted = False

    def _over_index(self, n: int) -> dict:
        p = self.over[0]
        cache = p._cache
        key = ("over", n)
        hit = cache.get(key)
        if hit is None:
            hit = {}
            T = self.target
            for y in T.simplices(n):
                hit.setdefault((T.all_faces(y), p(y)), []).append(y)
            cache[key] = hit
        return hit

    def _candidates(self, g: SimplexId, images: dict) -> list[NormalSimplex]:
        key = tuple(compose_word(images[fz.base], fz.word) for fz in self.source.faces_of(g))
        n = g.degree
        if g in self.fixed:
            y = self.fixed[g]
            ok = (y.degree == n and y.base in self.target._faces
                  and self.target.all_faces(y) == key
                  and (self.over is None or self.over[0](y) == self.over[1].images[g])
                  and not (self.nondegenerate and y.word))
            return [y] if ok else []
        if self.over is not None:
            lst = self._over_index(n).get((key, self.over[1].images[g]), [])
        else:
            lst = self.target.face_index(n).get(key, [])
        if self.nondegenerate:
            lst = [y for y in lst if not y.word]
        return lst[::-1] if self.reverse else lst

    def __iter__(self) -> Iterator[SimplicialMap]:
        gens = self.source.generators
        if not gens:
            self.exhausted = True
            yield SimplicialMap(self.source, self.target, {})
            return
        images: dict[SimplexId, NormalSimplex] = {}
        stack = [iter(self._candidates(gens[0], images))]
        while stack:
            depth = len(stack) - 1
            y = next(stack[-1], None)
            if y is None:
                stack.pop()
                images.pop(gens[depth], None)
                continue
            self.explored += 1
            if self.explored > self.budget:
                self.truncated = True
                return
            images[gens[depth]] = y
            if depth + 1 == len(gens):
                yield SimplicialMap(self.source, self.target, dict(images))
            else:
                stack.append(iter(self._candidates(gens[depth + 1], images)))
        self.exhausted = True

    def first(self) -> SimplicialMap | None:
        for m in self:
            return m
        return None


@dataclass
class MapEnumeration:
    maps: list[SimplicialMap] = field(default_factory=list)
    complete: bool = True
    explored: int = 0

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def enumerate_maps(A: SimplicialSet, X: SimplicialSet, budget: int = DEFAULT_BUDGET,
                   **constraints) -> MapEnumeration:
    """All maps ``A -> X`` in deterministic order (flagged when truncated)."""
    search = MapSearch(A, X, budget=budget, **constraints)
    maps = list(search)
    return MapEnumeration(maps, not search.truncated, search.explored)


def forced_values(j: SimplicialMap, h: SimplicialMap) -> dict[SimplexId, NormalSimplex] | None:
    """Images forced on generators of ``L`` by ``e o j == h``; None if impossible."""
    T = h.target
    forced: dict[SimplexId, NormalSimplex] = {}
    for k, jk in j.images.items():
        z = h.images[k]
        c = T.act(z, section(jk.word, jk.degree)) if jk.word else z
        if compose_word(c, jk.word) != z:
            return None
        prev = forced.get(jk.base)
        if prev is not None and prev != c:
            return None
        forced[jk.base] = c
    return forced


def extensions(j: SimplicialMap, h: SimplicialMap, *, over=None, reverse: bool = False,
               budget: int = DEFAULT_BUDGET) -> MapSearch | None:
    """Search over ``e: L -> T`` with ``e o j == h``; None when no extension can exist."""
    forced = forced_values(j, h)
    if forced is None:
        return None
    return MapSearch(j.target, h.target, fixed=forced, over=over, reverse=reverse, budget=budget)


def merge_forced(pairs) -> dict[SimplexId, NormalSimplex] | None:
    """Combine ``forced_values`` for several ``(j, h)`` constraints; None on conflict."""
    out: dict[SimplexId, NormalSimplex] = {}
    for j, h in pairs:
        part = forced_values(j, h)
        if part is None:
            return None
        for g, y in part.items():
            if out.setdefault(g, y) != y:
                return None
    return out
