"""Standard simplices, boundaries, horns and other small building blocks."""

from __future__ import annotations

from itertools import combinations

from .errors import InvalidParameter
from .sset import NormalSimplex, SimplexId, SimplicialSet, SimplicialMap, inclusion


def _name(t: tuple[int, ...], p: int) -> str:
    return "".join(map(str, t)) if p <= 9 else ".".join(map(str, t))


def vertex_tuple(g: SimplexId) -> tuple[int, ...]:
    """Vertex tuple of a generator of a standard simplex (or sub-presentation)."""
    name = g.name
    return tuple(int(c) for c in (name.split(".") if "." in name else name))


def _subsets(p: int, keep) -> SimplicialSet:
    faces = {}
    for n in range(p + 1):
        for t in combinations(range(p + 1), n + 1):
            if not keep(t):
                continue
            g = SimplexId(_name(t, p), n)
            faces[g] = tuple(
                NormalSimplex((), SimplexId(_name(t[:i] + t[i + 1:], p), n - 1))
                for i in range(n + 1)) if n else ()
    return faces


def generate_standard(kind: str, p: int = 1, k: int | None = None) -> SimplicialSet:
    """``kind`` is one of simplex, boundary, horn, interval, interval_boundary."""
    if kind == "interval":
        return simplex(1)
    if kind == "interval_boundary":
        return boundary(1)
    if p < 0:
        raise InvalidParameter("degree must be nonnegative")
    if (k is not None) != (kind == "horn"):
        raise InvalidParameter("horn index is required for horns and only for horns")
    if kind == "simplex":
        return simplex(p)
    if kind == "boundary":
        return boundary(p)
    if kind == "horn":
        return horn(p, k)
    raise InvalidParameter(f"unknown kind {kind!r}")


def simplex(p: int) -> SimplicialSet:
    return SimplicialSet(f"Δ{p}", _subsets(p, lambda t: True))


def boundary(p: int) -> SimplicialSet:
    return SimplicialSet(f"∂Δ{p}", _subsets(p, lambda t: len(t) <= p))


def horn(p: int, k: int) -> SimplicialSet:
    if p < 1 or not 0 <= k <= p:
        raise InvalidParameter(f"no horn Λ{p}_{k}")
    full = set(range(p + 1))
    # t lies in face i (i != k) iff i is not a vertex of t
    return SimplicialSet(f"Λ{p}_{k}", _subsets(
        p, lambda t: len(t) <= p and bool(full - set(t) - {k})))


def point() -> SimplicialSet:
    return simplex(0)


def discrete(n: int, name: str | None = None) -> SimplicialSet:
    return SimplicialSet(name or f"D{n}", {SimplexId(f"p{i}", 0): () for i in range(n)})


def boundary_inclusion(p: int) -> SimplicialMap:
    return inclusion(boundary(p), simplex(p)).with_name(f"∂Δ{p}<Δ{p}")


def horn_inclusion(p: int, k: int) -> SimplicialMap:
    return inclusion(horn(p, k), simplex(p)).with_name(f"Λ{p}_{k}<Δ{p}")


def face_inclusion(p: int, i: int, target: SimplicialSet | None = None) -> SimplicialMap:
    """``delta_i: Delta^{p-1} -> Delta^p`` (or into a subcomplex containing that face)."""
    src = simplex(p - 1)
    tgt = target or simplex(p)
    images = {}
    for g in src.generators:
        t = tuple(v if v < i else v + 1 for v in vertex_tuple(g))
        images[g] = tgt.simplex(_name(t, p))
    return SimplicialMap(src, tgt, images, f"δ{i}")


def vertex_map(X: SimplicialSet, v: str, source: SimplicialSet | None = None) -> SimplicialMap:
    src = source or point()
    (g,) = src.generators
    return SimplicialMap(src, X, {g: X.simplex(v)}, f"vertex_{v}")


def standard_simplex_of(z: NormalSimplex) -> tuple[int, ...]:
    """Vertex sequence of a simplex of a standard simplex."""
    from .sset import surjection

    t = vertex_tuple(z.base)
    sigma = surjection(z.word, z.degree)
    return tuple(t[s] for s in sigma)


def operator_map(theta: tuple[int, ...], n: int) -> SimplicialMap:
    """``Delta^m -> Delta^n`` induced by a monotone vertex function ``theta``."""
    from .sset import word_of

    m = len(theta) - 1
    src, tgt = simplex(m), simplex(n)
    images = {}
    for g in src.generators:
        s = [theta[v] for v in vertex_tuple(g)]
        u = sorted(set(s))
        images[g] = NormalSimplex(word_of(tuple(u.index(x) for x in s)), tgt.gen(_name(tuple(u), n)))
    return SimplicialMap(src, tgt, images, "θ" + "".join(map(str, theta)))


def pair_groupoid_nerve(objects: str = "ab", top: int = 3) -> SimplicialSet:
    """Nerve of the groupoid with one arrow between any two objects, cut at degree ``top``.

    An n-simplex is a word of n+1 objects; it is nondegenerate iff no two
    neighbours agree.
    """
    from .sset import word_of

    def normal(t: tuple[str, ...]) -> NormalSimplex:
        runs, sigma = [], []
        for c in t:
            if not runs or runs[-1] != c:
                runs.append(c)
            sigma.append(len(runs) - 1)
        return NormalSimplex(word_of(tuple(sigma)), SimplexId("".join(runs), len(runs) - 1))

    faces = {}
    layer = [(c,) for c in objects]
    for n in range(top + 1):
        for t in layer:
            faces[SimplexId("".join(t), n)] = tuple(normal(t[:i] + t[i + 1:]) for i in range(n + 1)) if n else ()
        layer = [t + (c,) for t in layer for c in objects if c != t[-1]]
    return SimplicialSet(f"E({len(objects)})≤{top}", faces)
