"""Finite simplicial sets presented by nondegenerate generators.

Every simplex is stored in Eilenberg-Zilber normal form: a degeneracy word
``s_{j1} ... s_{jr}`` (``j1 > ... > jr``) applied to a nondegenerate
generator.  Internally a word is handled through the monotone surjection it
names, so all face/degeneracy algebra reduces to composing monotone maps.

Conventions: ``d_i`` deletes vertex ``i``; ``s_i`` repeats vertex ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput, InvalidParameter


@dataclass(frozen=True)
class SimplexId:
    name: str
    degree: int

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class NormalSimplex:
    """``word`` applied to ``base``; an empty word means nondegenerate."""

    word: tuple[int, ...]
    base: SimplexId

    @property
    def degree(self) -> int:
        return self.base.degree + len(self.word)

    @property
    def nondegenerate(self) -> bool:
        return not self.word

    def label(self) -> str:
        prefix = "".join(f"s{j}" for j in self.word)
        return f"{prefix}.{self.base.name}" if prefix else self.base.name

    def __str__(self) -> str:
        return " ".join([f"s{j}" for j in self.word] + [self.base.name])


def id_key(g: SimplexId) -> tuple:
    return (g.degree, g.name)


def simplex_key(z: NormalSimplex) -> tuple:
    return (z.degree, z.base.name, z.word)


@lru_cache(maxsize=None)
def surjection(word: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Monotone surjection ``[n] -> [n - len(word)]`` named by ``word``."""
    repeats = set(word)
    out = [0]
    for j in range(n):
        out.append(out[-1] if j in repeats else out[-1] + 1)
    return tuple(out)


@lru_cache(maxsize=None)
def word_of(sigma: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(j for j in range(len(sigma) - 2, -1, -1) if sigma[j] == sigma[j + 1])


@lru_cache(maxsize=None)
def section(word: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Least-index section of ``surjection(word, n)``."""
    repeats = set(word)
    return tuple(k for k in range(n + 1) if k == 0 or (k - 1) not in repeats)


@lru_cache(maxsize=None)
def face_op(n: int, i: int) -> tuple[int, ...]:
    return tuple(k for k in range(n + 1) if k != i)


@lru_cache(maxsize=None)
def degeneracy_op(n: int, i: int) -> tuple[int, ...]:
    return tuple(range(i + 1)) + tuple(range(i, n + 1))


@lru_cache(maxsize=None)
def _factor_op(word: tuple[int, ...], n: int, m: int, theta: tuple[int, ...]):
    """Split ``sigma_word∘theta`` into (face image, surjection); image None when onto."""
    sigma = surjection(word, n)
    comp = tuple(sigma[t] for t in theta)
    image = sorted(set(comp))
    if len(image) == m + 1:
        return None, word_of(comp)
    pos = {v: p for p, v in enumerate(image)}
    return tuple(image), tuple(pos[c] for c in comp)


@lru_cache(maxsize=None)
def _degenerate_word(word: tuple[int, ...], n: int, tau: tuple[int, ...]) -> tuple[int, ...]:
    beta = surjection(word, n)
    return word_of(tuple(beta[t] for t in tau))


def compose_word(y: NormalSimplex, word: tuple[int, ...]) -> NormalSimplex:
    """``s_word`` applied to ``y`` (rightmost letter first)."""
    if not word:
        return y
    n = y.degree + len(word)
    sigma = surjection(word, n)
    beta = surjection(y.word, y.degree)
    return NormalSimplex(word_of(tuple(beta[t] for t in sigma)), y.base)


def full_degeneracy(v: SimplexId, n: int) -> NormalSimplex:
    """The ``n``-fold degeneracy of a vertex."""
    return NormalSimplex(tuple(range(n - 1, -1, -1)), v)


class SimplicialSet:
    """Immutable finite presentation.

    ``faces`` maps each generator to its tuple ``(d_0 x, ..., d_n x)``; vertices
    map to the empty tuple.
    """

    def __init__(self, name: str, faces: Mapping[SimplexId, Sequence[NormalSimplex]]):
        self.name = name
        self._faces = {g: tuple(fs) for g, fs in faces.items()}
        self.generators: list[SimplexId] = sorted(self._faces, key=id_key)
        self._by_name = {g.name: g for g in self.generators}
        if len(self._by_name) != len(self.generators):
            raise InvalidInput(f"duplicate generator names in {name}")
        self._restrict_cache: dict = {}
        self._degree_cache: dict[int, list[NormalSimplex]] = {}
        self._index_cache: dict[int, dict] = {}

    # -- structure -----------------------------------------------------
    @property
    def dim(self) -> int:
        return self.generators[-1].degree if self.generators else -1

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def gen(self, name: str) -> SimplexId:
        try:
            return self._by_name[name]
        except KeyError:
            raise InvalidInput(f"{self.name} has no generator {name!r}") from None

    def simplex(self, name: str) -> NormalSimplex:
        return NormalSimplex((), self.gen(name))

    def generators_in(self, n: int) -> list[SimplexId]:
        return [g for g in self.generators if g.degree == n]

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.generators_in(n)) for n in range(self.dim + 1))

    def faces_of(self, g: SimplexId) -> tuple[NormalSimplex, ...]:
        return self._faces[g]

    def vertices(self) -> list[SimplexId]:
        return self.generators_in(0)

    def rename(self, name: str) -> "SimplicialSet":
        return SimplicialSet(name, self._faces)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialSet) and self._faces == other._faces

    def __hash__(self) -> int:
        return hash(tuple(self.generators))

    def __repr__(self) -> str:
        return f"SimplicialSet({self.name!r}, counts={self.counts()})"

    # -- operator algebra ----------------------------------------------
    def act(self, z: NormalSimplex, theta: Sequence[int]) -> NormalSimplex:
        """Apply the simplicial operator of a monotone ``theta: [k] -> [n]``."""
        image, tau = _factor_op(z.word, z.degree, z.base.degree, tuple(theta))
        if image is None:
            return NormalSimplex(tau, z.base)
        y = self._restrict(z.base, image)
        return NormalSimplex(_degenerate_word(y.word, y.degree, tau), y.base)

    def _restrict(self, g: SimplexId, image: tuple[int, ...]) -> NormalSimplex:
        key = (g, image)
        hit = self._restrict_cache.get(key)
        if hit is not None:
            return hit
        m = g.degree
        j = max(set(range(m + 1)) - set(image))
        y = self._faces[g][j]
        shifted = tuple(v if v < j else v - 1 for v in image)
        out = y if len(shifted) == m else self.act(y, shifted)
        self._restrict_cache[key] = out
        return out

    def face(self, z: NormalSimplex, i: int) -> NormalSimplex:
        n = z.degree
        if n == 0 or not 0 <= i <= n:
            raise InvalidParameter(f"face index {i} out of range for degree {n}")
        return self.act(z, face_op(n, i))

    def degeneracy(self, z: NormalSimplex, i: int) -> NormalSimplex:
        n = z.degree
        if not 0 <= i <= n:
            raise InvalidParameter(f"degeneracy index {i} out of range for degree {n}")
        return self.act(z, degeneracy_op(n, i))

    def all_faces(self, z: NormalSimplex) -> tuple[NormalSimplex, ...]:
        if z.degree == 0:
            return ()
        if not z.word:
            return self._faces[z.base]
        return tuple(self.face(z, i) for i in range(z.degree + 1))

    def vertex(self, z: NormalSimplex, i: int) -> SimplexId:
        return self.act(z, (i,)).base

    # -- enumeration ---------------------------------------------------
    def simplices(self, n: int) -> list[NormalSimplex]:
        """All degree-``n`` simplices, duplicate-free, lexicographically sorted."""
        hit = self._degree_cache.get(n)
        if hit is not None:
            return hit
        from itertools import combinations

        out = []
        for g in self.generators:
            r = n - g.degree
            if r < 0:
                break
            for js in combinations(range(n), r):
                out.append(NormalSimplex(tuple(sorted(js, reverse=True)), g))
        out.sort(key=simplex_key)
        self._degree_cache[n] = out
        return out

    def face_index(self, n: int) -> dict[tuple, list[NormalSimplex]]:
        """Degree-``n`` simplices grouped by their face tuple."""
        hit = self._index_cache.get(n)
        if hit is not None:
            return hit
        index: dict[tuple, list[NormalSimplex]] = {}
        for z in self.simplices(n):
            index.setdefault(self.all_faces(z), []).append(z)
        self._index_cache[n] = index
        return index


class SimplicialMap:
    """Map determined by the images of the source generators."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet,
                 images: Mapping[SimplexId, NormalSimplex], name: str | None = None):
        self.source = source
        self.target = target
        self.images = dict(images)
        self.name = name or f"{source.name}->{target.name}"
        self._cache: dict = {}

    def __call__(self, z: NormalSimplex) -> NormalSimplex:
        return compose_word(self.images[z.base], z.word)

    def image_of(self, name: str) -> NormalSimplex:
        return self.images[self.source.gen(name)]

    def key(self) -> tuple:
        return tuple(simplex_key(self.images[g]) for g in self.source.generators)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, SimplicialMap) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SimplicialMap({self.name!r})"

    def with_name(self, name: str) -> "SimplicialMap":
        return SimplicialMap(self.source, self.target, self.images, name)

    def commutes(self) -> list[str]:
        """Violations of ``f d_i = d_i f`` on generators (empty when valid)."""
        bad = []
        for g in self.source.generators:
            y = self.images.get(g)
            if y is None:
                bad.append(f"{g.name}: no image")
                continue
            if y.degree != g.degree:
                bad.append(f"{g.name}: image has degree {y.degree}, expected {g.degree}")
                continue
            if y.base not in self.target._faces:
                bad.append(f"{g.name}: image base {y.base.name} not in target")
                continue
            for i, fz in enumerate(self.source.faces_of(g)):
                if self(fz) != self.target.face(y, i):
                    bad.append(f"{g.name}: d{i} does not commute")
        return bad


def identity(X: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, {g: NormalSimplex((), g) for g in X.generators}, f"id_{X.name}")


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """``g o f``."""
    if f.target != g.source:
        raise InvalidInput(f"cannot compose {g.name} after {f.name}")
    return SimplicialMap(f.source, g.target, {x: g(y) for x, y in f.images.items()},
                         f"{g.name}.{f.name}")


def inclusion(sub: SimplicialSet, X: SimplicialSet) -> SimplicialMap:
    """Inclusion of a sub-presentation sharing generator names."""
    return SimplicialMap(sub, X, {g: X.simplex(g.name) for g in sub.generators},
                         f"{sub.name}<{X.name}")


def terminal_map(X: SimplicialSet, point: SimplicialSet) -> SimplicialMap:
    (v,) = point.vertices()
    return constant_map(X, point, v)


def constant_map(X: SimplicialSet, Y: SimplicialSet, v: SimplexId) -> SimplicialMap:
    return SimplicialMap(X, Y, {g: full_degeneracy(v, g.degree) for g in X.generators},
                         f"const_{v.name}")


def is_isomorphism(f: SimplicialMap) -> bool:
    if len(f.source) != len(f.target):
        return False
    seen = set()
    for y in f.images.values():
        if y.word or y.base in seen:
            return False
        seen.add(y.base)
    return len(seen) == len(f.target)


def inverse(f: SimplicialMap) -> SimplicialMap:
    if not is_isomorphism(f):
        raise InvalidInput(f"{f.name} is not an isomorphism")
    return SimplicialMap(f.target, f.source,
                         {y.base: NormalSimplex((), x) for x, y in f.images.items()},
                         f"{f.name}^-1")


def classifying_map(X: SimplicialSet, z: NormalSimplex, simplex: SimplicialSet) -> SimplicialMap:
    """The map ``Delta^n -> X`` picking out ``z`` (``simplex`` is ``Delta^n``)."""
    from .standard import vertex_tuple

    return SimplicialMap(simplex, X, {g: X.act(z, vertex_tuple(g)) for g in simplex.generators},
                         f"<{z.label()}>")


def skeleton(X: SimplicialSet, d: int) -> SimplicialSet:
    return SimplicialSet(f"sk{d}{X.name}", {g: X.faces_of(g) for g in X.generators if g.degree <= d})


def empty_set(name: str = "∅") -> SimplicialSet:
    return SimplicialSet(name, {})


@dataclass
class Violation:
    location: str
    message: str


@dataclass
class ValidationReport:
    bound: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, location: str, message: str) -> None:
        self.violations.append(Violation(location, message))


def validate_faces(faces: Mapping[SimplexId, Sequence[NormalSimplex]], report: ValidationReport) -> None:
    """Structural checks that do not need the operator algebra."""
    for g, fs in faces.items():
        expected = g.degree + 1 if g.degree > 0 else 0
        if len(fs) != expected:
            report.add(g.name, f"has {len(fs)} faces, expected {expected}")
            continue
        for i, z in enumerate(fs):
            if z.base not in faces:
                report.add(f"{g.name} d{i}", f"face base {z.base.name} is not a generator")
            elif z.degree != g.degree - 1:
                report.add(f"{g.name} d{i}", f"face has degree {z.degree}")
            elif list(z.word) != sorted(set(z.word), reverse=True) or any(
                    j >= z.degree for j in z.word):
                report.add(f"{g.name} d{i}", "degeneracy word not in normal form")


def validate(obj, bound: int = 4) -> ValidationReport:
    """Check a presentation or map up to degree ``bound``."""
    report = ValidationReport(bound)
    if isinstance(obj, SimplicialMap):
        for msg in obj.commutes():
            report.add(obj.name, msg)
        if report.valid:
            _check_map_degrees(obj, bound, report)
        return report
    validate_faces(obj._faces, report)
    if not report.valid:
        return report
    for g in obj.generators:
        n = g.degree
        fs = obj.faces_of(g)
        for j in range(1, n + 1):
            for i in range(j):
                if n < 2:
                    continue
                if obj.face(fs[j], i) != obj.face(fs[i], j - 1):
                    report.add(g.name, f"d{i} d{j} != d{j - 1} d{i}")
    if report.valid:
        for n in range(bound + 1):
            for z in obj.simplices(n):
                for loc, msg in identity_violations(obj, z):
                    report.add(loc, msg)
    return report


def identity_violations(X: SimplicialSet, z: NormalSimplex) -> Iterable[tuple[str, str]]:
    """All five simplicial identity families evaluated at ``z``."""
    n = z.degree
    loc = z.label()
    for j in range(n + 1):
        sj = X.degeneracy(z, j)
        if X.face(sj, j) != z or X.face(sj, j + 1) != z:
            yield loc, f"d s{j} != id"
        for i in range(n + 2):
            if i < j:
                if X.face(sj, i) != X.degeneracy(X.face(z, i), j - 1):
                    yield loc, f"d{i} s{j} != s{j - 1} d{i}"
            elif i > j + 1:
                if X.face(sj, i) != X.degeneracy(X.face(z, i - 1), j):
                    yield loc, f"d{i} s{j} != s{j} d{i - 1}"
        for i in range(j + 1):
            if X.degeneracy(sj, i) != X.degeneracy(X.degeneracy(z, i), j + 1):
                yield loc, f"s{i} s{j} != s{j + 1} s{i}"
    if n >= 2:
        for j in range(n + 1):
            for i in range(j):
                if X.face(X.face(z, j), i) != X.face(X.face(z, i), j - 1):
                    yield loc, f"d{i} d{j} != d{j - 1} d{i}"


def _check_map_degrees(f: SimplicialMap, bound: int, report: ValidationReport) -> None:
    X, Y = f.source, f.target
    for n in range(bound + 1):
        for z in X.simplices(n):
            fz = f(z)
            for i in range(n + 1):
                if f(X.degeneracy(z, i)) != Y.degeneracy(fz, i):
                    report.add(f"{f.name} at {z.label()}", f"s{i} does not commute")
