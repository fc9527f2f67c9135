"""Deterministic corpus of small presentations, maps, fibrations and traces."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .bundles import twisted_discrete_bundle
from .errors import InvalidParameter
from .formats import serialize_smap, serialize_sset, serialize_trace
from .lifting import (AnodyneTrace, TraceCell, compose_traces, is_kan_fibration_up_to,
                      pushout_trace, raw_images, replay_anodyne)
from .limits import Pushout, is_monomorphism, product, pushout
from .search import DEFAULT_BUDGET
from .sset import (NormalSimplex, SimplexId, SimplicialMap, SimplicialSet, compose, empty_set,
                   identity, inclusion, terminal_map, validate)
from .standard import (boundary, boundary_inclusion, discrete, face_inclusion, horn,
                       horn_inclusion, pair_groupoid_nerve, point, simplex, vertex_map)
from .verdict import Status, Verdict


@dataclass(frozen=True)
class CorpusLimits:
    max_dim: int = 3
    max_size: int = 50  # nondegenerate simplices per object
    cert_dim: int = 3


@dataclass
class FibrationEntry:
    name: str
    map: SimplicialMap
    certificate: Verdict
    kind: str  # "isomorphism" | "projection" | "bundle" | "terminal" | "truncated"
    truncated_at: int | None = None


@dataclass
class Corpus:
    seed: int
    limits: CorpusLimits
    objects: dict[str, SimplicialSet] = field(default_factory=dict)
    maps: dict[str, SimplicialMap] = field(default_factory=dict)
    fibrations: dict[str, FibrationEntry] = field(default_factory=dict)
    traces: dict[str, AnodyneTrace] = field(default_factory=dict)

    def add_object(self, X: SimplicialSet) -> bool:
        if X.dim > self.limits.max_dim or len(X) > self.limits.max_size:
            return False
        self.objects.setdefault(X.name, X)
        return True

    def add_map(self, name: str, f: SimplicialMap) -> bool:
        if f.source.name not in self.objects or f.target.name not in self.objects:
            return False
        self.maps[name] = f.with_name(name)
        return True

    def cofibrations(self) -> dict[str, SimplicialMap]:
        return {n: f for n, f in self.maps.items() if is_monomorphism(f)}

    def artifacts(self) -> dict[str, str]:
        """File name -> canonical text, in a fixed order."""
        out = {}
        for name, X in self.objects.items():
            out[f"{file_stem(name)}.sset"] = serialize_sset(X)
        for name, f in self.maps.items():
            out[f"{file_stem(name)}.smap"] = serialize_smap(f, name)
        for name, tr in self.traces.items():
            text, attach = serialize_trace(tr)
            out[f"{file_stem(name)}.trace"] = text
            for ref, body in attach.items():
                out[f"{file_stem(ref)}.smap"] = body
        return out

    def digest(self) -> str:
        h = hashlib.sha256()
        for fname, text in self.artifacts().items():
            h.update(fname.encode("utf-8") + b"\0" + text.encode("utf-8") + b"\0")
        return h.hexdigest()

    def validate(self, bound: int = 4) -> list[str]:
        bad = []
        for name, X in self.objects.items():
            r = validate(X, bound)
            bad.extend(f"{name}: {v.location}: {v.message}" for v in r.violations)
        for name, f in self.maps.items():
            bad.extend(f"{name}: {msg}" for msg in f.commutes())
        for name, tr in self.traces.items():
            replay_anodyne(tr)
        return bad


_UNSAFE = set('/\\:*?"<>|~')


def file_stem(name: str) -> str:
    """Object name -> portable file stem (path-hostile characters escaped)."""
    return "".join(f"~{ord(c):x}~" if c in _UNSAFE or ord(c) < 32 else c for c in name)


def circle() -> Pushout:
    """Two edges glued along both endpoints (the 2-vertex circle)."""
    j = boundary_inclusion(1)
    return pushout(j, j, ("u", "l"), "S1")


def double_cover() -> SimplicialMap:
    """Connected double cover of the 2-vertex circle."""
    S = circle()
    C = S.obj
    (x, y), (e, f) = C.generators_in(0), C.generators_in(1)
    vs = {(v, s): SimplexId(f"{v.name}|{s}", 0) for v in (x, y) for s in (0, 1)}
    faces: dict = {g: () for g in vs.values()}
    images = {g: NormalSimplex((), v) for (v, _), g in vs.items()}
    for s in (0, 1):
        for edge, twist in ((e, 0), (f, 1)):
            d0, d1 = C.faces_of(edge)
            g = SimplexId(f"{edge.name}|{s}", 1)
            faces[g] = (NormalSimplex((), vs[(d0.base, s ^ twist)]), NormalSimplex((), vs[(d1.base, s)]))
            images[g] = NormalSimplex((), edge)
    E = SimplicialSet("S1~2", faces)
    return SimplicialMap(E, C, images, "cover")


def _horn_trace(p: int, k: int) -> AnodyneTrace:
    H = horn(p, k)
    return AnodyneTrace(f"fill{p}_{k}", H, [[TraceCell("horn", p, k, raw_images(identity(H)), "")]])


def _certify(c: Corpus, name: str, f: SimplicialMap, kind: str, budget: int,
             truncated_at: int | None = None) -> None:
    if name not in c.maps and not c.add_map(name, f):
        return
    d = c.limits.cert_dim if truncated_at is None else min(c.limits.cert_dim, truncated_at)
    cert = is_kan_fibration_up_to(c.maps[name], d, budget)
    if cert.status is Status.HOLDS:
        c.fibrations[name] = FibrationEntry(name, c.maps[name], cert, kind, truncated_at)


def generate_corpus(seed: int = 7, limits: CorpusLimits | None = None,
                    budget: int = DEFAULT_BUDGET) -> Corpus:
    limits = limits or CorpusLimits()
    if limits.max_dim < 0 or limits.max_size < 1 or limits.cert_dim < 1:
        raise InvalidParameter("corpus limits must be positive")
    rng = random.Random(seed)
    c = Corpus(seed, limits)
    pt = point()
    c.add_object(empty_set())
    for p in range(0, 4):
        c.add_object(simplex(p))
    for p in range(1, 4):
        c.add_object(boundary(p))
        for k in range(p + 1):
            c.add_object(horn(p, k))
    for n in (2, 3):
        c.add_object(discrete(n))
    S = circle()
    c.add_object(S.obj)
    cover = double_cover()
    c.add_object(cover.source)
    E2 = pair_groupoid_nerve("ab", 3)
    c.add_object(E2)

    factors = [simplex(1), boundary(1), horn(2, 1), simplex(2), discrete(2), S.obj]
    prods = []
    for a_i, A in enumerate(factors):
        for B in factors[a_i:]:
            P = product(A, B)
            if c.add_object(P.obj):
                prods.append(P)
    for n in (2, 3):
        P = product(simplex(1), discrete(n))
        if c.add_object(P.obj):
            prods.append(P)

    # maps
    for name, X in list(c.objects.items()):
        if len(X):
            c.add_map(f"!{name}", terminal_map(X, pt))
    for p in range(1, 4):
        c.add_map(f"∂{p}", boundary_inclusion(p))
        for k in range(p + 1):
            c.add_map(f"λ{p}_{k}", horn_inclusion(p, k))
        for i in range(p + 1):
            c.add_map(f"δ{p}_{i}", face_inclusion(p, i))
    for name in ("Δ1", "Δ2", "∂Δ1", "D2", "S1"):
        X = c.objects.get(name)
        if X is not None:
            v = X.vertices()[0].name
            c.add_map(f"v0→{name}", vertex_map(X, v))
    c.add_map("∅→Δ0", inclusion(c.objects["∅"], pt))
    c.add_map("q_u", S.leg_b)
    c.add_map("q_l", S.leg_c)
    c.add_map("q∂", compose(S.leg_b, boundary_inclusion(1)))
    for P in prods:
        c.add_map(f"pr1:{P.obj.name}", P.proj1)
        c.add_map(f"pr2:{P.obj.name}", P.proj2)
    c.add_map("Δ0⊔Δ0→Δ0", terminal_map(discrete(2), pt))

    # fibrations with certificates
    for name in ("Δ0", "Δ1", "∂Δ1", "D2"):
        if name in c.objects:
            _certify(c, f"id:{name}", identity(c.objects[name]), "isomorphism", budget)
    for name in ("!D2", "!D3", "!Δ0"):
        if name in c.maps:
            _certify(c, name, c.maps[name], "terminal", budget)
    for P in prods:
        if P.right.name.startswith("D"):
            _certify(c, f"pr1:{P.obj.name}", P.proj1, "projection", budget)
    _certify(c, "cover", cover, "bundle", budget)
    for B in (horn(2, 0), horn(2, 1), boundary(1)):
        m = rng.choice((2, 3))
        pi = twisted_discrete_bundle(B, m, rng, f"tw({B.name},{m})")
        if c.add_object(pi.source):
            _certify(c, f"tw:{B.name}", pi, "bundle", budget)
    if E2.name in c.objects:
        _certify(c, f"!{E2.name}", terminal_map(E2, pt), "truncated", budget, truncated_at=3)

    # anodyne traces
    for p, k in ((1, 0), (1, 1), (2, 0), (2, 1), (2, 2)):
        if p <= limits.max_dim:
            tr = _horn_trace(p, k)
            c.traces[tr.name] = tr
    if limits.max_dim >= 2:
        inner = AnodyneTrace("grow", pt, [[TraceCell("horn", 1, 0, {"0": ((), "0")}, "")]])
        c.traces["grow"] = inner
        pushed = pushout_trace(_horn_trace(1, 0), vertex_map(simplex(1), "1", horn(1, 0)), "push")
        c.traces["push"] = pushed
        tail = AnodyneTrace("tail", replay_anodyne(inner).result,
                            [[TraceCell("horn", 2, 0, _spine_images(replay_anodyne(inner).result), "")]])
        c.traces["grow+tail"] = compose_traces(inner, tail, "grow+tail")
    return c


def _spine_images(G: SimplicialSet) -> dict:
    """Send Λ2_0 onto the single edge of ``G`` twice (both legs degenerate-free)."""
    (e,) = G.generators_in(1)
    d0, d1 = G.faces_of(e)
    return {"0": ((), d1.base.name), "1": ((), d0.base.name), "2": ((), d0.base.name),
            "01": ((), e.name), "02": ((), e.name)}
