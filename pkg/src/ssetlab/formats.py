"""Canonical text formats for presentations, maps and anodyne traces.

.sset::

    sset <name>
    simplex <id> <degree>
    face <id> <i> = [s<j> ]* <id>

.smap::

    smap <name> : <X> -> <Y>
    send <id> = [s<j> ]* <id>

.trace::

    trace <name>
    base <sset-name>
    stage attach horn <p> <k> via <smap-name>
    compose

``compose`` closes a stage.  Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (DanglingReference, IdentityViolation, IndexOutOfRange, InvalidInput,
                     SyntaxDiagnostic)
from .lifting import AnodyneTrace, TraceCell, bind_raw
from .sset import NormalSimplex, SimplexId, SimplicialMap, SimplicialSet, id_key, validate
from .standard import boundary, horn


def _check_token(name: str, what: str) -> str:
    if not name or "#" in name or any(c.isspace() for c in name):
        raise InvalidInput(f"{what} {name!r} cannot be written (empty, whitespace or '#')")
    return name


def _word_text(z: NormalSimplex) -> str:
    return "".join(f"s{j} " for j in z.word) + z.base.name


def serialize_sset(X: SimplicialSet) -> str:
    lines = [f"sset {_check_token(X.name, 'set name')}"]
    for g in X.generators:
        lines.append(f"simplex {_check_token(g.name, 'simplex id')} {g.degree}")
        for i, fz in enumerate(X.faces_of(g)):
            lines.append(f"face {g.name} {i} = {_word_text(fz)}")
    return "\n".join(lines) + "\n"


def serialize_smap(f: SimplicialMap, name: str | None = None) -> str:
    name = _check_token(name or f.name, "map name")
    lines = [f"smap {name} : {_check_token(f.source.name, 'set name')} -> "
             f"{_check_token(f.target.name, 'set name')}"]
    for g in f.source.generators:
        lines.append(f"send {g.name} = {_word_text(f.images[g])}")
    return "\n".join(lines) + "\n"


def _lines(text: str):
    for no, raw in enumerate(text.split("\n"), start=1):
        raw = raw.split("#", 1)[0].rstrip()  # columns still index the original line
        if not raw.strip():
            continue
        yield no, raw


def _col(raw: str, token: str, start: int = 0) -> int:
    pos = raw.find(token, start)
    return pos + 1 if pos >= 0 else 1


def _parse_word(raw: str, no: int, toks: list[str]) -> tuple[tuple[int, ...], str]:
    """``[s<j> ]* <id>`` -> (word, id)."""
    if not toks:
        raise SyntaxDiagnostic("missing simplex reference", no, len(raw) + 1)
    *degs, ident = toks
    word = []
    for t in degs:
        if len(t) < 2 or t[0] != "s" or not t[1:].isdigit():
            raise SyntaxDiagnostic(f"expected a degeneracy s<j>, got {t!r}", no, _col(raw, t))
        word.append(int(t[1:]))
    if any(a <= b for a, b in zip(word, word[1:])):
        raise SyntaxDiagnostic("degeneracy word must be strictly decreasing", no, _col(raw, degs[0]))
    return tuple(word), ident


def parse_sset(text: str) -> SimplicialSet:
    name = None
    decl: dict[str, tuple[int, int]] = {}  # id -> (degree, line)
    faces: dict[str, dict[int, tuple[tuple[int, ...], str, int, int]]] = {}
    for no, raw in _lines(text):
        toks = raw.split()
        head = toks[0]
        if name is None:
            if head != "sset" or len(toks) != 2:
                raise SyntaxDiagnostic("expected header 'sset <name>'", no, _col(raw, head))
            name = toks[1]
            continue
        if head == "simplex":
            if len(toks) != 3 or not toks[2].isdigit():
                raise SyntaxDiagnostic("expected 'simplex <id> <degree>'", no, _col(raw, head))
            if toks[1] in decl:
                raise SyntaxDiagnostic(f"duplicate simplex {toks[1]!r}", no, _col(raw, toks[1], 7))
            decl[toks[1]] = (int(toks[2]), no)
            faces.setdefault(toks[1], {})
        elif head == "face":
            if len(toks) < 5 or toks[3] != "=" or not toks[2].isdigit():
                raise SyntaxDiagnostic("expected 'face <id> <i> = [s<j> ]* <id>'", no, _col(raw, head))
            ident, i = toks[1], int(toks[2])
            if ident not in decl:
                raise DanglingReference(f"face of undeclared simplex {ident!r}", no, _col(raw, ident, 4))
            deg = decl[ident][0]
            if i > deg or deg == 0:
                raise IndexOutOfRange(f"face index {i} on a {deg}-simplex", no,
                                      _col(raw, toks[2], _col(raw, ident, 4) + len(ident) - 1))
            if i in faces[ident]:
                raise SyntaxDiagnostic(f"face {i} of {ident!r} given twice", no, _col(raw, head))
            word, ref = _parse_word(raw, no, toks[4:])
            faces[ident][i] = (word, ref, no, _col(raw, ref, raw.index("=")))
        else:
            raise SyntaxDiagnostic(f"unknown directive {head!r}", no, _col(raw, head))
    if name is None:
        raise SyntaxDiagnostic("empty file", 1, 1)
    ids = {k: SimplexId(k, d) for k, (d, _) in decl.items()}
    table = {}
    for k, (deg, line) in decl.items():
        fl = []
        for i in range(deg + 1 if deg else 0):
            if i not in faces[k]:
                raise IdentityViolation(f"simplex {k!r} is missing face {i}", line, 1)
            word, ref, fno, fcol = faces[k][i]
            if ref not in ids:
                raise DanglingReference(f"undeclared simplex {ref!r}", fno, fcol)
            if ids[ref].degree + len(word) != deg - 1:
                raise IdentityViolation(f"face {i} of {k!r} has the wrong degree", fno, fcol)
            if word and word[0] >= deg - 1:
                raise IdentityViolation(f"degeneracy s{word[0]} out of range", fno, fcol)
            fl.append(NormalSimplex(word, ids[ref]))
        table[ids[k]] = tuple(fl)
    X = SimplicialSet(name, table)
    report = validate(X, bound=max(X.dim, 0) + 1)
    if not report.valid:
        v = report.violations[0]
        culprit = v.location.split()[0].split(".")[-1]
        line = decl.get(culprit, (0, 1))[1]
        raise IdentityViolation(f"{v.location}: {v.message}", line, 1)
    return X


@dataclass
class SmapSpec:
    """A parsed map not yet bound to its source and target presentations."""

    name: str
    source: str
    target: str
    images: dict[str, tuple[tuple[int, ...], str]]
    lines: dict[str, int] = field(default_factory=dict)

    def bind(self, source: SimplicialSet, target: SimplicialSet) -> SimplicialMap:
        for g, (word, base) in self.images.items():
            if g not in source:
                raise DanglingReference(f"{g!r} is not a simplex of {source.name}", self.lines[g], 1)
            if base not in target:
                raise DanglingReference(f"{base!r} is not a simplex of {target.name}", self.lines[g], 1)
            if target.gen(base).degree + len(word) != source.gen(g).degree:
                raise IdentityViolation(f"image of {g!r} has the wrong degree", self.lines[g], 1)
        for g in source.generators:
            if g.name not in self.images:
                raise DanglingReference(f"no image for {g.name!r}", 1, 1)
        try:
            return bind_raw(self.images, source, target, self.name)
        except InvalidInput as exc:
            raise IdentityViolation(str(exc), 1, 1) from None


def parse_smap_spec(text: str) -> SmapSpec:
    spec = None
    for no, raw in _lines(text):
        toks = raw.split()
        if spec is None:
            if len(toks) != 6 or toks[0] != "smap" or toks[2] != ":" or toks[4] != "->":
                raise SyntaxDiagnostic("expected header 'smap <name> : <X> -> <Y>'", no, _col(raw, toks[0]))
            spec = SmapSpec(toks[1], toks[3], toks[5], {})
            continue
        if toks[0] != "send" or len(toks) < 4 or toks[2] != "=":
            raise SyntaxDiagnostic("expected 'send <id> = [s<j> ]* <id>'", no, _col(raw, toks[0]))
        if toks[1] in spec.images:
            raise SyntaxDiagnostic(f"image of {toks[1]!r} given twice", no, _col(raw, toks[1]))
        spec.images[toks[1]] = _parse_word(raw, no, toks[3:])
        spec.lines[toks[1]] = no
    if spec is None:
        raise SyntaxDiagnostic("empty file", 1, 1)
    return spec


def parse_smap(text: str, sets: dict[str, SimplicialSet]) -> SimplicialMap:
    spec = parse_smap_spec(text)
    for ref in (spec.source, spec.target):
        if ref not in sets:
            raise DanglingReference(f"unknown simplicial set {ref!r}", 1, _col(text.split("\n")[0], ref))
    return spec.bind(sets[spec.source], sets[spec.target])


@dataclass
class TraceSpec:
    name: str
    base: str
    stages: list[list[tuple[str, int, int | None, str, int]]]  # kind, p, k, smap, line


def parse_trace_spec(text: str) -> TraceSpec:
    spec = None
    base = None
    stages: list[list] = [[]]
    for no, raw in _lines(text):
        toks = raw.split()
        if spec is None:
            if toks[0] != "trace" or len(toks) != 2:
                raise SyntaxDiagnostic("expected header 'trace <name>'", no, _col(raw, toks[0]))
            spec = toks[1]
            continue
        if toks[0] == "base":
            if base is not None or len(toks) != 2:
                raise SyntaxDiagnostic("expected a single 'base <sset-name>'", no, 1)
            base = toks[1]
        elif toks[0] == "compose":
            if len(toks) != 1:
                raise SyntaxDiagnostic("'compose' takes no arguments", no, _col(raw, toks[1]))
            stages.append([])
        elif toks[0] == "stage":
            if len(toks) < 6 or toks[1] != "attach" or toks[-2] != "via":
                raise SyntaxDiagnostic("expected 'stage attach <kind> <p> [<k>] via <smap>'", no, 1)
            kind, nums = toks[2], toks[3:-2]
            if not all(t.isdigit() for t in nums) or len(nums) not in (1, 2):
                raise SyntaxDiagnostic("cell parameters must be integers", no, _col(raw, nums[0] if nums else kind))
            if kind == "horn" and len(nums) != 2:
                raise SyntaxDiagnostic("horn cells need both p and k", no, _col(raw, kind))
            p = int(nums[0])
            k = int(nums[1]) if len(nums) == 2 else None
            if kind == "horn" and not (p >= 1 and 0 <= k <= p):
                raise IndexOutOfRange(f"no horn Λ{p}_{k}", no, _col(raw, nums[0]))
            stages[-1].append((kind, p, k, toks[-1], no))
        else:
            raise SyntaxDiagnostic(f"unknown directive {toks[0]!r}", no, _col(raw, toks[0]))
    if spec is None:
        raise SyntaxDiagnostic("empty file", 1, 1)
    if base is None:
        raise SyntaxDiagnostic("missing 'base' line", 1, 1)
    if not stages[-1]:
        stages.pop()
    return TraceSpec(spec, base, stages)


def parse_trace(text: str, sets: dict[str, SimplicialSet], smaps: dict[str, SmapSpec]) -> AnodyneTrace:
    spec = parse_trace_spec(text)
    if spec.base not in sets:
        raise DanglingReference(f"unknown base {spec.base!r}", 1, 1)
    stages = []
    for stage in spec.stages:
        cells = []
        for kind, p, k, ref, no in stage:
            if ref not in smaps:
                raise DanglingReference(f"unknown attaching map {ref!r}", no, 1)
            cells.append(TraceCell(kind, p, k, dict(smaps[ref].images), ref))
        stages.append(cells)
    return AnodyneTrace(spec.name, sets[spec.base], stages)


def serialize_trace(tr: AnodyneTrace) -> tuple[str, dict[str, str]]:
    """Trace text plus the attaching maps it references (name -> .smap text)."""
    lines = [f"trace {_check_token(tr.name, 'trace name')}", f"base {tr.base.name}"]
    maps: dict[str, str] = {}
    prev = tr.base.name
    for s, stage in enumerate(tr.stages, start=1):
        for idx, cell in enumerate(stage):
            ref = cell.attach_name or f"{tr.name}.a{s}_{idx}"
            k = f" {cell.k}" if cell.k is not None else ""
            lines.append(f"stage attach {cell.kind} {cell.p}{k} via {ref}")
            src = horn(cell.p, cell.k) if cell.kind == "horn" else boundary(cell.p)
            body = [f"smap {ref} : {src.name} -> {prev}"]
            for g in sorted(cell.attach, key=lambda n: id_key(src.gen(n)) if n in src else (99, n)):
                word, base = cell.attach[g]
                body.append(f"send {g} = " + "".join(f"s{j} " for j in word) + base)
            maps[ref] = "\n".join(body) + "\n"
        lines.append("compose")
        prev = f"{tr.name}.G{s}"
    return "\n".join(lines) + "\n", maps


def parse(text: str, kind: str, sets: dict | None = None, smaps: dict | None = None):
    if kind == "sset":
        return parse_sset(text)
    if kind == "smap":
        return parse_smap(text, sets) if sets is not None else parse_smap_spec(text)
    if kind == "trace":
        return parse_trace(text, sets or {}, smaps or {}) if sets is not None else parse_trace_spec(text)
    raise InvalidInput(f"unknown format kind {kind!r}")


def serialize(obj) -> str:
    if isinstance(obj, SimplicialSet):
        return serialize_sset(obj)
    if isinstance(obj, SimplicialMap):
        return serialize_smap(obj)
    if isinstance(obj, AnodyneTrace):
        return serialize_trace(obj)[0]
    raise InvalidInput(f"cannot serialize {type(obj).__name__}")


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode("utf-8"))
    return path


def read_text(path: Path) -> str:
    return Path(path).read_bytes().decode("utf-8")
