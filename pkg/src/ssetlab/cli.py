"""Command-line surface: ``ssetlab <command> [files] [flags]``.

Exit status: 0 every check holds, 1 some check fails, 2 only inconclusive
results, 64 usage error, 65 parse error or invalid input, 66 missing file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .axioms import SuiteConfig, verify_mc_suite
from .bundles import is_f_bundle
from .corpus import CorpusLimits, file_stem, generate_corpus
from .errors import (CertificateRejected, DanglingReference, InvalidInput, InvalidParameter,
                     ParseError)
from .factorization import factorize
from .formats import (SmapSpec, digest, parse_smap_spec, parse_sset, parse_trace, read_text,
                      serialize_smap, serialize_sset, serialize_trace, write_text)
from .homotopy import homotopy_set
from .lifting import (LiftingSquare, MapFamily, SquareEnumeration, is_kan_complex_up_to,
                      is_kan_fibration_up_to, replay_anodyne, solve_lift)
from .minimal import is_minimal, minimal_subfibration
from .report import CheckRow, Report
from .search import DEFAULT_BUDGET
from .sset import SimplicialMap, SimplicialSet, validate
from .verdict import Verdict

EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Workspace:
    """Files resolved relative to ``--workdir``; sets and maps looked up by name."""

    def __init__(self, root: Path):
        self.root = root
        self.sets: dict[str, SimplicialSet] = {}
        self.specs: dict[str, SmapSpec] = {}
        self.digests: dict[str, str] = {}
        self._scanned: set[Path] = set()
        self.current = ""

    def path(self, p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else self.root / q

    def read(self, p: str) -> str:
        path = self.path(p)
        if not path.is_file():
            raise FileNotFoundError(str(path))
        text = read_text(path)
        self.digests[p] = digest(text)
        self.current = p
        return text

    def _scan(self, folder: Path) -> None:
        if folder in self._scanned or not folder.is_dir():
            return
        self._scanned.add(folder)
        for f in sorted(folder.glob("*.sset")):
            try:
                X = parse_sset(read_text(f))
            except ParseError as exc:
                raise ParseError(f"{f.name}: {exc.message}", exc.line, exc.column) from None
            self.sets.setdefault(X.name, X)
        for f in sorted(folder.glob("*.smap")):
            try:
                spec = parse_smap_spec(read_text(f))
            except ParseError:
                continue
            self.specs.setdefault(spec.name, spec)

    def context_for(self, p: str) -> None:
        self._scan(self.root)
        self._scan(self.path(p).parent)

    def sset(self, p: str) -> SimplicialSet:
        X = parse_sset(self.read(p))
        self.sets[X.name] = X
        return X

    def smap(self, p: str) -> SimplicialMap:
        text = self.read(p)
        self.context_for(p)
        spec = parse_smap_spec(text)
        for ref in (spec.source, spec.target):
            if ref not in self.sets:
                raise DanglingReference(f"no .sset file defines {ref!r}", 1, 1)
        return spec.bind(self.sets[spec.source], self.sets[spec.target])

    def trace(self, p: str):
        text = self.read(p)
        self.context_for(p)
        return parse_trace(text, self.sets, self.specs)


def write_square(ws: Workspace, sq: LiftingSquare, folder: str) -> str:
    """Write a lifting square as files and return the command that re-checks it."""
    out = ws.path(folder)
    for X in (sq.i.source, sq.i.target, sq.p.source, sq.p.target):
        write_text(out / f"{file_stem(X.name)}.sset", serialize_sset(X))
    names = {}
    for role, m in (("i", sq.i), ("p", sq.p), ("top", sq.top), ("bottom", sq.bottom)):
        write_text(out / f"{role}.smap", serialize_smap(m, role))
        names[role] = f"{folder}/{role}.smap"
    return (f"ssetlab lift {names['i']} {names['p']} --top {names['top']} "
            f"--bottom {names['bottom']} --workdir {ws.root}")


def _with_square_witness(ws: Workspace, row: CheckRow, folder: str) -> CheckRow:
    w = row.witness
    if row.status == "fails" and isinstance(w, dict) and isinstance(w.get("square"), LiftingSquare):
        row.replay = write_square(ws, w["square"], folder)
    return row


# -- commands ----------------------------------------------------------------

def cmd_check(args, ws: Workspace, rep: Report) -> None:
    for p in args.files:
        t0 = time.perf_counter()
        if p.endswith(".sset"):
            X = ws.sset(p)
            r = validate(X, max(X.dim, 0) + 1)
            v = Verdict.ok(bound=r.bound, counts=list(X.counts())) if r.valid else Verdict.fail(
                [f"{x.location}: {x.message}" for x in r.violations], bound=r.bound)
        elif p.endswith(".smap"):
            f = ws.smap(p)
            bad = f.commutes()
            v = Verdict.ok(generators=len(f.images)) if not bad else Verdict.fail(bad)
        elif p.endswith(".trace"):
            tr = ws.trace(p)
            try:
                r = replay_anodyne(tr)
                v = Verdict.ok(detail="; ".join(r.report), counts=list(r.result.counts()))
            except CertificateRejected as exc:
                v = Verdict.fail({"stage": exc.stage, "reason": exc.reason}, detail=str(exc))
        else:
            raise UsageError(f"unknown file kind: {p}")
        rep.add(CheckRow.of(f"check {p}", "check", v, time.perf_counter() - t0,
                            replay=f"ssetlab check {p} --workdir {ws.root}" if v.fails else None))


def cmd_lift(args, ws: Workspace, rep: Report) -> None:
    i, p = ws.smap(args.i), ws.smap(args.p)
    t0 = time.perf_counter()
    if (args.top is None) != (args.bottom is None):
        raise UsageError("--top and --bottom go together")
    if args.top is not None:
        sq = LiftingSquare(i, p, ws.smap(args.top), ws.smap(args.bottom))
        res = solve_lift(sq, args.budget)
        if res.found:
            v = Verdict.ok(bound=i.target.dim, witness={"lift": res.lift})
        elif res.status == "none":
            v = Verdict.fail({"square": sq}, bound=i.target.dim, detail="no diagonal exists",
                             explored=res.explored)
        else:
            v = Verdict.unknown(bound=i.target.dim, detail="search budget exhausted")
        rep.add(CheckRow.of("lift square", "lift", v, time.perf_counter() - t0))
        return
    en = SquareEnumeration(i, p, args.budget)
    v = Verdict.ok(bound=i.target.dim)
    n = 0
    for sq in en:
        n += 1
        res = solve_lift(sq, args.budget)
        if res.status == "none":
            v = Verdict.fail({"square": sq}, bound=i.target.dim, detail=f"square {n} has no lift")
            break
        if not res.found:
            v = Verdict.unknown(bound=i.target.dim)
    if en.truncated and not v.fails:
        v = Verdict.unknown(bound=i.target.dim, detail="square enumeration truncated")
    v.stats["squares"] = n
    row = rep.add(CheckRow.of(f"lift {i.name} against {p.name}", "lift", v, time.perf_counter() - t0))
    _with_square_witness(ws, row, "witness/lift")


def cmd_kan(args, ws: Workspace, rep: Report) -> None:
    t0 = time.perf_counter()
    if args.file.endswith(".sset"):
        X = ws.sset(args.file)
        v, label = is_kan_complex_up_to(X, args.dim, args.budget), f"kan {X.name}"
    else:
        f = ws.smap(args.file)
        v, label = is_kan_fibration_up_to(f, args.dim, args.budget), f"fibration {f.name}"
    row = rep.add(CheckRow.of(label, "kan", v, time.perf_counter() - t0))
    _with_square_witness(ws, row, f"witness/{file_stem(Path(args.file).stem)}")


def cmd_factor(args, ws: Workspace, rep: Report) -> None:
    f = ws.smap(args.file)
    fam = MapFamily.horns(args.dim) if args.via == "horns" else MapFamily.boundaries(args.dim)
    t0 = time.perf_counter()
    fz = factorize(f, fam, args.stages, args.dim, budget=args.budget)
    out = ws.path(args.out)
    for st in fz.stages:
        write_text(out / f"G{st.n}.sset", serialize_sset(st.obj))
        write_text(out / f"i{st.n}.smap", serialize_smap(st.inclusion, f"i{st.n}"))
    write_text(out / f"{file_stem(f.source.name)}.sset", serialize_sset(f.source))
    write_text(out / f"{file_stem(f.target.name)}.sset", serialize_sset(f.target))
    write_text(out / "left.smap", serialize_smap(fz.left, "left"))
    write_text(out / "right.smap", serialize_smap(fz.right, "right"))
    rows = [("exact", Verdict.ok() if fz.exact() else Verdict.fail({"map": f}))]
    if fz.trace is not None:
        text, maps = serialize_trace(fz.trace)
        write_text(out / "left.trace", text)
        for ref, body in maps.items():
            write_text(out / f"{file_stem(ref)}.smap", body)
        rows.append(("left replays", Verdict.ok() if fz.replay_left() else Verdict.fail({"trace": fz.trace.name})))
    if fz.injectivity is not None:
        rows.append(("left injective", fz.injectivity))
    rows.append(("right lifting", fz.rlp_report))
    dt = time.perf_counter() - t0
    for label, v in rows:
        v.stats.setdefault("G", list(fz.obj.counts()))
        rep.add(CheckRow.of(f"factor {f.name}: {label}", "factor", v, dt))
    rep.config["artifacts"] = str(Path(args.out))


def cmd_minimalize(args, ws: Workspace, rep: Report) -> None:
    f = ws.smap(args.file)
    t0 = time.perf_counter()
    res = minimal_subfibration(f, args.dim, args.budget, truncated_at=args.waive)
    ids = res.identities()
    v = Verdict.ok(bound=args.dim, **ids) if all(ids.values()) else Verdict.fail(
        {k: b for k, b in ids.items() if not b}, bound=args.dim, detail="identity fails")
    rep.add(CheckRow.of(f"minimalize {f.name}: identities", "minimalize", v, time.perf_counter() - t0))
    m = is_minimal(res.phi, args.dim, args.budget)
    rep.add(CheckRow.of(f"minimalize {f.name}: output minimal", "minimalize", m))
    out = ws.path(args.out)
    write_text(out / f"{file_stem(res.E.name)}.sset", serialize_sset(res.E))
    write_text(out / "phi.smap", serialize_smap(res.phi, "phi"))
    write_text(out / "i.smap", serialize_smap(res.i, "i"))
    write_text(out / "r.smap", serialize_smap(res.r, "r"))


def cmd_bundle(args, ws: Workspace, rep: Report) -> None:
    pi = ws.smap(args.file)
    t0 = time.perf_counter()
    v = is_f_bundle(pi, args.dim, args.budget)
    if v.holds:
        atlas = v.witness
        v = Verdict.ok(bound=args.dim, fiber=list(atlas.F.counts()), charts=len(atlas.charts))
    rep.add(CheckRow.of(f"bundle {pi.name}", "bundle", v, time.perf_counter() - t0))


def cmd_homset(args, ws: Workspace, rep: Report) -> None:
    X, Z = ws.sset(args.source), ws.sset(args.target)
    t0 = time.perf_counter()
    kan = is_kan_complex_up_to(Z, max(X.dim, 0) + 2, args.budget)
    table = homotopy_set(X, Z, args.budget, kan if kan.holds else None)
    info = table.as_json()
    if table.complete:
        v = Verdict.ok(bound=X.dim, classes=len(table), maps=len(table.maps),
                       one_step_is_equivalence=table.one_step_is_equivalence)
    else:
        v = Verdict.unknown(bound=X.dim, detail="map enumeration truncated")
    v.stats["representatives"] = info["classes"]
    rep.add(CheckRow.of(f"homset [{X.name},{Z.name}]", "homset", v, time.perf_counter() - t0))


def cmd_verify_axioms(args, ws: Workspace, rep: Report) -> Report:
    corpus = generate_corpus(args.seed, CorpusLimits(max(args.dim, 1) + 1, args.size))
    cfg = SuiteConfig(dim=args.dim, stages=args.stages, budget=args.budget, jobs=args.jobs)
    out = verify_mc_suite(corpus, cfg, only=args.only)
    for r in out.rows:
        if r.replay:
            r.replay = (f"ssetlab verify-axioms --seed {args.seed} --dim {args.dim} "
                        f"--stages {args.stages} --only '{r.id}'")
    return out


def cmd_corpus(args, ws: Workspace, rep: Report) -> None:
    t0 = time.perf_counter()
    corpus = generate_corpus(args.seed, CorpusLimits(args.dim, args.size))
    bad = corpus.validate()
    out = ws.path(args.out)
    for fname, text in corpus.artifacts().items():
        write_text(out / fname, text)
    manifest = {"seed": args.seed, "limits": {"max_dim": args.dim, "max_size": args.size},
                "digest": corpus.digest(), "objects": list(corpus.objects),
                "maps": list(corpus.maps), "fibrations": list(corpus.fibrations),
                "traces": list(corpus.traces)}
    write_text(out / "manifest.json", json.dumps(manifest, indent=2, ensure_ascii=False) + "\n")
    v = Verdict.ok(objects=len(corpus.objects), maps=len(corpus.maps),
                   fibrations=len(corpus.fibrations), traces=len(corpus.traces)) if not bad \
        else Verdict.fail(bad)
    rep.digests["corpus"] = corpus.digest()
    rep.add(CheckRow.of("corpus", "corpus", v, time.perf_counter() - t0))


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--dim", type=int, default=None, help="degree bound (corpus: 3, else 2)")
    common.add_argument("--stages", type=int, default=None, help="SOA stages (verify-axioms: 2, else 1)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--report", default=None, help="write the JSON report here")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--workdir", default=".")

    p = _Parser(prog="ssetlab", description="finite simplicial-set model-structure checks")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("check", parents=[common], help="parse and validate files")
    s.add_argument("files", nargs="+")
    s = sub.add_parser("lift", parents=[common], help="solve lifting problems")
    s.add_argument("i")
    s.add_argument("p")
    s.add_argument("--top")
    s.add_argument("--bottom")
    s = sub.add_parser("kan", parents=[common], help="Kan complex / Kan fibration up to --dim")
    s.add_argument("file")
    s = sub.add_parser("factor", parents=[common], help="staged small-object factorization")
    s.add_argument("file")
    s.add_argument("--via", choices=("horns", "boundaries"), default="horns")
    s.add_argument("--out", default="factor")
    s = sub.add_parser("minimalize", parents=[common], help="minimal subfibration")
    s.add_argument("file")
    s.add_argument("--waive", type=int, default=None, help="accept a presentation truncated here")
    s.add_argument("--out", default="minimal")
    s = sub.add_parser("bundle", parents=[common], help="F-bundle check")
    s.add_argument("file")
    s = sub.add_parser("homset", parents=[common], help="homotopy classes [X, Z]")
    s.add_argument("source")
    s.add_argument("target")
    s = sub.add_parser("verify-axioms", parents=[common], help="model-axiom instance suites")
    s.add_argument("--size", type=int, default=50)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--only", default=None)
    s = sub.add_parser("corpus", parents=[common], help="write the corpus")
    s.add_argument("--size", type=int, default=50)
    s.add_argument("--out", default="corpus")
    return p


COMMANDS = {"check": cmd_check, "lift": cmd_lift, "kan": cmd_kan, "factor": cmd_factor,
            "minimalize": cmd_minimalize, "bundle": cmd_bundle, "homset": cmd_homset,
            "verify-axioms": cmd_verify_axioms, "corpus": cmd_corpus}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"ssetlab: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    if args.dim is None:
        args.dim = 3 if args.command == "corpus" else 2
    if args.stages is None:
        args.stages = 2 if args.command == "verify-axioms" else 1
    ws = Workspace(Path(args.workdir))
    rep = Report(args.command, {k: v for k, v in sorted(vars(args).items())
                                if k not in ("report", "format", "workdir")})
    try:
        out = COMMANDS[args.command](args, ws, rep)
    except UsageError as exc:
        print(f"ssetlab: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except FileNotFoundError as exc:
        print(f"ssetlab: no such file: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except ParseError as exc:
        print(f"ssetlab: {ws.current}:{exc}", file=sys.stderr)
        return EX_DATAERR
    except (InvalidInput, InvalidParameter) as exc:
        print(f"ssetlab: invalid input: {exc}", file=sys.stderr)
        return EX_DATAERR
    if out is not None:
        out.config.update(rep.config)
        rep = out
    rep.digests.update(ws.digests)
    text = rep.dumps()
    if args.report:
        write_text(ws.path(args.report), text)
    sys.stdout.write(text if args.format == "json" else rep.text())
    return rep.exit_code()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
