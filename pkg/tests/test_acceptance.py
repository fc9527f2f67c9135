"""Acceptance criteria, one test each; every test reports a single PASS/FAIL line.

Run as ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from ssetlab.bundles import (all_trivializations, fiber, is_f_bundle, trivialize_over_horn,  # noqa: E402
                             twisted_discrete_bundle)
from ssetlab.cli import run  # noqa: E402
from ssetlab.correction import solve_boundary_lift_via_correction  # noqa: E402
from ssetlab.factorization import factorize  # noqa: E402
from ssetlab.formats import (parse_smap, parse_smap_spec, parse_sset, parse_trace,  # noqa: E402
                             serialize_smap, serialize_sset, serialize_trace)
from ssetlab.homotopy import discrete_targets, is_weak_equivalence_against  # noqa: E402
from ssetlab.lifting import (LiftingSquare, MapFamily, SquareEnumeration, check_llp_against,  # noqa: E402
                             has_rlp, is_kan_fibration_up_to, replay_anodyne, solve_lift)
from ssetlab.limits import is_monomorphism, product  # noqa: E402
from ssetlab.minimal import is_minimal, minimal_subfibration, section_and_deformation  # noqa: E402
from ssetlab.report import validate_report  # noqa: E402
from ssetlab.sset import compose, inclusion, skeleton, validate  # noqa: E402
from ssetlab.standard import boundary_inclusion, horn, simplex  # noqa: E402

RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


# 1 -------------------------------------------------------------------------

def test_structural_suite(corpus):
    t0 = time.perf_counter()
    bad, checked = [], 0
    for name, X in corpus.objects.items():
        assert X.dim <= 3 and len(X) <= 50
        rep = validate(X, 6)
        checked += sum(len(X.simplices(n)) for n in range(7))
        bad.extend(f"{name}: {v.location} {v.message}" for v in rep.violations)
        # EZ uniqueness: the enumerated simplices are pairwise distinct normal forms
        for n in range(7):
            zs = X.simplices(n)
            assert len(set(zs)) == len(zs)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    record(1, ok, f"{len(corpus.objects)} objects, {checked} simplices to degree 6, "
                  f"{len(bad)} violations, {dt:.2f}s")
    assert ok, bad[:5]


# 2 -------------------------------------------------------------------------

def test_counting_oracles():
    mismatches = []
    for p in range(5):
        D = simplex(p)
        for n in range(p + 2):
            got = len(D.generators_in(n))
            if not (got == oracles.nondegenerate_count_simplex(p, n) == comb(p + 1, n + 1)):
                mismatches.append(("Δ", p, n, got))
    for p in range(4):
        for q in range(4):
            P = product(simplex(p), simplex(q)).obj
            for n in range(p + q + 1):
                got = len(P.generators_in(n))
                if got != oracles.nondegenerate_count_product(p, q, n):
                    mismatches.append(("Δ×Δ", p, q, n, got))
            if len(P.generators_in(p + q)) != comb(p + q, p):
                mismatches.append(("top", p, q))
    record(2, not mismatches, f"Δ^p p<=4 and Δ^p×Δ^q p,q<=3, {len(mismatches)} mismatches")
    assert not mismatches


# 3 -------------------------------------------------------------------------

def _corpus_squares(corpus, want: int = 200, per_pair: int = 3):
    """A seeded sample of squares (cofibration, corpus map), a few per pair."""
    cofs = [i for _, i in sorted(corpus.cofibrations().items())
            if i.target.dim <= 2 and len(i.target) <= 7 and len(i.source)]
    targets = [p for _, p in sorted(corpus.maps.items()) if len(p.source) <= 12]
    pool = []
    for i in cofs:
        for p in targets:
            for n, sq in enumerate(SquareEnumeration(i, p, budget=2000)):
                if n == per_pair:
                    break
                pool.append(sq)
    random.Random(corpus.seed).shuffle(pool)
    return pool[:want]


def _is_lift_independent(sq: LiftingSquare, d) -> bool:
    for a in sq.i.source.generators:
        if d(sq.i.images[a]) != sq.top.images[a]:
            return False
    return (all(sq.p(d.images[b]) == sq.bottom.images[b] for b in sq.i.target.generators)
            and not d.commutes())


def test_lifting_soundness_completeness(corpus):
    squares = _corpus_squares(corpus)
    lifts = nones = brute = 0
    disagreements = []
    for sq in squares:
        res = solve_lift(sq)
        if res.found:
            lifts += 1
            if not _is_lift_independent(sq, res.lift):
                disagreements.append(("bad lift", sq))
        elif res.status == "none":
            nones += 1
            if solve_lift(sq, reverse=True).status != "none":
                disagreements.append(("reverse", sq))
            if len(sq.i.target) <= 7 and len(sq.p.source) <= 6:
                brute += 1
                if oracles.lifts_brute(sq):
                    disagreements.append(("brute", sq))
        else:
            disagreements.append(("inconclusive", sq))
    ok = len(squares) == 200 and not disagreements and lifts and nones
    record(3, ok, f"{len(squares)} squares: {lifts} lifts re-verified, {nones} none "
                  f"confirmed reversed ({brute} also by brute force), {len(disagreements)} disagreements")
    assert ok


# 4 -------------------------------------------------------------------------

def test_anodyne_lifts(corpus):
    fibs = [e.map for e in corpus.fibrations.values()
            if e.certificate.holds and e.certificate.bound >= 3 or e.kind == "truncated"]
    total = solved = 0
    failures = []
    for name, tr in corpus.traces.items():
        assert len(tr.stages) <= 3
        assert all(c.p <= 2 for st in tr.stages for c in st)
        inc = replay_anodyne(tr).inclusion
        rep = check_llp_against(inc, fibs, 2)
        total += sum(r["squares"] for r in rep.rows)
        solved += sum(r["solved"] for r in rep.rows)
        if rep.unsolved or rep.truncated:
            failures.append(name)
    ok = total > 0 and solved == total and not failures
    record(4, ok, f"{len(corpus.traces)} traces x {len(fibs)} fibrations: {solved}/{total} squares solved")
    assert ok


# 5 -------------------------------------------------------------------------

def _coherence_row(f):
    d = 2
    rlp = has_rlp(f, MapFamily.boundaries(d), d)
    fib = is_kan_fibration_up_to(f, d)
    sd, s, h = section_and_deformation(f, d)
    weq = is_weak_equivalence_against(f, discrete_targets()).verdict
    replay_ok = True
    if sd.holds:
        Y = f.target
        Ys = skeleton(Y, d) if Y.dim > d else Y
        replay_ok = compose(f, s).images == inclusion(Ys, Y).images and h.replay()
    if rlp.fails:
        sq = rlp.witness["square"]
        replay_ok = replay_ok and sq.commutes() and solve_lift(sq, reverse=True).status == "none"
    parts = (fib, sd, weq)
    if all(p.holds for p in parts):
        char = "holds"
    elif any(p.fails for p in parts):
        char = "fails"
    else:
        char = "inconclusive"
    return rlp.status.value, char, replay_ok


def test_verdict_coherence(corpus):
    passing_rlp, passing_char, bad_replay, undecided = set(), set(), [], []
    for name, f in corpus.maps.items():
        a, b, replay_ok = _coherence_row(f)
        if "inconclusive" in (a, b):
            undecided.append(name)
        if a == "holds":
            passing_rlp.add(name)
        if b == "holds":
            passing_char.add(name)
        if not replay_ok:
            bad_replay.append(name)
    ok = passing_rlp == passing_char and not bad_replay and not undecided
    diff = sorted(passing_rlp ^ passing_char)
    record(5, ok, f"{len(corpus.maps)} maps, {len(passing_rlp)} pass boundary RLP, "
                  f"symmetric difference {diff}, {len(undecided)} undecided, "
                  f"{len(bad_replay)} witnesses not replayable")
    assert ok


# 6 -------------------------------------------------------------------------

def _factor_maps(corpus, n=20):
    names = sorted(corpus.maps, key=lambda k: (len(corpus.maps[k].source) + len(corpus.maps[k].target), k))
    return [corpus.maps[k] for k in names[:n]]


def test_factorization_suite(corpus):
    maps = _factor_maps(corpus)
    horn_ok = inj_ok = 0
    inconclusive, problems = [], []
    for f in maps:
        fz = factorize(f, MapFamily.horns(2), 2, 2)
        good = fz.exact() and fz.replay_left() and not fz.rlp_report.fails
        horn_ok += good
        if fz.rlp_report.inconclusive:
            inconclusive.append(f.name)
        if not good:
            problems.append(("horns", f.name, fz.rlp_report.detail))
        fb = factorize(f, MapFamily.boundaries(2), 2, 2)
        good_b = fb.exact() and fb.injectivity.holds and is_monomorphism(fb.left)
        inj_ok += good_b
        if not good_b:
            problems.append(("boundaries", f.name))
    ok = len(maps) == 20 and horn_ok == 20 and inj_ok == 20
    record(6, ok, f"horns: {horn_ok}/20 exact+replayable with 0 fails "
                  f"({len(inconclusive)} right legs inconclusive); boundaries: {inj_ok}/20 injective")
    assert ok, problems


# 7 -------------------------------------------------------------------------

def test_minimalization_suite(corpus):
    done, problems = 0, []
    for name, e in corpus.fibrations.items():
        res = minimal_subfibration(e.map, 2, truncated_at=e.truncated_at)
        ids = res.identities()
        minimal = is_minimal(res.phi, 2)
        bundle = is_f_bundle(res.phi, 2)
        if all(ids.values()) and len(ids) == 5 and minimal.holds and bundle.holds:
            done += 1
        else:
            problems.append((name, ids, minimal.status.value, bundle.status.value))
    ok = done == len(corpus.fibrations) > 0
    record(7, ok, f"{done}/{len(corpus.fibrations)} fibrations: five identities, minimal, F-bundle to d=2")
    assert ok, problems


# 8 -------------------------------------------------------------------------

def test_horn_trivialization():
    rng = random.Random(2024)
    ok_count, problems = 0, []
    for t in range(30):
        k = t % 3
        m = rng.randint(1, 3)
        pi = twisted_discrete_bundle(horn(2, k), m, rng, f"tw{t}")
        triv = trivialize_over_horn(pi, 2, k)
        every, complete = all_trivializations(pi)
        found = any(x.images == triv.phi.images for x in every)
        if triv.verify(pi) and complete and found and len(fiber(pi, "0")) == m:
            ok_count += 1
        else:
            problems.append(t)
    record(8, ok_count == 30, f"{ok_count}/30 twisted bundles over Λ2_k trivialized, "
                              "each found in the exhaustive list")
    assert ok_count == 30, problems


# 9 -------------------------------------------------------------------------

def _bundle_squares(corpus, want=20):
    maps = [e.map for e in corpus.fibrations.values() if e.kind in ("bundle", "projection")]
    out = []
    for n in (1, 2, 0):
        for pi in maps:
            for sq in SquareEnumeration(boundary_inclusion(n), pi, budget=2000):
                if solve_lift(sq).found:
                    out.append((pi, sq))
                    break
            if len(out) == want:
                return out
    return out


def test_correction_cross_check(corpus):
    pairs = _bundle_squares(corpus)
    agree = 0
    for pi, sq in pairs:
        direct = solve_lift(sq)
        corr = solve_boundary_lift_via_correction(pi, sq)
        both_verify = corr.trace is not None and sq.is_lift(corr.trace.l) and sq.is_lift(direct.lift)
        if corr.status == "lift" and direct.found and both_verify and not corr.trace.replay():
            agree += 1
    ok = len(pairs) == 20 and agree == 20
    record(9, ok, f"{agree}/{len(pairs)} solvable boundary squares agree between correction and search")
    assert ok


# 10 ------------------------------------------------------------------------

def _round_trip(corpus) -> list[str]:
    bad = []
    sets = {}
    for name, X in corpus.objects.items():
        text = serialize_sset(X)
        Y = parse_sset(text)
        sets[Y.name] = Y
        if serialize_sset(Y) != text:
            bad.append(name)
    for name, f in corpus.maps.items():
        text = serialize_smap(f, name)
        if serialize_smap(parse_smap(text, sets), name) != text:
            bad.append(name)
    for name, tr in corpus.traces.items():
        text, attach = serialize_trace(tr)
        specs = {ref: parse_smap_spec(body) for ref, body in attach.items()}
        again, attach2 = serialize_trace(parse_trace(text, sets, specs))
        if again != text or attach2 != attach:
            bad.append(name)
    return bad


def test_cli_and_report(corpus, tmp_path, capsys):
    bad = _round_trip(corpus)
    code = run(["verify-axioms", "--seed", "7", "--dim", "2", "--workdir", str(tmp_path),
                "--report", "report.json", "--format", "text"])
    capsys.readouterr()
    data = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    try:
        validate_report(data)
        valid = True
    except Exception:
        valid = False
    s = data["summary"]
    ok = not bad and code in (0, 2) and valid
    record(10, ok, f"round trip {len(corpus.artifacts())} artifacts ({len(bad)} differ); "
                   f"verify-axioms exit {code}, schema {'valid' if valid else 'INVALID'}, "
                   f"holds={s['holds']} fails={s['fails']} inconclusive={s['inconclusive']}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
