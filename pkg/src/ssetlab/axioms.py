"""Instance suites for the model-category axioms over a corpus.

Every row is a statement about the classes this tool can verify (up to a
recorded bound) on concrete corpus members.  Nothing here proves an axiom.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .corpus import Corpus, circle
from .errors import CertificateRejected, InvalidInput
from .factorization import RetractDiagram, factorize, retract_through_factorization
from .homotopy import discrete_targets, is_weak_equivalence_against
from .lifting import (LiftingSquare, MapFamily, SquareEnumeration, check_llp_against,
                      is_kan_fibration_up_to, replay_anodyne, solve_lift)
from .limits import coproduct, is_monomorphism, product, pullback
from .minimal import acyclic_fibration_check
from .report import CheckRow, Report
from .search import DEFAULT_BUDGET, enumerate_maps
from .sset import SimplicialMap, compose, constant_map, identity, terminal_map
from .standard import discrete, point, simplex, vertex_map
from .verdict import Verdict, combine


@dataclass
class SuiteConfig:
    dim: int = 2
    stages: int = 2
    budget: int = DEFAULT_BUDGET
    jobs: int = 1
    factor_maps: tuple[str, ...] = ("!Δ0", "!Δ1", "∂1", "λ1_0", "q∂")
    mc2_pairs: int = 30
    extra_squares: list[LiftingSquare] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"dim": self.dim, "stages": self.stages, "budget": self.budget,
                "factor_maps": list(self.factor_maps), "mc2_pairs": self.mc2_pairs,
                "extra_squares": len(self.extra_squares)}


Check = tuple[str, str, Callable[[], Verdict]]


# -- MC1 -----------------------------------------------------------------

def _bijective(pairs_of: Callable, candidates, expected, budget) -> Verdict:
    images = [pairs_of(u) for u in candidates]
    ok = len(set(images)) == len(images) and set(images) == set(expected)
    if not ok:
        return Verdict.fail({"maps": len(images), "cones": len(expected)},
                            detail="comparison map is not a bijection")
    return Verdict.ok(maps=len(images))


def product_universal(A, B, tests, budget) -> Verdict:
    P = product(A, B)
    out = []
    for T in tests:
        us = enumerate_maps(T, P.obj, budget)
        xs, ys = enumerate_maps(T, A, budget), enumerate_maps(T, B, budget)
        if not (us.complete and xs.complete and ys.complete):
            out.append(Verdict.unknown(bound=T.dim))
            continue
        cones = {(x.key(), y.key()) for x in xs for y in ys}
        out.append(_bijective(lambda u: (compose(P.proj1, u).key(), compose(P.proj2, u).key()),
                              us, cones, budget))
    return combine(out, bound=max(T.dim for T in tests))


def pullback_universal(f, g, tests, budget) -> Verdict:
    P = pullback(f, g)
    out = []
    for T in tests:
        us = enumerate_maps(T, P.obj, budget)
        xs, ys = enumerate_maps(T, f.source, budget), enumerate_maps(T, g.source, budget)
        cones = {(x.key(), y.key()) for x in xs for y in ys
                 if compose(f, x).images == compose(g, y).images}
        out.append(_bijective(lambda u: (compose(P.proj1, u).key(), compose(P.proj2, u).key()),
                              us, cones, budget))
    return combine(out, bound=max(T.dim for T in tests))


def pushout_universal(P, tests, budget) -> Verdict:
    f, g = P.f, P.g
    out = []
    for T in tests:
        us = enumerate_maps(P.obj, T, budget)
        bs, cs = enumerate_maps(f.target, T, budget), enumerate_maps(g.target, T, budget)
        cocones = {(b.key(), c.key()) for b in bs for c in cs
                   if compose(b, f).images == compose(c, g).images}
        out.append(_bijective(lambda u: (compose(u, P.leg_b).key(), compose(u, P.leg_c).key()),
                              us, cocones, budget))
    return combine(out, bound=max(T.dim for T in tests))


def coproduct_universal(sets, tests, budget) -> Verdict:
    C = coproduct(sets, [f"t{i}" for i in range(len(sets))])
    out = []
    for T in tests:
        us = enumerate_maps(C.obj, T, budget)
        parts = [enumerate_maps(X, T, budget) for X in sets]
        expected = {(a.key(), b.key()) for a in parts[0] for b in parts[1]}
        out.append(_bijective(lambda u: tuple(compose(u, j).key() for j in C.injections),
                              us, expected, budget))
    return combine(out, bound=max(T.dim for T in tests))


def terminal_initial(corpus: Corpus, budget) -> Verdict:
    pt, empty = corpus.objects["Δ0"], corpus.objects["∅"]
    for name, X in corpus.objects.items():
        if len(X) > 15:
            continue
        if len(enumerate_maps(X, pt, budget)) != 1:
            return Verdict.fail({"object": name}, detail="maps to Δ0 are not unique")
        if len(enumerate_maps(empty, X, budget)) != 1:
            return Verdict.fail({"object": name}, detail="maps from ∅ are not unique")
    return Verdict.ok()


def mc1_checks(corpus: Corpus, cfg: SuiteConfig) -> list[Check]:
    b = cfg.budget
    o = corpus.objects
    tests = [o["Δ0"], o["Δ1"], o["∂Δ1"]]
    checks: list[Check] = [("MC1/terminal-initial", "MC1", lambda: terminal_initial(corpus, b))]
    for A, B in (("Δ1", "Δ1"), ("∂Δ1", "D2"), ("Λ2_1", "Δ1"), ("S1", "D2")):
        if A in o and B in o:
            checks.append((f"MC1/product {A}×{B}", "MC1",
                           lambda A=A, B=B: product_universal(o[A], o[B], tests + [o["Δ2"]], b)))
    S = circle()
    checks.append(("MC1/pushout S1", "MC1",
                   lambda: pushout_universal(S, [o["Δ1"], o["D2"], o["S1"], o["Δ2"]], b)))
    if "cover" in corpus.maps:
        q = corpus.maps["q_u"]
        checks.append(("MC1/pullback cover×_S1 Δ1", "MC1",
                       lambda: pullback_universal(corpus.maps["cover"], q, tests, b)))
    checks.append(("MC1/coproduct Δ1⊔D2", "MC1",
                   lambda: coproduct_universal([o["Δ1"], o["D2"]], [o["Δ1"], o["D2"], o["S1"]], b)))
    return checks


# -- MC2 -----------------------------------------------------------------

def _weq_table(maps: dict[str, SimplicialMap], budget) -> dict[str, Verdict]:
    targets = discrete_targets()
    return {n: is_weak_equivalence_against(f, targets, budget).verdict for n, f in maps.items()}


def two_of_three(wf: Verdict, wg: Verdict, wgf: Verdict) -> Verdict:
    vs = [wf, wg, wgf]
    held = [v.holds for v in vs]
    if sum(held) == 3:
        return Verdict.ok(detail="all three hold")
    if sum(held) == 2:
        other = vs[held.index(False)]
        if other.fails:
            return Verdict.fail({"index": held.index(False)}, detail="two hold, third fails")
        return Verdict.unknown(detail="two hold, third undecided")
    return Verdict.ok(detail="vacuous (fewer than two hold)")


def mc2_checks(corpus: Corpus, cfg: SuiteConfig) -> list[Check]:
    small = {n: f for n, f in corpus.maps.items()
             if len(f.source) <= 8 and len(f.target) <= 8 and f.source.dim <= 2 and f.target.dim <= 2}
    pairs = [(nf, ng) for nf, f in small.items() for ng, g in small.items()
             if f.target == g.source and not nf.startswith("id:")]
    pairs = sorted(random.Random(corpus.seed).sample(pairs, min(cfg.mc2_pairs, len(pairs))),
                   key=pairs.index)
    cache: dict[str, Verdict] = {}

    def run(nf, ng):
        f, g = small[nf], small[ng]
        if nf not in cache or ng not in cache:
            cache.update(_weq_table({nf: f, ng: g}, cfg.budget))
        wgf = _weq_table({"gf": compose(g, f)}, cfg.budget)["gf"]
        v = two_of_three(cache[nf], cache[ng], wgf)
        v.stats.update({"f": cache[nf].status.value, "g": cache[ng].status.value,
                        "gf": wgf.status.value})
        return v

    return [(f"MC2/{ng}∘{nf}", "MC2", lambda nf=nf, ng=ng: run(nf, ng)) for nf, ng in pairs]


# -- MC3 -----------------------------------------------------------------

def inherited(rd: RetractDiagram, prop: Callable[[SimplicialMap], Verdict]) -> Verdict:
    bad = rd.verify()
    if bad:
        return Verdict.fail({"identities": bad}, detail="not a retract diagram")
    pg, pf = prop(rd.g), prop(rd.f)
    stats = {"g": pg.status.value, "f": pf.status.value}
    if pg.holds and pf.fails:
        return Verdict.fail({"g": pg, "f": pf}, detail="property not inherited", **stats)
    if pg.holds and pf.holds:
        return Verdict.ok(detail="inherited", **stats)
    if pg.inconclusive or pf.inconclusive:
        return Verdict.unknown(detail="property undecided", **stats)
    return Verdict.ok(detail="vacuous (g lacks the property)", **stats)


def mc3_instances(corpus: Corpus, cfg: SuiteConfig) -> list[tuple[str, RetractDiagram]]:
    pt, I = point(), simplex(1)
    out = []
    c_pt, c_I = terminal_map(pt, pt), terminal_map(I, pt)
    out.append(("Δ0 ⊂ Δ1 over collapses", RetractDiagram(
        c_pt, c_I, vertex_map(I, "0"), c_I, identity(pt), identity(pt))))
    P = product(I, discrete(2))
    s0 = P.pair_maps(identity(I), constant_map(I, discrete(2), discrete(2).gen("p0")))
    out.append(("1_Δ1 ⊂ pr1:Δ1×D2", RetractDiagram(identity(I), P.proj1, s0, P.proj1,
                                                    identity(I), identity(I))))
    for name in ("λ1_0", "∂1"):
        i = corpus.maps[name]
        fam = MapFamily.horns(1) if name.startswith("λ") else MapFamily.boundaries(1)
        fz = factorize(i, fam, 1, 1, budget=cfg.budget)
        rd = retract_through_factorization(i, fz, cfg.budget)
        if rd is not None:
            out.append((f"{name} ⊂ its stage-1 left leg", rd))
    return out


def mc3_checks(corpus: Corpus, cfg: SuiteConfig) -> list[Check]:
    targets = discrete_targets()
    b = cfg.budget
    props: dict[str, Callable[[SimplicialMap], Verdict]] = {
        "weak-equivalence": lambda f: is_weak_equivalence_against(f, targets, b).verdict,
        "fibration": lambda f: is_kan_fibration_up_to(f, cfg.dim, b),
        "cofibration": lambda f: Verdict.ok() if is_monomorphism(f) else Verdict.fail(f.name),
    }
    checks: list[Check] = []
    for label, rd in mc3_instances(corpus, cfg):
        for pname, prop in props.items():
            checks.append((f"MC3/{label}/{pname}", "MC3", lambda rd=rd, prop=prop: inherited(rd, prop)))
    return checks


# -- MC4 -----------------------------------------------------------------

def lifts_all(i: SimplicialMap, p: SimplicialMap, budget) -> Verdict:
    en = SquareEnumeration(i, p, budget)
    total = 0
    for sq in en:
        total += 1
        res = solve_lift(sq, budget)
        if res.status == "none":
            return Verdict.fail({"square": sq}, bound=i.target.dim, squares=total)
        if not res.found:
            return Verdict.unknown(bound=i.target.dim, squares=total)
    if en.truncated:
        return Verdict.unknown(bound=i.target.dim, squares=total)
    return Verdict.ok(bound=i.target.dim, squares=total)


def single_square(sq: LiftingSquare, budget) -> Verdict:
    res = solve_lift(sq, budget)  # raises InvalidInput when the square does not commute
    if res.found:
        return Verdict.ok(bound=sq.i.target.dim)
    if res.status == "none":
        return Verdict.fail({"square": sq}, bound=sq.i.target.dim)
    return Verdict.unknown(bound=sq.i.target.dim)


def mc4_checks(corpus: Corpus, cfg: SuiteConfig) -> list[Check]:
    b, d = cfg.budget, cfg.dim
    checks: list[Check] = []
    acyclic = []
    for name, fe in corpus.fibrations.items():
        if fe.kind in ("isomorphism", "truncated") or name == "!Δ0":
            acyclic.append((name, fe.map))
    cofs = [(n, f) for n, f in corpus.cofibrations().items()
            if f.target.dim <= d and len(f.target) <= 7]
    for pname, p in acyclic:
        checks.append((f"MC4(i)/acyclic {pname}", "MC4",
                       lambda p=p: acyclic_fibration_check(p, d, b, truncated_at=3
                                                           if p.source.name.startswith("E(") else None).acyclic))
        for iname, i in cofs:
            checks.append((f"MC4(i)/{iname} vs {pname}", "MC4", lambda i=i, p=p: lifts_all(i, p, b)))
    fibs = [fe.map for fe in corpus.fibrations.values()]
    for tname, tr in corpus.traces.items():
        def run(tr=tr):
            r = replay_anodyne(tr)
            if r.result.dim > d:
                return Verdict.unknown(bound=d, detail="trace result above the checked dimension")
            rep = check_llp_against(r.inclusion, fibs, d, b)
            v = rep.verdict
            v.stats["squares"] = sum(row["squares"] for row in rep.rows)
            return v
        checks.append((f"MC4(ii)/{tname} vs fibrations", "MC4", run))
    for k, sq in enumerate(cfg.extra_squares):
        checks.append((f"MC4/extra square {k}", "MC4", lambda sq=sq: single_square(sq, b)))
    return checks


# -- MC5 -----------------------------------------------------------------

def factor_check(f: SimplicialMap, kind: str, cfg: SuiteConfig) -> Verdict:
    fam = MapFamily.horns(cfg.dim) if kind == "horns" else MapFamily.boundaries(cfg.dim)
    fz = factorize(f, fam, cfg.stages, cfg.dim, budget=cfg.budget)
    if not fz.exact():
        return Verdict.fail({"map": f}, detail="right∘left differs from f")
    if kind == "horns":
        try:
            left_ok = fz.replay_left()
        except CertificateRejected as exc:
            return Verdict.fail({"map": f}, detail=str(exc))
        if not left_ok:
            return Verdict.fail({"map": f}, detail="left leg trace does not replay")
        left = Verdict.ok()
    else:
        left = fz.injectivity
    v = combine([left, fz.rlp_report], bound=(cfg.stages, cfg.dim))
    v.stats.update({"G": list(fz.obj.counts()), "right": fz.rlp_report.status.value})
    if fz.rlp_report.fails:
        v.witness = fz.rlp_report.witness
    return v


def mc5_checks(corpus: Corpus, cfg: SuiteConfig) -> list[Check]:
    checks: list[Check] = []
    for name in cfg.factor_maps:
        if name not in corpus.maps:
            continue
        f = corpus.maps[name]
        for kind in ("horns", "boundaries"):
            checks.append((f"MC5/{kind} {name}", "MC5", lambda f=f, kind=kind: factor_check(f, kind, cfg)))
    return checks


# -- driver ----------------------------------------------------------------

def _run(check: Check) -> CheckRow:
    cid, group, fn = check
    t0 = time.perf_counter()
    try:
        v = fn()
    except InvalidInput as exc:
        return CheckRow.invalid(cid, group, str(exc))
    row = CheckRow.of(cid, group, v, time.perf_counter() - t0)
    if v.fails:
        row.replay = f"ssetlab verify-axioms --only '{cid}'"
    return row


def all_checks(corpus: Corpus, cfg: SuiteConfig) -> list[Check]:
    return (mc1_checks(corpus, cfg) + mc2_checks(corpus, cfg) + mc3_checks(corpus, cfg)
            + mc4_checks(corpus, cfg) + mc5_checks(corpus, cfg))


def verify_mc_suite(corpus: Corpus, cfg: SuiteConfig | None = None,
                    only: str | None = None) -> Report:
    cfg = cfg or SuiteConfig()
    report = Report("verify-axioms", {"seed": corpus.seed, **cfg.as_dict()})
    report.digests["corpus"] = corpus.digest()
    checks = [c for c in all_checks(corpus, cfg) if only is None or c[0] == only]
    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            rows = list(pool.map(_run, checks))  # map keeps submission order
    else:
        rows = [_run(c) for c in checks]
    for r in rows:
        report.add(r)
    return report
