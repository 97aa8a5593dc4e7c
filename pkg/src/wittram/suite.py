"""Seeded verification suites and the property checks behind them.

A suite is an ordered list of tasks.  Each task is a verifier call with
fixed parameters plus, for randomized checks, a seed derived from the suite
seed and the task label, so any single task can be replayed on its own.  The
aggregate report is deterministic given (suite, seed, prec) apart from the
``ms`` timing fields.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from . import filtration, kato, multivar
from .canonical import CanonicalForm, format_form, from_canonical, op_d, op_F, op_R, op_V, to_canonical
from .errors import WittramError
from .fields import SeriesRing, TruncSeries, format_series, get_field
from .filtration import FALSIFIED, INCONCLUSIVE, VERIFIED, VerifierReport
from .formexpr import normalize_form
from .sampling import random_form, random_series, random_witt
from .witt import IntTruncPolyRing, WittVector, coords_from_ghost, ghost_components, teichmuller

SUITES = ("witt", "filtration", "kato", "multivar", "all")


def derive_seed(seed: int, label: str) -> int:
    """A task seed that depends only on the suite seed and the task label."""
    return random.Random(f"{seed}:{label}").randrange(2**31)


def _report(claim: str, params: dict, failure: str | None, dims: dict, t0: float) -> VerifierReport:
    status = VERIFIED if failure is None else FALSIFIED
    return VerifierReport(claim, params, status, dims, failure, int((time.perf_counter() - t0) * 1000))


# ---------------------------------------------------------------------------
# Witt arithmetic against the ghost oracle
# ---------------------------------------------------------------------------


def _lift(s: TruncSeries, N: int) -> tuple:
    return tuple(s.coefficient(i) for i in range(N))


def _reduce(x: tuple, p: int) -> tuple:
    return tuple(c % p for c in x)


def _ghost_result(op: str, a: list, b: list | None, p: int, Z: IntTruncPolyRing) -> list:
    ga = ghost_components(a, p, Z)
    if op == "add":
        g = [Z.add(x, y) for x, y in zip(ga, ghost_components(b, p, Z))]
    elif op == "mul":
        g = [Z.mul(x, y) for x, y in zip(ga, ghost_components(b, p, Z))]
    elif op == "F":
        g = ga[1:]
    elif op == "V":
        g = [Z.zero()] + [Z.scale(x, p) for x in ga]
    elif op == "R":
        g = ga[:-1]
    else:
        raise ValueError(op)
    return coords_from_ghost(g, p, Z)


def check_witt_ghost(p: int, m: int, samples: int, seed: int, N: int = 8) -> VerifierReport:
    """add, mul, F, V and R over F_p[t]/(t^N) agree with ghost arithmetic on integer lifts."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    fq = get_field(p, 1)
    ring = SeriesRing(fq)
    Z = IntTruncPolyRing(N, p)
    failure = None
    ops = ("add", "mul", "F", "V", "R")
    counts = {op: 0 for op in ops}
    for k in range(samples):
        op = ops[k % len(ops)]
        if op == "F" and m == 1 or op == "R" and m == 1:
            op = "add"
        counts[op] += 1
        rand = lambda: TruncSeries.from_dict(fq, {i: rng.randrange(p) for i in range(N)}, N)
        a = WittVector(ring, [rand() for _ in range(m)])
        b = WittVector(ring, [rand() for _ in range(m)])
        got = {"add": lambda: a + b, "mul": lambda: a * b, "F": a.frobenius_down,
               "V": a.verschiebung, "R": a.restriction}[op]()
        want = _ghost_result(op, [_lift(x, N) for x in a.coords],
                             [_lift(x, N) for x in b.coords], p, Z)
        if [_lift(x, N) for x in got.coords] != [_reduce(x, p) for x in want]:
            failure = f"{op} at a={a!r}, b={b!r}"
            break
    return _report("witt-ghost", {"p": p, "m": m, "N": N, "samples": samples, "seed": seed},
                   failure, counts, t0)


# ---------------------------------------------------------------------------
# de Rham-Witt operator laws
# ---------------------------------------------------------------------------


def _laws(f: CanonicalForm, g: CanonicalForm) -> list[tuple[str, CanonicalForm, CanonicalForm]]:
    """Pairs (name, lhs, rhs) for f at level m and g at level m + 1, both of degree q."""
    p = f.p
    out = [
        ("FV = p", op_F(op_V(f)), f.int_mul(p)),
        ("VF = p", op_V(op_F(g)), g.int_mul(p)),
        ("RV = VR", op_R(op_V(f)), op_V(op_R(f))),
        ("RF = FR", op_R(op_F(g)), op_F(op_R(g))),
    ]
    if f.q == 0:
        out += [
            ("FdV = d", op_F(op_d(op_V(f))), op_d(f)),
            ("dF = pFd", op_d(op_F(g)), op_F(op_d(g)).int_mul(p)),
            ("p dV = V d", op_d(op_V(f)).int_mul(p), op_V(op_d(f))),
            ("Rd = dR", op_R(op_d(g)), op_d(op_R(g))),
        ]
    return out


def check_operator_laws(p: int, e: int, m: int, q: int, samples: int, seed: int, hi: int = 12) -> VerifierReport:
    """The operator identities on random canonical forms, plus F d[a] = [a]^(p-1) d[a]."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    checked = 0
    fq = get_field(p, e)
    ring = SeriesRing(fq)
    for _ in range(samples):
        f = random_form(rng, p, e, m, q, -6, 8)
        g = random_form(rng, p, e, m + 1, q, -6, 8)
        for name, lhs, rhs in _laws(f, g):
            checked += 1
            if not lhs.agrees_with(rhs):
                failure = f"{name} at f={format_form(f)}, g={format_form(g)}"
                break
        if failure:
            break
        if q == 0:
            a = random_series(rng, p, e, -3, 4, prec=None, density=0.6)
            if a.is_zero():
                continue
            H = hi
            lhs = op_F(op_d(to_canonical(teichmuller(a, m + 1, ring), hi=H)))
            rhs = to_canonical(teichmuller(a ** (p - 1), m, ring), hi=H) * op_d(to_canonical(teichmuller(a, m, ring), hi=H))
            checked += 1
            if not lhs.agrees_with(rhs):
                failure = f"F d[a] = [a]^(p-1) d[a] at a={format_series(a)}"
                break
    return _report("operator-laws", {"p": p, "e": e, "m": m, "q": q, "samples": samples, "seed": seed},
                   failure, {"identities": checked}, t0)


# ---------------------------------------------------------------------------
# Geisser-Hesselholt decomposition round trips
# ---------------------------------------------------------------------------


def check_gh_roundtrip(p: int, e: int, m: int, q: int, samples: int, seed: int, hi: int = 12) -> VerifierReport:
    """to_canonical and from_canonical are inverse within precision."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    for _ in range(samples):
        f = random_form(rng, p, e, m, q, -5, hi, density=0.4)
        back = to_canonical(from_canonical(f), hi=hi) if q == 0 else normalize_form(from_canonical(f), hi=hi)
        if not back.agrees_with(f.truncate(hi)):
            failure = f"canonical -> witt -> canonical at {format_form(f)}"
            break
        if q == 0:
            w = random_witt(rng, p, e, m, 4, prec=hi, density=0.5)
            c = to_canonical(w, hi=hi)
            w2 = from_canonical(c)
            if not all(x.agrees_with(y) for x, y in zip(w2.coords, w.coords)):
                failure = f"witt -> canonical -> witt at {w!r}"
                break
    return _report("gh-roundtrip", {"p": p, "e": e, "m": m, "q": q, "samples": samples, "seed": seed, "prec": hi},
                   failure, {"samples": samples}, t0)


# ---------------------------------------------------------------------------
# kato-swan report wrappers
# ---------------------------------------------------------------------------


def check_t_space(p: int, e: int, m: int, q: int, n: int, prec: int | None = None) -> VerifierReport:
    """t_space is stable under doubling, injective from n-1, and matches the oracle where one exists."""
    t0 = time.perf_counter()
    ts = kato.t_space(p, e, m, q, n, prec)
    dims = {"length": ts.length, "length_2x": ts.length_2x}
    failure = None
    if ts.status == FALSIFIED:
        failure = "T_{n-1} -> T_n has a kernel"
    oracle = None
    if q == 0 or m == 1:
        oracle = kato.t_space_oracle(p, e, m, q, n)
        dims["oracle"] = oracle
        if failure is None and ts.stable and oracle != ts.length:
            failure = f"window length {ts.length} differs from oracle {oracle}"
    rep = _report("t-space", {"p": p, "e": e, "m": m, "q": q, "n": n, "prec": ts.prec}, failure, dims, t0)
    if failure is None and not ts.stable:
        rep.status = INCONCLUSIVE
    return rep


def check_conductors(p: int, e: int, m: int, pole: int, samples: int, seed: int, prec: int = 16) -> VerifierReport:
    """The reduction, the canonical route and the oracle agree on random Witt vectors."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    failure = None
    top = 0
    for _ in range(samples):
        a = random_witt(rng, p, e, m, pole, prec=prec, density=0.5)
        vals = {meth: kato.asw_conductor(a, meth) for meth in ("witt", "canonical")}
        vals["oracle"] = kato.asw_conductor_oracle(a)
        top = max(top, vals["oracle"])
        if len(set(vals.values())) != 1:
            failure = f"conductors {vals} at {a!r}"
            break
    return _report("asw-conductor", {"p": p, "e": e, "m": m, "pole": pole, "samples": samples, "seed": seed,
                                     "prec": prec}, failure, {"max_conductor": top}, t0)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Task:
    label: str
    fn: str
    kwargs: tuple

    def run(self) -> VerifierReport:
        try:
            return _FUNCS[self.fn](**dict(self.kwargs))
        except WittramError as exc:
            params = {k: v for k, v in self.kwargs}
            return VerifierReport(self.fn, params, INCONCLUSIVE, {}, f"{type(exc).__name__}: {exc}", 0)


_FUNCS: dict[str, Callable[..., VerifierReport]] = {
    "witt-ghost": check_witt_ghost,
    "operator-laws": check_operator_laws,
    "gh-roundtrip": check_gh_roundtrip,
    "vr-sequence": filtration.verify_vr_sequence,
    "fbar-cbar": filtration.verify_fbar_cbar,
    "kernel-identities": filtration.verify_kernel_identities,
    "pbar": filtration.verify_pbar,
    "fil-decomposition": filtration.verify_fil_decomposition,
    "t-space": check_t_space,
    "graded-kato": kato.verify_graded_kato,
    "vr2-triangle": kato.verify_vr2_triangle,
    "cartier-detection": kato.verify_cartier_detection,
    "asw-conductor": check_conductors,
    "rel-log-sequence": multivar.verify_rel_log_sequence,
    "zi-bi-ladder": multivar.verify_zi_bi_ladder,
    "cech-1-c-injectivity": multivar.cech_one_minus_c_injectivity,
}


def _task(fn: str, seed: int | None = None, **kw) -> Task:
    label = fn + "(" + ",".join(f"{k}={kw[k]}" for k in sorted(kw)) + ")"
    if seed is not None:
        kw["seed"] = derive_seed(seed, label)
    return Task(label, fn, tuple(sorted(kw.items())))


def _witt_tasks(seed: int, prec: int) -> list[Task]:
    out = []
    for p, ms in ((2, 4), (3, 3), (5, 2)):
        for m in range(1, ms + 1):
            out.append(_task("witt-ghost", seed, p=p, m=m, samples=20))
    for p in (2, 3):
        for m in (1, 2):
            for q in (0, 1):
                out.append(_task("operator-laws", seed, p=p, e=1, m=m, q=q, samples=10))
                out.append(_task("gh-roundtrip", seed, p=p, e=1, m=m, q=q, samples=5, hi=prec))
    return out


def _filtration_tasks(seed: int, prec: int) -> list[Task]:
    out = []
    for p in (2, 3):
        for m in (1, 2):
            for q in (0, 1):
                for n in (0, 1, 3):
                    for fn in ("vr-sequence", "fbar-cbar", "kernel-identities", "pbar"):
                        out.append(_task(fn, p=p, e=1, m=m, q=q, n=n, prec=prec))
            out.append(_task("fil-decomposition", p=p, e=1, m=m, n=3, prec=prec))
    return out


def _kato_tasks(seed: int, prec: int) -> list[Task]:
    out = []
    for p in (2, 3):
        for m in (1, 2):
            for q in (0, 1):
                for n in (1, 3):
                    out.append(_task("t-space", p=p, e=1, m=m, q=q, n=n, prec=prec))
                    out.append(_task("vr2-triangle", p=p, e=1, m=m, q=q, n=n, prec=prec))
                out.append(_task("cartier-detection", seed, p=p, e=1, m=m, q=q, n=2, samples=10, prec=prec))
            out.append(_task("graded-kato", p=p, e=1, m=m, n=4, prec=prec))
    for p, m in ((2, 1), (2, 2), (3, 1)):
        out.append(_task("asw-conductor", seed, p=p, e=1, m=m, pole=4, samples=10, prec=prec))
    return out


def _multivar_tasks(seed: int, prec: int) -> list[Task]:
    B = max(2, min(prec, multivar.MAX_B))
    out = []
    for r in (1, 2):
        for q in (0, 1, 2):
            out.append(_task("rel-log-sequence", p=2, e=1, d=2, r=r, n=(1,) * r, q=q, prec=B))
            out.append(_task("zi-bi-ladder", p=2, e=1, d=2, r=r, i=1, q=q, n=(1,) * r, prec=B))
    for q in (0, 1, 2):
        out.append(_task("cech-1-c-injectivity", p=2, e=1, n=1, m2=1, q=q, prec=B))
    return out


_BUILDERS = {
    "witt": _witt_tasks,
    "filtration": _filtration_tasks,
    "kato": _kato_tasks,
    "multivar": _multivar_tasks,
}


def suite_tasks(suite: str, seed: int = 0, prec: int = 12) -> list[Task]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    names = [s for s in SUITES if s != "all"] if suite == "all" else [suite]
    return [t for name in names for t in _BUILDERS[name](seed, prec)]


def _run_task(task: Task) -> dict:
    rep = task.run()
    out = rep.to_dict()
    out["task"] = task.label
    return out


@dataclass
class SuiteResult:
    suite: str
    seed: int
    prec: int
    reports: list = field(default_factory=list)
    ms: int = 0

    @property
    def counts(self) -> dict:
        out = {VERIFIED: 0, FALSIFIED: 0, INCONCLUSIVE: 0}
        for r in self.reports:
            out[r["status"]] = out.get(r["status"], 0) + 1
        return out

    @property
    def status(self) -> str:
        c = self.counts
        if c[FALSIFIED]:
            return FALSIFIED
        if c[INCONCLUSIVE]:
            return INCONCLUSIVE
        return VERIFIED

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "prec": self.prec, "status": self.status,
                "counts": self.counts, "reports": self.reports, "ms": self.ms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def run_suite(suite: str, seed: int = 0, prec: int = 12, jobs: int = 1) -> SuiteResult:
    """Run every task of ``suite``; reports keep the task order whatever ``jobs`` is."""
    t0 = time.perf_counter()
    tasks = suite_tasks(suite, seed, prec)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_task, tasks))
    else:
        reports = [_run_task(t) for t in tasks]
    return SuiteResult(suite, seed, prec, reports, int((time.perf_counter() - t0) * 1000))


def strip_timing(obj: Any) -> Any:
    """A copy of a report tree without its ``ms`` fields."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "ms"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj
