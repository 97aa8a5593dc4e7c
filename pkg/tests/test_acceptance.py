"""The acceptance gate: nine criteria, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

from __future__ import annotations

import itertools
import random
import re
import subprocess
import sys
import time

import pytest

from wittram.fields import SeriesRing, TruncSeries, get_field
from wittram.filtration import (VERIFIED, verify_fbar_cbar, verify_kernel_identities, verify_pbar,
                                verify_vr_sequence)
from wittram.kato import (asw_conductor, asw_conductor_oracle, t_space, verify_cartier_detection,
                          verify_vr2_triangle)
from wittram.multivar import cech_one_minus_c_injectivity, verify_rel_log_sequence, verify_zi_bi_ladder
from wittram.suite import check_gh_roundtrip, check_operator_laws, check_witt_ghost
from wittram.witt import WittVector, teichmuller

SEED = 20240607
FORM_CONFIGS = [(p, e, m, q) for p in (2, 3) for e in (1, 2) for m in (1, 2, 3) for q in (0, 1)]


def _failures(reports):
    return [r for r in reports if r.status != VERIFIED]


def _summary(reports):
    bad = _failures(reports)
    if not bad:
        return True, f"{len(reports)} reports verified"
    r = bad[0]
    return False, f"{len(bad)}/{len(reports)} not verified; first: {r.claim} {r.params} {r.status} {r.witness}"


def criterion_1():
    cases = [(2, m) for m in range(1, 5)] + [(3, m) for m in range(1, 4)] + [(5, m) for m in range(1, 3)]
    return _summary([check_witt_ghost(p, m, 500, SEED + 10 * p + m, N=8) for p, m in cases])


def criterion_2():
    return _summary([check_operator_laws(p, e, m, q, 200, SEED + i) for i, (p, e, m, q) in enumerate(FORM_CONFIGS)])


def criterion_3():
    return _summary([check_gh_roundtrip(p, e, m, q, 200, SEED + i) for i, (p, e, m, q) in enumerate(FORM_CONFIGS)])


def criterion_4():
    reports = []
    for p, m, q, n in itertools.product((2, 3), (1, 2, 3), (0, 1), range(9)):
        for fn in (verify_vr_sequence, verify_fbar_cbar, verify_kernel_identities, verify_pbar):
            reports.append(fn(p, 1, m, q, n))
    return _summary(reports)


def criterion_5():
    reports = []
    for i, (p, m, q, n) in enumerate(itertools.product((2, 3), (1, 2, 3), (0, 1), (0, 1, 3, 5))):
        reports.append(verify_cartier_detection(p, 1, m, q, n, samples=100, seed=SEED + i))
    ok, detail = _summary(reports)
    lopsided = [r for r in reports if r.dims["inside"] == 0 or r.dims["outside"] == 0]
    if ok and lopsided:
        return False, f"{len(lopsided)} configurations missed one direction"
    return ok, detail


def criterion_6():
    problems = []
    count = 0
    for p, m, q in itertools.product((2, 3), (1, 2, 3), (0, 1)):
        prev = None
        for n in range(9):
            ts = t_space(p, 1, m, q, n)
            count += 1
            if not ts.stable:
                problems.append(f"T({p},{m},{q},{n}) unstable: {ts.length} vs {ts.length_2x}")
            if not ts.injective:
                problems.append(f"T_{n - 1} -> T_{n} not injective at (p,m,q)=({p},{m},{q})")
            if prev is not None and ts.length < prev:
                problems.append(f"length dropped at (p,m,q,n)=({p},{m},{q},{n})")
            prev = ts.length
            rep = verify_vr2_triangle(p, 1, m, q, n)
            count += 1
            if rep.status != VERIFIED:
                problems.append(f"vr2 triangle {rep.params}: {rep.witness}")
    if problems:
        return False, f"{len(problems)} problems; first: {problems[0]}"
    return True, f"{count} t-space and triangle checks verified"


def _classes(p, e, m, rng):
    """Every polar part with pole order <= 6 in each coordinate, with a seeded tail at precision 16."""
    fq = get_field(p, e)
    ring = SeriesRing(fq)
    per = list(itertools.product(range(fq.q), repeat=6))
    for combo in itertools.product(per, repeat=m):
        coords = []
        for digits in combo:
            terms = {-6 + i: c for i, c in enumerate(digits) if c}
            for k in range(16):
                if rng.random() < 0.3:
                    terms[k] = rng.randrange(1, fq.q)
            coords.append(TruncSeries.from_dict(fq, terms, 16))
        yield WittVector(ring, coords, p)


def criterion_7():
    rng = random.Random(SEED)
    bad, count = [], 0
    for p, e, m in [(2, 1, 1), (2, 1, 2), (3, 1, 1)]:
        for a in _classes(p, e, m, rng):
            count += 1
            expected = asw_conductor_oracle(a)
            got = (asw_conductor(a), asw_conductor(a, "canonical"))
            if got != (expected, expected):
                bad.append(f"{a}: oracle {expected}, computed {got}")
        fq = get_field(p, e)
        ring = SeriesRing(fq)
        for j in range(1, 6):
            if j % p == 0:
                continue
            for u in range(1, fq.q):
                a = teichmuller(TruncSeries.monomial(fq, u, -j), m, ring)
                expected = asw_conductor_oracle(a)
                count += 1
                if expected != p ** (m - 1) * j or asw_conductor(a) != expected:
                    bad.append(f"[{u} pi^-{j}]_{m}: oracle {expected}, computed {asw_conductor(a)}")
    if bad:
        return False, f"{len(bad)}/{count} mismatches; first: {bad[0]}"
    return True, f"{count} classes agree with the oracle"


def criterion_8():
    reports = []
    for r in (1, 2):
        for q in range(3):
            for n in itertools.product(range(3), repeat=r):
                if min(n) >= 1:  # the relative sequence needs a divisor with positive multiplicities
                    reports.append(verify_rel_log_sequence(2, 1, 2, r, n, q, prec=6))
                for i in (1, 2, 3):
                    reports.append(verify_zi_bi_ladder(2, 1, 2, r, i, q, n, prec=6))
    for n, m2, q in itertools.product(range(3), range(3), range(3)):
        reports.append(cech_one_minus_c_injectivity(2, 1, n, m2, q, prec=6))
    return _summary(reports)


_MS = re.compile(r'"ms": \d+')


def _verify_run() -> tuple[int, str]:
    proc = subprocess.run([sys.executable, "-m", "wittram.cli", "verify", "--suite", "all", "--seed", "7",
                           "--prec", "12"], capture_output=True, text=True, encoding="utf-8")
    return proc.returncode, proc.stdout


def criterion_9():
    (c1, a), (c2, b) = _verify_run(), _verify_run()
    if c1 != c2:
        return False, f"exit codes differ: {c1} vs {c2}"
    a, b = _MS.sub('"ms": 0', a), _MS.sub('"ms": 0', b)
    if not a or a != b:
        return False, "reports differ outside timing fields"
    return True, f"identical reports ({len(a)} bytes, exit {c1})"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


def _run(k: int) -> tuple[bool, str]:
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k - 1]()
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t0:.1f} s) {detail}"
    return ok, line


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k, capsys):
    ok, line = _run(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for k in range(1, 10):
        results.append(_run(k))
        print(results[-1][1], flush=True)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
