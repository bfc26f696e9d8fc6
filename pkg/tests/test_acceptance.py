"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (printed with ``-s`` and repeated in
the terminal summary). Run with ``pytest tests/test_acceptance.py -s``.
"""

import json
import time

import numpy as np
import pytest

from conftest import record
from oracles import brute_canonical, brute_classes

from butson.algebra import MonomialPair, act_variants, apply
from butson.catalog import compare_profile, load_reference, reference_minor_sizes
from butson.cli import main
from butson.equivalence import are_equivalent, canonical_form
from butson.families import (
    bundled_family_names,
    evaluate,
    load_bundled,
    members,
    parametrize_blocks,
    parametrize_spl1,
    verify_family,
)
from butson.invariants import defect, defect_basis, profile
from butson.search import classify, double_count_check

SEED = 20240917


@pytest.fixture(scope="module")
def report10(tmp_path_factory):
    out = tmp_path_factory.mktemp("bh4_10")
    t = time.perf_counter()
    code = main(["search", "4", "10", "--out", str(out)])
    elapsed = time.perf_counter() - t
    rep = json.loads((out / "report.json").read_text())
    return code, rep, out, elapsed


def test_criterion_1_classification_n10(report10):
    code, rep, out, elapsed = report10
    files = list(out.glob("*.bh"))
    ok = code == 0 and rep["complete"] and rep["classes"] == 10 and rep["actClasses"] == 7 and len(files) == 10
    record(1, ok, f"search 4 10: {rep['classes']} classes, {rep['actClasses']} ACT classes in {elapsed:.1f}s")
    assert ok


def test_criterion_2_table1(table10):
    bad = []
    t = time.perf_counter()
    for row in table10:
        p = profile(row.matrix(), minor_sizes=(3,))
        diffs = compare_profile(row, p, 10)
        if diffs:
            bad.append((row.act_class, diffs))
    ok = len(table10) == 7 and not bad
    record(2, ok, f"{len(table10)} representatives, mismatches {bad or 'none'}, {time.perf_counter() - t:.1f}s")
    assert ok


def test_criterion_3_isolation_n14():
    M = evaluate(load_bundled("L14A"), [], 4)
    d = defect(M)
    variants = [M, *act_variants(M)]
    distinct = all(not are_equivalent(a, b) for i, a in enumerate(variants) for b in variants[i + 1:])
    spl1, blocks = parametrize_spl1(M), parametrize_blocks(M)
    ok = d == 0 and distinct and not spl1 and not blocks
    record(3, ok, f"defect {d}, ACT variants pairwise inequivalent {distinct}, "
                  f"spl1 {len(spl1)} families, blocks {len(blocks)} families")
    assert ok


def test_criterion_4_family_verification():
    t = time.perf_counter()
    names = bundled_family_names()
    failed = [name for name in names if not verify_family(load_bundled(name))]
    elapsed = time.perf_counter() - t
    required = {"D10", "N10B", "G10", "H12B", "H12C", "D12", "X12", "D14", "L12A", "L12B"}
    required |= {f"B12{c}" for c in "ABCDEFGHIJKLMNOPQ"}
    ok = required <= set(names) and not failed and elapsed < 60
    record(4, ok, f"{len(names)} families, failed {failed or 'none'}, {elapsed:.2f}s")
    assert ok


def test_criterion_5_membership():
    want = {"D10": 3, "N10B": 2, "D14": 14}
    got = {name: len(members(load_bundled(name), 4).act_classes) for name in want}
    ok = got == want
    record(5, ok, f"ACT classes {got}")
    assert ok


def test_criterion_6_table3_spot_checks(table12):
    rng = np.random.default_rng(SEED)
    picks = sorted(set(rng.choice(len(table12), 10, replace=False).tolist()) | {0})
    bad = []
    for k in picks:
        row = table12[k]
        diffs = compare_profile(row, profile(row.matrix(), reference_minor_sizes(12)), 12)
        if diffs:
            bad.append((row.act_class, diffs))
    classes = [table12[k].act_class for k in picks]
    ok = table12[0].act_class == 1 and not bad
    record(6, ok, f"classes {classes}, mismatches {bad or 'none'}")
    assert ok


def test_criterion_7_double_count(report10):
    results = {}
    for q, n in [(2, 4), (2, 8), (4, 6), (4, 8)]:
        results[(q, n)] = double_count_check(classify(q, n))[0]
    levels = report10[1]["levels"]
    results[(4, 10)] = report10[1]["doubleCount"]["consistent"] and all(
        lvl["labeledCountA"] == lvl["labeledCountB"] for lvl in levels
    )
    ok = all(results.values())
    record(7, ok, ", ".join(f"{k}: {v}" for k, v in results.items()))
    assert ok


def test_criterion_8_brute_force_oracle():
    t = time.perf_counter()
    out = {}
    for q, n in [(2, 4), (3, 3), (4, 4)]:
        agree = True
        for rep in classify(q, n):
            ours = [brute_canonical(x.matrix.L, q) for x in rep.classReps]
            agree &= len(ours) == len(set(ours)) and set(ours) == brute_classes(q, rep.m, n)
        out[(q, n)] = agree
    elapsed = time.perf_counter() - t
    ok = all(out.values()) and elapsed < 300
    record(8, ok, f"{out}, {elapsed:.1f}s")
    assert ok


def _residual(H, R, eps):
    Hp = H * np.exp(1j * eps * R)
    return np.linalg.norm(Hp @ Hp.conj().T - H.shape[0] * np.eye(H.shape[0]))


def test_criterion_9_properties(table10):
    rng = np.random.default_rng(SEED)
    reps = [row.matrix() for row in table10]

    # canonical form under 1000 random transforms, spread over the representatives
    canon_ok = True
    for k in range(1000):
        M = reps[k % len(reps)]
        g = MonomialPair.random(M.q, M.m, M.n, rng)
        canon_ok &= canonical_form(apply(M, g)) == canonical_form(M)

    # full invariant profile under 200 transforms per representative
    prof_ok = True
    for M in reps:
        base = profile(M, minor_sizes=(3,))
        for _ in range(200):
            g = MonomialPair.random(M.q, M.m, M.n, rng)
            prof_ok &= profile(apply(M, g), minor_sizes=(3,)) == base

    # first-order directions leave an O(eps^2) unitarity residual
    eps = np.array([1e-2, 1e-3, 1e-4])
    slopes = []
    for M in reps[:3]:
        H = M.to_complex()
        for R in defect_basis(M).matrices:
            res = np.array([_residual(H, np.asarray(R, dtype=float), e) for e in eps])
            if res.max() < 1e-12:
                slopes.append(np.inf)  # the direction is tangent to an exact family
                continue
            slopes.append(np.polyfit(np.log(eps), np.log(res), 1)[0])
    fit_ok = len(slopes) > 0 and min(slopes) >= 1.9
    finite = [s for s in slopes if np.isfinite(s)]
    ok = canon_ok and prof_ok and fit_ok
    record(9, ok, f"canonical invariance {canon_ok}, profile invariance {prof_ok}, "
                  f"{len(slopes)} directions, {len(slopes) - len(finite)} exact, "
                  f"min fit exponent {min(finite) if finite else float('nan'):.3f}")
    assert ok
