"""Acceptance criteria at their stated sizes and tolerances.

Each test records one PASS/FAIL line, printed in the pytest terminal summary
and when this file is run as a script.
"""
import time
from pathlib import Path

import numpy as np
import pytest

from psdcomplete.chordal import PatternGraph, is_chordal
from psdcomplete.cli import main
from psdcomplete.completion import PartialHermitianMatrix, complete, verify_det_maximality
from psdcomplete.fileio import read_partial, write_partial
from psdcomplete.generators import random_chordal_graph, random_gram, random_graph, random_maximal_rank, random_partial, random_psd
from psdcomplete.linalg import numerical_rank, pinv
from psdcomplete.semidefinite import (
    banachiewicz_pinv,
    gendet,
    gendet_limit,
    schur_complement,
    split,
    verify_fischer,
    verify_schur_det,
)

from oracles import adjacency_bits, completion_3x3, graph_from_index, has_chordless_cycle

pytestmark = pytest.mark.acceptance

FIX = Path(__file__).parent / "fixtures"
RESULTS: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)


def rel(a, b):
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / max(np.linalg.norm(b), 1e-300)


def test_1_penrose():
    rng = np.random.default_rng(1)
    mats = []
    for i in range(500):
        n = int(rng.integers(1, 21))
        r = n if i % 2 == 0 else int(rng.integers(1, n + 1))
        mats.append(random_gram(n, r, rng))
    start = time.perf_counter()
    inverses = [pinv(H) for H in mats]
    elapsed = time.perf_counter() - start
    worst = 0.0
    for H, X in zip(mats, inverses):
        HX, XH = H @ X, X @ H
        worst = max(worst, rel(HX @ H, H), rel(X @ H @ X, X),
                    rel(HX.conj().T, HX), rel(XH.conj().T, XH), rel(X.conj().T, X))
    ok = worst <= 1e-8 and elapsed < 10
    record(1, ok, f"500 matrices, worst Penrose residual {worst:.2e}, {elapsed:.2f} s")
    assert ok


def test_2_gendet():
    rng = np.random.default_rng(2)
    worst_det = worst_limit = worst_scale = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 13))
        H = random_psd(n, n, rng)
        worst_det = max(worst_det, abs(gendet(H) - np.linalg.det(H).real) / abs(np.linalg.det(H)))
    for i in range(200):
        n = int(rng.integers(2, 13))
        r = int(rng.integers(1, n))
        H = random_gram(n, r, rng) if i % 2 else random_psd(n, r, rng)
        assert numerical_rank(H) == r
        g = gendet(H)
        worst_limit = max(worst_limit, abs(g - gendet_limit(H, r)) / abs(g))
        c = float(rng.uniform(0.1, 10))
        worst_scale = max(worst_scale, abs(gendet(c * H) - c ** r * g) / abs(c ** r * g))
    ok = worst_det <= 1e-8 and worst_limit <= 1e-6 and worst_scale <= 1e-8
    record(2, ok, f"det {worst_det:.2e}, limit {worst_limit:.2e} (200 singular), c^r scaling {worst_scale:.2e}")
    assert ok


def test_3_block_results():
    rng = np.random.default_rng(3)
    fails = []
    zero_b = equal = 0
    for i in range(300):
        n = int(rng.integers(2, 13))
        k = int(rng.integers(1, n))
        low = 0 if i % 10 == 1 else 1  # a zero-rank block now and then
        H = random_maximal_rank(n, k, int(rng.integers(low, k + 1)), int(rng.integers(low, n - k + 1)), rng,
                                zero_b=i % 5 == 0)
        f = verify_fischer(H, k)
        b_small = np.linalg.norm(split(H, k).B) <= 1e-12
        zero_b += b_small
        equal += f.equality
        scale = np.abs(np.linalg.eigvalsh(H)).max()
        checks = {
            "fischer": f.holds and f.equality == b_small,
            "schur": verify_schur_det(H, k).holds,
            "banachiewicz": rel(banachiewicz_pinv(H, k), pinv(H)) <= 1e-8,
            "schur rank": numerical_rank(schur_complement(H, k), scale=scale) == numerical_rank(split(H, k).C, scale=scale),
        }
        fails += [(i, name) for name, good in checks.items() if not good]
    ok = not fails
    record(3, ok, f"300 matrices, {zero_b} with B = 0, {equal} Fischer equalities, failures {fails[:5]}")
    assert ok


def test_4_chordality_oracle():
    start = time.perf_counter()
    mismatches = count = 0
    for n in range(1, 7):
        for code in range(2 ** (n * (n - 1) // 2)):
            adj = graph_from_index(n, code)
            count += 1
            mismatches += is_chordal(PatternGraph(adj)).chordal == has_chordless_cycle(adjacency_bits(adj))
    rng = np.random.default_rng(4)
    for _ in range(2000):
        G = random_graph(int(rng.integers(7, 10)), float(rng.uniform(0.15, 0.85)), rng)
        count += 1
        mismatches += is_chordal(G).chordal == has_chordless_cycle(adjacency_bits(G.adjacency))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    record(4, ok, f"{count} graphs, {mismatches} mismatches, {elapsed:.1f} s")
    assert ok


def completion_checks(P, H):
    """Criterion 5 checks on a completed matrix; returns failure labels."""
    bad = []
    w = np.linalg.eigvalsh(H)
    if w[0] < -1e-9 * max(w[-1], 0):
        bad.append("psd")
    if not np.array_equal(H[P.specified], P.entries[P.specified]):
        bad.append("preserved")
    return bad


def zero_pattern_ratio(P, H):
    Hp = np.linalg.pinv(H, rcond=1e-9, hermitian=True)
    pos = P.unspecified_positions()
    if not pos or not Hp.any():
        return 0.0
    return max(abs(Hp[i, j]) for i, j in pos) / np.linalg.norm(Hp)


def random_instance(rng, i):
    n = int(rng.integers(2, 13))
    G = random_chordal_graph(n, float(rng.uniform(0.1, 0.5)), rng)
    return random_partial(G, ("pd", "maximal_rank")[i % 2], rng)


def test_5_completion():
    rng = np.random.default_rng(5)
    fails = []
    singular = with_hyp = 0
    worst = 0.0
    for i in range(200):
        P = random_instance(rng, i)
        r = complete(P)
        bad = completion_checks(P, r.completed)
        singular += r.rank < P.n
        if r.hypotheses_hold:
            with_hyp += 1
            ratio = zero_pattern_ratio(P, r.completed)
            worst = max(worst, ratio)
            if not r.rank_additive:
                bad.append("rank additivity")
            if ratio > 1e-8:
                bad.append("zero pattern")
        fails += [(i, b) for b in bad]
    ok = not fails
    record(5, ok, f"200 completions ({singular} singular, {with_hyp} with hypotheses), "
                  f"worst pinv ratio {worst:.2e}, failures {fails[:5]}")
    assert ok


def test_6_det_maximality():
    rng = np.random.default_rng(6)
    status = {"passed": 0, "failed": 0, "vacuous": 0}
    admissible = 0
    for i in range(50):
        P = random_instance(rng, i)
        H = complete(P).completed
        for magnitude in (1e-3, 1e-6):
            rep = verify_det_maximality(P, H, trials=100, magnitude=magnitude, rng=rng, rtol=1e-9)
            status[rep.status] += 1
            admissible += rep.admissible
    ok = status["failed"] == 0 and status["passed"] > 0
    record(6, ok, f"100 runs: {status['passed']} passed, {status['failed']} failed, "
                  f"{status['vacuous']} vacuous (not counted), {admissible} admissible perturbations")
    assert ok


def test_7_worked_fixture():
    P = read_partial(FIX / "fixture.phm")
    x_ref, H_ref, det_ref = completion_3x3(1.0, 1.0, 2.0, 1.0, 1.0)
    r = complete(P)
    H = r.completed
    inv = np.linalg.inv(H)
    ok = (x_ref == 0.5 and det_ref == 0.5 and abs(H[0, 2] - 0.5) <= 1e-15
          and abs(np.linalg.det(H) - 0.5) <= 1e-12 and abs(r.gendet_value - 0.5) <= 1e-12
          and abs(inv[0, 2]) <= 1e-14 * np.linalg.norm(inv))
    record(7, ok, f"X = {H[0, 2].real:.17g}, det = {np.linalg.det(H).real:.17g}, inverse(1,3) = {abs(inv[0, 2]):.1e}")
    assert ok


EXIT_TABLE = [
    (["check", "malformed_header.phm"], 1),
    (["check", "malformed_duplicate.phm"], 1),
    (["complete", "malformed_index.phm", "{out}"], 1),
    (["complete", "malformed_diagonal.phm", "{out}"], 1),
    (["gendet", "malformed_imag_diag.phm"], 1),
    (["check", "cycle4.phm"], 2),
    (["complete", "cycle4.phm", "{out}"], 2),
    (["complete", "nonpsd_clique.phm", "{out}"], 3),
    (["pinv", "ones2.phm", "{out}", "--method", "banachiewicz", "--split", "1"], 4),
    (["check", "tridiagonal4.phm"], 0),
    (["complete", "fixture.phm", "{out}", "--verify"], 0),
    (["gendet", "diag230.phm"], 0),
    (["pinv", "pd2.phm", "{out}", "--method", "banachiewicz", "--split", "1"], 0),
]


def test_8_cli_round_trip(tmp_path, capsys):
    rng = np.random.default_rng(8)
    fails = []
    for i in range(30):
        P = random_instance(rng, i)
        src, out = tmp_path / f"in{i}.phm", tmp_path / f"out{i}.phm"
        write_partial(src, P)
        if main(["complete", str(src), str(out)]) != 0:
            fails.append((i, "exit"))
            continue
        P2 = read_partial(src)
        H = read_partial(out)
        if not H.is_complete:
            fails.append((i, "incomplete"))
            continue
        H = np.array(H.entries)
        bad = completion_checks(P2, H)
        if complete(P2).hypotheses_hold and zero_pattern_ratio(P2, H) > 1e-8:
            bad.append("zero pattern")
        fails += [(i, b) for b in bad]
    for args, expected in EXIT_TABLE:
        argv = [str(tmp_path / "x.phm") if a == "{out}" else (str(FIX / a) if a.endswith(".phm") else a) for a in args]
        code = main(argv)
        if code != expected:
            fails.append((" ".join(args), code))
    capsys.readouterr()
    ok = not fails
    record(8, ok, f"30 round trips and {len(EXIT_TABLE)} exit-code fixtures, failures {fails[:5]}")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
