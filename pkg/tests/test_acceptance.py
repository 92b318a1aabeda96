"""Exit criteria.  Each test logs one PASS/FAIL line (see the terminal summary)."""
import csv
import io
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from qsum import analysis
from qsum.algorithm import plan, run_sum, trace_small
from qsum.cli import main
from qsum.core import phase_equal
from qsum.operators import FunctionTable, character_basis, fourier_op, j_op, k_op, oracle_op, shift_op
from qsum.core import omega_power
from qsum.verify import (
    enumerate_oracles,
    expected_prop1_states,
    expected_prop1_value_register,
    expected_prop2_states,
    expected_prop2_value_register,
)

END_TO_END = 1e-9
ALGEBRAIC = 1e-12
FOUR_OVER_PI_SQ = 4 / math.pi**2


def grid_cells():
    for n in range(1, 6):
        for k in range(2, 6):
            for r in range(1, n + 1):
                yield n, k, r


@pytest.fixture(scope="module")
def theorem5_grid():
    """Run every oracle of every cell once; shared by criteria 3 and 7."""
    t0 = time.perf_counter()
    cells = {}
    for n, k, r in grid_cells():
        p = plan(n, k, r)
        reports = [run_sum(f, r) for f in enumerate_oracles(n, k)]
        cells[(n, k, r)] = (p, reports)
    return cells, time.perf_counter() - t0


def test_01_one_query_two_trits(record):
    t0 = time.perf_counter()
    probs = [run_sum(f, 1).success_prob for f in enumerate_oracles(2, 3)]
    elapsed = time.perf_counter() - t0
    err = max(abs(p - 2 / 3) for p in probs)
    ok = len(probs) == 9 and err <= END_TO_END and elapsed < 1
    record(1, "n=2,k=3,r=1: success 2/3 for all 9 oracles", ok, f"max err {err:.1e}, {elapsed:.3f}s")
    assert ok


def test_02_two_query_three_trits(record):
    t0 = time.perf_counter()
    worst_p, states_ok = 0.0, True
    for f in enumerate_oracles(3, 3):
        worst_p = max(worst_p, abs(run_sum(f, 1).success_prob - 1))
        got = trace_small(f, "prop2")
        want = expected_prop2_states(f)
        states_ok &= len(got) == len(want) and all(phase_equal(g, w, ALGEBRAIC) for g, w in zip(got, want))
        states_ok &= phase_equal(got[-1].value_part(0), expected_prop2_value_register(f), ALGEBRAIC)
    for f in enumerate_oracles(2, 3):
        got = trace_small(f, "prop1")
        states_ok &= all(phase_equal(g, w, ALGEBRAIC) for g, w in zip(got, expected_prop1_states(f)))
        states_ok &= phase_equal(got[-1].value_part(0), expected_prop1_value_register(f), ALGEBRAIC)
    elapsed = time.perf_counter() - t0
    ok = worst_p <= END_TO_END and states_ok and elapsed < 1
    record(2, "n=k=3,r=1: success 1 for all 27 oracles; step states match", ok,
           f"max err {worst_p:.1e}, states {'ok' if states_ok else 'MISMATCH'}, {elapsed:.3f}s")
    assert ok


def test_03_theorem5_grid(record, theorem5_grid):
    cells, elapsed = theorem5_grid
    worst, bad_queries, idle_cells = 0.0, [], 0
    for (n, k, r), (p, reports) in cells.items():
        want = float(analysis.success_probability(n, k, r))
        worst = max(worst, max(abs(rep.success_prob - want) for rep in reports))
        for rep in reports:
            if rep.queries_used != n - r or rep.oracle_calls != p.spent_queries:
                bad_queries.append((n, k, r))
                break
        idle_cells += p.unused_queries > 0
    ok = worst <= END_TO_END and not bad_queries and elapsed < 60
    record(3, "n<=5, k<=5, all r, all oracles: success = min(floor(n/r)/k, 1); n-r queries", ok,
           f"max err {worst:.1e}, query mismatches {len(bad_queries)}, "
           f"cells with idle surplus {idle_cells}, {elapsed:.1f}s")
    assert ok


def test_04_parity(record):
    worst = 0.0
    for n in range(2, 9):
        r = n // 2
        for f in enumerate_oracles(n, 2):
            worst = max(worst, abs(run_sum(f, r).success_prob - 1))
    ok = worst <= END_TO_END
    record(4, "k=2, n<=8, r=floor(n/2): success 1", ok, f"max err {worst:.1e}")
    assert ok


def test_05_lemma3(record):
    t0 = time.perf_counter()
    form_err, peak_err, min_mass = 0.0, 0.0, 1.0
    for k in range(2, 65):
        for s in range(1, k + 1):
            direct = np.abs(analysis.a_state_matrix(k, s)) ** 2
            closed = np.array([[analysis.lemma3_prob(k, s, A, y) for y in range(k)] for A in range(k)])
            form_err = max(form_err, float(np.max(np.abs(direct - closed))))
            peak_err = max(peak_err, float(np.max(np.abs(np.diag(closed) - s / k))))
            min_mass = min(min_mass, analysis.central_mass(k, s))
    elapsed = time.perf_counter() - t0
    ok = form_err < ALGEBRAIC and peak_err < ALGEBRAIC and min_mass >= FOUR_OVER_PI_SQ and elapsed < 10
    record(5, "k<=64: closed form vs overlap, peak s/k, central mass >= 4/pi^2", ok,
           f"form err {form_err:.1e}, peak err {peak_err:.1e}, min mass {min_mass:.6f}, {elapsed:.2f}s")
    assert ok


def test_06_lemma4(record):
    worst, cells = 0.0, 0
    for n in range(1, 5):
        for k in range(2, 5):
            for r in range(1, n + 1):
                if n % r or n // r > k:
                    continue
                cells += 1
                for f in enumerate_oracles(n, k):
                    worst = max(worst, analysis.lemma4_check(f, r))
    ok = worst < ALGEBRAIC
    record(6, "n,k<=4, r|n: both sides of the phase identity agree", ok, f"{cells} cells, max err {worst:.1e}")
    assert ok


def test_07_approximate_success(record, theorem5_grid):
    cells, _ = theorem5_grid
    worst, count = 1.0, 0
    for (n, k, r), (_, reports) in cells.items():
        if n % r:
            continue
        count += 1
        worst = min(worst, min(rep.approx_prob for rep in reports))
    ok = worst >= FOUR_OVER_PI_SQ
    record(7, "r|n grid: mass within floor(kr/2n) of the sum >= 4/pi^2", ok, f"{count} cells, min {worst:.6f}")
    assert ok


def test_08_identification_formula(record):
    ok = True
    for n in range(1, 13):
        for k in range(2, 7):
            ps = [analysis.vandam_identify_prob(n, k, q) for q in range(n + 1)]
            ok &= ps[0] == Fraction(1, k**n) and ps[-1] == 1 and ps == sorted(ps)
    p = analysis.vandam_identify_prob(3, 3, 1)
    b = analysis.vandam_sum_bound(3, 3, 1)
    ok &= p == Fraction(7, 27) and b == Fraction(41, 81)
    record(8, "p_0 = k^-n, p_n = 1, monotone; p_1(3,3) = 7/27; bound 41/81", ok, f"p_1={p}, bound={b}")
    assert ok


def test_09_curves(record, capsys):
    code = main(["sweep", "--n", "12", "--k", "3"])
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    step = [float(r["theorem5"]) for r in rows]
    flat = all(abs(p - 1 / 3) < 1e-12 for p in step[:6])
    first = next(q for q, p in enumerate(step) if p == 1.0)
    both_curves = all(r["vandam_bound"] and r["vandam_pq"] for r in rows)
    dominance = all(
        analysis.success_probability(n, k, r) >= analysis.vandam_identify_prob(n, k, n - r)
        for n in range(1, 13)
        for k in range(2, 7)
        for r in range(1, n + 1)
    )
    ok = code == 0 and len(rows) == 13 and both_curves and flat and first == 8 and dominance
    record(9, "sweep n=12,k=3: 1/3 for q<=5, first 1 at q=8; dominance over p_q (n<=12,k<=6)", ok,
           f"first 1 at q={first}, flat={flat}, dominance={dominance}")
    assert ok


def test_10_unitarity_and_kickback(record):
    worst_u, worst_kick = 0.0, 0.0
    rng = np.random.default_rng(10)
    for d in range(1, 17):
        worst_u = max(worst_u, shift_op(d).unitarity_error())
    for k in range(2, 17):
        worst_u = max(worst_u, fourier_op(k).unitarity_error())
    for n in range(1, 17):
        for k in range(2, 17):
            f = FunctionTable.random(n, k, rng)
            O = oracle_op(f)
            worst_u = max(worst_u, O.unitarity_error())
            iw = np.kron(np.eye(n), character_basis(k).matrix)
            phases = omega_power(k, np.outer(f.values, np.arange(k))).ravel()
            worst_kick = max(worst_kick, float(np.max(np.abs(O.matrix @ iw - iw * phases))))
            for r in range(1, n + 1):
                worst_u = max(worst_u, k_op(n, k, r).unitarity_error(), j_op(n, k, r).unitarity_error())
    ok = worst_u < ALGEBRAIC and worst_kick < ALGEBRAIC
    record(10, "n,k<=16: builders unitary; phase kickback identity", ok,
           f"unitarity {worst_u:.1e}, kickback {worst_kick:.1e}")
    assert ok


def test_11_determinism(record, capsys):
    outs = []
    for _ in range(2):
        codes = [
            main(["verify"]),
            main(["run", "--n", "5", "--k", "3", "--r", "2", "--seed", "42"]),
            main(["run", "--n", "4", "--k", "3", "--r", "4", "--values", "0,0,0,0", "--seed", "7"]),
            main(["sweep", "--n", "12", "--k", "3"]),
        ]
        outs.append((codes, capsys.readouterr().out))
    ok = outs[0] == outs[1] and outs[0][0] == [0, 0, 0, 0]
    record(11, "repeated verify / seeded run / sweep are byte-identical", ok,
           f"{len(outs[0][1])} bytes per pass")
    assert ok
