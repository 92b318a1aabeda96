"""Exhaustive verification: run the simulator on every oracle of small
instances and compare with the closed forms.

Failures are recorded in the report, never raised.
"""
from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

import numpy as np

from . import analysis
from .algorithm import Oracle, classical_read, plan, run_core, run_sum, trace_small
from .core import basis_state, fourier_state, omega_power, phase_equal
from .operators import (
    FunctionTable,
    character_basis,
    fourier_op,
    j_op,
    k_op,
    oracle_op,
    shift_op,
)

DEFAULT_CAP = 10**6
ALGEBRAIC_TOL = 1e-12


class CapExceeded(ValueError):
    pass


def enumerate_oracles(n: int, k: int, cap: int = DEFAULT_CAP) -> Iterator[FunctionTable]:
    """All k**n tables f: Z_n -> Z_k in lexicographic order."""
    if k**n > cap:
        raise CapExceeded(f"{k}**{n} oracles exceeds cap {cap}")
    for vals in itertools.product(range(k), repeat=n):
        yield FunctionTable(k, vals)


@dataclass(frozen=True)
class SuccessStats:
    min: float
    max: float
    mean: float
    count: int
    query_counts: frozenset

    @property
    def spread(self) -> float:
        return self.max - self.min


def exhaustive_success(n: int, k: int, r: int, cap: int = DEFAULT_CAP) -> SuccessStats:
    probs, queries = [], set()
    for f in enumerate_oracles(n, k, cap):
        rep = run_sum(f, r)
        probs.append(rep.success_prob)
        queries.add((rep.oracle_calls, rep.unused_queries))
    return SuccessStats(min(probs), max(probs), float(np.mean(probs)), len(probs), frozenset(queries))


# ------------------------------------------------ reference states for traces


def mixed_state(n: int, k: int, terms, norm: float) -> np.ndarray:
    """sum of w^e |x>|w^y> over (e, x, y) in ``terms``, divided by ``norm``."""
    v = np.zeros(n * k, dtype=complex)
    for e, x, y in terms:
        v += omega_power(k, e) * np.kron(basis_state(n, x % n), fourier_state(k, y % k))
    return v / norm


def expected_prop1_states(f: FunctionTable) -> list[np.ndarray]:
    """Displayed states of the one-query two-trit algorithm, steps 0-3."""
    f0, f1 = f.values
    c = math.sqrt(2)
    return [
        mixed_state(2, 3, [(0, 1, 1), (0, 0, -1)], c),
        mixed_state(2, 3, [(f1, 1, 1), (-f0, 0, -1)], c),
        mixed_state(2, 3, [(f1, 0, 1), (-f0, 1, -1)], c),
        mixed_state(2, 3, [(f1, 0, 1), (-f0, 0, 0)], c),
    ]


def expected_prop1_value_register(f: FunctionTable) -> np.ndarray:
    """Final value register in the computational basis:
    w^{-f(0)} 6^{-1/2} sum_y (1 + w^{sum f - y}) |y>."""
    t = sum(f.values)
    y = np.arange(3)
    return omega_power(3, -f.values[0]) * (1 + omega_power(3, t - y)) / math.sqrt(6)


def expected_prop2_states(f: FunctionTable) -> list[np.ndarray]:
    """Displayed states of the two-query three-trit algorithm, steps 0-6."""
    f0, f1, f2 = f.values
    c = math.sqrt(3)
    return [
        mixed_state(3, 3, [(0, 1, 1), (0, 0, -1), (0, 0, -2)], c),
        mixed_state(3, 3, [(f1, 1, 1), (-f0, 0, -1), (-2 * f0, 0, -2)], c),
        mixed_state(3, 3, [(f1, 2, 1), (-f0, 1, -1), (-2 * f0, 1, -2)], c),
        mixed_state(3, 3, [(f1, 2, 2), (-f0, 2, 1), (-2 * f0, 1, -1)], c),
        mixed_state(3, 3, [(f1 + 2 * f2, 2, 2), (-f0 + f2, 2, 1), (-2 * f0 - f1, 1, -1)], c),
        mixed_state(3, 3, [(f1 + 2 * f2, 0, 2), (-f0 + f2, 0, 1), (-2 * f0 - f1, 2, -1)], c),
        mixed_state(3, 3, [(f1 + 2 * f2, 0, 2), (-f0 + f2, 0, 1), (-2 * f0 - f1, 0, 0)], c),
    ]


def expected_prop2_value_register(f: FunctionTable) -> np.ndarray:
    """w^{f(0) + 2 f(1)} |sum f>."""
    f0, f1, _ = f.values
    return omega_power(3, f0 + 2 * f1) * basis_state(3, f.total)


# ------------------------------------------------------------------ report


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, bool):
        return x
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(key): _jsonable(v) for key, v in x.items()}
    return x


@dataclass(frozen=True)
class Check:
    name: str
    params: dict
    expected: Any
    observed: Any
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": _jsonable(self.params),
            "expected": _jsonable(self.expected),
            "observed": _jsonable(self.observed),
            "passed": bool(self.passed),
        }


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name, params, expected, observed, passed) -> None:
        self.checks.append(Check(name, dict(params), expected, observed, bool(passed)))

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def names(self) -> set:
        return {c.name for c in self.checks}

    def summary(self) -> dict:
        by_name: dict = {}
        for c in self.checks:
            tot = by_name.setdefault(c.name, [0, 0])
            tot[0] += 1
            tot[1] += not c.passed
        return {
            "total": len(self.checks),
            "failed": len(self.failures),
            "passed": self.passed,
            "by_check": {k: {"total": v[0], "failed": v[1]} for k, v in sorted(by_name.items())},
        }

    def to_dict(self) -> dict:
        return {"summary": self.summary(), "checks": [c.to_dict() for c in self.checks]}

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


@dataclass(frozen=True)
class GridSpec:
    """Which instances to verify.  Every r in 1..n is checked for each (n, k)."""

    max_n: int = 4
    max_k: int = 4
    tolerance: float = 1e-9
    cap: int = DEFAULT_CAP
    max_op_dim: int = 8
    lemma3_max_k: int = 64
    parity_max_n: int = 8
    dominance_max_n: int = 12
    dominance_max_k: int = 6

    @property
    def algebraic_tol(self) -> float:
        return min(ALGEBRAIC_TOL, self.tolerance)

    @classmethod
    def extended(cls, **kw) -> "GridSpec":
        return cls(max_n=5, max_k=5, **kw)

    @classmethod
    def from_env(cls, **kw) -> "GridSpec":
        if os.environ.get("QSUM_GRID_EXTENDED") == "1":
            return cls.extended(**kw)
        return cls(**kw)

    def cells(self):
        for n in range(1, self.max_n + 1):
            for k in range(2, self.max_k + 1):
                if k**n > self.cap:
                    continue
                for r in range(1, n + 1):
                    yield n, k, r


# ------------------------------------------------------------------ checks


def _check_operators(rep: VerificationReport, spec: GridSpec) -> None:
    tol = spec.algebraic_tol
    rng = np.random.default_rng(0)
    for d in range(1, spec.max_op_dim + 1):
        err = shift_op(d).unitarity_error()
        rep.add("unitarity", {"op": "shift", "d": d}, 0.0, err, err < tol)
    for k in range(2, spec.max_op_dim + 1):
        err = fourier_op(k).unitarity_error()
        rep.add("unitarity", {"op": "fourier", "k": k}, 0.0, err, err < tol)
    for n in range(1, spec.max_op_dim + 1):
        for k in range(2, spec.max_op_dim + 1):
            f = FunctionTable.random(n, k, rng)
            O = oracle_op(f)
            err = O.unitarity_error()
            rep.add("unitarity", {"op": "oracle", "n": n, "k": k}, 0.0, err, err < tol)
            # O_f (I (x) W) = (I (x) W) diag(w^{a f(x)})
            iw = np.kron(np.eye(n), character_basis(k).matrix)
            phases = omega_power(k, np.outer(f.values, np.arange(k))).ravel()
            kick = float(np.max(np.abs(O.matrix @ iw - iw * phases)))
            rep.add("kickback", {"n": n, "k": k, "values": f.values}, 0.0, kick, kick < tol)
            for r in range(1, n + 1):
                for name, op in (("K", k_op(n, k, r)), ("J", j_op(n, k, r))):
                    err = op.unitarity_error()
                    rep.add("unitarity", {"op": name, "n": n, "k": k, "r": r}, 0.0, err, err < tol)


def _check_traces(rep: VerificationReport, spec: GridSpec) -> None:
    tol = spec.algebraic_tol
    cases = [
        ("prop1", 2, expected_prop1_states, expected_prop1_value_register),
        ("prop2", 3, expected_prop2_states, expected_prop2_value_register),
    ]
    for which, n, states, value_reg in cases:
        for f in enumerate_oracles(n, 3):
            got = trace_small(f, which)
            want = states(f)
            ok = len(got) == len(want) and all(phase_equal(g, w, tol) for g, w in zip(got, want))
            rep.add(f"{which}_trace", {"values": f.values}, len(want), len(got), ok)
            final = got[-1]
            ok = final.query_probs()[0] > 1 - tol and phase_equal(final.value_part(0), value_reg(f), tol)
            rep.add(f"{which}_final", {"values": f.values}, "value register match", ok, ok)


def _check_lemma3(rep: VerificationReport, spec: GridSpec) -> None:
    tol = spec.algebraic_tol
    for k in range(2, spec.lemma3_max_k + 1):
        worst_err, worst_peak, argmax_ok, min_mass = 0.0, 0.0, True, 1.0
        for s in range(1, k + 1):
            direct = np.abs(analysis.a_state_matrix(k, s)) ** 2
            closed = np.array([analysis.lemma3_distribution(k, s, A) for A in range(k)])
            worst_err = max(worst_err, float(np.max(np.abs(direct - closed))))
            worst_peak = max(worst_peak, float(np.max(np.abs(np.diag(closed) - s / k))))
            if s >= 2:
                argmax_ok &= bool(np.all(np.argmax(closed, axis=1) == np.arange(k)))
            min_mass = min(min_mass, analysis.central_mass(k, s))
        rep.add("lemma3_closed_form", {"k": k}, 0.0, worst_err, worst_err < tol)
        rep.add("lemma3_peak", {"k": k}, "s/k at y=A", worst_peak, worst_peak < tol and argmax_ok)
        rep.add("lemma3_central_mass", {"k": k}, analysis.FOUR_OVER_PI_SQ, min_mass,
                min_mass >= analysis.FOUR_OVER_PI_SQ)


def _check_lemma4_and_core(rep: VerificationReport, spec: GridSpec) -> None:
    tol = spec.algebraic_tol
    for n in range(1, spec.max_n + 1):
        for k in range(2, spec.max_k + 1):
            if k**n > spec.cap:
                continue
            for r in range(1, n + 1):
                if n % r or not 2 <= n // r <= k:
                    continue
                s = n // r
                l4, core_err, core_ok = 0.0, 0.0, True
                for f in enumerate_oracles(n, k, spec.cap):
                    l4 = max(l4, analysis.lemma4_check(f, r))
                    oracle = Oracle(f)
                    final = run_core(oracle, r)
                    off = 1.0 - float(final.query_probs()[0])
                    core_err = max(core_err, off)
                    core_ok &= off < tol and phase_equal(
                        final.value_part(0), analysis.a_state(k, s, f.total), tol
                    ) and oracle.calls == n - r
                params = {"n": n, "k": k, "r": r}
                rep.add("lemma4_identity", params, 0.0, l4, l4 < tol)
                rep.add("theorem5_core_state", params, "|0> (x) |A_s>", core_err, core_ok)


def _check_theorem5(rep: VerificationReport, spec: GridSpec) -> None:
    tol = spec.tolerance
    for n, k, r in spec.cells():
        params = {"n": n, "k": k, "r": r}
        expected = analysis.success_probability(n, k, r)
        p = plan(n, k, r)
        probs, approx, calls = [], [], set()
        for f in enumerate_oracles(n, k, spec.cap):
            res = run_sum(f, r)
            probs.append(res.success_prob)
            approx.append(res.approx_prob)
            calls.add((res.oracle_calls, res.queries_used))
        lo, hi = min(probs), max(probs)
        rep.add("theorem5_success", params, expected, [lo, hi],
                abs(lo - float(expected)) <= tol and abs(hi - float(expected)) <= tol)
        rep.add("theorem5_uniform", params, 0.0, hi - lo, hi - lo <= tol)
        rep.add("theorem5_queries", params, [p.spent_queries, n - r], sorted(calls),
                calls == {(p.spent_queries, n - r)} and p.total_queries == n - r)
        if n % r == 0:
            rep.add("theorem5_approx", params, analysis.FOUR_OVER_PI_SQ, min(approx),
                    min(approx) >= analysis.FOUR_OVER_PI_SQ)
        if n // r == 1:
            rep.add("uselessness", params, Fraction(1, k), [lo, hi],
                    abs(lo - 1 / k) <= tol and abs(hi - 1 / k) <= tol)


def _check_problem(rep: VerificationReport, spec: GridSpec) -> None:
    for n in range(1, spec.max_n + 1):
        for k in range(2, spec.max_k + 1):
            if k**n > spec.cap:
                continue
            ok = True
            for f in enumerate_oracles(n, k, spec.cap):
                oracle = Oracle(f)
                ok &= all(classical_read(oracle, x) == f(x) for x in range(n))
                ok &= oracle.calls == n
            rep.add("classical_read", {"n": n, "k": k}, True, ok, ok)


def _check_parity(rep: VerificationReport, spec: GridSpec) -> None:
    tol = spec.tolerance
    for n in range(2, spec.parity_max_n + 1):
        r = n // 2
        probs = [run_sum(f, r).success_prob for f in enumerate_oracles(n, 2, spec.cap)]
        rep.add("parity", {"n": n, "k": 2, "r": r}, 1.0, min(probs), abs(min(probs) - 1) <= tol)


def _check_vandam(rep: VerificationReport, spec: GridSpec) -> None:
    for n in range(1, spec.dominance_max_n + 1):
        for k in range(2, spec.dominance_max_k + 1):
            ps = [analysis.vandam_identify_prob(n, k, q) for q in range(n + 1)]
            bs = [analysis.vandam_sum_bound(n, k, q) for q in range(n + 1)]
            ok = ps[0] == Fraction(1, k**n) and ps[-1] == 1
            ok &= all(a <= b for a, b in zip(ps, ps[1:]))
            ok &= all(p <= b and Fraction(1, k) <= b <= 1 for p, b in zip(ps, bs))
            rep.add("vandam_formula", {"n": n, "k": k}, "p_0=k^-n, p_n=1, monotone", ok, ok)
            dom = [analysis.success_probability(n, k, r) >= ps[n - r] for r in range(1, n + 1)]
            rep.add("dominance", {"n": n, "k": k}, True, all(dom), all(dom))
    p = analysis.vandam_identify_prob(3, 3, 1)
    rep.add("vandam_formula", {"n": 3, "k": 3, "q": 1}, Fraction(7, 27), p, p == Fraction(7, 27))
    b = analysis.vandam_sum_bound(3, 3, 1)
    rep.add("vandam_bound", {"n": 3, "k": 3, "q": 1}, Fraction(41, 81), b, b == Fraction(41, 81))


def _check_figure1(rep: VerificationReport, spec: GridSpec) -> None:
    for n in range(1, spec.dominance_max_n + 1):
        for k in range(2, spec.dominance_max_k + 1):
            step, smooth = analysis.figure1_curves(n, k)
            flat = all(step.at(q) == Fraction(1, k) for q in range((n - 1) // 2 + 1))
            first = step.first_reaching(1)
            want_first = n - n // k
            ends = step.points[-1] == (n, 1) and smooth.points[-1] == (n, 1)
            rep.add("figure1_step", {"n": n, "k": k}, [want_first, True],
                    [first, flat and ends], first == want_first and flat and ends)


def check_suite(spec: GridSpec = GridSpec()) -> VerificationReport:
    rep = VerificationReport()
    _check_operators(rep, spec)
    _check_problem(rep, spec)
    _check_traces(rep, spec)
    _check_lemma3(rep, spec)
    _check_lemma4_and_core(rep, spec)
    _check_theorem5(rep, spec)
    _check_parity(rep, spec)
    _check_vandam(rep, spec)
    _check_figure1(rep, spec)
    return rep
