"""The adaptive n - r query SUM algorithm.

For r | n and s = n/r <= k the circuit

    K (Q^r) (J_r Q^r)^(s-2),    Q = (X (x) I) O_f,

maps the entangled start state to |0> (x) |A_s> with A = sum f, up to a
global phase.  Other (n, k, r) are reduced to that case by `plan`: blocks of
length k when s > k, classical reads for a remainder when r does not divide
n, and a blind guess when s = 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

import numpy as np

from .core import (
    JointState,
    OutcomeDistribution,
    basis_state,
    fourier_state,
    measure_second_register,
)
from .operators import FunctionTable, j_op, k_op, oracle_op, shift_query_op


class QueryCounter:
    """Running tally of oracle applications, shared by restricted oracles."""

    def __init__(self):
        self.calls = 0


class Oracle:
    """Black box around a FunctionTable that counts every application."""

    def __init__(self, f: FunctionTable, counter: Optional[QueryCounter] = None):
        self.f = f
        self.counter = counter if counter is not None else QueryCounter()
        self._op = oracle_op(f)

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def k(self) -> int:
        return self.f.k

    @property
    def calls(self) -> int:
        return self.counter.calls

    def apply(self, state: JointState) -> JointState:
        if (state.n, state.k) != (self.n, self.k):
            raise ValueError("state shape does not match oracle")
        self.counter.calls += 1
        return state.evolve(self._op)

    def restrict(self, offset: int, length: int) -> "Oracle":
        """Oracle for f on positions [offset, offset+length), same counter."""
        return Oracle(self.f.block(offset, length), self.counter)


@dataclass(frozen=True)
class AlgorithmParams:
    n: int
    k: int
    r: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not 1 <= self.r <= self.n:
            raise ValueError(f"r must satisfy 1 <= r <= n = {self.n}, got {self.r}")

    @property
    def s(self) -> int:
        return self.n // self.r

    @property
    def w(self) -> int:
        return self.n - self.r * self.s

    @property
    def budget(self) -> int:
        return self.n - self.r


def initial_state(n: int, k: int, r: int, s: int) -> JointState:
    """s^{-1/2} ( |r>|w^1> + sum_{t=1}^{s-1} |0>|w^{-t}> )."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if not 2 <= s <= k:
        raise ValueError(f"need 2 <= s <= k, got s={s}, k={k}")
    if r < 1 or r * s > n:
        raise ValueError(f"need r >= 1 and r*s <= n, got r={r}, s={s}, n={n}")
    zero = basis_state(n, 0)
    amps = np.kron(basis_state(n, r % n), fourier_state(k, 1))
    for t in range(1, s):
        amps = amps + np.kron(zero, fourier_state(k, (-t) % k))
    return JointState(n, k, amps / np.sqrt(s))


def _core_shape(n: int, k: int, r: int) -> int:
    if r < 1 or n % r:
        raise ValueError(f"core circuit needs r | n, got n={n}, r={r}")
    s = n // r
    if not 2 <= s <= k:
        raise ValueError(f"core circuit needs 2 <= n/r <= k, got n/r={s}, k={k}")
    return s


def core_steps(oracle: Oracle, r: int) -> Iterator[tuple[str, JointState]]:
    """Yield (label, state) after every elementary step of the core circuit.

    The first item is the start state; the oracle, the shift X (x) I, and
    the fixed unitaries J_r / K each count as one step.
    """
    n, k = oracle.n, oracle.k
    s = _core_shape(n, k, r)
    shift = shift_query_op(n, k)
    state = initial_state(n, k, r, s)
    yield "init", state
    for rnd in range(s - 1):
        for _ in range(r):
            state = oracle.apply(state)
            yield "oracle", state
            state = state.evolve(shift)
            yield "shift", state
        if rnd < s - 2:
            state = state.evolve(j_op(n, k, r))
            yield "J", state
    state = state.evolve(k_op(n, k, r))
    yield "K", state


def run_core(f: Union[FunctionTable, Oracle], r: int) -> JointState:
    """Final state of the core circuit (before measurement)."""
    oracle = f if isinstance(f, Oracle) else Oracle(f)
    state = None
    for _, state in core_steps(oracle, r):
        pass
    return state


def classical_read(f: Union[FunctionTable, Oracle], x: int) -> int:
    """Learn f(x) with one query: apply the oracle to |x>|0> and measure."""
    oracle = f if isinstance(f, Oracle) else Oracle(f)
    if not 0 <= x < oracle.n:
        raise IndexError(f"position {x} outside [0, {oracle.n})")
    out = oracle.apply(JointState.basis(oracle.n, oracle.k, x, 0))
    dist = measure_second_register(out)
    return int(np.argmax(dist.probs))


# ---------------------------------------------------------------- planning


@dataclass(frozen=True)
class CoreBlock:
    offset: int
    length: int
    step: int

    @property
    def blocks(self) -> int:
        return self.length // self.step

    @property
    def queries(self) -> int:
        return self.length - self.step


@dataclass(frozen=True)
class ClassicalRead:
    position: int
    queries: int = field(default=1, init=False)


@dataclass(frozen=True)
class GuessBlock:
    offset: int
    length: int
    queries: int = field(default=0, init=False)


Segment = Union[CoreBlock, ClassicalRead, GuessBlock]


@dataclass(frozen=True)
class ExecutionPlan:
    n: int
    k: int
    r: int
    segments: tuple
    unused_queries: int = 0

    @property
    def spent_queries(self) -> int:
        return sum(seg.queries for seg in self.segments)

    @property
    def total_queries(self) -> int:
        return self.spent_queries + self.unused_queries

    def covered(self) -> list[int]:
        pos = []
        for seg in self.segments:
            if isinstance(seg, ClassicalRead):
                pos.append(seg.position)
            else:
                pos.extend(range(seg.offset, seg.offset + seg.length))
        return pos


def _block_segments(offset: int, m: int, k: int, r: int) -> tuple[list, int]:
    """Prefix of length m with n/r > k: u blocks of length k at step 1, v reads."""
    u, v = divmod(m, k)
    segs: list = [CoreBlock(offset + i * k, k, 1) for i in range(u)]
    segs += [ClassicalRead(offset + u * k + j) for j in range(v)]
    return segs, u - r


def plan(n: int, k: int, r: int) -> ExecutionPlan:
    p = AlgorithmParams(n, k, r)
    s = p.s
    if s == 1:
        segs = [GuessBlock(0, r)] + [ClassicalRead(x) for x in range(r, n)]
        return ExecutionPlan(n, k, r, tuple(segs))
    m = r * s
    if s <= k:
        segs, unused = [CoreBlock(0, m, r)], 0
    else:
        segs, unused = _block_segments(0, m, k, r)
    segs += [ClassicalRead(x) for x in range(m, n)]
    return ExecutionPlan(n, k, r, tuple(segs), unused)


# ---------------------------------------------------------------- running


@dataclass(frozen=True, eq=False)
class RunReport:
    params: AlgorithmParams
    values: tuple
    distribution: OutcomeDistribution
    oracle_calls: int
    unused_queries: int
    sampled_prediction: Optional[int] = None

    @property
    def true_sum(self) -> int:
        return sum(self.values) % self.params.k

    @property
    def success_prob(self) -> float:
        return self.distribution[self.true_sum]

    @property
    def queries_used(self) -> int:
        """Query budget charged: oracle applications plus deliberately idle queries."""
        return self.oracle_calls + self.unused_queries

    @property
    def approx_radius(self) -> int:
        p = self.params
        return (p.k * p.r) // (2 * p.n)

    @property
    def approx_prob(self) -> float:
        return self.distribution.mass_within(self.true_sum, self.approx_radius)

    @property
    def peak_radius(self) -> int:
        """floor(k / 2s), the window around the peak for s = floor(n/r)."""
        return self.params.k // (2 * self.params.s)

    @property
    def peak_window_prob(self) -> float:
        return self.distribution.mass_within(self.true_sum, self.peak_radius)

    def to_dict(self) -> dict:
        p = self.params
        out = {
            "n": p.n,
            "k": p.k,
            "r": p.r,
            "s": p.s,
            "w": p.w,
            "values": list(self.values),
            "true_sum": self.true_sum,
            "distribution": [float(x) for x in self.distribution.probs],
            "success_prob": self.success_prob,
            "approx_radius": self.approx_radius,
            "approx_prob": self.approx_prob,
            "peak_radius": self.peak_radius,
            "peak_window_prob": self.peak_window_prob,
            "queries_used": self.queries_used,
            "oracle_calls": self.oracle_calls,
            "unused_queries": self.unused_queries,
        }
        if self.sampled_prediction is not None:
            out["sampled_prediction"] = self.sampled_prediction
        return out


def segment_distribution(oracle: Oracle, seg: Segment) -> OutcomeDistribution:
    """Exact distribution of one segment's estimate of its partial sum."""
    k = oracle.k
    if isinstance(seg, ClassicalRead):
        return OutcomeDistribution.point(k, classical_read(oracle, seg.position))
    if isinstance(seg, GuessBlock):
        return OutcomeDistribution.uniform(k)
    sub = oracle.restrict(seg.offset, seg.length)
    final = run_core(sub, seg.step)
    return measure_second_register(final)


def sum_distribution(oracle: Oracle, p: ExecutionPlan) -> OutcomeDistribution:
    dist = OutcomeDistribution.point(oracle.k, 0)
    for seg in p.segments:
        dist = dist.convolve(segment_distribution(oracle, seg))
    return dist


def sample_predictions(dist: OutcomeDistribution, size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.choice(dist.k, size=size, p=dist.probs / dist.probs.sum())


def run_sum(f: FunctionTable, r: int, seed: Optional[int] = None) -> RunReport:
    """Run the full algorithm on f with n - r queries and report the exact
    output distribution.  With a seed, one prediction is also sampled."""
    params = AlgorithmParams(f.n, f.k, r)
    p = plan(f.n, f.k, r)
    oracle = Oracle(f)
    dist = sum_distribution(oracle, p)
    sampled = None
    if seed is not None:
        sampled = int(sample_predictions(dist, 1, seed)[0])
    return RunReport(params, f.values, dist, oracle.calls, p.unused_queries, sampled)


TRACE_SHAPES = {"prop1": (2, 3), "prop2": (3, 3)}


def trace_small(f: FunctionTable, which: str) -> list[JointState]:
    """States after each step of the one-query two-trit ("prop1") or the
    two-query three-trit ("prop2") algorithm, start state first."""
    if which not in TRACE_SHAPES:
        raise ValueError(f"unknown trace {which!r}; expected one of {sorted(TRACE_SHAPES)}")
    if (f.n, f.k) != TRACE_SHAPES[which]:
        raise ValueError(f"{which} needs (n, k) = {TRACE_SHAPES[which]}, got {(f.n, f.k)}")
    return [state for _, state in core_steps(Oracle(f), 1)]
