"""Closed forms: the |A_s> state and its measurement law, the blockwise phase
identity behind the circuit, exact success probabilities, and the curves
comparing the adaptive algorithm with function identification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import fourier_state, omega_power
from .operators import FunctionTable

FOUR_OVER_PI_SQ = 4 / math.pi**2


def _check_ks(k: int, s: int) -> None:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if not 1 <= s <= k:
        raise ValueError(f"need 1 <= s <= k, got s={s}, k={k}")


def a_state(k: int, s: int, A: int) -> np.ndarray:
    """|A_s> = s^{-1/2} sum_{l=1}^{s} w^{-l A} |w^{s-l}>."""
    _check_ks(k, s)
    if not 0 <= A < k:
        raise ValueError(f"A must lie in Z_{k}, got {A}")
    v = sum(omega_power(k, -ell * A) * fourier_state(k, s - ell) for ell in range(1, s + 1))
    return v / np.sqrt(s)


def circular_distance(a: int, b: int, k: int) -> int:
    d = (a - b) % k
    return min(d, k - d)


def lemma3_prob(k: int, s: int, A: int, y: int) -> float:
    """(1/sk) (sin(pi s d / k) / sin(pi d / k))^2 with d = y - A; s/k at d = 0."""
    d = (y - A) % k
    if d == 0:
        return s / k
    return (math.sin(math.pi * s * d / k) / math.sin(math.pi * d / k)) ** 2 / (s * k)


def lemma3_distribution(k: int, s: int, A: int) -> np.ndarray:
    return np.array([lemma3_prob(k, s, A, y) for y in range(k)])


def central_mass(k: int, s: int) -> float:
    """Probability mass within circular distance floor(k/2s) of the peak."""
    _check_ks(k, s)
    radius = k // (2 * s)
    return sum(lemma3_prob(k, s, 0, y) for y in range(k) if circular_distance(y, 0, k) <= radius)


def block_sums(f: FunctionTable, r: int) -> list[int]:
    """B_m = f((m-1)r) + ... + f(mr - 1) for m = 1..n/r."""
    return [sum(f.values[(m - 1) * r : m * r]) for m in range(1, f.n // r + 1)]


def lemma4_sides(f: FunctionTable, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the blockwise phase identity, as explicit vectors in C^k.

    Left: w^{sum_m m B_m} s^{-1/2} sum_l w^{-l sum f} |w^{s-l}>.
    Right: s^{-1/2} sum_l w^{sum_m (m - l) B_m} |w^{s-l}>.
    """
    n, k = f.n, f.k
    if r < 1 or n % r:
        raise ValueError(f"need r | n, got n={n}, r={r}")
    s = n // r
    _check_ks(k, s)
    B = block_sums(f, r)
    total = sum(f.values)
    ms = range(1, s + 1)
    lead = sum(m * b for m, b in zip(ms, B))
    lhs = omega_power(k, lead) * sum(
        omega_power(k, -ell * total) * fourier_state(k, s - ell) for ell in ms
    )
    rhs = sum(
        omega_power(k, sum((m - ell) * b for m, b in zip(ms, B))) * fourier_state(k, s - ell)
        for ell in ms
    )
    return lhs / np.sqrt(s), rhs / np.sqrt(s)


def lemma4_check(f: FunctionTable, r: int) -> float:
    lhs, rhs = lemma4_sides(f, r)
    return float(np.max(np.abs(lhs - rhs)))


def _check_nkr(n: int, k: int, r: int) -> None:
    if n < 1 or k < 2 or not 1 <= r <= n:
        raise ValueError(f"invalid instance n={n}, k={k}, r={r}")


def success_probability(n: int, k: int, r: int) -> Fraction:
    """min(floor(n/r)/k, 1) for n - r queries."""
    _check_nkr(n, k, r)
    return min(Fraction(n // r, k), Fraction(1))


def vandam_identify_prob(n: int, k: int, q: int) -> Fraction:
    """Worst-case probability of identifying all of f with q queries:
    k^{-n} sum_{j<=q} C(n, j) (k-1)^j."""
    if n < 1 or k < 2:
        raise ValueError(f"invalid instance n={n}, k={k}")
    if not 0 <= q <= n:
        raise ValueError(f"q must lie in [0, {n}], got {q}")
    return Fraction(sum(math.comb(n, j) * (k - 1) ** j for j in range(q + 1)), k**n)


def vandam_sum_bound(n: int, k: int, q: int) -> Fraction:
    """Upper bound p_q + (1 - p_q)/k on summing via identification."""
    p = vandam_identify_prob(n, k, q)
    return p + (1 - p) / k


@dataclass(frozen=True)
class Curve:
    n: int
    k: int
    points: tuple  # (q, Fraction) pairs

    @property
    def qs(self) -> list[int]:
        return [q for q, _ in self.points]

    @property
    def probs(self) -> list[Fraction]:
        return [p for _, p in self.points]

    def at(self, q: int) -> Fraction:
        return self.points[q][1]

    def first_reaching(self, value=1) -> int:
        return next(q for q, p in self.points if p >= value)


def step_curve_point(n: int, k: int, q: int) -> Fraction:
    if not 0 <= q <= n:
        raise ValueError(f"q must lie in [0, {n}], got {q}")
    # q = n reads every value classically
    return Fraction(1) if q == n else success_probability(n, k, n - q)


def figure1_curves(n: int, k: int) -> tuple[Curve, Curve]:
    """(step, smooth): adaptive-algorithm success and the identification bound for q = 0..n."""
    if n < 1 or k < 2:
        raise ValueError(f"invalid instance n={n}, k={k}")
    step = Curve(n, k, tuple((q, step_curve_point(n, k, q)) for q in range(n + 1)))
    smooth = Curve(n, k, tuple((q, vandam_sum_bound(n, k, q)) for q in range(n + 1)))
    return step, smooth


def a_state_matrix(k: int, s: int) -> np.ndarray:
    """Rows A = 0..k-1 hold |A_s> in the computational basis."""
    _check_ks(k, s)
    ells = np.arange(1, s + 1)
    coeff = omega_power(k, -np.outer(np.arange(k), ells))
    chars = np.array([fourier_state(k, s - ell) for ell in ells])
    return coeff @ chars / np.sqrt(s)
