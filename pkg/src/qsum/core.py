"""Dense state vectors on C^n (x) C^k and their measurement.

Joint states are stored as flat complex arrays with the index convention
``idx(x, y) = x * k + y``: the query register is the slow index, the value
register the fast one.  Every module in the package relies on this layout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


def root_of_unity(k: int) -> complex:
    return complex(np.exp(2j * np.pi / k))


def omega_power(k: int, e) -> np.ndarray | complex:
    """omega**e with the exponent reduced mod k first (keeps phases exact-ish)."""
    e = np.mod(e, k)
    return np.exp(2j * np.pi * e / k)


def idx(x: int, y: int, k: int) -> int:
    return x * k + y


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def _check_finite_normalized(amps: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(amps)):
        raise ValueError(f"{what} has non-finite amplitudes")
    norm = float(np.vdot(amps, amps).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"{what} is not normalized (norm^2 = {norm!r})")


def state_vector(amps) -> np.ndarray:
    """Validate and freeze a single-register state."""
    amps = _frozen(amps)
    if amps.ndim != 1 or amps.size == 0:
        raise ValueError("state vector must be a non-empty 1-d array")
    _check_finite_normalized(amps, "state vector")
    return amps


def basis_state(d: int, i: int) -> np.ndarray:
    if d < 1 or not 0 <= i < d:
        raise ValueError(f"basis index {i} out of range for dimension {d}")
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return _frozen(v)


def fourier_state(k: int, a: int) -> np.ndarray:
    """Character state |w^a> = k^{-1/2} sum_l w^{-a l} |l>.

    It is the eigenvector of the cyclic shift with eigenvalue w^a.
    """
    if k < 2:
        raise ValueError(f"modulus must be >= 2, got {k}")
    if not 0 <= a < k:
        raise ValueError(f"residue {a} out of range for modulus {k}")
    ell = np.arange(k)
    return _frozen(omega_power(k, -a * ell) / np.sqrt(k))


@dataclass(frozen=True, eq=False)
class JointState:
    """Pure state of the (query, value) register pair."""

    n: int
    k: int
    amps: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"query register dimension must be >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"value register dimension must be >= 2, got {self.k}")
        amps = _frozen(self.amps)
        if amps.shape != (self.n * self.k,):
            raise ValueError(f"expected {self.n * self.k} amplitudes, got shape {amps.shape}")
        _check_finite_normalized(amps, "joint state")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def product(cls, query: np.ndarray, value: np.ndarray) -> "JointState":
        return cls(len(query), len(value), np.kron(query, value))

    @classmethod
    def basis(cls, n: int, k: int, x: int, y: int) -> "JointState":
        return cls.product(basis_state(n, x), basis_state(k, y))

    @property
    def dim(self) -> int:
        return self.n * self.k

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (n, k); row x holds the value-register amplitudes."""
        return self.amps.reshape(self.n, self.k)

    def amplitude(self, x: int, y: int) -> complex:
        return complex(self.amps[idx(x, y, self.k)])

    def query_probs(self) -> np.ndarray:
        return (np.abs(self.matrix()) ** 2).sum(axis=1)

    def value_part(self, x: int = 0) -> np.ndarray:
        """Value-register amplitudes in row ``x`` (not renormalized)."""
        return self.matrix()[x].copy()

    def evolve(self, op) -> "JointState":
        m = getattr(op, "matrix", op)
        return JointState(self.n, self.k, m @ self.amps)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probabilities of the k possible residues."""

    k: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.shape != (self.k,):
            raise ValueError(f"expected {self.k} probabilities, got shape {p.shape}")
        if np.any(p < -NORM_TOL) or np.any(p > 1 + NORM_TOL):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        p = np.clip(p, 0.0, 1.0)
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __getitem__(self, y: int) -> float:
        return float(self.probs[y % self.k])

    def __len__(self) -> int:
        return self.k

    @classmethod
    def point(cls, k: int, y: int) -> "OutcomeDistribution":
        p = np.zeros(k)
        p[y % k] = 1.0
        return cls(k, p)

    @classmethod
    def uniform(cls, k: int) -> "OutcomeDistribution":
        return cls(k, np.full(k, 1.0 / k))

    def convolve(self, other: "OutcomeDistribution") -> "OutcomeDistribution":
        """Distribution of the sum mod k of two independent residues."""
        if other.k != self.k:
            raise ValueError("cannot convolve distributions over different moduli")
        out = np.zeros(self.k)
        for a in np.flatnonzero(self.probs):
            out += self.probs[a] * np.roll(other.probs, a)
        return OutcomeDistribution(self.k, out)

    def mass_within(self, center: int, radius: int) -> float:
        """Probability of landing within circular distance ``radius`` of ``center``."""
        d = np.abs(np.arange(self.k) - center % self.k)
        d = np.minimum(d, self.k - d)
        return float(self.probs[d <= radius].sum())


def measure_second_register(state: JointState) -> OutcomeDistribution:
    probs = (np.abs(state.matrix()) ** 2).sum(axis=0)
    return OutcomeDistribution(state.k, probs)


def phase_equal(u, v, tol: float = 1e-12) -> bool:
    """True if ``u`` equals ``v`` up to a global phase, entrywise within ``tol``.

    The phase is taken from the inner product <v|u>, which stays well-defined
    when individual entries vanish.
    """
    a = np.asarray(getattr(u, "amps", u), dtype=complex)
    b = np.asarray(getattr(v, "amps", v), dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return bool(np.max(np.abs(a - phase * b)) <= tol)
