"""Dense unitaries: shift, Fourier transform, the oracle, and the fixed
oracle-independent operators K and J_r.

K and J_r are defined by how they permute the mixed basis
{|x> (x) |w^y>}.  They are materialised as (I (x) W) P (I (x) W)^dagger,
where P permutes computational indices and W|a> = |w^a>.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import fourier_state, idx, omega_power

UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"unitary must be a non-empty square matrix, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("unitary has non-finite entries")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_error(self) -> float:
        """||U^dagger U - I||_inf (max-abs entry)."""
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dim))))

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_error() < tol

    def __matmul__(self, other):
        if isinstance(other, UnitaryOp):
            return UnitaryOp(self.matrix @ other.matrix, f"{self.name}*{other.name}")
        return self.matrix @ np.asarray(getattr(other, "amps", other))

    def dagger(self) -> "UnitaryOp":
        return UnitaryOp(self.matrix.conj().T, f"{self.name}^+")

    def kron(self, other: "UnitaryOp") -> "UnitaryOp":
        return UnitaryOp(np.kron(self.matrix, other.matrix), f"{self.name}(x){other.name}")


def identity_op(d: int) -> UnitaryOp:
    return UnitaryOp(np.eye(d), "I")


def permutation_op(perm: Sequence[int], name: str = "P") -> UnitaryOp:
    """Unitary sending basis vector |i> to |perm[i]>."""
    perm = np.asarray(perm)
    d = len(perm)
    if sorted(perm.tolist()) != list(range(d)):
        raise ValueError("not a permutation")
    m = np.zeros((d, d), dtype=complex)
    m[perm, np.arange(d)] = 1.0
    return UnitaryOp(m, name)


@dataclass(frozen=True)
class FunctionTable:
    """Explicit table of a hidden function f: Z_n -> Z_k."""

    k: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if self.k < 2:
            raise ValueError(f"modulus must be >= 2, got {self.k}")
        if len(vals) == 0:
            raise ValueError("function table must have at least one entry")
        bad = [v for v in vals if not 0 <= v < self.k]
        if bad:
            raise ValueError(f"values {bad} not in Z_{self.k}")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        """Sum of all values mod k."""
        return sum(self.values) % self.k

    def __call__(self, x: int) -> int:
        return self.values[x]

    def block(self, offset: int, length: int) -> "FunctionTable":
        if offset < 0 or length < 1 or offset + length > self.n:
            raise ValueError(f"block [{offset}, {offset + length}) outside [0, {self.n})")
        return FunctionTable(self.k, self.values[offset : offset + length])

    def __add__(self, other: "FunctionTable") -> "FunctionTable":
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("tables must share n and k")
        return FunctionTable(self.k, [(a + b) % self.k for a, b in zip(self.values, other.values)])

    @classmethod
    def zeros(cls, n: int, k: int) -> "FunctionTable":
        return cls(k, (0,) * n)

    @classmethod
    def random(cls, n: int, k: int, rng: np.random.Generator) -> "FunctionTable":
        return cls(k, tuple(int(v) for v in rng.integers(0, k, size=n)))


def _check_dims(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"query register dimension must be >= 1, got {n}")
    if k < 2:
        raise ValueError(f"modulus must be >= 2, got {k}")


@lru_cache(maxsize=None)
def shift_op(d: int) -> UnitaryOp:
    """Cyclic shift |z> -> |z+1 mod d>."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return permutation_op((np.arange(d) + 1) % d, f"X{d}")


@lru_cache(maxsize=None)
def fourier_op(k: int) -> UnitaryOp:
    """F|y> = k^{-1/2} sum_l w^{l y} |l>, so column y is |w^{-y}>."""
    if k < 2:
        raise ValueError(f"modulus must be >= 2, got {k}")
    ell = np.arange(k)
    return UnitaryOp(omega_power(k, np.outer(ell, ell)) / np.sqrt(k), f"F{k}")


@lru_cache(maxsize=None)
def character_basis(k: int) -> UnitaryOp:
    """W with W|a> = |w^a>; the change of basis into character states."""
    cols = [fourier_state(k, a) for a in range(k)]
    return UnitaryOp(np.column_stack(cols), f"W{k}")


def oracle_op(f: FunctionTable) -> UnitaryOp:
    """O_f |x>|y> = |x>|y + f(x) mod k>."""
    n, k = f.n, f.k
    perm = [idx(x, (y + f(x)) % k, k) for x in range(n) for y in range(k)]
    return permutation_op(perm, "O_f")


def mixed_basis_op(n: int, k: int, rule: Callable[[int, int], tuple[int, int]], name: str) -> UnitaryOp:
    """Unitary acting as |x>|w^y> -> |rule(x, y)> on the mixed basis.

    ``rule`` must be a bijection of Z_n x Z_k.
    """
    perm = []
    for x in range(n):
        for y in range(k):
            x2, y2 = rule(x, y)
            perm.append(idx(x2 % n, y2 % k, k))
    p = permutation_op(perm, name).matrix
    iw = np.kron(np.eye(n), character_basis(k).matrix)
    return UnitaryOp(iw @ p @ iw.conj().T, name)


@lru_cache(maxsize=None)
def k_op(n: int, k: int, r: int = 1) -> UnitaryOp:
    """Transposition |n-r>|w^{k-1}> <-> |0>|w^0>, identity on the other mixed-basis vectors.

    With the default r = 1 this is the final unscrambling step of the
    adaptive query circuit; for block step r the lagging component ends at
    position n - r rather than n - 1, so the swapped position moves with r.
    """
    _check_dims(n, k)
    src = ((n - r) % n, k - 1)

    def rule(x, y):
        if (x, y) == src:
            return 0, 0
        if (x, y) == (0, 0):
            return src
        return x, y

    return mixed_basis_op(n, k, rule, f"K{n},{k},{r}")


@lru_cache(maxsize=None)
def j_op(n: int, k: int, r: int) -> UnitaryOp:
    """J_r on the mixed basis.

    |x>|w^0> is fixed, |x>|w^{-1}> -> |x+r>|w^1>, and otherwise
    |x>|w^y> -> |x>|w^{y+1}>.  For k = 2 the last branch is empty.
    """
    _check_dims(n, k)

    def rule(x, y):
        if y == 0:
            return x, 0
        if y == k - 1:
            return x + r, 1
        return x, y + 1

    return mixed_basis_op(n, k, rule, f"J{n},{k},{r}")


@lru_cache(maxsize=None)
def shift_query_op(n: int, k: int) -> UnitaryOp:
    """X (x) I: advance the query register by one position."""
    return shift_op(n).kron(identity_op(k))
