"""W-class states and their exact concurrence closed forms.

An N-qubit W-class state is the single-excitation superposition with
coefficients (a_1, ..., a_N), sum |a_i|^2 = 1. Every formula here depends
on the moduli |a_i|^2 only; complex coefficients are accepted and their
moduli taken. All closed forms are cross-validated in the test suite
against the generic partial-trace concurrence engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .combinatorics import binomial, pair_singleton_partitions
from .states import PureState, normalize_parties
from .tolerances import TAU_COND, TAU_NORM


@dataclass(frozen=True, eq=False)
class WCoefficients:
    """Coefficient vector (a_1, ..., a_N) of a single-excitation state, N >= 2."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=np.complex128, copy=True)
        if c.ndim != 1 or c.shape[0] < 2:
            raise ValueError("need a 1-D coefficient vector with at least 2 entries")
        norm_sq = float(np.vdot(c, c).real)
        if abs(norm_sq - 1.0) > TAU_NORM:
            raise ValueError(f"coefficients are not normalized: sum |a|^2 = {norm_sq!r}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n_parties(self) -> int:
        return self.coeffs.shape[0]

    def moduli_sq(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def to_json_dict(self) -> dict:
        return {
            "kind": "wstate",
            "coeffs": [[float(a.real), float(a.imag)] for a in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "WCoefficients":
        return cls(np.array([complex(re, im) for re, im in data["coeffs"]]))


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    residual: float


@dataclass(frozen=True)
class BalanceReport:
    lhs: float
    rhs: float
    holds: bool


def w_to_state(a: WCoefficients) -> PureState:
    """The N-qubit state with amplitude a_i on the basis ket excited at slot i."""
    n = a.n_parties
    amps = np.zeros(2**n, dtype=np.complex128)
    for i, coeff in enumerate(a.coeffs, start=1):
        amps[1 << (n - i)] = coeff
    return PureState((2,) * n, amps)


def w_reduced_linear_entropy(a: WCoefficients, parties: Iterable[int]) -> float:
    """1 - Tr(rho_S^2) = 2 (sum_{i in S} |a_i|^2)(sum_{j not in S} |a_j|^2)."""
    kept = normalize_parties(parties, a.n_parties)
    if not kept:
        raise ValueError("subset must be nonempty")
    m = a.moduli_sq()
    inside = math.fsum(m[i - 1] for i in kept)
    outside = math.fsum(m[j - 1] for j in range(1, a.n_parties + 1) if j not in kept)
    return 2.0 * inside * outside


def w_concurrence_sq(a: WCoefficients) -> float:
    """Squared N-partite concurrence: 4 sum_{i<j} |a_i|^2 |a_j|^2."""
    m = a.moduli_sq()
    n = a.n_parties
    return 4.0 * math.fsum(m[i] * m[j] for i in range(n) for j in range(i + 1, n))


def w_pair_partition_concurrence_sq(a: WCoefficients, i: int, j: int) -> float:
    """Squared (N-1)-partite concurrence under the partition ij|rest-singletons.

    Equals 4 sum over pairs (k, l) != (i, j) of |a_k|^2 |a_l|^2, i.e. the
    full value minus the single excluded pair term.
    """
    n = a.n_parties
    if n < 3:
        raise ValueError("pair partitions need at least 3 parties")
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= N, got i={i}, j={j}")
    m = a.moduli_sq()
    return 4.0 * math.fsum(
        m[k] * m[l]
        for k in range(n)
        for l in range(k + 1, n)
        if (k + 1, l + 1) != (i, j)
    )


def w_tilde_sum_sq(a: WCoefficients) -> float:
    """Sum of squared (N-1)-partite concurrences over all C(N,2) pair partitions."""
    terms = []
    for partition in pair_singleton_partitions(a.n_parties):
        pair = next(b for b in partition.blocks if len(b) == 2)
        terms.append(w_pair_partition_concurrence_sq(a, pair[0], pair[1]))
    return math.fsum(terms)


def verify_theorem3(a: WCoefficients) -> IdentityReport:
    """N-partite vs (N-1)-partite relation: C_N^2 = tilde-sum / (C(N,2) - 1)."""
    if a.n_parties < 3:
        raise ValueError("the relation needs at least 3 parties")
    lhs = w_concurrence_sq(a)
    rhs = w_tilde_sum_sq(a) / (binomial(a.n_parties, 2) - 1)
    return IdentityReport(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs))


def w_balance_identity(a: WCoefficients) -> BalanceReport:
    """4-qubit identity: sum_i (1 - Tr rho_i^2) = sum_{i=2..4} (1 - Tr rho_1i^2)."""
    if a.n_parties != 4:
        raise ValueError("balance identity is defined for exactly 4 parties")
    lhs = math.fsum(w_reduced_linear_entropy(a, (i,)) for i in range(1, 5))
    rhs = math.fsum(w_reduced_linear_entropy(a, (1, i)) for i in range(2, 5))
    return BalanceReport(lhs=lhs, rhs=rhs, holds=abs(lhs - rhs) < TAU_COND)
