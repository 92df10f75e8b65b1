"""Lower-bound combinators for multipartite concurrence.

Two bipartite combinators (a flat 2^((3-N)/2) coefficient and a size-aware
2^((1-N)/2) sqrt(2^(N-M) + 2^M - 2) coefficient) plus the four-party
tripartite-sum bound C_4 >= sqrt(tilde/5), whose hypothesis is the balance
identity sum_i (1 - Tr rho_i^2) = sum_{i=2..4} (1 - Tr rho_1i^2) checked
here through generic partial traces so arbitrary 4-party states are
accepted.

Sub-concurrence values are supplied by the caller: exact for pure states,
certified lower bounds or explicitly heuristic estimates for mixed ones.
A report is ``conditional`` whenever its inputs are not certified or the
hypothesis of the bound is not established.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .combinatorics import (
    Partition,
    format_block,
    format_partition,
    mask_from_parties,
    set_partitions,
)
from .states import PureState, density_from_pure, partial_trace, purity
from .tolerances import TAU_COND


@dataclass(frozen=True)
class BoundReport:
    """A certified-or-conditional lower bound with its witness and inputs."""

    value: float
    witness: str
    conditional: bool
    inputs: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"bound value must be nonnegative, got {self.value!r}")

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness,
            "conditional": self.conditional,
            "inputs": dict(self.inputs),
        }


@dataclass(frozen=True)
class ConditionReport:
    lhs: float
    rhs: float
    holds: bool


def _checked_values(values: Iterable[float], what: str) -> None:
    for v in values:
        if v < 0:
            raise ValueError(f"{what} must be nonnegative, got {v!r}")


def bound_eq5(
    n_parties: int,
    sub_values: Mapping[tuple[int, ...], float],
    *,
    conditional: bool = False,
) -> BoundReport:
    """Flat-coefficient bound: 2^((3-N)/2) * max over bipartition blocks of C_2."""
    if n_parties < 3:
        raise ValueError("this bound needs at least 3 parties")
    if not sub_values:
        raise ValueError("no bipartite concurrence values supplied")
    _checked_values(sub_values.values(), "bipartite concurrences")
    items = sorted(sub_values.items(), key=lambda kv: mask_from_parties(kv[0]))
    best_block, best_c2 = max(items, key=lambda kv: kv[1])
    coeff = 2.0 ** ((3 - n_parties) / 2.0)
    return BoundReport(
        value=coeff * best_c2,
        witness=f"block {format_block(best_block)}",
        conditional=conditional,
        inputs={format_block(b): float(v) for b, v in items},
    )


def eq6_coefficient(n_parties: int, m: int) -> float:
    """2^((1-N)/2) sqrt(2^(N-M) + 2^M - 2); symmetric in M <-> N-M."""
    if n_parties < 3:
        raise ValueError("this bound needs at least 3 parties")
    if not 1 <= m <= n_parties - 1:
        raise ValueError(f"need 1 <= M <= N-1, got M={m}, N={n_parties}")
    return 2.0 ** ((1 - n_parties) / 2.0) * math.sqrt(
        2 ** (n_parties - m) + 2**m - 2
    )


def bound_eq6(
    n_parties: int,
    per_m_values: Mapping[int, float],
    *,
    conditional: bool = False,
) -> BoundReport:
    """Size-aware bound: max over M of eq6_coefficient(N, M) * C_2 at block size M."""
    if not per_m_values:
        raise ValueError("no per-size bipartite concurrence values supplied")
    _checked_values(per_m_values.values(), "bipartite concurrences")
    best_m, best_value = None, -1.0
    for m in sorted(per_m_values):
        scaled = eq6_coefficient(n_parties, m) * per_m_values[m]
        if scaled > best_value:
            best_m, best_value = m, scaled
    return BoundReport(
        value=best_value,
        witness=f"M={best_m}",
        conditional=conditional,
        inputs={str(m): float(v) for m, v in sorted(per_m_values.items())},
    )


def canonical_tripartite_partitions() -> list[Partition]:
    """The six 3-block partitions of a 4-party system, in canonical order."""
    return set_partitions(4, 3)


def tilde_c3_sq(values: Mapping[Partition, float]) -> float:
    """Sum of the six squared tripartite-partition concurrences of a 4-party state."""
    expected = canonical_tripartite_partitions()
    if set(values) != set(expected):
        got = sorted(format_partition(p) for p in values)
        raise ValueError(
            f"need exactly the six 3-block partitions of 4 parties, got {got}"
        )
    _checked_values(values.values(), "squared tripartite concurrences")
    return math.fsum(values[p] for p in expected)


def bound_theorem4(tilde_sq: float) -> float:
    """sqrt(tilde / 5): the tripartite-sum lower bound on the 4-partite concurrence."""
    if tilde_sq < 0:
        raise ValueError(f"tilde must be nonnegative, got {tilde_sq!r}")
    return math.sqrt(tilde_sq / 5.0)


def condition_check_theorem4(psi: PureState) -> ConditionReport:
    """Balance identity via generic partial traces (any 4-party pure state)."""
    if psi.n_parties != 4:
        raise ValueError(f"need exactly 4 parties, got {psi.n_parties}")
    rho = density_from_pure(psi)
    lhs = math.fsum(1.0 - purity(partial_trace(rho, (i,))) for i in range(1, 5))
    rhs = math.fsum(1.0 - purity(partial_trace(rho, (1, i))) for i in range(2, 5))
    return ConditionReport(lhs=lhs, rhs=rhs, holds=abs(lhs - rhs) < TAU_COND)
