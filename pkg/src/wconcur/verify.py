"""Self-verification harness: replays every identity against oracle paths.

Each scope pits a closed form against an independent evaluation route
(generic subset-purity engine, partial traces of the full density matrix,
or exact integer arithmetic) on randomly sampled states and reports the
maximum residual per check. Random states are normalized complex Gaussian
vectors; streams are derived from (seed, scope, N) so reports are
reproducible and insensitive to the n-max cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.optimize import brentq

from .bounds import bound_theorem4, condition_check_theorem4
from .combinatorics import (
    half_binomial_sum,
    pair_singleton_partitions,
    proper_subsets,
    set_partitions,
)
from .concurrence import (
    concurrence_pure,
    partition_concurrence_pure,
    reduced_purity,
)
from .states import PureState, density_from_pure, partial_trace, purity
from .tolerances import TAU_COND
from .wclass import (
    WCoefficients,
    verify_theorem3 as theorem3_report,
    w_concurrence_sq,
    w_pair_partition_concurrence_sq,
    w_reduced_linear_entropy,
    w_to_state,
)

SCOPES = ("lemmas", "thm1", "thm2", "thm3", "thm4")

_SCOPE_DEFAULTS = {
    "lemmas": {"n_max": 64, "samples": 0},
    "thm1": {"n_max": 10, "samples": 100},
    "thm2": {"n_max": 8, "samples": 50},
    "thm3": {"n_max": 10, "samples": 100},
    "thm4": {"n_max": 4, "samples": 100},
}

_SCOPE_STREAM = {name: idx for idx, name in enumerate(SCOPES)}


@dataclass
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    cases: int
    passed: bool = True
    worst_case: dict | None = None

    def to_json_dict(self) -> dict:
        out = {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "cases": self.cases,
            "passed": self.passed,
        }
        if not self.passed and self.worst_case is not None:
            out["worst_case"] = self.worst_case
        return out


class _Tracker:
    """Running max residual, remembering the worst case for replay."""

    def __init__(self, name: str, tolerance: float) -> None:
        self.name = name
        self.tolerance = tolerance
        self.max_residual = 0.0
        self.cases = 0
        self.worst: dict | None = None

    def record(self, residual: float, case: dict) -> None:
        self.cases += 1
        if residual > self.max_residual or self.cases == 1:
            self.max_residual = residual
            self.worst = case

    def result(self) -> CheckResult:
        passed = self.max_residual <= self.tolerance
        return CheckResult(
            name=self.name,
            max_residual=self.max_residual,
            tolerance=self.tolerance,
            cases=self.cases,
            passed=passed,
            worst_case=None if passed else self.worst,
        )


def _rng(seed: int, scope: str, n: int) -> np.random.Generator:
    return np.random.default_rng([seed, _SCOPE_STREAM[scope], n])


def random_w_coefficients(rng: np.random.Generator, n: int) -> WCoefficients:
    vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return WCoefficients(vec / np.linalg.norm(vec))


def random_pure_state(rng: np.random.Generator, dims: tuple[int, ...]) -> PureState:
    size = math.prod(dims)
    vec = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return PureState(dims, vec / np.linalg.norm(vec))


def _coeff_case(n: int, sample: int, a: WCoefficients) -> dict:
    return {
        "n": n,
        "sample": sample,
        "coeffs": [[float(c.real), float(c.imag)] for c in a.coeffs],
    }


def verify_lemmas(n_max: int = 64) -> list[CheckResult]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    tracker = _Tracker("half_binomial_sum_equals_power_of_two", 0.0)
    for n in range(1, n_max + 1):
        residual = abs(half_binomial_sum(n) - 2**n)
        tracker.record(float(residual), {"n": n})
    return [tracker.result()]


def verify_thm1(n_max: int = 10, samples: int = 100, seed: int = 0) -> list[CheckResult]:
    closed = _Tracker("w_concurrence_closed_form_vs_engine", 1e-10)
    entropy = _Tracker("w_reduced_linear_entropy_vs_partial_trace", 1e-12)
    for n in range(2, n_max + 1):
        rng = _rng(seed, "thm1", n)
        for sample in range(samples):
            a = random_w_coefficients(rng, n)
            engine_sq = concurrence_pure(w_to_state(a)) ** 2
            closed.record(
                abs(w_concurrence_sq(a) - engine_sq), _coeff_case(n, sample, a)
            )
        if n <= 8:
            for sample in range(min(samples, 3)):
                a = random_w_coefficients(rng, n)
                rho = density_from_pure(w_to_state(a))
                for subset in proper_subsets(n) + [tuple(range(1, n + 1))]:
                    oracle = 1.0 - purity(partial_trace(rho, subset))
                    entropy.record(
                        abs(w_reduced_linear_entropy(a, subset) - oracle),
                        {**_coeff_case(n, sample, a), "subset": list(subset)},
                    )
    return [closed.result(), entropy.result()]


def verify_thm2(n_max: int = 8, samples: int = 50, seed: int = 0) -> list[CheckResult]:
    tracker = _Tracker("pair_partition_closed_form_vs_engine", 1e-10)
    for n in range(3, n_max + 1):
        rng = _rng(seed, "thm2", n)
        partitions = pair_singleton_partitions(n)
        for sample in range(samples):
            a = random_w_coefficients(rng, n)
            psi = w_to_state(a)
            for partition in partitions:
                pair = next(b for b in partition.blocks if len(b) == 2)
                engine_sq = partition_concurrence_pure(psi, partition) ** 2
                closed_sq = w_pair_partition_concurrence_sq(a, pair[0], pair[1])
                tracker.record(
                    abs(closed_sq - engine_sq),
                    {**_coeff_case(n, sample, a), "pair": list(pair)},
                )
    return [tracker.result()]


def verify_thm3(n_max: int = 10, samples: int = 100, seed: int = 0) -> list[CheckResult]:
    tracker = _Tracker("n_vs_n_minus_1_partite_relation", 1e-12)
    for n in range(3, n_max + 1):
        rng = _rng(seed, "thm3", n)
        equal = WCoefficients(np.full(n, 1.0 / math.sqrt(n), dtype=complex))
        for sample in range(samples + 1):
            a = equal if sample == 0 else random_w_coefficients(rng, n)
            report = theorem3_report(a)
            tracker.record(report.residual, _coeff_case(n, sample, a))
    return [tracker.result()]


def balance_residual(psi: PureState) -> float:
    """lhs - rhs of the 4-party balance identity, via reduced purities."""
    lhs = math.fsum(1.0 - reduced_purity(psi, (i,)) for i in range(1, 5))
    rhs = math.fsum(1.0 - reduced_purity(psi, (1, i)) for i in range(2, 5))
    return lhs - rhs


def balanced_four_party_states(
    rng: np.random.Generator, count: int, dims: tuple[int, ...] = (2, 2, 2, 2)
) -> Iterator[PureState]:
    """Pure 4-party states satisfying the balance identity, by root finding.

    Draws pairs of random states whose balance residuals have opposite
    signs and locates a zero crossing along the normalized interpolation
    path between them.
    """
    if len(dims) != 4:
        raise ValueError("need exactly 4 parties")
    produced = 0
    while produced < count:
        psi_pos = random_pure_state(rng, dims)
        if balance_residual(psi_pos) < 0:
            continue
        psi_neg = random_pure_state(rng, dims)
        if balance_residual(psi_neg) >= 0:
            continue

        def path(t: float) -> float:
            vec = (1.0 - t) * psi_pos.amplitudes + t * psi_neg.amplitudes
            norm = np.linalg.norm(vec)
            if norm < 1e-6:
                raise ValueError("degenerate interpolation path")
            return balance_residual(PureState(dims, vec / norm))

        try:
            root = brentq(path, 0.0, 1.0, xtol=1e-14)
        except ValueError:
            continue
        vec = (1.0 - root) * psi_pos.amplitudes + root * psi_neg.amplitudes
        yield PureState(dims, vec / np.linalg.norm(vec))
        produced += 1


def _exact_tilde_sq(psi: PureState) -> float:
    return math.fsum(
        partition_concurrence_pure(psi, p) ** 2 for p in set_partitions(4, 3)
    )


def verify_thm4(samples: int = 100, seed: int = 0, n_max: int = 4) -> list[CheckResult]:
    del n_max  # fixed to 4 parties by the theorem
    w_cond = _Tracker("w_state_balance_condition", TAU_COND)
    w_equal = _Tracker("w_state_bound_equals_concurrence", 1e-9)
    ghz = _Tracker("ghz_condition_values", 1e-12)
    balanced = _Tracker("balanced_state_equality", 1e-8)

    rng = _rng(seed, "thm4", 4)
    for sample in range(samples):
        a = random_w_coefficients(rng, 4)
        psi = w_to_state(a)
        condition = condition_check_theorem4(psi)
        w_cond.record(abs(condition.lhs - condition.rhs), _coeff_case(4, sample, a))
        bound = bound_theorem4(_exact_tilde_sq(psi))
        w_equal.record(
            abs(bound - concurrence_pure(psi)), _coeff_case(4, sample, a)
        )

    ghz_amps = np.zeros(16, dtype=complex)
    ghz_amps[0] = ghz_amps[15] = 1.0 / math.sqrt(2.0)
    ghz_state = PureState((2, 2, 2, 2), ghz_amps)
    condition = condition_check_theorem4(ghz_state)
    ghz_residual = max(abs(condition.lhs - 2.0), abs(condition.rhs - 1.5))
    if condition.holds:
        ghz_residual = math.inf
    ghz.record(ghz_residual, {"state": "ghz4"})

    for sample, psi in enumerate(balanced_four_party_states(rng, samples)):
        residual = abs(concurrence_pure(psi) ** 2 - _exact_tilde_sq(psi) / 5.0)
        balanced.record(
            residual,
            {
                "sample": sample,
                "amplitudes": [[float(c.real), float(c.imag)] for c in psi.amplitudes],
            },
        )

    return [w_cond.result(), w_equal.result(), ghz.result(), balanced.result()]


_SCOPE_RUNNERS = {
    "lemmas": lambda n_max, samples, seed: verify_lemmas(n_max),
    "thm1": lambda n_max, samples, seed: verify_thm1(n_max, samples, seed),
    "thm2": lambda n_max, samples, seed: verify_thm2(n_max, samples, seed),
    "thm3": lambda n_max, samples, seed: verify_thm3(n_max, samples, seed),
    "thm4": lambda n_max, samples, seed: verify_thm4(samples, seed),
}


@dataclass
class ScopeReport:
    scope: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "scope": self.scope,
            "passed": self.passed,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def run_verify(
    scope: str = "all",
    n_max: int | None = None,
    samples: int | None = None,
    seed: int = 0,
) -> list[ScopeReport]:
    names = SCOPES if scope == "all" else (scope,)
    if any(name not in SCOPES for name in names):
        raise ValueError(f"unknown scope {scope!r}; choose from {SCOPES + ('all',)}")
    reports = []
    for name in names:
        defaults = _SCOPE_DEFAULTS[name]
        chosen_n = min(n_max, defaults["n_max"]) if scope == "all" and n_max else (
            n_max or defaults["n_max"]
        )
        chosen_samples = samples if samples is not None else defaults["samples"]
        checks = _SCOPE_RUNNERS[name](chosen_n, chosen_samples, seed)
        reports.append(ScopeReport(scope=name, checks=checks))
    return reports
