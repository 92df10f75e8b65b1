"""Heuristic upper bound on the convex-roof concurrence of a mixed state.

Every pure-state decomposition of rho arises from its eigen-ensemble
through an isometry with orthonormal columns (ensemble steering), so the
search space is the isometry manifold. The search is derivative-free:
random isometry restarts (orthonormalized complex Gaussians) followed by
local refinement with random two-member Givens rotations, accepting
improvements only; the rotation angle scale shrinks on rejection and
recovers (capped at step_scale) on acceptance. The result is the minimum
ensemble average over all visited decompositions; it upper-bounds the
true convex roof by construction and is labeled an upper estimate, never
a certified value.

Restart streams are derived from (seed, restart index), so restarts are
order-independent and the output is reproducible for a fixed seed on a
given platform, and monotone non-increasing in the number of restarts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .states import DensityMatrix, PureState
from .tolerances import TAU_NORM, TAU_PSD, WEIGHT_FLOOR

_SCALE_GROW = 1.3
_SCALE_SHRINK = 0.9
_SCALE_FLOOR_FRAC = 1e-4  # smallest angle scale, as a fraction of step_scale


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Weighted ensemble of pure states; weights sum to 1."""

    members: tuple[tuple[float, PureState], ...]

    def __post_init__(self) -> None:
        members = tuple((float(p), psi) for p, psi in self.members)
        if not members:
            raise ValueError("a decomposition needs at least one member")
        if any(p <= 0 for p, _ in members):
            raise ValueError("member weights must be positive")
        total = math.fsum(p for p, _ in members)
        if abs(total - 1.0) > TAU_NORM:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        dims = members[0][1].dims
        if any(psi.dims != dims for _, psi in members):
            raise ValueError("all members must share the same party structure")
        object.__setattr__(self, "members", members)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.members[0][1].dims

    def __len__(self) -> int:
        return len(self.members)

    def reconstruct(self) -> np.ndarray:
        """The mixed-state matrix sum_i p_i |psi_i><psi_i| as a raw array."""
        side = self.members[0][1].dim
        out = np.zeros((side, side), dtype=np.complex128)
        for p, psi in self.members:
            out += p * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return out

    def to_json_dict(self) -> dict:
        return {
            "kind": "decomposition",
            "dims": list(self.dims),
            "members": [
                {
                    "weight": p,
                    "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
                }
                for p, psi in self.members
            ],
        }


def reconstruction_error(decomposition: Decomposition, rho: DensityMatrix) -> float:
    """Frobenius distance between the ensemble average and the target."""
    return float(np.linalg.norm(decomposition.reconstruct() - rho.entries))


@dataclass(frozen=True)
class EstimatorConfig:
    """Search budget. ensemble_size None means 2*rank capped at rank^2."""

    ensemble_size: int | None = None
    restarts: int = 64
    refine_steps: int = 500
    step_scale: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be >= 0")
        if self.step_scale <= 0:
            raise ValueError("step_scale must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")

    def to_json_dict(self) -> dict:
        return {
            "m": self.ensemble_size,
            "restarts": self.restarts,
            "refine_steps": self.refine_steps,
            "step_scale": self.step_scale,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "EstimatorConfig":
        kwargs = {}
        if data.get("m") is not None:
            kwargs["ensemble_size"] = int(data["m"])
        for key in ("restarts", "refine_steps", "seed"):
            if key in data:
                kwargs[key] = int(data[key])
        if "step_scale" in data:
            kwargs["step_scale"] = float(data["step_scale"])
        return cls(**kwargs)


@dataclass(frozen=True, eq=False)
class RoofEstimate:
    value: float
    decomposition: Decomposition
    label: str = "upper estimate"


def spectral_decompose(rho: DensityMatrix) -> Decomposition:
    """Eigen-ensemble of rho, eigenvalues below the PSD tolerance dropped."""
    eigvals, eigvecs = np.linalg.eigh(rho.entries)
    if eigvals[0] < -TAU_PSD:
        raise ValueError(f"matrix is not PSD within tolerance: {eigvals[0]!r}")
    keep = eigvals >= TAU_PSD
    weights = eigvals[keep]
    weights = weights / math.fsum(weights)
    members = tuple(
        (float(w), PureState(rho.dims, eigvecs[:, idx]))
        for w, idx in zip(weights, np.nonzero(keep)[0])
    )
    return Decomposition(members)


def mix_decomposition(base: Decomposition, mixer: np.ndarray) -> Decomposition:
    """Steer ``base`` through an isometry with orthonormal columns.

    Row k of the mixer combines the weighted base members into the new
    unnormalized member psi~_k = sum_j mixer[k, j] sqrt(p_j) |psi_j>; its
    squared norm is the new weight. Members below the weight floor are
    dropped. The ensemble average is unchanged.
    """
    mixer = np.asarray(mixer, dtype=np.complex128)
    r = len(base)
    if mixer.ndim != 2 or mixer.shape[1] != r or mixer.shape[0] < r:
        raise ValueError(
            f"mixer must be m x {r} with m >= {r}, got shape {mixer.shape}"
        )
    defect = float(np.max(np.abs(mixer.conj().T @ mixer - np.eye(r))))
    if defect > 1e-10:
        raise ValueError(f"mixer columns are not orthonormal: defect {defect!r}")
    scaled = np.array(
        [math.sqrt(p) * psi.amplitudes for p, psi in base.members]
    )
    rows = mixer @ scaled
    members = []
    for row in rows:
        weight = float(np.vdot(row, row).real)
        if weight < WEIGHT_FLOOR:
            continue
        members.append((weight, PureState(base.dims, row / math.sqrt(weight))))
    return Decomposition(tuple(members))


def wootters_concurrence_2qubit(rho: DensityMatrix) -> float:
    """Two-qubit spin-flip concurrence max(0, l1 - l2 - l3 - l4)."""
    if rho.dims != (2, 2):
        raise ValueError(f"need a two-qubit state, got dims {rho.dims}")
    sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    yy = np.kron(sigma_y, sigma_y)
    flipped = rho.entries @ yy @ rho.entries.conj() @ yy
    lams = np.sqrt(np.maximum(np.linalg.eigvals(flipped).real, 0.0))
    lams[::-1].sort()
    return max(0.0, float(lams[0] - lams[1] - lams[2] - lams[3]))


def _default_ensemble_size(rank: int) -> int:
    return min(2 * rank, rank * rank)


def _member_value(
    dims: tuple[int, ...], row: np.ndarray, functional: Callable[[PureState], float]
) -> tuple[float, float]:
    weight = float(np.vdot(row, row).real)
    if weight < WEIGHT_FLOOR:
        return 0.0, 0.0
    return weight, weight * functional(PureState(dims, row / math.sqrt(weight)))


def roof_upper_bound(
    rho: DensityMatrix,
    functional: Callable[[PureState], float],
    config: EstimatorConfig | None = None,
) -> RoofEstimate:
    """Minimum ensemble-average functional over all visited decompositions.

    The eigen-ensemble itself is evaluated first (so pure inputs cost one
    functional call), then ``config.restarts`` independent isometry
    restarts are refined and the best decomposition is returned.
    """
    cfg = config or EstimatorConfig()
    base = spectral_decompose(rho)
    r = len(base)
    m = cfg.ensemble_size if cfg.ensemble_size is not None else _default_ensemble_size(r)
    if m < r:
        raise ValueError(f"ensemble_size {m} is below the state's rank {r}")
    dims = rho.dims

    scaled = np.array(
        [math.sqrt(p) * psi.amplitudes for p, psi in base.members]
    )
    best_value = math.fsum(p * functional(psi) for p, psi in base.members)
    best_rows = scaled

    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        gauss = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
        isometry = np.linalg.qr(gauss)[0]
        rows = isometry @ scaled
        values = np.empty(m)
        for k in range(m):
            _, values[k] = _member_value(dims, rows[k], functional)
        total = math.fsum(values)

        if m >= 2 and cfg.refine_steps > 0:
            first = rng.integers(0, m, cfg.refine_steps)
            offset = rng.integers(1, m, cfg.refine_steps)
            angles = rng.standard_normal(cfg.refine_steps)
            phases = rng.uniform(0.0, 2.0 * np.pi, cfg.refine_steps)
            scale = cfg.step_scale
            for t in range(cfg.refine_steps):
                if total <= 1e-12:
                    break
                a = int(first[t])
                b = int((first[t] + offset[t]) % m)
                theta = angles[t] * scale
                scale *= decay
                c, s = math.cos(theta), math.sin(theta)
                phase = complex(math.cos(phases[t]), math.sin(phases[t]))
                row_a = c * rows[a] + s * phase * rows[b]
                row_b = -s * phase.conjugate() * rows[a] + c * rows[b]
                _, val_a = _member_value(dims, row_a, functional)
                _, val_b = _member_value(dims, row_b, functional)
                candidate = total - values[a] - values[b] + val_a + val_b
                if candidate < total:
                    rows[a], rows[b] = row_a, row_b
                    values[a], values[b] = val_a, val_b
                    total = candidate

        total = math.fsum(values)
        if total < best_value:
            best_value = total
            best_rows = rows

    members = []
    for row in best_rows:
        weight = float(np.vdot(row, row).real)
        if weight < WEIGHT_FLOOR:
            continue
        members.append((weight, PureState(dims, row / math.sqrt(weight))))
    return RoofEstimate(value=best_value, decomposition=Decomposition(tuple(members)))
