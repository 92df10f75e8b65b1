"""Dense complex state vectors and density matrices over multi-party systems.

Parties are numbered 1..N and party 1 owns the most significant index
digit, so the flat amplitude index of a product basis state |x1 x2 ... xN>
is x1 * (d2*...*dN) + x2 * (d3*...*dN) + ... + xN (row-major party order).
All values are immutable after construction; every operation is a pure
function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tolerances import TAU_HERM, TAU_NORM, TAU_PSD


def _checked_dims(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out:
        raise ValueError("at least one party is required")
    if any(d < 2 for d in out):
        raise ValueError(f"every party dimension must be >= 2, got {out}")
    return out


def normalize_parties(parties: Iterable[int], n_parties: int) -> tuple[int, ...]:
    """Sorted tuple of distinct 1-based party indices, validated against N."""
    out = tuple(sorted({int(p) for p in parties}))
    if any(p < 1 or p > n_parties for p in out):
        raise ValueError(f"party indices must lie in 1..{n_parties}, got {out}")
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized complex amplitude vector over a tensor product of parties."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        dims = _checked_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        total = math.prod(dims)
        if amps.shape != (total,):
            raise ValueError(
                f"amplitude vector must have shape ({total},) for dims {dims}, "
                f"got {amps.shape}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > TAU_NORM:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def tensor(self) -> np.ndarray:
        """Read-only view shaped (d1, ..., dN)."""
        return self.amplitudes.reshape(self.dims)

    def to_json_dict(self) -> dict:
        return {
            "kind": "pure",
            "dims": list(self.dims),
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PureState":
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
        return cls(tuple(data["dims"]), amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace complex matrix with party structure."""

    dims: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self) -> None:
        dims = _checked_dims(self.dims)
        mat = np.array(self.entries, dtype=np.complex128, copy=True)
        side = math.prod(dims)
        if mat.shape != (side, side):
            raise ValueError(
                f"entries must have shape ({side}, {side}) for dims {dims}, "
                f"got {mat.shape}"
            )
        herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_defect > TAU_HERM:
            raise ValueError(f"matrix is not Hermitian: max |rho - rho^dag| = {herm_defect!r}")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > TAU_NORM:
            raise ValueError(f"trace must be 1, got {trace!r}")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < -TAU_PSD:
            raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {smallest!r}")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", mat)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def side(self) -> int:
        return self.entries.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "kind": "mixed",
            "dims": list(self.dims),
            "rows": [
                [[float(x.real), float(x.imag)] for x in row] for row in self.entries
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityMatrix":
        rows = np.array([[complex(re, im) for re, im in row] for row in data["rows"]])
        return cls(tuple(data["dims"]), rows)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Rank-1 density matrix |psi><psi|."""
    amps = psi.amplitudes
    return DensityMatrix(psi.dims, np.outer(amps, amps.conj()))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix over the kept parties (1-based indices).

    Keeping every party returns ``rho`` unchanged; an empty keep set is an
    error. Trace and Hermiticity are preserved.
    """
    kept = normalize_parties(keep, rho.n_parties)
    if not kept:
        raise ValueError("no parties kept")
    n = rho.n_parties
    if len(kept) == n:
        return rho
    traced = tuple(p for p in range(1, n + 1) if p not in kept)
    keep_ax = [p - 1 for p in kept]
    trace_ax = [p - 1 for p in traced]
    dims = rho.dims
    d_keep = math.prod(dims[a] for a in keep_ax)
    d_trace = math.prod(dims[a] for a in trace_ax)
    tens = rho.entries.reshape(dims + dims)
    order = keep_ax + trace_ax + [n + a for a in keep_ax] + [n + a for a in trace_ax]
    block = tens.transpose(order).reshape(d_keep, d_trace, d_keep, d_trace)
    reduced = np.einsum("itjt->ij", block)
    return DensityMatrix(tuple(dims[a] for a in keep_ax), reduced)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), computed as the squared Frobenius norm (rho is Hermitian)."""
    return float(np.vdot(rho.entries, rho.entries).real)
