"""Pure-state concurrence functionals.

Three functionals share one engine: the full N-partite concurrence
2^(1-N/2) * sqrt((2^N - 2) - sum_a Tr(rho_a^2)) over all nonempty proper
subsystems a, its bipartite specialization sqrt(2 (1 - Tr(rho_A^2))), and
the M-partite partition concurrence obtained by coarse-graining the state
so each partition block becomes one party and reapplying the engine.

Reduced purities are evaluated directly from the state vector: reshaping
the amplitude tensor along a bipartition and forming the Gram matrix of
the smaller side gives Tr(rho_keep^2) without materializing the full
density matrix. The "fast" subset sum computes only subsets up to half
size and doubles (with the middle layer halved for even N, where each
half-size subset containing party 1 stands in for its complement); the
"oracle" mode evaluates every proper subset independently. Both modes
reduce with math.fsum in enumeration order, so results are deterministic.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable

import numpy as np

from .combinatorics import Partition, proper_subsets
from .states import PureState, normalize_parties
from .tolerances import RADICAND_CLAMP


def coarse_grain(psi: PureState, partition: Partition) -> PureState:
    """Merge parties into partition blocks; amplitudes are only permuted.

    Block b of the result has dimension prod of the merged party
    dimensions; the norm is preserved exactly.
    """
    if partition.n_parties != psi.n_parties:
        raise ValueError(
            f"partition covers {partition.n_parties} parties, state has {psi.n_parties}"
        )
    axes = [p - 1 for block in partition.blocks for p in block]
    new_dims = tuple(
        math.prod(psi.dims[p - 1] for p in block) for block in partition.blocks
    )
    merged = psi.tensor().transpose(axes).reshape(-1)
    return PureState(new_dims, merged)


def reduced_purity(psi: PureState, parties: Iterable[int]) -> float:
    """Tr(rho_S^2) for the reduction of |psi><psi| onto the given parties."""
    kept = normalize_parties(parties, psi.n_parties)
    if not kept:
        raise ValueError("no parties kept")
    return _axes_purity(psi.tensor(), psi.n_parties, [p - 1 for p in kept])


def _axes_purity(tensor: np.ndarray, n: int, keep_axes: list[int]) -> float:
    rest = [a for a in range(n) if a not in keep_axes]
    mat = tensor.transpose(keep_axes + rest).reshape(
        math.prod(tensor.shape[a] for a in keep_axes), -1
    )
    # Gram matrix of the smaller side; both sides share the Schmidt spectrum.
    if mat.shape[0] <= mat.shape[1]:
        gram = mat @ mat.conj().T
    else:
        gram = mat.conj().T @ mat
    return float(np.vdot(gram, gram).real)


def _subset_purity_sum(psi: PureState, method: str) -> float:
    n = psi.n_parties
    tensor = psi.tensor()
    if method == "oracle":
        return math.fsum(
            _axes_purity(tensor, n, [p - 1 for p in subset])
            for subset in proper_subsets(n)
        )
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    terms = []
    for k in range(1, (n + 1) // 2):
        for subset in combinations(range(n), k):
            terms.append(_axes_purity(tensor, n, list(subset)))
    if n % 2 == 0:
        # Half-size layer: subsets containing party 1 represent their complements.
        for subset in combinations(range(1, n), n // 2 - 1):
            terms.append(_axes_purity(tensor, n, [0, *subset]))
    return 2.0 * math.fsum(terms)


def _engine(psi: PureState, method: str) -> float:
    n = psi.n_parties
    radicand = (2**n - 2) - _subset_purity_sum(psi, method)
    return 2.0 ** (1.0 - n / 2.0) * math.sqrt(_clamped(radicand))


def _clamped(radicand: float) -> float:
    if radicand < -RADICAND_CLAMP:
        raise ValueError(
            f"concurrence radicand {radicand!r} is negative beyond the noise "
            "threshold; the input state is corrupted"
        )
    return max(radicand, 0.0)


def concurrence_pure(psi: PureState, *, method: str = "fast") -> float:
    """Full N-partite concurrence of a pure state (N >= 2)."""
    if psi.n_parties < 2:
        raise ValueError("concurrence needs at least 2 parties")
    return _engine(psi, method)


def bipartite_concurrence_pure(psi: PureState, block: Iterable[int]) -> float:
    """sqrt(2 (1 - Tr(rho_block^2))); symmetric under complementing the block."""
    kept = normalize_parties(block, psi.n_parties)
    if not kept or len(kept) == psi.n_parties:
        raise ValueError("block must be a nonempty proper subset of the parties")
    linear_entropy = 1.0 - reduced_purity(psi, kept)
    return math.sqrt(2.0 * _clamped(linear_entropy))


def partition_concurrence_pure(
    psi: PureState, partition: Partition, *, method: str = "fast"
) -> float:
    """M-partite concurrence after merging parties into the partition blocks."""
    return _engine(coarse_grain(psi, partition), method)
