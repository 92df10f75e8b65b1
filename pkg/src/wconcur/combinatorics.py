"""Exact-integer binomial machinery and enumeration of subsets and set partitions.

Everything here is exact (Python big integers); floats never enter this
module. Enumeration order is deterministic: subsets ascend by bit-mask
value (bit i-1 <-> party i), set partitions follow lexicographic
restricted-growth order, pair+singleton partitions follow (i, j).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

ENUMERATION_CAP = 16


def binomial(n: int, k: int) -> int:
    """C(n, k) as an exact integer; 0 whenever k is outside [0, n]."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def half_binomial_sum(n: int) -> int:
    """Doubled partial binomial row sum: 2*C(n,0) + ... up to the middle.

    For even n the middle term C(n, n/2) enters once, for odd n every term
    up to C(n, (n-1)/2) is doubled. Either way the value is 2**n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n % 2 == 0:
        half = n // 2
        return 2 * sum(binomial(n, k) for k in range(half)) + binomial(n, half)
    half = (n - 1) // 2
    return 2 * sum(binomial(n, k) for k in range(half + 1))


def mask_from_parties(parties: Iterable[int]) -> int:
    mask = 0
    for p in parties:
        mask |= 1 << (p - 1)
    return mask


def parties_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    p = 1
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return tuple(out)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ValueError(
            f"enumeration refused for n = {n} (cap {cap}); "
            "raise the cap explicitly if you really want this"
        )


def proper_subsets(n: int, *, cap: int = ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All 2**n - 2 nonempty proper subsets of {1..n}, ascending by mask."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    _check_cap(n, cap)
    return [parties_from_mask(m) for m in range(1, (1 << n) - 1)]


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering {1..N}, at least two blocks.

    Stored in canonical form: each block sorted, blocks ordered by their
    smallest element. Any ordering may be passed in; the constructor
    canonicalizes.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        raw = [tuple(sorted(int(i) for i in b)) for b in self.blocks]
        if len(raw) < 2:
            raise ValueError("a partition needs at least 2 blocks")
        if any(not b for b in raw):
            raise ValueError("blocks must be nonempty")
        members = [i for b in raw for i in b]
        n = len(members)
        if set(members) != set(range(1, n + 1)):
            raise ValueError(
                f"blocks must disjointly cover 1..{n}, got {sorted(members)}"
            )
        raw.sort(key=lambda b: b[0])
        object.__setattr__(self, "blocks", tuple(raw))

    @property
    def n_parties(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return format_partition(self)


def set_partitions(n: int, m: int, *, cap: int = ENUMERATION_CAP) -> list[Partition]:
    """All partitions of {1..n} into exactly m blocks (count = S(n, m))."""
    if not 2 <= m <= n:
        raise ValueError(f"need 2 <= m <= n, got m={m}, n={n}")
    _check_cap(n, cap)
    out: list[Partition] = []
    assign = [0] * n

    def extend(i: int, used: int) -> None:
        if i == n:
            if used == m:
                blocks: list[list[int]] = [[] for _ in range(m)]
                for elem, b in enumerate(assign, start=1):
                    blocks[b].append(elem)
                out.append(Partition(tuple(tuple(b) for b in blocks)))
            return
        if used + (n - i) < m:
            return
        for b in range(min(used + 1, m)):
            assign[i] = b
            extend(i + 1, max(used, b + 1))

    extend(0, 0)
    return out


def pair_singleton_partitions(n: int) -> list[Partition]:
    """The C(n, 2) partitions with one doubleton {i, j} and n-2 singletons."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            blocks = [(i, j)] + [(k,) for k in range(1, n + 1) if k not in (i, j)]
            out.append(Partition(tuple(blocks)))
    return out


def format_block(block: Sequence[int]) -> str:
    """Block text: digits concatenated when all indices < 10, else comma-joined."""
    items = sorted(int(i) for i in block)
    if all(i < 10 for i in items):
        return "".join(str(i) for i in items)
    return ",".join(str(i) for i in items)


def parse_block(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        raise ValueError("empty block")
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
    else:
        parts = list(text)
    if not all(re.fullmatch(r"\d+", p) for p in parts):
        raise ValueError(f"cannot parse block {text!r}")
    return tuple(sorted(int(p) for p in parts))


def format_partition(p: Partition) -> str:
    return "|".join(format_block(b) for b in p.blocks)


def parse_partition(text: str) -> Partition:
    """Parse block syntax like ``12|3|4`` or ``1,12|2|...`` (both accepted)."""
    chunks = text.strip().split("|")
    if len(chunks) < 2:
        raise ValueError(f"partition text needs at least two |-separated blocks: {text!r}")
    return Partition(tuple(parse_block(c) for c in chunks))
