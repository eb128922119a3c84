"""Set partitions of {0, .., n-1} in restricted-growth-string form.

The canonical representation of a partition is its restricted growth
string (RGS): ``labels[i]`` is the block of item i, blocks numbered by
first appearance, so labels[0] == 0 and labels[i] <= max(labels[:i]) + 1.
Listing blocks by label therefore orders them by smallest element.  All
equality tests and tie-breaks compare RGS tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, InvalidPartitionError

# Bell(13) ~ 2.76e7 partitions; beyond that exhaustive work is hopeless.
MAX_ENUM_N = 13


@dataclass(frozen=True)
class Partition:
    """A partition of {0, .., n-1}, stored as its restricted growth string."""

    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(lab) for lab in self.labels))
        if not self.labels:
            raise InvalidPartitionError("partition of an empty index set")
        top = -1
        for lab in self.labels:
            if lab < 0 or lab > top + 1:
                raise InvalidPartitionError(
                    f"labels {self.labels} are not a restricted growth string"
                )
            top = max(top, lab)

    @staticmethod
    def from_labels(seq: Sequence[int]) -> "Partition":
        """Build from an arbitrary block-label sequence (relabels to RGS)."""
        mapping: dict[int, int] = {}
        rgs = []
        for lab in seq:
            if lab not in mapping:
                mapping[lab] = len(mapping)
            rgs.append(mapping[lab])
        return Partition(tuple(rgs))

    @staticmethod
    def from_blocks(blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        """Build from explicit blocks, validating disjointness and cover."""
        blocks = [sorted(b) for b in blocks]
        if any(not b for b in blocks):
            raise InvalidPartitionError("empty block")
        items = [i for b in blocks for i in b]
        size = max(items) + 1 if n is None else n
        seen = [-1] * size
        for k, block in enumerate(blocks):
            for i in block:
                if not 0 <= i < size:
                    raise InvalidPartitionError(f"index {i} outside range({size})")
                if seen[i] >= 0:
                    raise InvalidPartitionError(f"index {i} appears in two blocks")
                seen[i] = k
        if any(s < 0 for s in seen):
            missing = [i for i, s in enumerate(seen) if s < 0]
            raise InvalidPartitionError(f"indices {missing} not covered")
        return Partition.from_labels(seen)

    @staticmethod
    def one_block(n: int) -> "Partition":
        return Partition((0,) * n)

    @staticmethod
    def singletons(n: int) -> "Partition":
        return Partition(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def n_blocks(self) -> int:
        return max(self.labels) + 1

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for i, lab in enumerate(self.labels):
            out[lab].append(i)
        return tuple(tuple(b) for b in out)

    @cached_property
    def block_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.n_blocks
        for lab in self.labels:
            sizes[lab] += 1
        return tuple(sizes)

    def permuted(self, perm: Sequence[int]) -> "Partition":
        """Partition of the relabeled items: new item perm[i] is old item i."""
        new = [0] * self.n
        for i, lab in enumerate(self.labels):
            new[perm[i]] = lab
        return Partition.from_labels(new)

    def __lt__(self, other: "Partition") -> bool:
        return self.labels < other.labels


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """Yield every partition of {0, .., n-1} once, in RGS lexicographic order.

    Guarded at n <= MAX_ENUM_N (Bell(13) ~ 2.7e7).
    """
    if n < 1:
        raise InvalidPartitionError("n must be >= 1")
    if n > MAX_ENUM_N:
        raise CapacityError(
            f"enumerate_partitions: n={n} exceeds the exhaustive guard "
            f"MAX_ENUM_N={MAX_ENUM_N}"
        )
    labels = [0] * n
    maxes = [0] * n  # maxes[i] = max(labels[:i+1])
    while True:
        yield Partition(tuple(labels))
        # advance to the next RGS: rightmost position that can be incremented
        i = n - 1
        while i > 0 and labels[i] > maxes[i - 1]:
            i -= 1
        if i == 0:
            return
        labels[i] += 1
        maxes[i] = max(maxes[i - 1], labels[i])
        for j in range(i + 1, n):
            labels[j] = 0
            maxes[j] = maxes[i]


def bell_number(n: int) -> int:
    """Number of partitions of [n], by the Bell-triangle recurrence."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]
