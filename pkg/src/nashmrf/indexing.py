"""Mixed-radix indexing for dense tables over ordered player subsets.

Every dense table in this package (payoffs, potentials, beliefs) is laid
out the same way: members sorted by ascending player id, last member
varying fastest.  Index order therefore coincides with lexicographic
order of the assignments.
"""

from __future__ import annotations

from typing import Iterator, Sequence


class Shape:
    """Dense layout of a table over an ordered tuple of players."""

    __slots__ = ("members", "sizes", "strides", "size")

    def __init__(self, members: Sequence[int], sizes: Sequence[int]):
        members = tuple(members)
        sizes = tuple(sizes)
        if len(members) != len(sizes):
            raise ValueError("members and sizes must have equal length")
        if any(members[i] >= members[i + 1] for i in range(len(members) - 1)):
            raise ValueError("members must be strictly ascending")
        if any(s < 1 for s in sizes):
            raise ValueError("every member needs at least one value")
        strides = [1] * len(sizes)
        for i in range(len(sizes) - 2, -1, -1):
            strides[i] = strides[i + 1] * sizes[i + 1]
        self.members = members
        self.sizes = sizes
        self.strides = tuple(strides)
        self.size = strides[0] * sizes[0] if sizes else 1

    def __repr__(self) -> str:
        return f"Shape(members={self.members}, sizes={self.sizes})"

    def index(self, values: Sequence[int]) -> int:
        if len(values) != len(self.members):
            raise ValueError(f"expected {len(self.members)} values, got {len(values)}")
        idx = 0
        for v, size, stride in zip(values, self.sizes, self.strides):
            if not 0 <= v < size:
                raise ValueError(f"value {v} out of range for size {size}")
            idx += v * stride
        return idx

    def values(self, index: int) -> tuple[int, ...]:
        return tuple((index // stride) % size for stride, size in zip(self.strides, self.sizes))

    def assignments(self) -> Iterator[tuple[int, ...]]:
        """All assignments in index (= lexicographic) order."""
        for idx in range(self.size):
            yield self.values(idx)

    def position(self, player: int) -> int:
        try:
            return self.members.index(player)
        except ValueError:
            raise KeyError(f"player {player} not in table members {self.members}") from None

    def projection(self, sub: "Shape") -> list[int]:
        """Map each index of this shape to the index of its restriction to ``sub``.

        ``sub.members`` must be a subset of ``self.members``.
        """
        sub_stride = dict(zip(sub.members, sub.strides))
        missing = set(sub.members) - set(self.members)
        if missing:
            raise KeyError(f"players {sorted(missing)} not in table members {self.members}")
        out = [0]
        for member, size in zip(self.members, self.sizes):
            stride = sub_stride.get(member, 0)
            if stride:
                out = [base + v * stride for base in out for v in range(size)]
            else:
                out = [base for base in out for _ in range(size)]
        return out
