"""Partitions of 0..n-1 stored as class-representative tuples.

``p[x]`` is the least element of the class of ``x``, so two partitions are
equal iff their tuples are equal and hashing is plain tuple hashing.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


class SizeMismatch(ValueError):
    pass


class Partition(tuple):
    __slots__ = ()

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(range(n))

    @classmethod
    def total(cls, n: int) -> "Partition":
        return cls([0] * n)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        rep = list(range(n))
        for block in blocks:
            block = sorted(block)
            for x in block:
                rep[x] = block[0]
        return cls(rep)

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Partition whose classes are the fibres of ``labels``."""
        first: dict = {}
        return cls(first.setdefault(lab, x) for x, lab in enumerate(labels))

    @property
    def n(self) -> int:
        return len(self)

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self):
            out.setdefault(r, []).append(x)
        return list(out.values())

    def num_classes(self) -> int:
        return sum(1 for x, r in enumerate(self) if x == r)

    def block_of(self, x: int) -> list[int]:
        r = self[x]
        return [y for y in range(len(self)) if self[y] == r]

    def same(self, x: int, y: int) -> bool:
        return self[x] == self[y]

    def is_discrete(self) -> bool:
        return all(x == r for x, r in enumerate(self))

    def is_total(self) -> bool:
        return all(r == 0 for r in self)

    def refines(self, other: "Partition") -> bool:
        """True iff every class of self lies inside a class of other."""
        _check(self, other)
        return all(other[x] == other[r] for x, r in enumerate(self))

    def meet(self, other: "Partition") -> "Partition":
        _check(self, other)
        return Partition.from_labels(list(zip(self, other)))

    def join(self, other: "Partition") -> "Partition":
        _check(self, other)
        return join_all(len(self), (self, other))

    def permuted(self, perm: Sequence[int]) -> "Partition":
        """Image under the bijection x -> perm[x]."""
        lab = [0] * len(self)
        for x, r in enumerate(self):
            lab[perm[x]] = perm[r]
        return Partition.from_labels(lab)

    def restrict(self, subset: Sequence[int]) -> "Partition":
        """Trace on ``subset``, re-indexed by position in ``subset``."""
        return Partition.from_labels([self[x] for x in subset])

    def sort_key(self):
        return (self.num_classes(), tuple(self))

    def __repr__(self):
        return "Partition(" + "|".join(",".join(map(str, b)) for b in self.blocks()) + ")"


def _check(p, q):
    if len(p) != len(q):
        raise SizeMismatch(f"partitions of {len(p)} and {len(q)} elements")


def join_all(n: int, parts: Iterable[Sequence[int]]) -> Partition:
    """Join in the partition lattice: transitive closure of the union."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in parts:
        if len(p) != n:
            raise SizeMismatch(f"expected {n} elements, got {len(p)}")
        for x, r in enumerate(p):
            if x != r:
                a, b = find(x), find(r)
                if a != b:
                    if a < b:
                        parent[b] = a
                    else:
                        parent[a] = b
    return Partition(find(x) for x in range(n))


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of 0..n-1, via restricted growth strings."""
    if n == 0:
        yield Partition(())
        return
    rgs = [0] * n

    def rec(i, m):
        if i == n:
            yield Partition.from_labels(rgs)
            return
        for c in range(m + 2):
            rgs[i] = c
            yield from rec(i + 1, max(m, c))

    rgs[0] = 0
    yield from rec(1, 0)
