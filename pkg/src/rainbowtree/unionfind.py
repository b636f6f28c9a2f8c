"""Disjoint-set forest with union by size and path halving."""

from __future__ import annotations


class UnionFind:
    __slots__ = ("parent", "size", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already together."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def min_labels(self) -> list[int]:
        """Label every element by the smallest element of its set."""
        n = len(self.parent)
        smallest: dict[int, int] = {}
        labels = [0] * n
        for x in range(n):
            r = self.find(x)
            labels[x] = smallest.setdefault(r, x)
        return labels

    def copy(self) -> "UnionFind":
        other = UnionFind.__new__(UnionFind)
        other.parent = self.parent[:]
        other.size = self.size[:]
        other.count = self.count
        return other
