"""
Disjoint-set forest over vertices 1..n.

Union by size with path compression; component sizes are kept at the roots so
the giant component is available without a second pass.
"""

from collections.abc import Iterable


class UnionFind:
    """Connected components of the graph whose edges carry at least one link."""

    def __init__(self, n: int):
        # index 0 unused so vertices map to themselves
        self.parents = list(range(n + 1))
        self.sizes = [1] * (n + 1)
        self.n = n
        self.components = n

    def find(self, item: int) -> int:
        root = item
        while self.parents[root] != root:
            root = self.parents[root]
        while self.parents[item] != root:
            self.parents[item], item = root, self.parents[item]
        return root

    def union(self, a: int, b: int) -> bool:
        """Join the components of ``a`` and ``b``; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.sizes[ra] < self.sizes[rb]:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.sizes[ra] += self.sizes[rb]
        self.components -= 1
        return True

    def union_edges(self, edges: Iterable[tuple[int, int]]) -> "UnionFind":
        for a, b in edges:
            self.union(a, b)
        return self

    def size_of(self, item: int) -> int:
        return self.sizes[self.find(item)]

    def largest(self) -> tuple[int, int]:
        """(root, size) of a largest component; ties go to the smallest root."""
        best_root, best_size = 1, 0
        for v in range(1, self.n + 1):
            if self.parents[v] == v and self.sizes[v] > best_size:
                best_root, best_size = v, self.sizes[v]
        return best_root, best_size

    def members(self, root: int) -> set[int]:
        return {v for v in range(1, self.n + 1) if self.find(v) == root}

    def vertices_in_components_at_least(self, k: int) -> set[int]:
        """Vertices whose component has at least ``k`` vertices."""
        return {v for v in range(1, self.n + 1) if self.size_of(v) >= k}
