class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self) -> list[int]:
        """Set index per element; sets are numbered by their smallest element."""
        seen: dict[int, int] = {}
        out = []
        for x in range(len(self.parent)):
            root = self.find(x)
            if root not in seen:
                seen[root] = len(seen)
            out.append(seen[root])
        return out

    def count(self) -> int:
        return sum(1 for x in range(len(self.parent)) if self.parent[x] == x)
