class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n=0):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def add(self):
        self.parent.append(len(self.parent))
        self.size.append(1)
        self.count += 1
        return len(self.parent) - 1

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb] or (self.size[ra] == self.size[rb] and rb < ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def components(self):
        """Blocks as sorted lists, ordered by their smallest member."""
        blocks = {}
        for x in range(len(self.parent)):
            blocks.setdefault(self.find(x), []).append(x)
        return sorted(blocks.values(), key=lambda b: b[0])

    def labels(self):
        """Component index of each element, numbered by first appearance."""
        out, seen = [], {}
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in seen:
                seen[r] = len(seen)
            out.append(seen[r])
        return out
