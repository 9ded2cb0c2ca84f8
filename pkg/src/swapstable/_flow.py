"""Small Edmonds-Karp max-flow with residual cut extraction.

Shared by the minimum-weight closure optimizer and the stabilization-cost
cut model.  Nodes are arbitrary hashables; capacities are integers.  Both
sides of every min cut are recoverable: the source side (residual
reachability from s) and the sink side (reverse residual reachability to
t).  The two differ exactly on tie regions, which callers use to pick a
canonical optimum.
"""

from collections import defaultdict, deque


class FlowNetwork:
    def __init__(self):
        self.cap = defaultdict(int)
        self.adj = defaultdict(list)

    def add_edge(self, a, b, capacity):
        """Add capacity on a->b; parallel calls accumulate."""
        if b not in self.adj[a]:
            self.adj[a].append(b)
        if a not in self.adj[b]:
            self.adj[b].append(a)
        self.cap[(a, b)] += capacity

    def _augmenting_path(self, s, t):
        prev = {s: None}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if x == t:
                break
            for y in self.adj[x]:
                if y not in prev and self.cap[(x, y)] > 0:
                    prev[y] = x
                    queue.append(y)
        if t not in prev:
            return None
        path = []
        node = t
        while prev[node] is not None:
            path.append((prev[node], node))
            node = prev[node]
        return path

    def max_flow(self, s, t):
        """Total flow; the capacity map becomes the residual graph."""
        total = 0
        while True:
            path = self._augmenting_path(s, t)
            if path is None:
                return total
            bottleneck = min(self.cap[edge] for edge in path)
            for a, b in path:
                self.cap[(a, b)] -= bottleneck
                self.cap[(b, a)] += bottleneck
            total += bottleneck

    def source_side(self, s):
        """Nodes reachable from s in the residual graph (minimal s-side cut)."""
        seen = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y not in seen and self.cap[(x, y)] > 0:
                    seen.add(y)
                    queue.append(y)
        return seen

    def sink_side(self, t):
        """Nodes that can still reach t in the residual graph (minimal t-side cut)."""
        seen = {t}
        queue = deque([t])
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if y not in seen and self.cap[(y, x)] > 0:
                    seen.add(y)
                    queue.append(y)
        return seen
