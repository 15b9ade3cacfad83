"""Immutable simple graphs with exact structural invariants.

Adjacency is one int bitmask per vertex (bit v of ``adj[u]`` set iff u~v),
which keeps the hot loops of the search engine down to machine-word AND/OR.
All distances, girths and the isomorphism test here are exact; nothing is
sampled or approximated.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property

INF = math.inf


def bits(mask: int):
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``adj`` must be symmetric and irreflexive; this is asserted on
    construction.  ``labels``, when present, carries one annotation string
    per vertex (bitstrings for Cayley graphs, subset names for Kneser and
    partition models).  ``vertex_transitive`` is a constructor-asserted
    flag (set by the Cayley builders, where translations witness it); it
    only ever enables optimisations whose soundness needs transitivity.
    """

    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    vertex_transitive: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(self.adj) != self.n:
            raise ValueError("adjacency row count does not match n")
        for u, row in enumerate(self.adj):
            if row >> self.n:
                raise ValueError(f"adjacency row {u} mentions vertices >= n")
            if (row >> u) & 1:
                raise ValueError(f"loop at vertex {u}")
            for v in bits(row):
                if not (self.adj[v] >> u) & 1:
                    raise ValueError(f"asymmetric adjacency at ({u},{v})")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must have exactly n entries")

    @cached_property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int):
        return bits(self.adj[v])

    def edges(self):
        """Yield edges (u, v) with u < v, in sorted order."""
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                yield (u, u + 1 + v)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(row.bit_count() for row in self.adj))


def build_graph(n, edges, labels=None, vertex_transitive=False) -> Graph:
    """Build a Graph from an edge list, deduplicating repeated pairs.

    Raises ValueError on loops or endpoints outside [0, n).
    """
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"loop edge ({u},{v}) not allowed")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows),
                 labels=None if labels is None else tuple(labels),
                 vertex_transitive=vertex_transitive)


def bfs_distances(g: Graph, source: int) -> list[float]:
    """Ordinary shortest-path distances from ``source`` (INF if unreachable)."""
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    queue = deque([source])
    adj = g.adj
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in bits(adj[u]):
            if dist[v] is INF:
                dist[v] = du + 1
                queue.append(v)
    return dist


@dataclass(frozen=True)
class ParityDistances:
    """Exact shortest even-walk and odd-walk lengths between all pairs.

    Computed by breadth-first search on the bipartite double cover, so a
    finite entry always corresponds to a realizable walk.  ``even[v][v]``
    is 0; ``odd[v][v]`` is the length of the shortest odd closed walk
    through v (the odd girth is the minimum of these).
    """

    even: tuple[tuple[float, ...], ...]
    odd: tuple[tuple[float, ...], ...]

    def distance(self, u: int, v: int) -> float:
        return min(self.even[u][v], self.odd[u][v])


def _double_cover_row(g: Graph, source: int) -> tuple[list[float], list[float]]:
    # State encoding: 2*v + parity of walk length so far.
    dist: list[float] = [INF] * (2 * g.n)
    dist[2 * source] = 0
    queue = deque([2 * source])
    adj = g.adj
    while queue:
        s = queue.popleft()
        u, par = s >> 1, s & 1
        d = dist[s] + 1
        for v in bits(adj[u]):
            t = 2 * v + (par ^ 1)
            if dist[t] is INF:
                dist[t] = d
                queue.append(t)
    return dist[0::2], dist[1::2]


def parity_distances(g: Graph) -> ParityDistances:
    even_rows = []
    odd_rows = []
    for v in range(g.n):
        even, odd = _double_cover_row(g, v)
        even_rows.append(tuple(even))
        odd_rows.append(tuple(odd))
    return ParityDistances(tuple(even_rows), tuple(odd_rows))


def is_bipartite(g: Graph) -> bool:
    """2-coloring BFS, independent of the parity-distance machinery."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in bits(g.adj[u]):
                if color[v] == -1:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def odd_girth(g: Graph) -> float:
    """Length of a shortest odd cycle; INF iff the graph is bipartite.

    A shortest odd closed walk is necessarily a simple cycle, so the
    minimum over v of the double-cover distance (v, even) -> (v, odd) is
    exactly the odd girth.
    """
    best = INF
    for v in range(g.n):
        _, odd = _double_cover_row(g, v)
        if odd[v] < best:
            best = odd[v]
            if best == 3:
                break
    return best


def girth(g: Graph) -> float:
    """Length of a shortest cycle; INF for forests.

    Standard BFS-from-every-vertex bound: per root the non-tree edge
    candidate d[u]+d[v]+1 may overshoot, but the minimum over all roots
    is exact because roots on a shortest cycle realize it.
    """
    best = INF
    adj = g.adj
    for root in range(g.n):
        if not adj[root]:
            continue
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for v in bits(adj[u]):
                if dist[v] == -1:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v and parent[v] != u:
                    cand = dist[u] + dist[v] + 1
                    if cand < best:
                        best = cand
        if best == 3:
            break
    return best


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    graph: Graph


def components(g: Graph) -> list[Component]:
    """Connected components with their induced subgraphs, by least vertex."""
    seen = [False] * g.n
    out = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in bits(g.adj[u]):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comp.sort()
        out.append(Component(tuple(comp), induced_subgraph(g, comp)))
    return out


def induced_subgraph(g: Graph, vs) -> Graph:
    """Induced subgraph on ``vs``; new vertex i is the i-th smallest of vs."""
    order = sorted(set(vs))
    for v in order:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(order)}
    rows = [0] * len(order)
    for i, v in enumerate(order):
        for w in bits(g.adj[v]):
            j = index.get(w)
            if j is not None:
                rows[i] |= 1 << j
    labels = None
    if g.labels is not None:
        labels = tuple(g.labels[v] for v in order)
    return Graph(len(order), tuple(rows), labels=labels)


# -- isomorphism: joint color refinement + individualization backtracking --


def _joint_refine(g: Graph, h: Graph, cg: list[int], ch: list[int]):
    """Refine colors of both graphs with a shared palette until stable.

    Returns the refined (cg, ch) or None when the color histograms of the
    two graphs diverge (no isomorphism can respect these colors).
    """
    nbr_g = [tuple(bits(row)) for row in g.adj]
    nbr_h = [tuple(bits(row)) for row in h.adj]
    ncolors = len(set(cg))
    while True:
        sig_g = [(cg[v], tuple(sorted(cg[u] for u in nbr_g[v])))
                 for v in range(g.n)]
        sig_h = [(ch[v], tuple(sorted(ch[u] for u in nbr_h[v])))
                 for v in range(h.n)]
        palette = {s: i for i, s in enumerate(sorted(set(sig_g) | set(sig_h)))}
        new_g = [palette[s] for s in sig_g]
        new_h = [palette[s] for s in sig_h]
        if Counter(new_g) != Counter(new_h):
            return None
        new_ncolors = len(palette)
        cg, ch = new_g, new_h
        if new_ncolors == ncolors:
            return cg, ch
        ncolors = new_ncolors


def _check_iso(g: Graph, h: Graph, mapping: list[int]) -> bool:
    if sorted(mapping) != list(range(h.n)):
        return False
    for u, v in g.edges():
        if not h.has_edge(mapping[u], mapping[v]):
            return False
    return g.m == h.m


def is_isomorphic(g: Graph, h: Graph):
    """Exact isomorphism test; returns (True, witness map) or (False, None).

    Iterated degree/neighborhood refinement narrows the candidate classes;
    backtracking individualizes one vertex pair at a time.  Intended for
    desk scale (a few thousand vertices); the witness is re-verified
    edge-by-edge before being returned.
    """
    if g.n != h.n or g.m != h.m:
        return False, None
    if g.degree_sequence() != h.degree_sequence():
        return False, None
    if g.n == 0:
        return True, ()

    start = _joint_refine(g, h, [0] * g.n, [0] * h.n)
    if start is None:
        return False, None

    fresh = g.n + h.n + 1  # color id never produced by refinement palettes

    def solve(cg, ch):
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(cg):
            classes.setdefault(c, []).append(v)
        multi = [(len(vs), c) for c, vs in classes.items() if len(vs) > 1]
        if not multi:
            where_h = {c: v for v, c in enumerate(ch)}
            mapping = [where_h[c] for c in cg]
            return mapping if _check_iso(g, h, mapping) else None
        _, c = min(multi)
        u = min(classes[c])
        for w in sorted(v for v, col in enumerate(ch) if col == c):
            cg2 = list(cg)
            ch2 = list(ch)
            cg2[u] = fresh
            ch2[w] = fresh
            refined = _joint_refine(g, h, cg2, ch2)
            if refined is None:
                continue
            found = solve(*refined)
            if found is not None:
                return found
        return None

    mapping = solve(*start)
    if mapping is None:
        return False, None
    return True, tuple(mapping)


def common_cycle(g: Graph, u: int, v: int, length: int):
    """Find a simple cycle of exactly ``length`` through both u and v.

    Returns the cycle as a vertex list (closing edge back to the first
    entry implied), or None when no such cycle exists.  Exhaustive DFS
    with shortest-path pruning; exact for the desk-scale graphs here.
    """
    if length < 3 or u == v:
        raise ValueError("need two distinct vertices and length >= 3")
    dist_u = bfs_distances(g, u)
    dist_v = bfs_distances(g, v)
    adj = g.adj
    path = [u]
    on_path = 1 << u

    def dfs(x: int, remaining: int, seen_v: bool) -> bool:
        nonlocal on_path
        if remaining == 0:
            return False  # handled by caller via closing-edge check
        for y in bits(adj[x]):
            if y == u and remaining == 1:
                if seen_v or v == u:
                    return True
                continue
            if (on_path >> y) & 1:
                continue
            saw = seen_v or y == v
            # Lower bounds: must still reach v (if unseen) and return to u.
            if saw:
                if dist_u[y] > remaining - 1:
                    continue
            else:
                if dist_v[y] + dist_v[u] > remaining - 1:
                    continue
            path.append(y)
            on_path |= 1 << y
            if dfs(y, remaining - 1, saw):
                return True
            path.pop()
            on_path ^= 1 << y
        return False

    if dfs(u, length, False):
        return list(path)
    return None
