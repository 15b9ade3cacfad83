"""Generators for the graph families the toolkit reasons about.

Cayley graphs on binary groups (every element is an involution), the
projective/folded cubes in two models (coordinate and partition), plus
hypercubes, cycles, paths, complete graphs, Kneser graphs and generalized
Mycielski graphs.

Vertex order of every Cayley-style graph is the integer value of the bit
vector, low coordinate = e1, so outputs are reproducible across runs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations

from .graph import Graph, bits, build_graph

DEFAULT_DIM_CAP = 20


def dim_cap() -> int:
    """Dimension cap guarding against accidental exponential blowups.

    Default 20 (about a million vertices); override with CAYHOM_CAP.
    """
    raw = os.environ.get("CAYHOM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"CAYHOM_CAP must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise ValueError("CAYHOM_CAP must be nonnegative")
    return cap


def _check_cap(dim: int):
    cap = dim_cap()
    if dim > cap:
        raise ValueError(f"dimension {dim} exceeds cap {cap} (set CAYHOM_CAP to raise)")


@dataclass(frozen=True)
class Z2Vector:
    """Element of the binary group on ``dim`` coordinates.

    ``bitmask`` bit i is coordinate e_{i+1}; addition is XOR and every
    element is its own inverse.
    """

    dim: int
    bitmask: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        if self.bitmask >> self.dim:
            raise ValueError("bitmask does not fit in dim coordinates")

    def __xor__(self, other: "Z2Vector") -> "Z2Vector":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return Z2Vector(self.dim, self.bitmask ^ other.bitmask)

    def weight(self) -> int:
        return self.bitmask.bit_count()

    def to_string(self) -> str:
        """d-character bitstring, leftmost character = coordinate e1."""
        return "".join("1" if (self.bitmask >> i) & 1 else "0"
                       for i in range(self.dim))

    @classmethod
    def from_string(cls, text: str) -> "Z2Vector":
        if set(text) - {"0", "1"}:
            raise ValueError(f"bitstring may only contain 0/1: {text!r}")
        mask = 0
        for i, ch in enumerate(text):
            if ch == "1":
                mask |= 1 << i
        return cls(len(text), mask)


def unit(dim: int, i: int) -> Z2Vector:
    """e_{i+1}: the canonical basis vector with coordinate i set."""
    if not (0 <= i < dim):
        raise ValueError("coordinate out of range")
    return Z2Vector(dim, 1 << i)


def all_ones(dim: int) -> Z2Vector:
    return Z2Vector(dim, (1 << dim) - 1)


@dataclass(frozen=True)
class CayleySpec:
    """Connection set for a Cayley graph on the binary group of ``dim``.

    The zero vector is never a generator (the graph stays loop-free),
    generators are pairwise distinct and all of the same dimension.
    """

    dim: int
    generators: frozenset[Z2Vector]

    def __post_init__(self):
        for gen in self.generators:
            if gen.dim != self.dim:
                raise ValueError("generator dimension mismatch")
            if gen.bitmask == 0:
                raise ValueError("zero vector may not be a generator")

    @classmethod
    def of(cls, dim: int, generators) -> "CayleySpec":
        return cls(dim, frozenset(generators))

    def masks(self) -> tuple[int, ...]:
        return tuple(sorted(gen.bitmask for gen in self.generators))


def cayley(spec: CayleySpec) -> Graph:
    """Cay(Z_2^dim, generators): u ~ v iff u XOR v is a generator.

    Vertex index is the integer value of the group element; labels carry
    the corresponding bitstrings.  |generators|-regular by construction,
    and vertex-transitive (every translation is an automorphism).
    """
    _check_cap(spec.dim)
    n = 1 << spec.dim
    gens = spec.masks()
    rows = [0] * n
    for u in range(n):
        row = 0
        for gmask in gens:
            row |= 1 << (u ^ gmask)
        rows[u] = row
    labels = tuple(Z2Vector(spec.dim, u).to_string() for u in range(n))
    return Graph(n, tuple(rows), labels=labels, vertex_transitive=True)


def pc_spec(d: int) -> CayleySpec:
    """Connection set of the projective cube: e1..ed plus the all-ones J."""
    if d < 1:
        raise ValueError("projective cube needs dimension >= 1")
    gens = [unit(d, i) for i in range(d)]
    gens.append(all_ones(d))
    return CayleySpec.of(d, gens)


def projective_cube(d: int) -> Graph:
    _check_cap(d)
    return cayley(pc_spec(d))


def hypercube(d: int) -> Graph:
    if d < 1:
        raise ValueError("hypercube needs dimension >= 1")
    _check_cap(d)
    return cayley(CayleySpec.of(d, [unit(d, i) for i in range(d)]))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return build_graph(n, edges, vertex_transitive=True)


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least 1 vertex")
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs at least 1 vertex")
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return build_graph(n, edges, vertex_transitive=True)


def subset_label(subset) -> str:
    return "{" + ",".join(str(x) for x in sorted(subset)) + "}"


def kneser(n: int, k: int) -> Graph:
    """Kneser graph K(n, k): k-subsets of {1..n}, adjacent iff disjoint.

    Vertex order is colexicographic on subsets, which coincides with
    ascending characteristic-vector value (element i = bit i-1).
    """
    if not (1 <= k < n):
        raise ValueError("kneser needs 1 <= k < n")
    subsets = sorted(combinations(range(1, n + 1), k),
                     key=lambda s: sum(1 << (x - 1) for x in s))
    masks = [sum(1 << (x - 1) for x in s) for s in subsets]
    count = len(masks)
    rows = [0] * count
    for i in range(count):
        for j in range(i + 1, count):
            if masks[i] & masks[j] == 0:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    labels = tuple(subset_label(s) for s in subsets)
    return Graph(count, tuple(rows), labels=labels, vertex_transitive=True)


def mycielski_level(g: Graph, k: int) -> Graph:
    """Generalized Mycielski graph M^k(g) with k added vertex layers.

    Level 0 is a copy of g keeping its edges; for each edge (i, j) of g
    and 1 <= r <= k, level vertex (r, i) is adjacent to (r-1, j) and
    (r, j) to (r-1, i); a final apex is adjacent to every level-k vertex.
    M^0(g) only adds the apex, joined to all of g.  Vertex layout:
    (r, i) -> r*n + i, apex last.
    """
    if k < 0:
        raise ValueError("level must be nonnegative")
    n = g.n
    total = (k + 1) * n + 1
    apex = total - 1
    edges = []
    for u, v in g.edges():
        edges.append((u, v))
        for r in range(1, k + 1):
            edges.append((r * n + u, (r - 1) * n + v))
            edges.append((r * n + v, (r - 1) * n + u))
    for i in range(n):
        edges.append((k * n + i, apex))
    labels = [f"{r}:{i}" for r in range(k + 1) for i in range(n)]
    labels.append("apex")
    return build_graph(total, edges, labels=labels)


@dataclass(frozen=True)
class PartitionVertex:
    """Vertex of the partition model: a 2-part partition of {1..2k+1}.

    Stored canonically as the smaller part (|part| <= k), so two values
    are equal exactly when their canonical parts are.
    """

    ground: int
    part: frozenset[int]

    def __post_init__(self):
        if self.ground % 2 == 0 or self.ground < 3:
            raise ValueError("ground set size must be odd and >= 3")
        if 2 * len(self.part) > self.ground:
            raise ValueError("part must be the smaller side of the partition")
        if not self.part <= frozenset(range(1, self.ground + 1)):
            raise ValueError("part must be a subset of {1..ground}")

    @classmethod
    def canonical(cls, ground: int, subset) -> "PartitionVertex":
        sub = frozenset(subset)
        if 2 * len(sub) > ground:
            sub = frozenset(range(1, ground + 1)) - sub
        return cls(ground, sub)

    def complement(self) -> frozenset[int]:
        return frozenset(range(1, self.ground + 1)) - self.part

    def label(self) -> str:
        return subset_label(self.part)


def _part_mask(part: frozenset[int]) -> int:
    return sum(1 << (x - 1) for x in part)


def pc_partition_vertices(k: int) -> tuple[PartitionVertex, ...]:
    """Canonical vertex order of the partition model: ascending part mask."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ground = 2 * k + 1
    parts = []
    for size in range(k + 1):
        for combo in combinations(range(1, ground + 1), size):
            parts.append(PartitionVertex(ground, frozenset(combo)))
    parts.sort(key=lambda p: _part_mask(p.part))
    return tuple(parts)


def pc_partition_model(k: int) -> Graph:
    """Projective cube of dimension 2k as partitions of a (2k+1)-set.

    Partitions {A, A'} and {B, B'} are adjacent iff one side of one is
    obtained from a side of the other by adding a single element, i.e.
    |A xor B| is 1 or 2k for the canonical parts.  Isomorphic to
    projective_cube(2k); kept separate because the subset constructions
    are naturally stated in this model.
    """
    _check_cap(2 * k)
    verts = pc_partition_vertices(k)
    n = len(verts)
    masks = [_part_mask(p.part) for p in verts]
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            diff = (masks[i] ^ masks[j]).bit_count()
            if diff == 1 or diff == 2 * k:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    labels = tuple(p.label() for p in verts)
    return Graph(n, tuple(rows), labels=labels, vertex_transitive=True)


def pc_partition_index(k: int) -> dict[frozenset[int], int]:
    """Map canonical parts to their vertex index in pc_partition_model(k)."""
    return {p.part: i for i, p in enumerate(pc_partition_vertices(k))}


def pc_middle_layer(k: int) -> tuple[int, ...]:
    """Vertices of pc_partition_model(k) whose part has the full size k."""
    return tuple(i for i, p in enumerate(pc_partition_vertices(k))
                 if len(p.part) == k)
