"""Access structures over a finite participant set.

Participants are numbered 1..n.  A structure is described by its minimal
qualified sets: a subset of participants is qualified when it contains one
of them, forbidden otherwise, so the qualified family is monotone by
construction.  Graph-based structures take the edge set of a simple graph
as the minimal qualified sets.

All values here are immutable and every operation is pure, so they are
safe to share between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

MINIMAL_QUALIFIED = "minimal-qualified"
QUALIFIED_NON_MINIMAL = "qualified-non-minimal"
QUALIFIED = "qualified"
FORBIDDEN = "forbidden"

SET_CLASSES = (MINIMAL_QUALIFIED, QUALIFIED_NON_MINIMAL, QUALIFIED, FORBIDDEN)

#: Largest n for which exhaustive subset enumeration runs without an override.
ENUMERATION_CAP = 16


def canon_subset(x: Iterable[int]) -> tuple[int, ...]:
    """Sorted duplicate-free tuple form of a participant subset."""
    return tuple(sorted(set(x)))


def subset_mask(x: Iterable[int]) -> int:
    """Bitmask of a subset, participant i at bit i-1."""
    mask = 0
    for i in x:
        mask |= 1 << (i - 1)
    return mask


def mask_subset(mask: int) -> tuple[int, ...]:
    """Inverse of :func:`subset_mask`."""
    return tuple(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def _checked_subset(x: Iterable[int], n: int, *, allow_empty: bool = False) -> tuple[int, ...]:
    xs = canon_subset(x)
    if not xs and not allow_empty:
        raise ValueError("participant subset must be non-empty")
    if xs and (xs[0] < 1 or xs[-1] > n):
        raise ValueError(f"participants must lie in 1..{n}, got {list(xs)}")
    return xs


@dataclass(frozen=True)
class Graph:
    """Finite simple graph on vertices 1..vertex_count.

    Edges are stored as sorted ``(u, v)`` pairs with ``u < v``; duplicates
    and reversed pairs collapse, loops are rejected.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be >= 1")
        seen = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u} is not allowed")
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise ValueError(f"edge {tuple(e)} out of range 1..{self.vertex_count}")
            seen.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @cached_property
    def edge_lookup(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in range(1, self.vertex_count + 1)}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_lookup

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @property
    def max_degree(self) -> int:
        return max((len(ns) for ns in self.adjacency.values()), default=0)

    # Common small graphs used throughout the package and its tests.

    @classmethod
    def path(cls, k: int) -> "Graph":
        return cls(k, tuple((i, i + 1) for i in range(1, k)))

    @classmethod
    def cycle(cls, k: int) -> "Graph":
        return cls(k, tuple((i, i + 1) for i in range(1, k)) + ((1, k),))

    @classmethod
    def matching(cls, pairs: int) -> "Graph":
        return cls(2 * pairs, tuple((2 * i - 1, 2 * i) for i in range(1, pairs + 1)))

    @classmethod
    def complete(cls, k: int) -> "Graph":
        return cls(k, tuple(itertools.combinations(range(1, k + 1), 2)))

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        edges = tuple((i, a + j) for i in range(1, a + 1) for j in range(1, b + 1))
        return cls(a + b, edges)

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        return cls.complete_bipartite(1, leaves)

    def to_dict(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        return cls(int(d["vertices"]), tuple(tuple(e) for e in d["edges"]))


@dataclass(frozen=True)
class AccessStructure:
    """Monotone access structure given by its minimal qualified sets.

    ``minimal_qualified`` must already be an antichain of canonical sorted
    tuples; use :func:`make_access_structure` to build one from arbitrary
    input.
    """

    n: int
    minimal_qualified: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("participant count must be >= 1")
        if not self.minimal_qualified:
            raise ValueError("at least one minimal qualified set is required")
        for q in self.minimal_qualified:
            if canon_subset(q) != tuple(q):
                raise ValueError(f"minimal qualified set {q} is not in canonical form")
            _checked_subset(q, self.n)
        fam = [frozenset(q) for q in self.minimal_qualified]
        for a, b in itertools.permutations(fam, 2):
            if a <= b:
                raise ValueError("minimal qualified sets must form an antichain")
        ordered = tuple(sorted(self.minimal_qualified, key=lambda s: (len(s), s)))
        object.__setattr__(self, "minimal_qualified", ordered)

    @cached_property
    def minimal_masks(self) -> tuple[int, ...]:
        return tuple(subset_mask(q) for q in self.minimal_qualified)

    @cached_property
    def minimal_mask_set(self) -> frozenset[int]:
        return frozenset(self.minimal_masks)

    def is_qualified_mask(self, mask: int) -> bool:
        return any(q & mask == q for q in self.minimal_masks)

    def classify_mask(self, mask: int) -> str:
        if mask in self.minimal_mask_set:
            return MINIMAL_QUALIFIED
        if self.is_qualified_mask(mask):
            return QUALIFIED_NON_MINIMAL
        return FORBIDDEN

    @cached_property
    def maximal_forbidden_masks(self) -> tuple[int, ...]:
        """Forbidden sets all of whose one-element extensions are qualified."""
        full = (1 << self.n) - 1
        out = []
        for mask in range(full + 1):
            if self.is_qualified_mask(mask):
                continue
            rest = full & ~mask
            maximal = True
            i = rest
            while i:
                bit = i & -i
                if not self.is_qualified_mask(mask | bit):
                    maximal = False
                    break
                i ^= bit
            if maximal:
                out.append(mask)
        return tuple(out)

    def to_dict(self) -> dict:
        return {"n": self.n, "minimal_qualified": [list(q) for q in self.minimal_qualified]}

    @classmethod
    def from_dict(cls, d: dict) -> "AccessStructure":
        return make_access_structure(int(d["n"]), [tuple(q) for q in d["minimal_qualified"]])


def make_access_structure(n: int, q0: Iterable[Iterable[int]]) -> AccessStructure:
    """Build an access structure from (possibly redundant) qualified sets.

    Duplicates collapse and supersets of other members are dropped, so the
    stored family is the antichain of minimal elements of ``q0``.
    """
    members = {_checked_subset(q, n) for q in q0}
    if not members:
        raise ValueError("at least one qualified set is required")
    reduced = [
        q for q in members
        if not any(p != q and set(p) <= set(q) for p in members)
    ]
    return AccessStructure(n, tuple(sorted(reduced, key=lambda s: (len(s), s))))


def from_graph(g: Graph) -> AccessStructure:
    """Access structure whose qualified sets are those containing an edge."""
    if not g.edges:
        raise ValueError("graph must have at least one edge")
    return make_access_structure(g.vertex_count, g.edges)


def classify(gamma: AccessStructure, x: Iterable[int]) -> str:
    """One of minimal-qualified / qualified-non-minimal / forbidden.

    The empty set is forbidden: it contains no minimal qualified set.
    """
    xs = _checked_subset(x, gamma.n, allow_empty=True)
    return gamma.classify_mask(subset_mask(xs))


def enumerate_sets(gamma: AccessStructure, set_class: str, *, cap: int = ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All subsets of the requested class, sorted by size then lexicographically.

    Output is exponential in n, so structures beyond ``cap`` participants
    are rejected; pass a larger ``cap`` to override.
    """
    if set_class not in SET_CLASSES:
        raise ValueError(f"unknown set class {set_class!r}")
    if gamma.n > cap:
        raise ValueError(f"n={gamma.n} exceeds enumeration cap {cap}")
    out = []
    for mask in range(1 << gamma.n):
        cls = gamma.classify_mask(mask)
        if cls == set_class or (set_class == QUALIFIED and cls != FORBIDDEN):
            out.append(mask_subset(mask))
    out.sort(key=lambda s: (len(s), s))
    return out
