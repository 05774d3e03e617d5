"""Graph machinery feeding the constructions and bound certificates.

Strong edge colorings, induced matchings and (strong) biclique coverings
are computed exactly below a per-routine edge budget and by deterministic
greedy rules above it; results carry an ``exact`` flag so callers can tell
an optimum from a bound.  Two edges conflict for strong-coloring purposes
when they share an endpoint or some third edge joins them, so a strong
coloring is a proper coloring of the edge-conflict graph and an induced
matching is an independent set in it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .access import Graph
from .constructions import Biclique, StrongBicliqueCovering, StrongColoring, coloring_layers

#: Edge-count budgets for the exhaustive paths.
COLORING_EXHAUSTIVE_LIMIT = 12
MATCHING_EXHAUSTIVE_LIMIT = 16
COVER_EXHAUSTIVE_LIMIT = 10
HOMOMORPHISM_VERTEX_CAP = 12


@dataclass(frozen=True)
class InducedMatching:
    edges: tuple[tuple[int, int], ...]
    exact: bool

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.edges], "exact": self.exact}


@dataclass(frozen=True)
class BicliqueCover:
    bicliques: tuple[Biclique, ...]
    exact: bool

    def to_dict(self) -> dict:
        return {"bicliques": [b.to_dict() for b in self.bicliques], "exact": self.exact}


def _require_edges(g: Graph):
    if not g.edges:
        raise ValueError("graph must have at least one edge")


def _conflict_masks(g: Graph) -> list[int]:
    """conflicts[i] has bit j set when edges i and j may not share a color."""
    edges = g.edges
    k = len(edges)
    conflicts = [0] * k
    for i, j in itertools.combinations(range(k), 2):
        a, b = edges[i]
        c, d = edges[j]
        ends1, ends2 = {a, b}, {c, d}
        joined = bool(ends1 & ends2) or any(g.has_edge(u, v) for u in ends1 for v in ends2)
        if joined:
            conflicts[i] |= 1 << j
            conflicts[j] |= 1 << i
    return conflicts


def _exact_coloring(conflicts: list[int]) -> list[int]:
    """Minimum proper coloring of the conflict graph by iterative deepening."""
    k = len(conflicts)
    order = sorted(range(k), key=lambda v: (-bin(conflicts[v]).count("1"), v))

    for colors_allowed in range(1, k + 1):
        assignment = [-1] * k

        def assign(pos: int) -> bool:
            if pos == k:
                return True
            v = order[pos]
            used_by_neighbors = {
                assignment[u] for u in range(k) if (conflicts[v] >> u) & 1 and assignment[u] >= 0
            }
            # Allow at most one color index beyond those already in use:
            # permutations of color names are symmetric.
            highest = max((assignment[order[i]] for i in range(pos)), default=-1)
            for c in range(min(colors_allowed, highest + 2)):
                if c in used_by_neighbors:
                    continue
                assignment[v] = c
                if assign(pos + 1):
                    return True
                assignment[v] = -1
            return False

        if assign(0):
            return assignment
    raise AssertionError("a coloring with k colors always exists")


def _greedy_coloring(conflicts: list[int]) -> list[int]:
    k = len(conflicts)
    assignment = [-1] * k
    for v in range(k):
        used = {assignment[u] for u in range(v) if (conflicts[v] >> u) & 1}
        c = 0
        while c in used:
            c += 1
        assignment[v] = c
    return assignment


def strong_edge_coloring(g: Graph, *, exhaustive_limit: int = COLORING_EXHAUSTIVE_LIMIT) -> StrongColoring:
    """Partition E(g) into induced matchings, minimizing the class count.

    Exact below the edge budget, greedy (edges in lexicographic order,
    smallest feasible color) beyond it.  The class count never exceeds
    2 * max_degree^2 on either path.
    """
    _require_edges(g)
    conflicts = _conflict_masks(g)
    exact = len(g.edges) <= exhaustive_limit
    assignment = _exact_coloring(conflicts) if exact else _greedy_coloring(conflicts)
    by_color: dict[int, list[tuple[int, int]]] = {}
    for idx, color in enumerate(assignment):
        by_color.setdefault(color, []).append(g.edges[idx])
    classes = tuple(sorted((tuple(sorted(c)) for c in by_color.values()), key=lambda c: c[0]))
    coloring = StrongColoring(classes, exact=exact)
    assert len(classes) <= 2 * g.max_degree**2
    return coloring


def max_induced_matching(g: Graph, *, exhaustive_limit: int = MATCHING_EXHAUSTIVE_LIMIT) -> InducedMatching:
    """A largest induced matching (exact below the edge budget, greedy above)."""
    _require_edges(g)
    conflicts = _conflict_masks(g)
    edges = g.edges
    k = len(edges)
    if k <= exhaustive_limit:
        best_mask, best_size = 0, 0
        for mask in range(1, 1 << k):
            size = bin(mask).count("1")
            if size <= best_size:
                continue
            rest = mask
            ok = True
            while rest:
                low = rest & -rest
                if conflicts[low.bit_length() - 1] & mask:
                    ok = False
                    break
                rest ^= low
            if ok:
                best_mask, best_size = mask, size
        chosen = tuple(edges[i] for i in range(k) if (best_mask >> i) & 1)
        return InducedMatching(chosen, exact=True)
    chosen_mask = 0
    picked = []
    for i in range(k):
        if conflicts[i] & chosen_mask:
            continue
        chosen_mask |= 1 << i
        picked.append(edges[i])
    return InducedMatching(tuple(picked), exact=False)


def _candidate_bicliques(g: Graph) -> list[tuple[int, Biclique]]:
    """All bicliques of g as (edge mask, block), one entry per edge set."""
    edges = g.edges
    k = len(edges)
    out: dict[int, Biclique] = {}
    for mask in range(1, 1 << k):
        subset = [edges[i] for i in range(k) if (mask >> i) & 1]
        verts = sorted({v for e in subset for v in e})
        adj = {v: set() for v in verts}
        for u, v in subset:
            adj[u].add(v)
            adj[v].add(u)
        # Must be connected and bipartite with the edge set exactly L x R.
        color = {verts[0]: 0}
        frontier = [verts[0]]
        ok = True
        while frontier and ok:
            v = frontier.pop()
            for u in adj[v]:
                if u not in color:
                    color[u] = 1 - color[v]
                    frontier.append(u)
                elif color[u] == color[v]:
                    ok = False
                    break
        if not ok or len(color) != len(verts):
            continue
        left = tuple(v for v in verts if color[v] == 0)
        right = tuple(v for v in verts if color[v] == 1)
        if len(subset) == len(left) * len(right):
            out[mask] = Biclique(left, right)
    return sorted(out.items())


def _drop_dominated(masked: list[tuple[int, object]]) -> list[tuple[int, object]]:
    kept = []
    for mask, payload in masked:
        if any(other != mask and mask & other == mask for other, _ in masked):
            continue
        kept.append((mask, payload))
    return kept


def _min_mask_cover(full: int, candidates: list[tuple[int, object]], limit_hint: int) -> list[object]:
    """Smallest sub-collection of candidate masks covering ``full``.

    Iterative deepening on the cover size; within a depth the branch always
    extends over the lowest uncovered bit, trying candidates in list order,
    so the first cover found is deterministic.
    """
    for limit in range(1, limit_hint + 1):
        chosen: list[object] = []

        def extend(covered: int, remaining: int) -> bool:
            if covered & full == full:
                return True
            if remaining == 0:
                return False
            low = (full & ~covered) & -(full & ~covered)
            for mask, payload in candidates:
                if mask & low:
                    chosen.append(payload)
                    if extend(covered | mask, remaining - 1):
                        return True
                    chosen.pop()
            return False

        if extend(0, limit):
            return chosen
    raise AssertionError("cover bounded by limit_hint must exist")


def biclique_cover(g: Graph, *, exhaustive_limit: int = COVER_EXHAUSTIVE_LIMIT) -> BicliqueCover:
    """Cover E(g) with as few bicliques as possible.

    Exact below the edge budget by searching over the maximal candidate
    blocks; beyond it, stars centered on a greedy vertex cover.
    """
    _require_edges(g)
    if len(g.edges) <= exhaustive_limit:
        candidates = _drop_dominated(_candidate_bicliques(g))
        full = (1 << len(g.edges)) - 1
        chosen = _min_mask_cover(full, candidates, len(g.edges))
        return BicliqueCover(tuple(chosen), exact=True)
    uncovered = set(g.edges)
    stars: list[Biclique] = []
    while uncovered:
        degree = {}
        for u, v in uncovered:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        center = min(degree, key=lambda v: (-degree[v], v))
        leaves = tuple(sorted(u if v == center else v for u, v in uncovered if center in (u, v)))
        stars.append(Biclique((center,), leaves))
        uncovered = {e for e in uncovered if center not in e}
    return BicliqueCover(tuple(stars), exact=False)


def _compatible(g: Graph, a: Biclique, b: Biclique) -> bool:
    if set(a.vertices) & set(b.vertices):
        return False
    return not any(g.has_edge(u, v) for u in a.vertices for v in b.vertices)


def _maximal_layers(g: Graph, candidates: list[tuple[int, Biclique]]) -> list[tuple[int, tuple[Biclique, ...]]]:
    """Maximal families of mutually compatible blocks, as layer edge masks."""
    k = len(candidates)
    compat = [0] * k
    for i, j in itertools.combinations(range(k), 2):
        if _compatible(g, candidates[i][1], candidates[j][1]):
            compat[i] |= 1 << j
            compat[j] |= 1 << i

    layers: dict[int, tuple[Biclique, ...]] = {}

    def grow(family: list[int], allowed: int, start: int):
        extended = False
        for i in range(start, k):
            if (allowed >> i) & 1:
                extended = True
                grow(family + [i], allowed & compat[i], i + 1)
        if not extended and not any((allowed >> i) & 1 for i in range(start)):
            mask = 0
            for i in family:
                mask |= candidates[i][0]
            layers.setdefault(mask, tuple(candidates[i][1] for i in family))

    for i in range(k):
        grow([i], compat[i], i + 1)
    return sorted(layers.items())


def strong_biclique_covering(g: Graph, *, exhaustive_limit: int = COVER_EXHAUSTIVE_LIMIT) -> StrongBicliqueCovering:
    """Cover E(g) with layers of compatible bicliques, minimizing the layers.

    Exact below the edge budget.  Beyond it the fallback reuses whichever of
    the strong coloring classes or the biclique cover (one block per layer)
    has fewer layers, so the layer count never exceeds either quantity.
    """
    _require_edges(g)
    coloring = strong_edge_coloring(g)
    cover = biclique_cover(g)
    if len(g.edges) <= exhaustive_limit:
        candidates = _candidate_bicliques(g)
        layer_masks = _drop_dominated(_maximal_layers(g, candidates))
        full = (1 << len(g.edges)) - 1
        hint = min(len(coloring.classes), len(cover.bicliques))
        chosen = _min_mask_cover(full, layer_masks, hint)
        return StrongBicliqueCovering(tuple(tuple(layer) for layer in chosen), exact=True)
    if len(coloring.classes) <= len(cover.bicliques):
        return StrongBicliqueCovering(coloring_layers(coloring).layers, exact=False)
    return StrongBicliqueCovering(tuple((b,) for b in cover.bicliques), exact=False)


def find_onto_edge_homomorphism(
    g: Graph, h: Graph, *, vertex_cap: int = HOMOMORPHISM_VERTEX_CAP
) -> dict[int, int] | None:
    """Edge-preserving vertex map g -> h hitting every edge of h, or None.

    Backtracks over source vertices in a component-connected order so edge
    constraints bite early; exhaustive, hence None really means absence.
    """
    _require_edges(g)
    _require_edges(h)
    if g.vertex_count > vertex_cap or h.vertex_count > vertex_cap:
        raise ValueError(f"vertex counts exceed the search cap {vertex_cap}")

    order: list[int] = []
    seen: set[int] = set()
    for seed in sorted(range(1, g.vertex_count + 1), key=lambda v: (-len(g.neighbors(v)), v)):
        if seed in seen:
            continue
        queue = [seed]
        seen.add(seed)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)

    target_edges = set(h.edges)
    sigma: dict[int, int] = {}

    def place(pos: int) -> bool:
        if pos == len(order):
            hit = {(min(sigma[u], sigma[v]), max(sigma[u], sigma[v])) for u, v in g.edges}
            return hit == target_edges
        v = order[pos]
        for image in range(1, h.vertex_count + 1):
            ok = True
            for u in g.neighbors(v):
                if u in sigma and (sigma[u] == image or not h.has_edge(sigma[u], image)):
                    ok = False
                    break
            if not ok:
                continue
            sigma[v] = image
            if place(pos + 1):
                return True
            del sigma[v]
        return False

    if place(0):
        return dict(sorted(sigma.items()))
    return None
