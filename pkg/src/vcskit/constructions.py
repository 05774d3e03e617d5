"""Scheme constructions: threshold, biclique-block, layered and transported.

Everything here emits a scheme object that the verifier accepts for its
stated model; tests re-verify every construction on desk-scale inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .access import Graph, canon_subset, from_graph
from .matrices import BasisScheme, BitMatrix, CollectionScheme, concat
from .verify import verify_basis, verify_collections


@dataclass(frozen=True)
class Biclique:
    """Complete bipartite block (left part, right part) inside a host graph.

    Orientation is normalized so the side containing the smallest vertex is
    the left one; the block itself is symmetric under swapping sides.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = canon_subset(self.left)
        right = canon_subset(self.right)
        if not left or not right:
            raise ValueError("both sides of a biclique must be non-empty")
        if set(left) & set(right):
            raise ValueError("biclique sides must be disjoint")
        if right[0] < left[0]:
            left, right = right, left
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.left + self.right))

    def edges(self) -> tuple[tuple[int, int], ...]:
        pairs = [(min(u, v), max(u, v)) for u in self.left for v in self.right]
        return tuple(sorted(pairs))

    def to_dict(self) -> dict:
        return {"left": list(self.left), "right": list(self.right)}

    @classmethod
    def from_dict(cls, d: dict) -> "Biclique":
        return cls(tuple(d["left"]), tuple(d["right"]))


@dataclass(frozen=True)
class StrongColoring:
    """Edge coloring whose color classes are induced matchings.

    ``exact`` records whether the class count is a proven minimum or just an
    upper bound from a greedy pass.
    """

    classes: tuple[tuple[tuple[int, int], ...], ...]
    exact: bool = True

    def to_dict(self) -> dict:
        return {"classes": [[list(e) for e in cls_] for cls_ in self.classes], "exact": self.exact}


@dataclass(frozen=True)
class StrongBicliqueCovering:
    """Edge covering by layers of mutually non-adjacent disjoint bicliques."""

    layers: tuple[tuple[Biclique, ...], ...]
    exact: bool = True

    def to_dict(self) -> dict:
        return {"layers": [[b.to_dict() for b in layer] for layer in self.layers], "exact": self.exact}


def _check_biclique_complete(g: Graph, b: Biclique):
    if b.vertices[-1] > g.vertex_count:
        raise ValueError(f"biclique {b} mentions a vertex outside the graph")
    for u in b.left:
        for v in b.right:
            if not g.has_edge(u, v):
                raise ValueError(f"biclique {b.left}|{b.right} is missing edge {(u, v)}")


def _check_layer(g: Graph, bicliques: Sequence[Biclique]):
    """Disjointness plus no host edges between distinct blocks of one layer."""
    for b in bicliques:
        _check_biclique_complete(g, b)
    for a, b in itertools.combinations(bicliques, 2):
        if set(a.vertices) & set(b.vertices):
            raise ValueError("bicliques of one layer must be vertex-disjoint")
        for u in a.vertices:
            for v in b.vertices:
                if g.has_edge(u, v):
                    raise ValueError(f"edge {(u, v)} joins two bicliques of one layer")


def validate_strong_coloring(g: Graph, coloring: StrongColoring):
    """Raise unless the classes partition E(g) into induced matchings."""
    seen = []
    for cls_ in coloring.classes:
        edges = [tuple(sorted(e)) for e in cls_]
        for e in edges:
            if e not in g.edge_lookup:
                raise ValueError(f"{e} is not an edge of the graph")
        for (a, b), (c, d) in itertools.combinations(edges, 2):
            ends1, ends2 = {a, b}, {c, d}
            if ends1 & ends2:
                raise ValueError(f"class contains adjacent edges {(a, b)} and {(c, d)}")
            if any(g.has_edge(u, v) for u in ends1 for v in ends2):
                raise ValueError(f"class contains joined edges {(a, b)} and {(c, d)}")
        seen.extend(edges)
    if sorted(seen) != list(g.edges):
        raise ValueError("classes must partition the edge set")


def validate_covering(g: Graph, covering: StrongBicliqueCovering):
    """Raise unless every layer is valid and the layers cover E(g)."""
    covered = set()
    for layer in covering.layers:
        _check_layer(g, layer)
        for b in layer:
            covered.update(b.edges())
    if not covered >= set(g.edges):
        missing = sorted(set(g.edges) - covered)
        raise ValueError(f"edges not covered by any layer: {missing}")


def k_out_of_k(k: int) -> BasisScheme:
    """All-or-nothing scheme on k participants with 2^(k-1) subpixels.

    White columns are the characteristic vectors of the even-cardinality
    subsets of the participants, black columns those of the odd ones.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    even = [c for c in range(1 << k) if bin(c).count("1") % 2 == 0]
    odd = [c for c in range(1 << k) if bin(c).count("1") % 2 == 1]
    return BasisScheme(2, BitMatrix.from_column_ints(k, even), BitMatrix.from_column_ints(k, odd))


def _pattern_rows(n: int, bicliques: Sequence[Biclique], assignment: Sequence[int]):
    """One (white, black) matrix pair for a choice of per-block patterns."""
    patterns = ((1, 0), (0, 1))
    rows0 = [(0, 0)] * n
    rows1 = [(0, 0)] * n
    for b, choice in zip(bicliques, assignment):
        p = patterns[choice]
        q = patterns[1 - choice]
        for v in b.left:
            rows0[v - 1] = p
            rows1[v - 1] = p
        for v in b.right:
            rows0[v - 1] = p
            rows1[v - 1] = q
    return BitMatrix(tuple(rows0)), BitMatrix(tuple(rows1))


def _block_collections(n: int, bicliques: Sequence[Biclique]):
    """All pattern draws for one layer of disjoint bicliques, width 2."""
    mats0, mats1 = [], []
    for assignment in itertools.product((0, 1), repeat=len(bicliques)):
        m0, m1 = _pattern_rows(n, bicliques, assignment)
        mats0.append((m0, 1))
        mats1.append((m1, 1))
    return mats0, mats1


def biclique_blocks_vcs4(g: Graph, components: Sequence[Biclique]) -> CollectionScheme:
    """Model-4 scheme of width 2 for a graph split into disjoint bicliques.

    Every biclique independently draws one of the two width-2 patterns; in
    the white collection the whole block shows the drawn pattern, in the
    black collection the right side shows its complement.  Vertices outside
    every block get blank rows.  Requires the blocks to be vertex-disjoint
    and their edges to account for every edge of the graph.
    """
    if not components:
        raise ValueError("at least one biclique is required")
    for b in components:
        _check_biclique_complete(g, b)
    for a, b in itertools.combinations(components, 2):
        if set(a.vertices) & set(b.vertices):
            raise ValueError("bicliques must be vertex-disjoint")
    covered = set()
    for b in components:
        covered.update(b.edges())
    if not covered >= set(g.edges):
        missing = sorted(set(g.edges) - covered)
        raise ValueError(f"edges not inside any biclique: {missing}")
    mats0, mats1 = _block_collections(g.vertex_count, components)
    return CollectionScheme(4, tuple(mats0), tuple(mats1))


def compose_strong_layers(g: Graph, covering: StrongBicliqueCovering) -> CollectionScheme:
    """Concatenate one width-2 block scheme per layer of a strong covering.

    The result is a model-4 scheme of width 2 * #layers whose collections
    are the products of the per-layer collections (frequencies multiply).
    """
    validate_covering(g, covering)
    per_layer = [_block_collections(g.vertex_count, layer) for layer in covering.layers]

    def product(side: int):
        out = []
        for combo in itertools.product(*(layer[side] for layer in per_layer)):
            mat = combo[0][0]
            freq = combo[0][1]
            for part, f in combo[1:]:
                mat = concat(mat, part)
                freq *= f
            out.append((mat, freq))
        return tuple(out)

    return CollectionScheme(4, product(0), product(1))


def coloring_layers(coloring: StrongColoring) -> StrongBicliqueCovering:
    """View each color class as a layer of single-edge bicliques."""
    layers = tuple(
        tuple(Biclique((u,), (v,)) for u, v in cls_) for cls_ in coloring.classes
    )
    return StrongBicliqueCovering(layers, exact=coloring.exact)


def biclique_cover_vcs2(g: Graph, cover: Sequence[Biclique]) -> BasisScheme:
    """Model-2 scheme with two columns per biclique of an edge cover.

    For each biclique the white matrix lights the first of its two columns
    on every block vertex; the black matrix splits the sides over the two
    columns.  Bicliques may overlap as long as every edge lies in at least
    one of them.
    """
    if not cover:
        raise ValueError("at least one biclique is required")
    for b in cover:
        _check_biclique_complete(g, b)
    covered = set()
    for b in cover:
        covered.update(b.edges())
    if not covered >= set(g.edges):
        missing = sorted(set(g.edges) - covered)
        raise ValueError(f"edges not covered: {missing}")
    n = g.vertex_count
    cols0: list[int] = []
    cols1: list[int] = []
    for b in cover:
        both = sum(1 << (n - v) for v in b.vertices)
        left = sum(1 << (n - v) for v in b.left)
        right = sum(1 << (n - v) for v in b.right)
        cols0.extend((both, 0))
        cols1.extend((left, right))
    return BasisScheme(2, BitMatrix.from_column_ints(n, cols0), BitMatrix.from_column_ints(n, cols1))


_BUILTIN = {
    "P4-VCS2": (
        2,
        ((0, 1, 0), (0, 1, 1), (0, 1, 1), (0, 0, 1)),
        ((0, 1, 0), (1, 0, 1), (0, 1, 1), (1, 0, 0)),
    ),
    "M2-VCS3": (
        3,
        ((1, 0, 1), (0, 1, 1), (1, 1, 0), (1, 1, 0)),
        ((1, 0, 1), (1, 0, 1), (1, 1, 0), (0, 1, 1)),
    ),
}


def builtin(name: str) -> BasisScheme:
    """One of the package's stock schemes, by name."""
    try:
        model, s0, s1 = _BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown builtin scheme {name!r}; known: {sorted(_BUILTIN)}") from None
    return BasisScheme(model, BitMatrix.from_rows(s0), BitMatrix.from_rows(s1))


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTIN))


def _check_onto_edge_hom(g: Graph, h: Graph, sigma: Mapping[int, int]):
    if set(sigma) != set(range(1, g.vertex_count + 1)):
        raise ValueError("sigma must assign an image to every source vertex")
    if any(not 1 <= sigma[v] <= h.vertex_count for v in sigma):
        raise ValueError("sigma maps outside the target vertex set")
    for u, v in g.edges:
        if sigma[u] == sigma[v] or not h.has_edge(sigma[u], sigma[v]):
            raise ValueError(f"sigma does not carry edge {(u, v)} to a target edge")
    hit = {(min(sigma[u], sigma[v]), max(sigma[u], sigma[v])) for u, v in g.edges}
    if hit != set(h.edges):
        raise ValueError("sigma is not onto the target's edges")
    isolated = [v for v in range(1, h.vertex_count + 1) if not h.neighbors(v)]
    if isolated:
        raise ValueError(f"target graph has isolated vertices: {isolated}")


def _merge_rows(mat: BitMatrix, sigma: Mapping[int, int], n_target: int) -> BitMatrix:
    rows = []
    for i in range(1, n_target + 1):
        acc = [0] * mat.m
        for v, img in sigma.items():
            if img == i:
                acc = [a | b for a, b in zip(acc, mat.rows[v - 1])]
        rows.append(tuple(acc))
    return BitMatrix(tuple(rows))


def transport_hom(scheme, sigma: Mapping[int, int], source: Graph, target: Graph):
    """Push a scheme for one graph onto another along an onto-edges map.

    Row i of each transported matrix is the OR of the source rows that map
    to i, so the pixel expansion is unchanged.  The source scheme must be a
    verified model-1 collection scheme or model-2 basis scheme over the
    source graph; anything else is rejected before any work happens.
    """
    _check_onto_edge_hom(source, target, sigma)
    gamma = from_graph(source)
    if isinstance(scheme, CollectionScheme) and scheme.model == 1:
        if not verify_collections(gamma, scheme).valid:
            raise ValueError("source scheme does not verify as model 1 over the source graph")
        n_t = target.vertex_count
        c0 = tuple((_merge_rows(mat, sigma, n_t), f) for mat, f in scheme.c0)
        c1 = tuple((_merge_rows(mat, sigma, n_t), f) for mat, f in scheme.c1)
        return CollectionScheme(1, c0, c1)
    if isinstance(scheme, BasisScheme) and scheme.model == 2:
        if not verify_basis(gamma, scheme).valid:
            raise ValueError("source scheme does not verify as model 2 over the source graph")
        n_t = target.vertex_count
        return BasisScheme(2, _merge_rows(scheme.s0, sigma, n_t), _merge_rows(scheme.s1, sigma, n_t))
    raise ValueError("transport applies to model-1 collection schemes and model-2 basis schemes")
