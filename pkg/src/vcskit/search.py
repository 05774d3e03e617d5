"""Exhaustive search for the smallest pixel expansion of basis schemes.

Validity of a basis pair under models 2, 3 and 5 depends only on the pair
of column multisets, so the search enumerates multisets of size m over
the 2^n possible columns instead of raw matrices, collapsing the m!
column-order symmetry.  Candidates are grouped by the multiset of their
restrictions to every maximal forbidden set; two candidates satisfy the
security condition exactly when they land in the same group (restriction
equality is inherited downward by subsets), which reduces the pair phase
to contrast comparisons on precomputed stacked weights.

Enumeration is lexicographic on canonical forms and the first passing
pair is returned, so results are reproducible run to run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .access import FORBIDDEN, MINIMAL_QUALIFIED, QUALIFIED_NON_MINIMAL, AccessStructure, enumerate_sets
from .matrices import BasisScheme, BitMatrix
from .verify import verify_basis

#: Default search caps; beyond these the candidate space explodes.
MAX_N = 5
MAX_M = 6

ProgressFn = Callable[[dict], None]


@dataclass(frozen=True)
class SearchOutcome:
    """Result of an optimal-expansion search.

    Exactly one of ``m_star`` (with ``witness``) or ``exhausted_at`` is
    set.  ``exhausted_at = k`` means no scheme exists with at most k
    columns, i.e. the optimum exceeds k.
    """

    m_star: int | None
    witness: BasisScheme | None
    exhausted_at: int | None

    def to_dict(self) -> dict:
        out: dict = {"m_star": self.m_star}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.exhausted_at is not None:
            out["exhausted_at"] = self.exhausted_at
        return out


def _row_mask(subset: tuple[int, ...], n: int) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (n - i)
    return mask


def feasible_at(
    gamma: AccessStructure,
    model: int,
    m: int,
    *,
    n_cap: int = MAX_N,
    m_cap: int = MAX_M,
    progress: ProgressFn | None = None,
) -> BasisScheme | None:
    """First basis pair with m columns passing the model, or None.

    None is authoritative: the enumeration covers every column-multiset
    pair, so absence means no valid scheme with m columns exists.
    """
    if model not in (2, 3, 5):
        raise ValueError(f"search supports models 2, 3 and 5, got {model}")
    if gamma.n > n_cap:
        raise ValueError(f"n={gamma.n} exceeds the search cap {n_cap}")
    if m > m_cap:
        raise ValueError(f"m={m} exceeds the search cap {m_cap}")
    if m < 1:
        raise ValueError("m must be >= 1")

    n = gamma.n
    minimal = enumerate_sets(gamma, MINIMAL_QUALIFIED)
    nonminimal = enumerate_sets(gamma, QUALIFIED_NON_MINIMAL)
    split = len(minimal)
    qual_masks = [_row_mask(s, n) for s in minimal + nonminimal]
    forb_masks = [
        _row_mask(tuple(i + 1 for i in range(n) if (pm >> i) & 1), n)
        for pm in gamma.maximal_forbidden_masks
        if pm
    ]

    candidates: list[tuple[int, ...]] = []
    weights: list[tuple[int, ...]] = []
    signatures: list[tuple] = []
    buckets: dict[tuple, list[int]] = {}
    for cols in itertools.combinations_with_replacement(range(1 << n), m):
        sig = tuple(tuple(sorted(c & f for c in cols)) for f in forb_masks)
        idx = len(candidates)
        candidates.append(cols)
        weights.append(tuple(sum(1 for c in cols if c & q) for q in qual_masks))
        signatures.append(sig)
        buckets.setdefault(sig, []).append(idx)

    if progress:
        progress({"m": m, "candidates": len(candidates), "groups": len(buckets)})

    pairs_seen = 0
    for idx0, cols0 in enumerate(candidates):
        w0 = weights[idx0]
        for idx1 in buckets[signatures[idx0]]:
            pairs_seen += 1
            if progress and pairs_seen % 2_000_000 == 0:
                progress({"m": m, "pairs_checked": pairs_seen})
            w1 = weights[idx1]
            if model == 2:
                if not all(b > a for a, b in zip(w0, w1)):
                    continue
            else:
                if any(w1[i] == w0[i] for i in range(split)):
                    continue
                if model == 3 and w0[split:] != w1[split:]:
                    continue
            scheme = BasisScheme(
                model,
                BitMatrix.from_column_ints(n, cols0),
                BitMatrix.from_column_ints(n, candidates[idx1]),
            )
            report = verify_basis(gamma, scheme)
            if not report.valid:
                raise AssertionError(
                    f"search candidate failed full verification: {report.violations}"
                )
            return scheme
    return None


def optimal_pixel_expansion(
    gamma: AccessStructure,
    model: int,
    m_max: int,
    *,
    n_cap: int = MAX_N,
    m_cap: int = MAX_M,
    progress: ProgressFn | None = None,
) -> SearchOutcome:
    """Smallest m up to m_max admitting a valid scheme, with a witness."""
    for m in range(1, m_max + 1):
        witness = feasible_at(gamma, model, m, n_cap=n_cap, m_cap=m_cap, progress=progress)
        if witness is not None:
            return SearchOutcome(m_star=m, witness=witness, exhausted_at=None)
    return SearchOutcome(m_star=None, witness=None, exhausted_at=m_max)
