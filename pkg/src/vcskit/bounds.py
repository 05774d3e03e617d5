"""Lower-bound certificates for the best pixel expansion.

A certificate packages a witness family together with the bound it
implies and the models it applies to.  Kinds:

- ``T1``  family of forbidden sets with a separating forbidden set for
          every disjoint split; bounds the all-qualified basis model (m2)
          by t + 1
- ``T2``  family of forbidden sets where every subfamily has a member
          completable to a minimal qualified set while the others are
          not; bounds the darker/lighter basis model with non-minimal
          blinding (m3) by t + 1
- ``T4``  as T2 but the other members must stay strictly forbidden;
          bounds the unrestricted darker/lighter basis model (m5) by t
- ``T3``  disjoint qualified blocks such that every qualified subset of
          their union contains a block; bounds m2 and m3 by
          sum(2^(|block|-1)) - (t - 1)
- ``TA``  no witness; bounds m3 by ceil(#minimal-qualified / 2)
- ``C2``  induced matching of a graph structure, the all-edges special
          case of T3; bounds m2 and m3 by t + 1
- ``TRIV`` fallback carrying the unconditional bound 1

Checkers return the certificate on acceptance and None on rejection;
malformed witnesses (non-forbidden members, overlapping or non-qualified
blocks, out-of-range sets) raise ValueError instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .access import FORBIDDEN, AccessStructure, Graph, canon_subset, mask_subset, subset_mask
from .graphs import max_induced_matching

T1, T2, T3, T4, TA, C2, TRIV = "T1", "T2", "T3", "T4", "TA", "C2", "TRIV"

#: Default witness-search budget: family size, then member size (None = n - 1).
DEFAULT_MAX_FAMILY = 4

_CERT_CAP = 16  # certificate checks enumerate the forbidden family


@dataclass(frozen=True)
class BoundCertificate:
    kind: str
    bound: int
    applies_to: tuple[str, ...]
    omega: tuple[tuple[int, ...], ...] | None = None
    blocks: tuple[tuple[int, ...], ...] | None = None
    matching: tuple[tuple[int, int], ...] | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "bound": self.bound, "applies_to": list(self.applies_to)}
        if self.omega is not None:
            out["omega"] = [list(s) for s in self.omega]
        if self.blocks is not None:
            out["blocks"] = [list(s) for s in self.blocks]
        if self.matching is not None:
            out["matching"] = [list(e) for e in self.matching]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "BoundCertificate":
        return cls(
            kind=d["kind"],
            bound=int(d["bound"]),
            applies_to=tuple(d["applies_to"]),
            omega=tuple(tuple(s) for s in d["omega"]) if "omega" in d else None,
            blocks=tuple(tuple(s) for s in d["blocks"]) if "blocks" in d else None,
            matching=tuple(tuple(e) for e in d["matching"]) if "matching" in d else None,
        )


def _checked_family(gamma: AccessStructure, omega: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Canonical distinct family of non-empty forbidden sets; raises otherwise."""
    if gamma.n > _CERT_CAP:
        raise ValueError(f"certificate checks support n <= {_CERT_CAP}")
    family = sorted({canon_subset(f) for f in omega}, key=lambda s: (len(s), s))
    for f in family:
        if not f:
            raise ValueError("family members must be non-empty")
        if f[0] < 1 or f[-1] > gamma.n:
            raise ValueError(f"set {list(f)} is out of range 1..{gamma.n}")
        if gamma.is_qualified_mask(subset_mask(f)):
            raise ValueError(f"set {list(f)} is not forbidden")
    return tuple(family)


def _forbidden_masks(gamma: AccessStructure) -> list[int]:
    return [mask for mask in range(1, 1 << gamma.n) if not gamma.is_qualified_mask(mask)]


def check_theorem1(gamma: AccessStructure, omega: Iterable[Iterable[int]]) -> BoundCertificate | None:
    """T1 check: accepted families force m2 >= len(family) + 1.

    Requires the union of the family to stay forbidden and, for every pair
    of disjoint non-empty subfamilies A and B, some forbidden set F' that
    keeps one side forbidden in union while pushing a member of the other
    side qualified.
    """
    family = _checked_family(gamma, omega)
    t = len(family)
    if t == 0:
        return None
    masks = [subset_mask(f) for f in family]
    union = 0
    for m in masks:
        union |= m
    if gamma.is_qualified_mask(union):
        return None
    pool = _forbidden_masks(gamma)

    def separated(side_a: Sequence[int], side_b: Sequence[int], f_prime: int) -> bool:
        if any(gamma.is_qualified_mask(fi | f_prime) for fi in side_a):
            return False
        return any(gamma.is_qualified_mask(fj | f_prime) for fj in side_b)

    for labels in itertools.product((0, 1, 2), repeat=t):
        side_a = [masks[i] for i in range(t) if labels[i] == 1]
        side_b = [masks[i] for i in range(t) if labels[i] == 2]
        if not side_a or not side_b:
            continue
        # Unordered split: fix the first labelled index to side A.
        first = next(i for i in range(t) if labels[i])
        if labels[first] != 1:
            continue
        if not any(separated(side_a, side_b, f) or separated(side_b, side_a, f) for f in pool):
            return None
    return BoundCertificate(T1, t + 1, ("m2",), omega=family)


def _check_subfamily_extension(
    gamma: AccessStructure, family: tuple[tuple[int, ...], ...], *, others_forbidden: bool
) -> bool:
    """Shared quantifier of the T2/T4 checks, over every non-empty subfamily."""
    masks = [subset_mask(f) for f in family]
    t = len(masks)
    pool = _forbidden_masks(gamma)
    minimal = gamma.minimal_mask_set
    for bits in range(1, 1 << t):
        chosen = [masks[i] for i in range(t) if (bits >> i) & 1]
        found = False
        for f_prime in chosen:
            for f_second in pool:
                if (f_prime | f_second) not in minimal:
                    continue
                rest = (fi for fi in chosen if fi != f_prime)
                if others_forbidden:
                    if all(not gamma.is_qualified_mask(fi | f_second) for fi in rest):
                        found = True
                else:
                    if all((fi | f_second) not in minimal for fi in rest):
                        found = True
                if found:
                    break
            if found:
                break
        if not found:
            return False
    return True


def check_theorem2(gamma: AccessStructure, omega: Iterable[Iterable[int]]) -> BoundCertificate | None:
    """T2 check: accepted families force m3 >= len(family) + 1.

    The subfamily quantifier deliberately runs over every non-empty
    subfamily including the whole family, the stronger reading of the
    hypothesis.
    """
    family = _checked_family(gamma, omega)
    if not family:
        return None
    union = 0
    for f in family:
        union |= subset_mask(f)
    if gamma.is_qualified_mask(union):
        return None
    if not _check_subfamily_extension(gamma, family, others_forbidden=False):
        return None
    return BoundCertificate(T2, len(family) + 1, ("m3",), omega=family)


def check_theorem4(gamma: AccessStructure, omega: Iterable[Iterable[int]]) -> BoundCertificate | None:
    """T4 check: accepted families force m5 >= len(family)."""
    family = _checked_family(gamma, omega)
    if not family:
        return None
    union = 0
    for f in family:
        union |= subset_mask(f)
    if gamma.is_qualified_mask(union):
        return None
    if not _check_subfamily_extension(gamma, family, others_forbidden=True):
        return None
    return BoundCertificate(T4, len(family), ("m5",), omega=family)


def check_theorem3(gamma: AccessStructure, blocks: Iterable[Iterable[int]]) -> BoundCertificate | None:
    """T3 check over disjoint qualified blocks.

    Accepts when every qualified subset of the blocks' union contains one
    of the blocks (checked exhaustively over the union's subsets); the
    bound sum(2^(|A|-1)) - (t-1) then applies to both m2 and m3.
    """
    if gamma.n > _CERT_CAP:
        raise ValueError(f"certificate checks support n <= {_CERT_CAP}")
    family = sorted({canon_subset(b) for b in blocks}, key=lambda s: (len(s), s))
    if not family:
        raise ValueError("at least one block is required")
    masks = []
    for b in family:
        if not b or b[0] < 1 or b[-1] > gamma.n:
            raise ValueError(f"block {list(b)} is out of range 1..{gamma.n}")
        if not gamma.is_qualified_mask(subset_mask(b)):
            raise ValueError(f"block {list(b)} is not qualified")
        masks.append(subset_mask(b))
    for a, b in itertools.combinations(masks, 2):
        if a & b:
            raise ValueError("blocks must be pairwise disjoint")
    union = 0
    for m in masks:
        union |= m

    # Walk the subsets of the union only.
    sub = union
    while True:
        if sub and gamma.is_qualified_mask(sub) and not any(m & sub == m for m in masks):
            return None
        if sub == 0:
            break
        sub = (sub - 1) & union

    t = len(family)
    bound = sum(1 << (len(b) - 1) for b in family) - (t - 1)
    return BoundCertificate(T3, bound, ("m2", "m3"), blocks=tuple(family))


def bound_theoremA(gamma: AccessStructure) -> BoundCertificate:
    """Witness-free m3 bound from the number of minimal qualified sets."""
    count = len(gamma.minimal_qualified)
    return BoundCertificate(TA, (count + 1) // 2, ("m3",))


def check_corollary2(gamma: AccessStructure, matching: Iterable[Iterable[int]]) -> BoundCertificate | None:
    """Induced-matching form of T3 for graph structures: bound t + 1."""
    edges = sorted({canon_subset(e) for e in matching})
    if any(len(e) != 2 for e in edges):
        raise ValueError("matching members must be edges (pairs)")
    base = check_theorem3(gamma, edges)
    if base is None:
        return None
    return BoundCertificate(C2, base.bound, ("m2", "m3"), matching=tuple((u, v) for u, v in edges))


def _structure_graph(gamma: AccessStructure) -> Graph | None:
    """The defining graph when every minimal qualified set is an edge."""
    if all(len(q) == 2 for q in gamma.minimal_qualified):
        return Graph(gamma.n, tuple((q[0], q[1]) for q in gamma.minimal_qualified))
    return None


def _disjoint_minimal_families(gamma: AccessStructure):
    """Non-empty families of pairwise disjoint minimal qualified sets."""
    q0 = gamma.minimal_qualified
    masks = [subset_mask(q) for q in q0]

    def grow(start: int, used: int, family: list[int]):
        if family:
            yield tuple(q0[i] for i in family)
        for i in range(start, len(q0)):
            if masks[i] & used:
                continue
            yield from grow(i + 1, used | masks[i], family + [i])

    yield from grow(0, 0, [])


def best_lower_bound(
    gamma: AccessStructure,
    model: int,
    *,
    max_family: int = DEFAULT_MAX_FAMILY,
    max_member_size: int | None = None,
) -> BoundCertificate:
    """Best certificate found within the witness budget for one model.

    Model 2 draws on T1, T3 and C2; model 3 on TA, T2, T3 and C2; model 5
    on T4.  Family witnesses are searched over non-empty forbidden sets of
    bounded size, largest family first, so the strongest family bound is
    found without scanning smaller ones.  Falls back to the trivial bound
    1 when nothing is accepted.
    """
    if model not in (2, 3, 5):
        raise ValueError(f"lower bounds are tracked for models 2, 3 and 5, got {model}")
    member_cap = max_member_size if max_member_size is not None else max(gamma.n - 1, 1)
    pool = [
        mask_subset(mask)
        for mask in _forbidden_masks(gamma)
        if bin(mask).count("1") <= member_cap
    ]
    pool.sort(key=lambda s: (len(s), s))

    candidates: list[BoundCertificate] = []

    def family_scan(checker) -> BoundCertificate | None:
        for t in range(min(max_family, len(pool)), 0, -1):
            for combo in itertools.combinations(pool, t):
                cert = checker(gamma, combo)
                if cert is not None:
                    return cert
        return None

    if model == 2:
        cert = family_scan(check_theorem1)
        if cert:
            candidates.append(cert)
    if model == 3:
        candidates.append(bound_theoremA(gamma))
        cert = family_scan(check_theorem2)
        if cert:
            candidates.append(cert)
    if model == 5:
        cert = family_scan(check_theorem4)
        if cert:
            candidates.append(cert)
    if model in (2, 3):
        for blocks in _disjoint_minimal_families(gamma):
            cert = check_theorem3(gamma, blocks)
            if cert is not None:
                candidates.append(cert)
        g = _structure_graph(gamma)
        if g is not None:
            cert = check_corollary2(gamma, max_induced_matching(g).edges)
            if cert is not None:
                candidates.append(cert)

    best: BoundCertificate | None = None
    for cert in candidates:
        if best is None or cert.bound > best.bound:
            best = cert
    if best is None or best.bound < 1:
        return BoundCertificate(TRIV, 1, (f"m{model}",))
    return best


def recheck(gamma: AccessStructure, cert: BoundCertificate) -> bool:
    """Re-validate a (possibly deserialized) certificate from its witness."""
    if cert.kind == T1:
        fresh = check_theorem1(gamma, cert.omega or ())
    elif cert.kind == T2:
        fresh = check_theorem2(gamma, cert.omega or ())
    elif cert.kind == T4:
        fresh = check_theorem4(gamma, cert.omega or ())
    elif cert.kind == T3:
        fresh = check_theorem3(gamma, cert.blocks or ())
    elif cert.kind == C2:
        fresh = check_corollary2(gamma, cert.matching or ())
    elif cert.kind == TA:
        fresh = bound_theoremA(gamma)
    elif cert.kind == TRIV:
        return cert.bound == 1
    else:
        raise ValueError(f"unknown certificate kind {cert.kind!r}")
    return fresh is not None and fresh.bound == cert.bound and fresh.applies_to == cert.applies_to
