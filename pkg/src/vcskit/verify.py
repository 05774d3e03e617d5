"""Decide whether a candidate scheme realizes an access structure.

Five models are supported.  Models 2, 3 and 5 act on basis-matrix pairs,
models 1 and 4 on frequency-weighted collections.  The verifier never
takes a contrast value as input: it reports the largest exact rational
contrast consistent with the model, so reports are comparable across
schemes.  On failure every offending set is listed with the condition it
breaks.

Condition names used in violation records:

- ``contrast``      a qualified (or minimal qualified) set cannot tell
                    black from white with positive contrast
- ``security``      a forbidden set sees distinguishable share
                    distributions
- ``equal-weight``  a non-minimal qualified set distinguishes the pixel
                    colors in a model that requires it must not (model 3)
- ``exactness``     the white collection is not constant on a minimal
                    qualified set (model 4)
- ``direction``     the black collection deviates both up and down on one
                    set while strict direction checking is on (model 4)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .access import (
    FORBIDDEN,
    MINIMAL_QUALIFIED,
    QUALIFIED_NON_MINIMAL,
    AccessStructure,
    enumerate_sets,
)
from .matrices import BasisScheme, BitMatrix, CollectionScheme, canonical, or_rows, restrict, weight

CONTRAST = "contrast"
SECURITY = "security"
EQUAL_WEIGHT = "equal-weight"
EXACTNESS = "exactness"
DIRECTION = "direction"

DARKER = "darker"
LIGHTER = "lighter"
MIXED = "mixed"


@dataclass
class VerifyReport:
    """Outcome of a verification run.

    ``alpha`` is the best contrast the scheme achieves (0 when the contrast
    condition fails outright); ``thresholds`` covers exactly the sets the
    model's contrast condition quantifies over.
    """

    valid: bool
    alpha: Fraction
    thresholds: dict[tuple[int, ...], int] = field(default_factory=dict)
    directions: dict[tuple[int, ...], str] = field(default_factory=dict)
    violations: list[tuple[tuple[int, ...], str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        def key(s: tuple[int, ...]) -> str:
            return "[" + ",".join(str(i) for i in s) + "]"

        out = {
            "valid": self.valid,
            "alpha": str(self.alpha),
            "thresholds": {key(s): t for s, t in self.thresholds.items()},
            "violations": [[key(s), cond] for s, cond in self.violations],
        }
        if self.directions:
            out["directions"] = {key(s): d for s, d in self.directions.items()}
        return out


def _classed_sets(gamma: AccessStructure):
    minimal = enumerate_sets(gamma, MINIMAL_QUALIFIED)
    nonminimal = enumerate_sets(gamma, QUALIFIED_NON_MINIMAL)
    forbidden = [x for x in enumerate_sets(gamma, FORBIDDEN) if x]
    return minimal, nonminimal, forbidden


def _require_compatible(gamma: AccessStructure, scheme, models: tuple[int, ...]):
    if scheme.n != gamma.n:
        raise ValueError(f"scheme has {scheme.n} rows but the structure has {gamma.n} participants")
    if scheme.model not in models:
        raise ValueError(f"model {scheme.model} is not handled by this verifier")


def verify_basis(gamma: AccessStructure, scheme: BasisScheme) -> VerifyReport:
    """Check a basis-matrix pair against its model (2, 3 or 5).

    Model 2 demands that every qualified set reconstruct strictly darker;
    the threshold of X is the stacked black weight and the contrast is the
    smallest normalized weight gap.  Models 3 and 5 quantify over minimal
    qualified sets only, pin the threshold to the stacked white weight and
    allow the reconstruction to come out darker or lighter per set; model 3
    additionally requires every non-minimal qualified set to stack to equal
    weights for both pixel colors.  In all three models a forbidden set
    must see restrictions that agree up to a column permutation.
    """
    _require_compatible(gamma, scheme, (2, 3, 5))
    minimal, nonminimal, forbidden = _classed_sets(gamma)
    m = scheme.m
    report = VerifyReport(valid=True, alpha=Fraction(0))

    for x in forbidden:
        if canonical(restrict(scheme.s0, x)) != canonical(restrict(scheme.s1, x)):
            report.violations.append((x, SECURITY))

    gaps: list[int] = []
    if scheme.model == 2:
        for x in sorted(minimal + nonminimal, key=lambda s: (len(s), s)):
            w0 = weight(or_rows(scheme.s0, x))
            w1 = weight(or_rows(scheme.s1, x))
            report.thresholds[x] = w1
            gaps.append(w1 - w0)
            if w1 <= w0:
                report.violations.append((x, CONTRAST))
    else:
        for x in minimal:
            w0 = weight(or_rows(scheme.s0, x))
            w1 = weight(or_rows(scheme.s1, x))
            report.thresholds[x] = w0
            gaps.append(abs(w1 - w0))
            if w1 == w0:
                report.violations.append((x, CONTRAST))
            else:
                report.directions[x] = DARKER if w1 > w0 else LIGHTER
        if scheme.model == 3:
            for x in nonminimal:
                w0 = weight(or_rows(scheme.s0, x))
                w1 = weight(or_rows(scheme.s1, x))
                if w0 != w1:
                    report.violations.append((x, EQUAL_WEIGHT))

    report.alpha = Fraction(max(min(gaps), 0), m) if gaps else Fraction(0)
    report.valid = not report.violations
    return report


def _restriction_distribution(entries, x) -> dict[tuple, int]:
    dist: dict[tuple, int] = {}
    for mat, freq in entries:
        key = restrict(mat, x).rows
        dist[key] = dist.get(key, 0) + freq
    return dist


def verify_collections(
    gamma: AccessStructure,
    scheme: CollectionScheme,
    *,
    strict_direction: bool = False,
) -> VerifyReport:
    """Check a collection pair against its model (1 or 4).

    Model 1: every qualified set needs a threshold separating the whole
    white collection (at most t - alpha*m) from the whole black collection
    (at least t).  Model 4: every minimal qualified set must stack to one
    constant weight across the white collection, and each black matrix must
    deviate from it by at least alpha*m in either direction.  By default
    each black matrix may pick its own direction; ``strict_direction``
    additionally requires one direction per set.

    Security for both models compares restricted collections as frequency
    maps keyed by the exact restricted matrix, after scaling the two maps
    to a common total, so collections of different sizes with proportional
    frequencies are accepted.
    """
    _require_compatible(gamma, scheme, (1, 4))
    minimal, nonminimal, forbidden = _classed_sets(gamma)
    m = scheme.m
    report = VerifyReport(valid=True, alpha=Fraction(0))

    t0, t1 = scheme.total0, scheme.total1
    for x in forbidden:
        d0 = _restriction_distribution(scheme.c0, x)
        d1 = _restriction_distribution(scheme.c1, x)
        keys = set(d0) | set(d1)
        if any(d0.get(k, 0) * t1 != d1.get(k, 0) * t0 for k in keys):
            report.violations.append((x, SECURITY))

    gaps: list[int] = []
    if scheme.model == 1:
        for x in sorted(minimal + nonminimal, key=lambda s: (len(s), s)):
            w0 = max(weight(or_rows(mat, x)) for mat, _ in scheme.c0)
            w1 = min(weight(or_rows(mat, x)) for mat, _ in scheme.c1)
            report.thresholds[x] = w1
            gaps.append(w1 - w0)
            if w1 <= w0:
                report.violations.append((x, CONTRAST))
    else:
        for x in minimal:
            weights0 = {weight(or_rows(mat, x)) for mat, _ in scheme.c0}
            t_x = min(weights0)
            report.thresholds[x] = t_x
            if len(weights0) > 1:
                report.violations.append((x, EXACTNESS))
                continue
            deviations = [weight(or_rows(mat, x)) - t_x for mat, _ in scheme.c1]
            if any(d == 0 for d in deviations):
                report.violations.append((x, CONTRAST))
                gaps.append(0)
                continue
            gaps.append(min(abs(d) for d in deviations))
            if all(d > 0 for d in deviations):
                report.directions[x] = DARKER
            elif all(d < 0 for d in deviations):
                report.directions[x] = LIGHTER
            else:
                report.directions[x] = MIXED
                if strict_direction:
                    report.violations.append((x, DIRECTION))

    report.alpha = Fraction(max(min(gaps), 0), m) if gaps else Fraction(0)
    report.valid = not report.violations
    return report


def verify_scheme(gamma: AccessStructure, scheme, *, strict_direction: bool = False) -> VerifyReport:
    """Dispatch to the basis or collection verifier on the scheme's model."""
    if isinstance(scheme, BasisScheme):
        return verify_basis(gamma, scheme)
    if isinstance(scheme, CollectionScheme):
        return verify_collections(gamma, scheme, strict_direction=strict_direction)
    raise ValueError(f"not a scheme: {scheme!r}")


def alpha_feasible(gamma: AccessStructure, scheme, alpha: Fraction) -> bool:
    """Whether the scheme meets its model's conditions at a GIVEN contrast.

    This re-derives every inequality from the raw stacked weights rather
    than comparing against a previously reported contrast, so it serves as
    an independent check that reported contrasts are maximal.
    """
    if alpha <= 0:
        return False
    m = scheme.m
    minimal, nonminimal, forbidden = _classed_sets(gamma)
    need = alpha * m

    if isinstance(scheme, BasisScheme):
        for x in forbidden:
            if canonical(restrict(scheme.s0, x)) != canonical(restrict(scheme.s1, x)):
                return False
        if scheme.model == 2:
            return all(
                weight(or_rows(scheme.s1, x)) - weight(or_rows(scheme.s0, x)) >= need
                for x in minimal + nonminimal
            )
        if scheme.model == 3 and any(
            weight(or_rows(scheme.s0, x)) != weight(or_rows(scheme.s1, x)) for x in nonminimal
        ):
            return False
        return all(
            abs(weight(or_rows(scheme.s1, x)) - weight(or_rows(scheme.s0, x))) >= need
            for x in minimal
        )

    t0, t1 = scheme.total0, scheme.total1
    for x in forbidden:
        d0 = _restriction_distribution(scheme.c0, x)
        d1 = _restriction_distribution(scheme.c1, x)
        if any(d0.get(k, 0) * t1 != d1.get(k, 0) * t0 for k in set(d0) | set(d1)):
            return False
    if scheme.model == 1:
        for x in minimal + nonminimal:
            w0 = max(weight(or_rows(mat, x)) for mat, _ in scheme.c0)
            w1 = min(weight(or_rows(mat, x)) for mat, _ in scheme.c1)
            if w1 - w0 < need:
                return False
        return True
    for x in minimal:
        weights0 = {weight(or_rows(mat, x)) for mat, _ in scheme.c0}
        if len(weights0) > 1:
            return False
        t_x = min(weights0)
        if any(abs(weight(or_rows(mat, x)) - t_x) < need for mat, _ in scheme.c1):
            return False
    return True
