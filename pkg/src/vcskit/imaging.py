"""Encrypt binary images into stackable shares and read them back.

Images are plain-text PBM (magic P1, 1 = black), chosen so test fixtures
and share files are bit-exact text.  Each secret pixel expands to the m
subpixels of one sampled share-matrix row, laid out either as a
horizontal strip (default) or as a near-square grid.  Per-pixel
randomness is derived by hashing (seed, pixel index), so encryption is
order-independent and reproducible across platforms.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .access import AccessStructure
from .matrices import BasisScheme, CollectionScheme, or_rows, sample_matrix
from .verify import DARKER, LIGHTER, verify_scheme

STRIP = "strip"
GRID = "grid"
LAYOUTS = (STRIP, GRID)


@dataclass(frozen=True)
class BinaryImage:
    """Row-major bitmap; pixel value 1 is black."""

    width: int
    height: int
    pixels: tuple[int, ...]

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError("pixel count does not match dimensions")
        if any(p not in (0, 1) for p in self.pixels):
            raise ValueError("pixels must be 0 or 1")

    def get(self, x: int, y: int) -> int:
        return self.pixels[y * self.width + x]


def parse_pbm(text: str) -> BinaryImage:
    tokens = []
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError("not a plain PBM (P1) image")
    if len(tokens) < 3:
        raise ValueError("truncated PBM header")
    width, height = int(tokens[1]), int(tokens[2])
    bits = [int(t) for t in tokens[3:]]
    if len(bits) != width * height:
        raise ValueError(f"expected {width * height} pixels, found {len(bits)}")
    return BinaryImage(width, height, tuple(bits))


def format_pbm(image: BinaryImage) -> str:
    lines = [f"P1", f"{image.width} {image.height}"]
    for y in range(image.height):
        row = image.pixels[y * image.width : (y + 1) * image.width]
        lines.append(" ".join(str(b) for b in row))
    return "\n".join(lines) + "\n"


def read_pbm(path) -> BinaryImage:
    with open(path, "r", encoding="ascii") as fh:
        return parse_pbm(fh.read())


def write_pbm(image: BinaryImage, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_pbm(image))


def _block_geometry(m: int, layout: str) -> tuple[int, int, list[tuple[int, int]]]:
    """Block size and per-subpixel offsets for one secret pixel."""
    if layout == STRIP:
        return m, 1, [(j, 0) for j in range(m)]
    if layout == GRID:
        bw = math.isqrt(m)
        if bw * bw < m:
            bw += 1
        bh = -(-m // bw)
        return bw, bh, [(j % bw, j // bw) for j in range(m)]
    raise ValueError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")


def _pixel_rng(seed: int, index: int) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{index}".encode("ascii")).digest()
    return random.Random(int.from_bytes(digest, "big"))


@dataclass(frozen=True)
class ShareSet:
    """The n share images of one encrypted secret."""

    scheme: BasisScheme | CollectionScheme
    seed: int
    layout: str
    shares: tuple[BinaryImage, ...]


def encrypt_image(
    gamma: AccessStructure,
    scheme: BasisScheme | CollectionScheme,
    image: BinaryImage,
    seed: int,
    *,
    layout: str = STRIP,
) -> ShareSet:
    """Encrypt a binary image into one share per participant.

    The scheme is re-verified against the access structure first; handing
    out shares from an invalid scheme is refused.  Every pixel draws its
    share matrix independently from a generator keyed by (seed, pixel
    index), so the output is deterministic for a given seed.
    """
    report = verify_scheme(gamma, scheme)
    if not report.valid:
        raise ValueError(f"scheme does not verify for this structure: {report.violations}")
    m = scheme.m
    bw, bh, offsets = _block_geometry(m, layout)
    out_w, out_h = image.width * bw, image.height * bh
    canvases = [[0] * (out_w * out_h) for _ in range(scheme.n)]
    for index, bit in enumerate(image.pixels):
        x, y = index % image.width, index // image.width
        mat = sample_matrix(scheme, bit, _pixel_rng(seed, index))
        for share, row in zip(canvases, mat.rows):
            for j, (dx, dy) in enumerate(offsets):
                if row[j]:
                    share[(y * bh + dy) * out_w + (x * bw + dx)] = 1
    shares = tuple(BinaryImage(out_w, out_h, tuple(c)) for c in canvases)
    return ShareSet(scheme=scheme, seed=seed, layout=layout, shares=shares)


def stack_images(images: Sequence[BinaryImage]) -> BinaryImage:
    """Pixelwise OR, the transparencies-on-a-lightbox model."""
    if not images:
        raise ValueError("nothing to stack")
    w, h = images[0].width, images[0].height
    if any((img.width, img.height) != (w, h) for img in images):
        raise ValueError("stacked images must share dimensions")
    acc = [0] * (w * h)
    for img in images:
        acc = [a | b for a, b in zip(acc, img.pixels)]
    return BinaryImage(w, h, tuple(acc))


def stack(shares: ShareSet, participants: Iterable[int]) -> BinaryImage:
    """Stack the shares of a participant subset."""
    chosen = sorted(set(participants))
    if not chosen:
        raise ValueError("participant subset must be non-empty")
    if chosen[0] < 1 or chosen[-1] > len(shares.shares):
        raise ValueError(f"participants must lie in 1..{len(shares.shares)}")
    return stack_images([shares.shares[i - 1] for i in chosen])


def decode_stacked(
    stacked: BinaryImage,
    m: int,
    threshold: int,
    *,
    direction: str = DARKER,
    strict: bool = True,
    layout: str = STRIP,
) -> BinaryImage:
    """Recover a secret image from a stacked reconstruction by thresholding.

    Each block of m subpixels is reduced to its weight and compared with
    the verifier's threshold for the stacked set.  For darker
    reconstructions black means weight above the threshold (``strict=False``
    for models whose threshold is itself the black weight); for lighter
    ones black means weight below it.
    """
    bw, bh, offsets = _block_geometry(m, layout)
    if stacked.width % bw or stacked.height % bh:
        raise ValueError("stacked image dimensions do not match the block size")
    width, height = stacked.width // bw, stacked.height // bh
    bits = []
    for y in range(height):
        for x in range(width):
            w = sum(stacked.get(x * bw + dx, y * bh + dy) for dx, dy in offsets)
            if direction == DARKER:
                black = w > threshold if strict else w >= threshold
            elif direction == LIGHTER:
                black = w < threshold
            else:
                raise ValueError(f"unknown direction {direction!r}")
            bits.append(1 if black else 0)
    return BinaryImage(width, height, tuple(bits))


def stacked_pattern_distribution(
    scheme: BasisScheme | CollectionScheme, x: Iterable[int], pixel: int
) -> dict[tuple[int, ...], Fraction]:
    """Exact distribution of the stacked subpixel pattern of a subset.

    Computed from the scheme itself, never sampled: basis schemes range
    over all column permutations, collections over their frequency maps.
    Security of a forbidden set means the distributions for pixel 0 and
    pixel 1 compare equal.
    """
    xs = sorted(set(x))
    if not xs:
        raise ValueError("participant subset must be non-empty")
    if isinstance(scheme, BasisScheme):
        base = scheme.s1 if pixel else scheme.s0
        stacked = or_rows(base, xs)
        counter = Counter(itertools.permutations(stacked))
        total = math.factorial(len(stacked))
        return {pattern: Fraction(cnt, total) for pattern, cnt in sorted(counter.items())}
    entries = scheme.collection(pixel)
    total = sum(f for _, f in entries)
    counter: Counter = Counter()
    for mat, freq in entries:
        counter[or_rows(mat, xs)] += freq
    return {pattern: Fraction(cnt, total) for pattern, cnt in sorted(counter.items())}
