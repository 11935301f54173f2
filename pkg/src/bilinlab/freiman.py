"""Support compression through Freiman isomorphisms of order 2.

An order-2 Freiman isomorphism is a bijection of integer index sets that
preserves the pattern of pairwise-sum coincidences in both directions; it
leaves convolution norms unchanged, which is what lets large convolution
supports be compressed into a small ambient dimension.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class IndexSet:
    """Sorted distinct integers (possibly negative)."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(sorted(int(a) for a in self.elements))
        if len(set(elems)) != len(elems):
            raise ValueError("elements must be distinct")
        object.__setattr__(self, "elements", elems)

    @property
    def contains_zero(self) -> bool:
        return 0 in self.elements

    def diameter(self) -> int:
        return self.elements[-1] - self.elements[0] if self.elements else 0


def _elements(a) -> tuple:
    if isinstance(a, IndexSet):
        return a.elements
    return IndexSet(tuple(a)).elements


def _sum_pattern(values):
    """Map pair-sum -> set of (unordered) index pairs attaining it."""
    pattern: dict = {}
    for i in range(len(values)):
        for j in range(i, len(values)):
            pattern.setdefault(values[i] + values[j], set()).add((i, j))
    return pattern


def is_freiman_homomorphism(a, phi: dict) -> bool:
    """a1+a2 = a1'+a2'  implies  phi(a1)+phi(a2) = phi(a1')+phi(a2')."""
    elems = _elements(a)
    if any(e not in phi for e in elems):
        raise ValueError("map must be defined on every element")
    images = [phi[e] for e in elems]
    for group in _sum_pattern(elems).values():
        image_sums = {images[i] + images[j] for i, j in group}
        if len(image_sums) > 1:
            return False
    return True


def is_freiman_isomorphism(a, phi: dict) -> bool:
    """Sum-coincidence patterns match in both directions."""
    elems = _elements(a)
    if any(e not in phi for e in elems):
        raise ValueError("map must be defined on every element")
    images = [phi[e] for e in elems]
    if len(set(images)) != len(images):
        return False
    src = _sum_pattern(elems)
    img = _sum_pattern(images)
    return set(map(frozenset, src.values())) == set(map(frozenset, img.values()))


def grynkiewicz_bound(m: int, d: int | None = None) -> float:
    """Diameter bound ``d!^2 (3/2)^(d-1) 2^(m-2) + (3^(d-1)-1)/2``.

    ``d`` defaults to m-2 (the Freiman dimension can be assumed at most
    that large); exact dimension computation is out of scope.
    """
    if d is None:
        d = max(1, m - 2)
    return (math.factorial(d) ** 2 * 1.5 ** (d - 1) * 2.0 ** (m - 2)
            + (3.0 ** (d - 1) - 1.0) / 2.0)


@dataclass(frozen=True)
class RemapResult:
    """A found isomorphic image with search metadata."""

    source: tuple
    image: tuple
    diameter: int
    verified_isomorphism: bool
    search_exhaustive: bool

    def mapping(self) -> dict:
        return dict(zip(self.source, self.image))

    def to_json(self) -> dict:
        return {
            "source": list(self.source),
            "image": list(self.image),
            "diameter": self.diameter,
            "verified_isomorphism": self.verified_isomorphism,
            "search_exhaustive": self.search_exhaustive,
        }


def min_diameter_isomorphic_image(a, budget: int = 10 ** 6) -> RemapResult:
    """Smallest-diameter Freiman-isomorphic image found by enumeration.

    Candidate images are normalized to minimum 0 and first gap at most
    the last gap (reflection symmetry); diameters are scanned in
    increasing order, so the first hit is minimal when the search stayed
    within budget.  The identity image bounds the search, so a result is
    always returned.
    """
    elems = _elements(a)
    m = len(elems)
    if m == 0:
        raise ValueError("empty set")
    if m == 1:
        return RemapResult(elems, (0,), 0, True, True)
    src_pattern = set(map(frozenset, _sum_pattern(elems).values()))
    diam_a = elems[-1] - elems[0]
    checks = 0
    exhausted_below = True
    for diameter in range(m - 1, diam_a):
        for interior in itertools.combinations(range(1, diameter), m - 2):
            image_set = (0,) + interior + (diameter,)
            # Reflection pruning: keep the lexicographically smaller of
            # the gap sequence and its reverse.
            gaps = tuple(b - c for b, c in zip(image_set[1:], image_set))
            if gaps[::-1] < gaps:
                continue
            for perm in itertools.permutations(image_set):
                checks += 1
                if checks > budget:
                    identity = RemapResult(elems, elems, diam_a, True, False)
                    return identity
                images = list(perm)
                img_pattern = set(map(frozenset,
                                      _sum_pattern(images).values()))
                if img_pattern == src_pattern:
                    phi = dict(zip(elems, images))
                    verified = is_freiman_isomorphism(elems, phi)
                    return RemapResult(elems, tuple(images), diameter,
                                       verified, exhausted_below)
    # No strictly smaller image: the set itself (translated to start at 0)
    # is minimal.
    shifted = tuple(e - elems[0] for e in elems)
    return RemapResult(elems, shifted, diam_a, True, exhausted_below)


def _conv_norm(support, values, support2, values2) -> float:
    acc: dict = {}
    for i, va in zip(support, values):
        for j, vb in zip(support2, values2):
            acc[i + j] = acc.get(i + j, 0.0) + va * vb
    return math.sqrt(sum(abs(v) ** 2 for v in acc.values()))


def remapped_convolution_norm_check(x, y, result: RemapResult) -> float:
    """``| ||x*y|| - ||x~*y~|| |`` where the supports are remapped by result.

    ``x`` and ``y`` are (support, values) pairs with supports contained in
    the verified source set of ``result``.
    """
    sx, vx = x
    sy, vy = y
    if not result.verified_isomorphism:
        raise ValueError("remap is not a verified isomorphism")
    source = set(result.source)
    if not (set(sx) <= source and set(sy) <= source):
        raise ValueError("supports must be contained in the remapped set")
    phi = result.mapping()
    norm_a = _conv_norm(tuple(sx), tuple(vx), tuple(sy), tuple(vy))
    norm_b = _conv_norm(tuple(phi[i] for i in sx), tuple(vx),
                        tuple(phi[j] for j in sy), tuple(vy))
    return abs(norm_a - norm_b)
