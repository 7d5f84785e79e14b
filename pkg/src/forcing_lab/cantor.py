"""Exact clopen-set algebra over the space of infinite binary sequences.

Points are infinite 0/1 sequences carrying the fair-coin product measure.
A clopen set is a finite union of cylinders [s] = {x : s is a prefix of x},
held in canonical form: the generating strings form a prefix antichain and
no two sibling generators s0, s1 appear together (they merge to s).  With
that normal form, value equality is set equality and every measure is an
exact fraction with a power-of-two denominator.

Plane sets live on the product of two copies of the space.  They are kept
flattened at a uniform resolution (r1, r2): a set of rectangles [s] x [t]
with |s| = r1 and |t| = r2 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ForcingLabError

# The universal exact scalar.  Wire format is the string "p/q".
Rational = Fraction


class ResolutionTooCoarse(ForcingLabError):
    """Raised when a plane-set query needs more x-bits than were supplied."""


def check_bits(s: str) -> str:
    if not isinstance(s, str) or any(c not in "01" for c in s):
        raise ValueError(f"not a binary string: {s!r}")
    return s


def _canonical(gens: Iterable[str]) -> frozenset[str]:
    """Reduce arbitrary generators to the canonical antichain.

    Builds a binary trie of the generators and reads off the maximal fully
    covered nodes, which performs prefix absorption and sibling merging in
    one pass (including merges that only appear after absorption).
    """
    mark = object()
    root: dict = {}
    for g in gens:
        check_bits(g)
        node = root
        for c in g:
            node = node.setdefault(c, {})
        node[mark] = True

    def collect(node: dict, prefix: str) -> tuple[bool, list[str]]:
        if mark in node:
            return True, [prefix]
        c0, c1 = node.get("0"), node.get("1")
        f0, g0 = collect(c0, prefix + "0") if c0 is not None else (False, [])
        f1, g1 = collect(c1, prefix + "1") if c1 is not None else (False, [])
        if f0 and f1:
            return True, [prefix]
        return False, g0 + g1

    if not root:
        return frozenset()
    full, out = collect(root, "")
    return frozenset([""]) if full else frozenset(out)


@dataclass(frozen=True)
class ClopenSet:
    """Canonical finite union of cylinders.  Immutable.

    Construct via from_strings (canonicalizing) or module-level
    canonicalize; the raw constructor insists on canonical input so that
    non-canonical values are unrepresentable.
    """

    generators: frozenset[str]

    def __post_init__(self) -> None:
        gens = self.generators
        if not isinstance(gens, frozenset):
            object.__setattr__(self, "generators", frozenset(gens))
            gens = self.generators
        for s in gens:
            check_bits(s)
            for i in range(len(s)):
                if s[:i] in gens:
                    raise ValueError(f"generator {s!r} is absorbed by {s[:i]!r}")
            if s:
                sibling = s[:-1] + ("1" if s[-1] == "0" else "0")
                if sibling in gens:
                    raise ValueError(f"sibling pair {s!r}/{sibling!r} must merge")

    @classmethod
    def from_strings(cls, gens: Iterable[str]) -> "ClopenSet":
        return cls(_canonical(gens))

    def is_empty(self) -> bool:
        return not self.generators

    def is_full(self) -> bool:
        return self.generators == frozenset([""])

    def measure(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(s)) for s in self.generators), Fraction(0))

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet.from_strings(self.generators | other.generators)

    def intersect(self, other: "ClopenSet") -> "ClopenSet":
        out = []
        for s in self.generators:
            for t in other.generators:
                if t.startswith(s):
                    out.append(t)
                elif s.startswith(t):
                    out.append(s)
        return ClopenSet.from_strings(out)

    def complement(self) -> "ClopenSet":
        if self.is_empty():
            return FULL
        mark = object()
        root: dict = {}
        for g in self.generators:
            node = root
            for c in g:
                node = node.setdefault(c, {})
            node[mark] = True
        out: list[str] = []

        def walk(node: dict, prefix: str) -> None:
            if mark in node:
                return
            for b in "01":
                child = node.get(b)
                if child is None:
                    out.append(prefix + b)
                else:
                    walk(child, prefix + b)

        walk(root, "")
        # the walk of a canonical trie cannot emit sibling pairs or nested
        # prefixes, so the result is already canonical
        return ClopenSet(frozenset(out))

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersect(other.complement())

    def contains_cylinder(self, s: str) -> bool:
        check_bits(s)
        return any(s.startswith(g) for g in self.generators)

    def __or__(self, other: "ClopenSet") -> "ClopenSet":
        return self.union(other)

    def __and__(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersect(other)

    def __sub__(self, other: "ClopenSet") -> "ClopenSet":
        return self.difference(other)

    def __invert__(self) -> "ClopenSet":
        return self.complement()


EMPTY = ClopenSet(frozenset())
FULL = ClopenSet(frozenset([""]))


def canonicalize(gens: Iterable[str]) -> ClopenSet:
    return ClopenSet.from_strings(gens)


def _extensions(s: str, length: int) -> list[str]:
    """All binary strings of the given length extending s."""
    k = length - len(s)
    if k < 0:
        raise ValueError(f"cannot shorten {s!r} to length {length}")
    if k == 0:
        return [s]
    return [s + format(i, f"0{k}b") for i in range(2 ** k)]


@dataclass(frozen=True, eq=False)
class ClopenPlaneSet:
    """Finite union of rectangles on the product space, resolution-flat.

    Every stored rectangle (s, t) has |s| = resolution[0] and
    |t| = resolution[1].  Two plane sets are equal when they agree after
    reflattening to the common refinement, so the same point set built at
    different resolutions compares equal.
    """

    resolution: tuple[int, int]
    rects: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        r1, r2 = self.resolution
        if r1 < 0 or r2 < 0:
            raise ValueError("resolution must be nonnegative")
        if not isinstance(self.rects, frozenset):
            object.__setattr__(self, "rects", frozenset(self.rects))
        for s, t in self.rects:
            check_bits(s)
            check_bits(t)
            if len(s) != r1 or len(t) != r2:
                raise ValueError(f"rectangle ({s!r}, {t!r}) off resolution {self.resolution}")

    @classmethod
    def from_rects(
        cls,
        rects: Iterable[tuple[str, str]],
        min_resolution: tuple[int, int] = (0, 0),
    ) -> "ClopenPlaneSet":
        pairs = [(check_bits(s), check_bits(t)) for s, t in rects]
        r1 = max([len(s) for s, _ in pairs] + [min_resolution[0]], default=min_resolution[0])
        r2 = max([len(t) for _, t in pairs] + [min_resolution[1]], default=min_resolution[1])
        flat = set()
        for s, t in pairs:
            for a in _extensions(s, r1):
                for b in _extensions(t, r2):
                    flat.add((a, b))
        return cls((r1, r2), frozenset(flat))

    @classmethod
    def empty(cls, resolution: tuple[int, int] = (0, 0)) -> "ClopenPlaneSet":
        return cls(resolution, frozenset())

    @classmethod
    def full(cls, resolution: tuple[int, int] = (0, 0)) -> "ClopenPlaneSet":
        r1, r2 = resolution
        return cls(resolution, frozenset(
            (a, b) for a in _extensions("", r1) for b in _extensions("", r2)))

    def at_resolution(self, r1: int, r2: int) -> "ClopenPlaneSet":
        if (r1, r2) == self.resolution:
            return self
        if r1 < self.resolution[0] or r2 < self.resolution[1]:
            raise ResolutionTooCoarse(
                f"cannot coarsen resolution {self.resolution} to {(r1, r2)}")
        flat = set()
        for s, t in self.rects:
            for a in _extensions(s, r1):
                for b in _extensions(t, r2):
                    flat.add((a, b))
        return ClopenPlaneSet((r1, r2), frozenset(flat))

    def _common(self, other: "ClopenPlaneSet") -> tuple["ClopenPlaneSet", "ClopenPlaneSet"]:
        r1 = max(self.resolution[0], other.resolution[0])
        r2 = max(self.resolution[1], other.resolution[1])
        return self.at_resolution(r1, r2), other.at_resolution(r1, r2)

    def measure(self) -> Fraction:
        r1, r2 = self.resolution
        return Fraction(len(self.rects), 2 ** (r1 + r2))

    def union(self, other: "ClopenPlaneSet") -> "ClopenPlaneSet":
        a, b = self._common(other)
        return ClopenPlaneSet(a.resolution, a.rects | b.rects)

    def intersect(self, other: "ClopenPlaneSet") -> "ClopenPlaneSet":
        a, b = self._common(other)
        return ClopenPlaneSet(a.resolution, a.rects & b.rects)

    def difference(self, other: "ClopenPlaneSet") -> "ClopenPlaneSet":
        a, b = self._common(other)
        return ClopenPlaneSet(a.resolution, a.rects - b.rects)

    def complement(self) -> "ClopenPlaneSet":
        r1, r2 = self.resolution
        everything = {(a, b) for a in _extensions("", r1) for b in _extensions("", r2)}
        return ClopenPlaneSet(self.resolution, frozenset(everything - self.rects))

    def contains_rect(self, s: str, t: str) -> bool:
        """Whether the whole rectangle [s] x [t] lies inside this set."""
        check_bits(s)
        check_bits(t)
        r1, r2 = self.resolution
        if len(s) >= r1 and len(t) >= r2:
            return (s[:r1], t[:r2]) in self.rects
        return all(
            (a[:r1], b[:r2]) in self.rects
            for a in _extensions(s, max(len(s), r1))
            for b in _extensions(t, max(len(t), r2))
        )

    def rect_overlap_measure(self, s: str, t: str) -> Fraction:
        """Exact measure of ([s] x [t]) intersected with this set."""
        check_bits(s)
        check_bits(t)
        r1, r2 = self.resolution
        d1 = max(len(s), r1)
        d2 = max(len(t), r2)
        cell = Fraction(1, 2 ** (d1 + d2))
        count = 0
        for a, b in self.rects:
            if (a.startswith(s) or s.startswith(a)) and (b.startswith(t) or t.startswith(b)):
                count += 1
        return count * cell

    def section_x(self, s: str) -> ClopenSet:
        """The y-section over the cylinder [s]; needs |s| >= resolution[0]."""
        check_bits(s)
        r1, _ = self.resolution
        if len(s) < r1:
            raise ResolutionTooCoarse(
                f"section needs at least {r1} x-bits, got {len(s)}")
        x = s[:r1]
        return ClopenSet.from_strings(t for a, t in self.rects if a == x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClopenPlaneSet):
            return NotImplemented
        a, b = self._common(other)
        return a.rects == b.rects

    __hash__ = None  # type: ignore[assignment]


def measure(a: ClopenSet) -> Fraction:
    return a.measure()


def measure2(h: ClopenPlaneSet) -> Fraction:
    return h.measure()


def union(a, b):
    return a.union(b)


def intersect(a, b):
    return a.intersect(b)


def complement(a):
    return a.complement()


def difference(a, b):
    return a.difference(b)


def plane_section_x(h: ClopenPlaneSet, s: str) -> ClopenSet:
    return h.section_x(s)
