"""The seven-point effect-intensity scale and hypothesis sets over it.

A hypothesis set is a non-empty subset of the scale, stored as a 7-bit mask
(bit ``i`` set when the point with order ``i`` is a member).  All 127
non-empty subsets are representable; the full mask is the frame itself and
denotes total ignorance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator

__all__ = [
    "Intensity",
    "HypothesisSet",
    "NotationError",
    "FULL_MASK",
    "THETA",
    "hypothesis_from_notation",
]


class Intensity(IntEnum):
    """Ordered intensity points, strongly negative to strongly positive."""

    SN = 0
    NE = 1
    WN = 2
    IF = 3
    WP = 4
    PO = 5
    SP = 6

    @property
    def label(self) -> str:
        return _LABELS[self]

    def mirrored(self) -> "Intensity":
        return Intensity(6 - self.value)


_LABELS = {
    Intensity.SN: "strongly negative",
    Intensity.NE: "negative",
    Intensity.WN: "weakly negative",
    Intensity.IF: "indifferent",
    Intensity.WP: "weakly positive",
    Intensity.PO: "positive",
    Intensity.SP: "strongly positive",
}

FULL_MASK = (1 << len(Intensity)) - 1


class NotationError(ValueError):
    """Raised when a hypothesis notation string cannot be parsed."""


@dataclass(frozen=True, slots=True)
class HypothesisSet:
    """A non-empty set of intensity points (a DST focal element)."""

    mask: int

    def __post_init__(self) -> None:
        if not isinstance(self.mask, int) or not 0 < self.mask <= FULL_MASK:
            raise ValueError(f"hypothesis mask must be in 1..{FULL_MASK}, got {self.mask!r}")

    @classmethod
    def of(cls, *points: Intensity | str) -> "HypothesisSet":
        mask = 0
        for p in points:
            mask |= 1 << _point(p)
        return cls(mask)

    @classmethod
    def span(cls, low: Intensity | str, high: Intensity | str) -> "HypothesisSet":
        """Closed interval of the scale between two endpoints (either order)."""
        a, b = sorted((_point(low), _point(high)))
        return cls(((1 << (b + 1)) - 1) & ~((1 << a) - 1))

    @classmethod
    def theta(cls) -> "HypothesisSet":
        return cls(FULL_MASK)

    @property
    def points(self) -> tuple[Intensity, ...]:
        return tuple(p for p in Intensity if self.mask >> p & 1)

    @property
    def is_theta(self) -> bool:
        return self.mask == FULL_MASK

    @property
    def low(self) -> Intensity:
        return self.points[0]

    @property
    def high(self) -> Intensity:
        return self.points[-1]

    @property
    def midpoint(self) -> float:
        """Mean scale position of the members (IF sits at 3)."""
        pts = self.points
        return sum(int(p) for p in pts) / len(pts)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[Intensity]:
        return iter(self.points)

    def __contains__(self, point: object) -> bool:
        if isinstance(point, (Intensity, str)):
            return bool(self.mask >> _point(point) & 1)
        return False

    def __le__(self, other: "HypothesisSet") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "HypothesisSet") -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: "HypothesisSet") -> bool:
        return other <= self

    def __gt__(self, other: "HypothesisSet") -> bool:
        return other < self

    def __or__(self, other: "HypothesisSet") -> "HypothesisSet":
        return HypothesisSet(self.mask | other.mask)

    def intersects(self, other: "HypothesisSet") -> bool:
        return bool(self.mask & other.mask)

    def mirrored(self) -> "HypothesisSet":
        """Reflect across IF (SN <-> SP, NE <-> PO, WN <-> WP)."""
        return HypothesisSet.of(*(p.mirrored() for p in self.points))

    def is_contiguous(self) -> bool:
        return self == HypothesisSet.span(self.low, self.high)

    def notation(self) -> str:
        """Singletons render bare ("SP"); anything larger as a brace list."""
        names = [p.name for p in self.points]
        if len(names) == 1:
            return names[0]
        return "{" + ",".join(names) + "}"

    def __str__(self) -> str:
        return self.notation()

    def __repr__(self) -> str:
        return f"HypothesisSet({self.notation()})"


THETA = HypothesisSet(FULL_MASK)

_TOKEN = re.compile(r"^[A-Za-z]+$")


def _point(p: Intensity | str) -> Intensity:
    if isinstance(p, Intensity):
        return p
    name = p.strip().upper()
    try:
        return Intensity[name]
    except KeyError:
        raise NotationError(f"unknown intensity point {p.strip()!r}") from None


def hypothesis_from_notation(text: str) -> HypothesisSet:
    """Parse ``"SP"``, ``"{IF,WP}"`` or ``"WN..PO"`` into a hypothesis set.

    The range form is inclusive of both endpoints; the brace form is the exact
    set listed.
    """
    s = text.strip()
    if s.startswith("{"):
        if not s.endswith("}"):
            raise NotationError(f"unterminated brace list {text!r}")
        body = s[1:-1].strip()
        if not body:
            raise NotationError(f"empty braces in {text!r}")
        tokens = [t.strip() for t in body.split(",")]
        for t in tokens:
            if not _TOKEN.match(t):
                raise NotationError(f"unknown intensity point {t!r}")
        return HypothesisSet.of(*tokens)
    if ".." in s:
        low, _, high = s.partition("..")
        for t in (low, high):
            if not _TOKEN.match(t.strip()):
                raise NotationError(f"unknown intensity point {t.strip()!r}")
        return HypothesisSet.span(low, high)
    if not _TOKEN.match(s):
        raise NotationError(f"unknown intensity point {s!r}")
    return HypothesisSet.of(s)


def all_hypotheses() -> Iterable[HypothesisSet]:
    """Every non-empty subset of the scale, in mask order."""
    return (HypothesisSet(m) for m in range(1, FULL_MASK + 1))
