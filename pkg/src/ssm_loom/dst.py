"""Dempster-Shafer mass functions over the seven-point intensity frame."""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .scale import FULL_MASK, THETA, HypothesisSet, Intensity

__all__ = [
    "MassFunction",
    "SimpleSupport",
    "CombinationResult",
    "TotalConflictError",
    "from_simple_support",
    "vacuous",
    "combine",
    "combine_all",
    "belief_of",
    "plausibility_of",
    "discount_mass",
    "decide_intensity",
]

UNIT_SUM_TOL = 1e-9
TOTAL_CONFLICT_TOL = 1e-12
# masses closer than this are treated as tied by decide_intensity
TIE_TOL = 1e-12


class TotalConflictError(ValueError):
    """The bodies of evidence being combined are fully contradictory."""

    def __init__(self, message: str, sources: tuple[str, ...] = ()):
        super().__init__(message)
        self.sources = sources


class MassFunction(Mapping[HypothesisSet, float]):
    """Immutable basic probability assignment.

    Only focal elements (mass > 0) are stored.  Construction rejects masses
    outside [0, 1] and assignments that do not sum to one within 1e-9.
    """

    __slots__ = ("_m",)

    def __init__(self, assignments: Mapping[HypothesisSet, float] | Iterable[tuple[HypothesisSet, float]]):
        items = assignments.items() if isinstance(assignments, Mapping) else assignments
        m: dict[int, float] = {}
        for h, v in items:
            if not isinstance(h, HypothesisSet):
                raise TypeError(f"focal elements must be HypothesisSet, got {type(h).__name__}")
            v = float(v)
            if not (0.0 <= v <= 1.0) or math.isnan(v):
                raise ValueError(f"mass {v!r} on {h} is outside [0, 1]")
            if v > 0.0:
                m[h.mask] = m.get(h.mask, 0.0) + v
        total = math.fsum(m.values())
        if abs(total - 1.0) > UNIT_SUM_TOL:
            raise ValueError(f"masses sum to {total!r}, expected 1")
        self._m = MappingProxyType(m)

    @classmethod
    def _trusted(cls, m: dict[int, float]) -> "MassFunction":
        # skips validation; callers guarantee the invariants
        obj = cls.__new__(cls)
        obj._m = MappingProxyType({k: v for k, v in m.items() if v > 0.0})
        return obj

    def __getitem__(self, h: HypothesisSet) -> float:
        return self._m[h.mask]

    def get(self, h: HypothesisSet, default: float = 0.0) -> float:  # type: ignore[override]
        return self._m.get(h.mask, default)

    def __iter__(self) -> Iterator[HypothesisSet]:
        return (HypothesisSet(k) for k in sorted(self._m))

    def __len__(self) -> int:
        return len(self._m)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MassFunction):
            return dict(self._m) == dict(other._m)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._m.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{h.notation()}: {v:.6g}" for h, v in self.items())
        return f"MassFunction({{{body}}})"

    @property
    def masks(self) -> Mapping[int, float]:
        """Focal elements keyed by raw 7-bit mask."""
        return self._m

    @property
    def is_vacuous(self) -> bool:
        return set(self._m) == {FULL_MASK}

    def close_to(self, other: "MassFunction", tol: float = 1e-9) -> bool:
        keys = set(self._m) | set(other._m)
        return all(abs(self._m.get(k, 0.0) - other._m.get(k, 0.0)) <= tol for k in keys)


@dataclass(frozen=True)
class SimpleSupport:
    """Evidence committing ``belief`` to ``focus`` and the rest to the frame."""

    focus: HypothesisSet
    belief: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.belief <= 1.0:
            raise ValueError(f"belief must be in [0, 1], got {self.belief!r}")


@dataclass(frozen=True)
class CombinationResult:
    combined: MassFunction
    conflict: float


def vacuous() -> MassFunction:
    return MassFunction._trusted({FULL_MASK: 1.0})


def from_simple_support(s: SimpleSupport) -> MassFunction:
    if s.belief == 0.0 or s.focus.is_theta:
        return vacuous()
    if s.belief == 1.0:
        return MassFunction._trusted({s.focus.mask: 1.0})
    return MassFunction._trusted({s.focus.mask: s.belief, FULL_MASK: 1.0 - s.belief})


def _conjunctive(a: Mapping[int, float], b: Mapping[int, float]) -> tuple[dict[int, float], float]:
    out: dict[int, float] = {}
    empty = 0.0
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka & kb
            if k:
                out[k] = out.get(k, 0.0) + va * vb
            else:
                empty += va * vb
    return out, empty


def combine(a: MassFunction, b: MassFunction) -> CombinationResult:
    """Dempster's rule: conjunctive combination renormalized by 1 - K."""
    joint, k = _conjunctive(a.masks, b.masks)
    if 1.0 - k < TOTAL_CONFLICT_TOL:
        raise TotalConflictError(f"total conflict (K = {k!r}) between the two bodies of evidence")
    if k == 0.0:
        return CombinationResult(MassFunction._trusted(joint), 0.0)
    norm = 1.0 - k
    return CombinationResult(MassFunction._trusted({m: v / norm for m, v in joint.items()}), k)


def combine_all(ms: Iterable[MassFunction]) -> CombinationResult:
    """Left fold of :func:`combine`.

    The reported conflict is the joint conflict ``1 - prod(1 - K_i)``, which is
    the empty-set mass of a single-normalization combination of all inputs.
    """
    ms = list(ms)
    if not ms:
        raise ValueError("combine_all needs at least one mass function")
    acc = ms[0]
    keep = 1.0
    for i, m in enumerate(ms[1:], start=1):
        try:
            step = combine(acc, m)
        except TotalConflictError as exc:
            raise TotalConflictError(f"total conflict when adding input {i}", exc.sources) from None
        acc = step.combined
        keep *= 1.0 - step.conflict
    return CombinationResult(acc, 1.0 - keep)


def belief_of(m: MassFunction, h: HypothesisSet) -> float:
    """Bel(h): total mass of focal elements contained in ``h``."""
    return math.fsum(v for k, v in m.masks.items() if k & ~h.mask == 0)


def plausibility_of(m: MassFunction, h: HypothesisSet) -> float:
    """Pl(h): total mass of focal elements intersecting ``h``."""
    return math.fsum(v for k, v in m.masks.items() if k & h.mask)


def discount_mass(m: MassFunction, alpha: float) -> MassFunction:
    """Move a fraction ``alpha`` of every focal element's mass onto the frame."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"discount must be in [0, 1], got {alpha!r}")
    if alpha == 0.0:
        return m
    if alpha == 1.0:
        return vacuous()
    keep = 1.0 - alpha
    out = {k: keep * v for k, v in m.masks.items() if k != FULL_MASK}
    out[FULL_MASK] = alpha + keep * m.masks.get(FULL_MASK, 0.0)
    return MassFunction._trusted(out)


def _tie_key(h: HypothesisSet) -> tuple:
    return (len(h), abs(h.midpoint - Intensity.IF), tuple(int(p) for p in h.points))


def decide_intensity(m: MassFunction) -> tuple[HypothesisSet, float]:
    """Pick the reported intensity from a combined mass function.

    The non-frame focal element with the largest mass wins.  Ties go to the
    smaller set, then the set whose midpoint is nearest IF, then the lowest
    scale position.  The reported belief is Bel of the winner.  A vacuous mass
    yields ``(THETA, 0.0)``.
    """
    candidates = [(v, HypothesisSet(k)) for k, v in m.masks.items() if k != FULL_MASK]
    if not candidates:
        return THETA, 0.0
    top = max(v for v, _ in candidates)
    tied = [h for v, h in candidates if top - v <= TIE_TOL]
    best = min(tied, key=_tie_key)
    return best, belief_of(m, best)
