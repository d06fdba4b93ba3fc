"""Simply transitive covers of pitch-class sets.

Here X is an unordered 3-element set. For an affine group G_0 acting
transitively on a set O, the family G_0 X covers O, and G_0 acts simply
transitively on that family exactly when no nontrivial element of G_0 fixes
X as a set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError, LibraryBug, PreconditionError
from .pcmath import AffineMap
from .subdual import octatonic_set, octatonic_stabilizer


@dataclass(frozen=True)
class CoverReport:
    """Verdict for one generating set X; sets in ``cover`` are unordered."""

    subset_x: frozenset[int]
    stabilizer_in_g0: tuple[AffineMap, ...]
    cover: tuple[frozenset[int], ...]
    simply_transitive: bool
    note: str = "unordered pitch-class sets"

    @property
    def stabilizer_size(self) -> int:
        return len(self.stabilizer_in_g0)


def image_set(f: AffineMap, x: Iterable[int]) -> frozenset[int]:
    return frozenset(f(p) for p in x)


def _check_affine_group(g0: Sequence[AffineMap]) -> None:
    maps = set(g0)
    if not maps:
        raise PreconditionError("G_0 is empty")
    m = next(iter(maps)).m
    if AffineMap.identity(m) not in maps:
        raise PreconditionError("G_0 does not contain the identity")
    for f in maps:
        if not f.is_invertible:
            raise PreconditionError(f"{f.label} is not invertible")
        for g in maps:
            if f * g not in maps:
                raise PreconditionError(f"G_0 is not closed: {f.label}*{g.label}")


def _sort_key(s: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(s))


def cover_check(o: Iterable[int], g0: Sequence[AffineMap], x: Iterable[int]) -> CoverReport:
    """Decide simple transitivity of G_0 on G_0 X three independent ways.

    (a) the setwise stabilizer of X in G_0 is trivial; (b) every ordered pair
    of cover members is joined by exactly one element of G_0; (c) the cover
    has |G_0| members. Disagreement is a library bug.
    """
    o = frozenset(o)
    x = frozenset(x)
    g0 = tuple(dict.fromkeys(g0))
    _check_affine_group(g0)
    if len(x) != 3:
        raise DomainError(f"X must have 3 elements, got {sorted(x)}")
    if not x <= o:
        raise PreconditionError(f"X = {sorted(x)} is not a subset of O")
    for f in g0:
        if image_set(f, o) != o:
            raise PreconditionError(f"{f.label} does not preserve O")
    start = min(o)
    if {f(start) for f in g0} != o:
        raise PreconditionError("G_0 is not transitive on O")

    stabilizer = tuple(f for f in g0 if image_set(f, x) == x)
    cover = tuple(sorted({image_set(f, x) for f in g0}, key=_sort_key))
    direct = all(sum(1 for f in g0 if image_set(f, a) == b) == 1 for a in cover for b in cover)
    by_stab = len(stabilizer) == 1
    by_count = len(cover) == len(g0)
    if not (direct == by_stab == by_count):
        raise LibraryBug(
            f"cover criteria disagree for X={sorted(x)}: stabilizer {by_stab}, direct {direct}, count {by_count}"
        )
    return CoverReport(x, stabilizer, cover, direct)


def enumerate_octatonic_covers(octatonic_id: str) -> list[CoverReport]:
    """Reports for all 56 three-element subsets of the octatonic."""
    o = octatonic_set(octatonic_id)
    g0 = octatonic_stabilizer(octatonic_id)
    return [cover_check(o, g0, x) for x in combinations(sorted(o), 3)]


def fixing_translations(x: Iterable[int], m: int = 12) -> list[int]:
    """Nonzero i with T_i X = X."""
    x = frozenset(p % m for p in x)
    return [i for i in range(1, m) if frozenset((p + i) % m for p in x) == x]


def translation_fixed_triples(m: int = 12) -> list[frozenset[int]]:
    """All 3-subsets of Z_m fixed by a nontrivial translation (exhaustive)."""
    if m < 3:
        raise DomainError(f"need m >= 3, got {m}")
    return [frozenset(x) for x in combinations(range(m), 3) if fixing_translations(x, m)]
