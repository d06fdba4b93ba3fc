"""Arithmetic over Z_m: pitch-class segments, affine maps and voice permutations.

Pitch classes are plain ints kept reduced mod ``m``. Every value carries its
modulus, and mixing moduli raises :class:`DomainError` instead of coercing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError

DEFAULT_MODULUS = 12


def _check_modulus(m: int) -> int:
    if not isinstance(m, int) or m < 2:
        raise DomainError(f"modulus must be an integer >= 2, got {m!r}")
    return m


def _same_modulus(m1: int, m2: int) -> None:
    if m1 != m2:
        raise DomainError(f"modulus mismatch: {m1} != {m2}")


@dataclass(frozen=True, order=True)
class PcSegment:
    """Ordered tuple of pitch classes mod ``m``; repeated entries are allowed."""

    entries: tuple[int, ...]
    m: int = DEFAULT_MODULUS

    def __post_init__(self):
        _check_modulus(self.m)
        entries = tuple(int(x) % self.m for x in self.entries)
        if not entries:
            raise DomainError("a segment needs at least one entry")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int, m: int = DEFAULT_MODULUS) -> "PcSegment":
        return cls(tuple(entries), m)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"

    def __repr__(self) -> str:
        return f"PcSegment{self}" if self.m == DEFAULT_MODULUS else f"PcSegment{self}[m={self.m}]"

    def text(self) -> str:
        """Comma-separated form used by the CLI and JSON files, e.g. ``0,4,7``."""
        return ",".join(map(str, self.entries))

    def reversed(self) -> "PcSegment":
        return PcSegment(self.entries[::-1], self.m)

    def pcset(self) -> frozenset[int]:
        return frozenset(self.entries)


def parse_segment(text: str, m: int = DEFAULT_MODULUS) -> PcSegment:
    """Parse ``"0,4,7"`` (parentheses and whitespace tolerated)."""
    body = text.strip().strip("()")
    try:
        values = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise DomainError(f"cannot parse segment {text!r}") from None
    return PcSegment(tuple(values), m)


@dataclass(frozen=True)
class AffineMap:
    """The map x -> a*x + b on Z_m.

    ``T(i)``, ``I(j)`` and ``M(a)`` are the special cases (1, i), (m-1, j) and
    (a, 0). Calling the map on an int or a segment applies it componentwise.
    """

    a: int
    b: int
    m: int = DEFAULT_MODULUS

    def __post_init__(self):
        _check_modulus(self.m)
        object.__setattr__(self, "a", int(self.a) % self.m)
        object.__setattr__(self, "b", int(self.b) % self.m)

    @classmethod
    def T(cls, i: int, m: int = DEFAULT_MODULUS) -> "AffineMap":
        return cls(1, i, m)

    @classmethod
    def I(cls, j: int, m: int = DEFAULT_MODULUS) -> "AffineMap":  # noqa: E743
        return cls(-1, j, m)

    @classmethod
    def M(cls, a: int, m: int = DEFAULT_MODULUS) -> "AffineMap":
        return cls(a, 0, m)

    @classmethod
    def identity(cls, m: int = DEFAULT_MODULUS) -> "AffineMap":
        return cls(1, 0, m)

    def __call__(self, x):
        if isinstance(x, PcSegment):
            return affine_apply(self, x)
        return (self.a * int(x) + self.b) % self.m

    def __mul__(self, other: "AffineMap") -> "AffineMap":
        return affine_compose(self, other)

    @property
    def is_invertible(self) -> bool:
        return math.gcd(self.a, self.m) == 1

    def inverse(self) -> "AffineMap":
        if not self.is_invertible:
            raise DomainError(f"{self.label} is not invertible mod {self.m}")
        a_inv = pow(self.a, -1, self.m)
        return AffineMap(a_inv, -a_inv * self.b, self.m)

    @property
    def is_transposition(self) -> bool:
        return self.a == 1

    @property
    def is_inversion(self) -> bool:
        return self.a == self.m - 1 and self.a != 1

    @property
    def label(self) -> str:
        if self.a == 1:
            return f"T{self.b}"
        if self.a == self.m - 1:
            return f"I{self.b}"
        if self.b == 0:
            return f"M{self.a}"
        return f"aff({self.a},{self.b})"

    def __str__(self) -> str:
        return self.label


_AFFINE_RE = re.compile(r"^(?:(?P<kind>[TIM])(?P<n>-?\d+)|aff\((?P<a>-?\d+),(?P<b>-?\d+)\))$")


def parse_affine(text: str, m: int = DEFAULT_MODULUS) -> AffineMap:
    """Parse ``T3``, ``I7``, ``M10`` or ``aff(7,7)`` (x -> 7x+7)."""
    match = _AFFINE_RE.match("".join(text.split()))
    if match is None:
        raise DomainError(f"cannot parse affine map {text!r}")
    if match["kind"]:
        n = int(match["n"])
        return {"T": AffineMap.T, "I": AffineMap.I, "M": AffineMap.M}[match["kind"]](n, m)
    return AffineMap(int(match["a"]), int(match["b"]), m)


def affine_apply(f: AffineMap, s: PcSegment) -> PcSegment:
    _same_modulus(f.m, s.m)
    return PcSegment(tuple(f.a * x + f.b for x in s.entries), s.m)


def affine_compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """f after g."""
    _same_modulus(f.m, g.m)
    return AffineMap(f.a * g.a, f.a * g.b + f.b, f.m)


def affine_is_invertible(f: AffineMap) -> bool:
    return f.is_invertible


def units(m: int) -> tuple[int, ...]:
    return tuple(a for a in range(1, m) if math.gcd(a, m) == 1)


def ti_group(m: int = DEFAULT_MODULUS) -> tuple[AffineMap, ...]:
    """The 2m transpositions and inversions, T_0..T_{m-1} then I_0..I_{m-1}."""
    return tuple(AffineMap.T(i, m) for i in range(m)) + tuple(AffineMap.I(j, m) for j in range(m))


def all_affine_maps(m: int = DEFAULT_MODULUS) -> tuple[AffineMap, ...]:
    """All m*m maps x -> ax+b, invertible or not."""
    return tuple(AffineMap(a, b, m) for a in range(m) for b in range(m))


@dataclass(frozen=True)
class VoicePerm:
    """Permutation of the positions 1..n of a segment.

    ``images[k]`` is sigma(k+1) - 1. Acting on a segment,
    sigma(y_1..y_n) = (y_{sigma^-1(1)}, ..., y_{sigma^-1(n)}), so entry k moves
    to position sigma(k). Products compose right to left.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise DomainError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "VoicePerm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], n: int) -> "VoicePerm":
        images = list(range(n))
        seen: set[int] = set()
        for cycle in cycles:
            for pos in cycle:
                if not 1 <= pos <= n:
                    raise DomainError(f"cycle entry {pos} out of range 1..{n}")
                if pos in seen:
                    raise DomainError(f"position {pos} repeated in cycle notation")
                seen.add(pos)
            for k, pos in enumerate(cycle):
                images[pos - 1] = cycle[(k + 1) % len(cycle)] - 1
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, s: PcSegment) -> PcSegment:
        return voice_perm_apply(self, s)

    def __mul__(self, other: "VoicePerm") -> "VoicePerm":
        if self.n != other.n:
            raise DomainError(f"arity mismatch: {self.n} != {other.n}")
        return VoicePerm(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "VoicePerm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return VoicePerm(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        out, seen = [], set()
        for start in range(self.n):
            if start in seen or self.images[start] == start:
                continue
            cycle, k = [], start
            while k not in seen:
                seen.add(k)
                cycle.append(k + 1)
                k = self.images[k]
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ("".join if self.n < 10 else ",".join)(map(str, c)) + ")" for c in cycles)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse cycle notation such as ``(13)``, ``(123)(45)`` or ``(1,10)``.

    Without commas every digit is its own position, so ``(13)`` swaps 1 and 3
    and ``(321)`` is the inverse of ``(123)``.
    """
    body = "".join(text.split())
    if not body or _CYCLE_RE.sub("", body):
        raise DomainError(f"cannot parse cycle notation {text!r}")
    cycles = []
    for inner in _CYCLE_RE.findall(body):
        if not inner:
            continue
        parts = inner.split(",") if "," in inner else list(inner)
        if not all(p.isdigit() for p in parts):
            raise DomainError(f"cannot parse cycle notation {text!r}")
        cycles.append(tuple(int(p) for p in parts))
    return cycles


def parse_voice_perm(text: str, n: int) -> VoicePerm:
    return VoicePerm.from_cycles(parse_cycles(text), n)


def voice_perm_apply(sigma: VoicePerm, s: PcSegment) -> PcSegment:
    if sigma.n != len(s):
        raise DomainError(f"arity mismatch: permutation on {sigma.n} letters, segment of length {len(s)}")
    out = [0] * sigma.n
    for k, y in enumerate(s.entries):
        out[sigma.images[k]] = y
    return PcSegment(tuple(out), s.m)


def segments(entries: Iterable[Sequence[int]], m: int = DEFAULT_MODULUS) -> list[PcSegment]:
    """Convenience constructor for lists of segments."""
    return [PcSegment(tuple(e), m) for e in entries]
