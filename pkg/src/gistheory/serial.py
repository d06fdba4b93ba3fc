"""Retrograde refinements: contextual operations on two reorderings of a T/I-class.

The carrier is the union of the T/I-orbits of sigma_1 X and sigma_2 X for a
root-position seed X and orderings sigma_1 = (123), sigma_2 = (12). An
operation N of the contextual group of X acts on a point y = sigma Z of the
sigma-orbit as sigma N sigma^-1. Adjoining the retrograde (13) to these
operations and to T/I gives two dual groups of order 4m.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Callable, Sequence

from .contextual import TiOrbit, contextual_group, ti_orbit
from .errors import DomainError, LibraryBug, MembershipError, PreconditionError
from .groupcore import (
    Carrier,
    FiniteGroup,
    Perm,
    close_generators,
    restrict,
)
from .pcmath import AffineMap, PcSegment, VoicePerm, parse_voice_perm, ti_group

DEFAULT_ORDERINGS = ("(123)", "(12)")
RETROGRADE = "(13)"


@dataclass(frozen=True)
class RetroSystem:
    """Union of two reordered T/I-orbits of a root-position seed.

    ``orbit_tag[y] = k`` when y lies in the orbit of ``orderings[k]`` applied to X.
    """

    seed: PcSegment
    orderings: tuple[VoicePerm, VoicePerm]
    carrier: Carrier
    orbit_tag: dict = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.seed.m

    @cached_property
    def root_orbit(self) -> TiOrbit:
        return ti_orbit(self.seed)

    def tag(self, y: PcSegment) -> int:
        try:
            return self.orbit_tag[y]
        except KeyError:
            raise MembershipError(f"{y} is not in the retro system of {self.seed}") from None

    def conj(self, op: str | Callable[[PcSegment], PcSegment], y: PcSegment) -> PcSegment:
        """sigma N sigma^-1 (y) with sigma the ordering of y's orbit."""
        sigma = self.orderings[self.tag(y)]
        fn = resolve_root_op(self.root_orbit, op) if isinstance(op, str) else op
        return sigma(fn(sigma.inverse()(y)))

    def retrograde(self, y: PcSegment) -> PcSegment:
        self.tag(y)
        return y.reversed()

    def perm_conj(self, op: str | Callable[[PcSegment], PcSegment], label: str | None = None) -> Perm:
        if label is None:
            label = op if isinstance(op, str) else None
        return Perm.from_function(self.carrier, lambda y: self.conj(op, y), label)

    def perm_retrograde(self) -> Perm:
        return Perm.from_function(self.carrier, self.retrograde, RETROGRADE)

    def affine_perm(self, f: AffineMap) -> Perm:
        return Perm.from_function(self.carrier, f, f.label)

    def perm_voice(self, sigma: VoicePerm, label: str | None = None) -> Perm:
        return Perm.from_function(self.carrier, sigma, label or str(sigma))


def resolve_root_op(orbit: TiOrbit, name: str) -> Callable[[PcSegment], PcSegment]:
    """Named contextual operation on the root orbit: P, L, R, K, Q<i> or J(q,r)."""
    text = "".join(name.split())
    if text in ("P", "L", "R", "K"):
        perm_name = text
        return lambda y: getattr(orbit, perm_name)(y)
    if text.startswith("Q") and text[1:].lstrip("-").isdigit():
        i = int(text[1:])
        return lambda y: orbit.Q(i, y)
    if text.startswith("J(") and text.endswith(")"):
        try:
            q, r = (int(t) for t in text[2:-1].split(","))
        except ValueError:
            raise DomainError(f"cannot parse {name!r}") from None
        return lambda y: orbit.J(q, r, y)
    raise DomainError(f"unknown contextual operation {name!r}")


def retro_system(x: PcSegment, orderings: Sequence[str | VoicePerm] = DEFAULT_ORDERINGS) -> RetroSystem:
    """Retro system of a root-position seed; the two orbits must be disjoint."""
    n = len(x)
    perms = tuple(p if isinstance(p, VoicePerm) else parse_voice_perm(p, n) for p in orderings)
    if len(perms) != 2:
        raise DomainError("a retro system needs exactly two orderings")
    orbit = ti_orbit(x)
    tag: dict[PcSegment, int] = {}
    for k, sigma in enumerate(perms):
        for z in orbit.carrier:
            y = sigma(z)
            if y in tag:
                raise PreconditionError(f"orderings {perms[0]} and {perms[1]} of {x} have overlapping orbits at {y}")
            tag[y] = k
    system = RetroSystem(x, perms, Carrier(tag), tag)
    rev = parse_voice_perm(RETROGRADE, n)
    if any(rev(y) not in tag for y in tag):
        raise PreconditionError("the retrograde does not preserve the carrier")
    return system


def from_motive(y: PcSegment, orderings: Sequence[str | VoicePerm] = DEFAULT_ORDERINGS) -> RetroSystem:
    """Retro system in which ``y`` is the first ordering of the seed, e.g. (2,1,5) gives seed (1,5,2)."""
    first = orderings[0]
    sigma = first if isinstance(first, VoicePerm) else parse_voice_perm(first, len(y))
    return retro_system(sigma.inverse()(y), orderings)


def conj_op(system: RetroSystem, n: str | Callable[[PcSegment], PcSegment], y: PcSegment) -> PcSegment:
    return system.conj(n, y)


def rich(y: PcSegment) -> PcSegment:
    """Retrograde inversion of y beginning with its last two notes: reverse(I_{y_{n-1}+y_n} y)."""
    if len(y) < 2:
        raise DomainError("RICH needs a segment of length at least 2")
    return AffineMap.I(y[-2] + y[-1], y.m)(y).reversed()


def rich_by_search(y: PcSegment) -> PcSegment:
    """RICH from its defining property, searched over all T/I forms and their retrogrades."""
    if len(y) < 2:
        raise DomainError("RICH needs a segment of length at least 2")
    hits = []
    for f in ti_group(y.m):
        for retro in (False, True):
            z = f(y).reversed() if retro else f(y)
            if retro and f.is_inversion and z[0] == y[-2] and z[1] == y[-1]:
                hits.append(z)
    if len(hits) != 1:
        raise LibraryBug(f"RICH of {y} is not unique: {hits}")
    return hits[0]


def ti_retro_group(system: RetroSystem) -> FiniteGroup:
    """<T/I, (13)> = {f, f*(13) : f in T/I}."""
    rev = system.perm_retrograde()
    elems = []
    for f in ti_group(system.m):
        p = system.affine_perm(f)
        if f == AffineMap.identity(system.m):
            elems += [p.relabel("Id"), rev]
        else:
            elems += [p, p * rev]
    return FiniteGroup(system.carrier, elems, "<T/I,(13)>")


def plr_s_group(system: RetroSystem) -> FiniteGroup:
    """PLR(S): every contextual-group element conjugated onto both orderings."""
    H = contextual_group(system.root_orbit)
    elems = [system.perm_conj(lambda z, g=g: g.apply_point(H.carrier, z), g.label) for g in H]
    return FiniteGroup(system.carrier, elems, "PLR(S)")


def plr_retro_group(system: RetroSystem) -> FiniteGroup:
    """<PLR(S), (13)> = {N, N*(13) : N in PLR(S)}."""
    rev = system.perm_retrograde()
    elems = []
    for g in plr_s_group(system):
        elems.append(g)
        elems.append(g * rev)
    return FiniteGroup(system.carrier, elems, "<PLR(S),(13)>")


def build_retro_duality(x: PcSegment) -> tuple[FiniteGroup, FiniteGroup, FiniteGroup]:
    """(<T/I,(13)>, <PLR(S),(13)>, their pointwise intersection) for a root-position seed."""
    system = retro_system(x)
    g1 = ti_retro_group(system)
    g2 = plr_retro_group(system)
    common = [g for g in g1 if g in g2]
    return g1, g2, FiniteGroup(system.carrier, common, "intersection")


def row_generators(system: RetroSystem) -> list[Perm]:
    rev = system.perm_retrograde()
    return [(rev * system.perm_conj("R")).relabel("(13)*R"), (rev * system.perm_conj("P")).relabel("(13)*P")]


def build_row_subsystem(x: PcSegment, start: PcSegment) -> FiniteGroup:
    """<(13)R, (13)P> restricted to its orbit of ``start``."""
    system = retro_system(x)
    system.tag(start)
    full = close_generators(system.carrier, row_generators(system), "<(13)R,(13)P>")
    orbit = {full.carrier[i] for i in full.orbit(system.carrier.index(start))}
    return restrict(full, orbit, full.name)


def row_walk(x: PcSegment, start: PcSegment, length: int) -> list[PcSegment]:
    """start, (13)R start, (13)P (13)R start, ... alternating, ``length`` points."""
    system = retro_system(x)
    out = [start]
    for k in range(length - 1):
        op = "R" if k % 2 == 0 else "P"
        out.append(system.conj(op, out[-1]).reversed())
    return out


# bundled figure documents

FIXTURES = ("opening_theme", "rich_chain", "schoenberg_summary", "affine_square")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise DomainError(f"unknown fixture {name!r}; expected one of {', '.join(FIXTURES)}")
    return resources.files("gistheory.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")


def fixture_dict(name: str) -> dict:
    return json.loads(fixture_text(name))


def load_fixture(name: str):
    from .netio import parse_network

    return parse_network(fixture_text(name))


def opening_theme_network():
    return load_fixture("opening_theme")


def rich_chain_network():
    return load_fixture("rich_chain")


def summary_network():
    return load_fixture("schoenberg_summary")


def affine_square_network():
    return load_fixture("affine_square")
