"""Generalized interval systems and their morphisms.

The intervallic side (``Gis``: space, interval group, interval function) is
stored separately from the transformational side (``FiniteGroup`` acting on a
carrier) so the passage between them is a genuine computation:

* ``gis_from_action`` and ``action_from_gis`` go back and forth on objects,
  ``gis_morphism_to_action`` / ``action_morphism_to_gis`` on morphisms;
* ``canonical_gis`` and ``canonical_morphism`` realise a group, or an affine
  map of groups a*phi, as a GIS morphism.

Transpositions are defined by ``int(s, T_i(s)) = i``. For the canonical GIS
this gives T_i(g) = g*i, and i -> T_i is an anti-isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

from .errors import DomainError, LibraryBug, MorphismViolation, PreconditionError
from .groupcore import (
    ActionMorphism,
    Carrier,
    FiniteGroup,
    Perm,
    dual_group,
    is_simply_transitive,
)


class AbstractGroup:
    """Finite group given by a multiplication table over labelled elements.

    ``table[i][j]`` is the index of ``labels[i] * labels[j]``.
    """

    def __init__(self, labels: Sequence[str], table: Sequence[Sequence[int]], name: str | None = None):
        self.labels = tuple(labels)
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise DomainError("group labels must be distinct")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise DomainError("multiplication table has the wrong shape")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        ids = [e for e in range(n) if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n))]
        if len(ids) != 1:
            raise PreconditionError("multiplication table has no two-sided identity")
        self.identity = ids[0]
        inverses = []
        for x in range(n):
            inv = [y for y in range(n) if self.table[x][y] == self.identity]
            if len(inv) != 1 or self.table[inv[0]][x] != self.identity:
                raise PreconditionError(f"element {self.labels[x]} has no inverse")
            inverses.append(inv[0])
        self._inverse = tuple(inverses)
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise PreconditionError("multiplication table is not a Latin square")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise PreconditionError("multiplication is not associative")

    @classmethod
    def from_perm_group(cls, group: FiniteGroup, name: str | None = None) -> "AbstractGroup":
        elems = list(group)
        index = {g.images: i for i, g in enumerate(elems)}
        labels = [g.label or f"g{i}" for i, g in enumerate(elems)]
        table = [[index[(a * b).images] for b in elems] for a in elems]
        return cls(labels, table, name or group.name)

    @classmethod
    def cyclic(cls, n: int) -> "AbstractGroup":
        return cls([str(i) for i in range(n)], [[(i + j) % n for j in range(n)] for i in range(n)], f"Z{n}")

    @classmethod
    def dihedral(cls, n: int) -> "AbstractGroup":
        """Dihedral group of order 2n as x -> +-x + b on Z_n; labels T<b>, I<b>."""
        elems = [(1, b) for b in range(n)] + [(-1, b) for b in range(n)]
        labels = [("T" if a == 1 else "I") + str(b) for a, b in elems]
        index = {e: i for i, e in enumerate(elems)}

        def mul(f, g):
            return (f[0] * g[0], (f[0] * g[1] + f[1]) % n)

        table = [[index[mul(f, g)] for g in elems] for f in elems]
        return cls(labels, table, f"D{2 * n}")

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"{label!r} is not an element of {self.name or 'the group'}") from None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def opposite(self) -> "AbstractGroup":
        n = len(self.labels)
        return AbstractGroup(
            self.labels,
            [[self.table[b][a] for b in range(n)] for a in range(n)],
            f"{self.name}^op" if self.name else None,
        )

    def is_abelian(self) -> bool:
        n = len(self)
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def __repr__(self) -> str:
        return f"AbstractGroup({self.name or '?'}, order={len(self)})"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given as an explicit element map, checked against both tables."""

    source: AbstractGroup
    target: AbstractGroup
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(self.mapping))
        if len(self.mapping) != len(self.source):
            raise DomainError("homomorphism must be defined on every source element")
        src, tgt = self.source, self.target
        for a in range(len(src)):
            for b in range(len(src)):
                if self.mapping[src.mul(a, b)] != tgt.mul(self.mapping[a], self.mapping[b]):
                    raise PreconditionError(
                        f"not a homomorphism at ({src.labels[a]}, {src.labels[b]})"
                    )

    @classmethod
    def from_labels(cls, source: AbstractGroup, target: AbstractGroup, mapping: Mapping[str, str]) -> "GroupHom":
        return cls(source, target, tuple(target.index(mapping[lab]) for lab in source.labels))

    @classmethod
    def identity(cls, group: AbstractGroup) -> "GroupHom":
        return cls(group, group, tuple(range(len(group))))

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def compose(self, first: "GroupHom") -> "GroupHom":
        return GroupHom(first.source, self.target, tuple(self.mapping[i] for i in first.mapping))

    @property
    def injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    @property
    def surjective(self) -> bool:
        return len(set(self.mapping)) == len(self.target)


class Gis:
    """Generalized interval system (space, interval group, interval function).

    ``int_table[s][t]`` is the index in ``ivls`` of int(s, t). Both axioms are
    checked on construction.
    """

    def __init__(self, space: Carrier, ivls: AbstractGroup, int_table: Sequence[Sequence[int]], name: str | None = None):
        self.space = space
        self.ivls = ivls
        self.int_table = tuple(tuple(row) for row in int_table)
        self.name = name
        self._check_axioms()

    def _check_axioms(self) -> None:
        n, k = len(self.space), len(self.ivls)
        if len(self.int_table) != n or any(len(row) != n for row in self.int_table):
            raise DomainError("interval table has the wrong shape")
        for s in range(n):
            row = self.int_table[s]
            if sorted(row) != list(range(k)):
                raise PreconditionError(
                    f"axiom (i) fails at {self.space[s]}: intervals from it are not a bijection onto IVLS"
                )
        for s in range(n):
            for t in range(n):
                st = self.int_table[s][t]
                for u in range(n):
                    if self.ivls.mul(st, self.int_table[t][u]) != self.int_table[s][u]:
                        raise PreconditionError(
                            f"axiom (ii) fails at ({self.space[s]}, {self.space[t]}, {self.space[u]})"
                        )

    def interval(self, s: Hashable, t: Hashable) -> str:
        return self.ivls.labels[self.int_table[self.space.index(s)][self.space.index(t)]]

    def transpose(self, i: int, s: int) -> int:
        """The unique t with int(s, t) = i (indices)."""
        return self.int_table[s].index(i)

    def __repr__(self) -> str:
        return f"Gis({self.name or '?'}, |S|={len(self.space)}, |IVLS|={len(self.ivls)})"


def gis_from_action(group: FiniteGroup) -> Gis:
    """GIS with interval group G^op and int(s, t) = the unique g with g s = t."""
    if not is_simply_transitive(group):
        raise PreconditionError("action is not simply transitive")
    ivls = AbstractGroup.from_perm_group(group).opposite()
    n = len(group.carrier)
    table = [[0] * n for _ in range(n)]
    for gi, g in enumerate(group):
        for s in range(n):
            table[s][g.images[s]] = gi
    return Gis(group.carrier, ivls, table, group.name)


def action_from_gis(gis: Gis) -> FiniteGroup:
    """The transposition group {T_i}, with int(s, T_i(s)) = i."""
    n = len(gis.space)
    perms = []
    for i, label in enumerate(gis.ivls.labels):
        perms.append(Perm(tuple(gis.transpose(i, s) for s in range(n)), label))
    group = FiniteGroup(gis.space, perms, gis.name)
    if not is_simply_transitive(group):
        raise LibraryBug("transposition group of a GIS is not simply transitive")
    return group


def transposition(gis: Gis, label: str) -> Perm:
    i = gis.ivls.index(label)
    return Perm(tuple(gis.transpose(i, s) for s in range(len(gis.space))), label)


def canonical_gis(group: AbstractGroup) -> Gis:
    """The GIS (G, G, int(g, h) = g^-1 h)."""
    n = len(group)
    table = [[group.mul(group.inv(g), h) for h in range(n)] for g in range(n)]
    return Gis(Carrier.ordered(group.labels), group, table, group.name)


@dataclass
class GisMorphism:
    source: Gis
    target: Gis
    f: tuple[int, ...]
    phi: GroupHom

    def __call__(self, point):
        return self.target.space[self.f[self.source.space.index(point)]]

    def compose(self, first: "GisMorphism") -> "GisMorphism":
        return check_gis_morphism(first.source, self.target, tuple(self.f[i] for i in first.f), self.phi.compose(first.phi))


def _point_map(g1: Gis, g2: Gis, f: Sequence[int] | Mapping | Callable) -> tuple[int, ...]:
    if isinstance(f, Mapping):
        return tuple(g2.space.index(f[p]) for p in g1.space)
    if callable(f):
        return tuple(g2.space.index(f(p)) for p in g1.space)
    out = tuple(int(i) for i in f)
    if len(out) != len(g1.space) or not all(0 <= i < len(g2.space) for i in out):
        raise DomainError("point map has the wrong shape")
    return out


def check_gis_morphism(g1: Gis, g2: Gis, f, phi: GroupHom) -> GisMorphism:
    """Validate int2(f s, f t) = phi(int1(s, t)) for every pair.

    ``f`` is an index sequence, a mapping of points, or a point function.
    Raises :class:`MorphismViolation` carrying the first failing pair.
    """
    if phi.source is not g1.ivls and phi.source.labels != g1.ivls.labels:
        raise DomainError("phi does not start at the source interval group")
    if phi.target is not g2.ivls and phi.target.labels != g2.ivls.labels:
        raise DomainError("phi does not land in the target interval group")
    fmap = _point_map(g1, g2, f)
    n = len(g1.space)
    for s in range(n):
        for t in range(n):
            lhs = g2.int_table[fmap[s]][fmap[t]]
            rhs = phi(g1.int_table[s][t])
            if lhs != rhs:
                raise MorphismViolation(
                    g1.space[s], g1.space[t], g2.ivls.labels[lhs], g2.ivls.labels[rhs]
                )
    return GisMorphism(g1, g2, fmap, phi)


def identity_gis_morphism(gis: Gis) -> GisMorphism:
    return check_gis_morphism(gis, gis, tuple(range(len(gis.space))), GroupHom.identity(gis.ivls))


@dataclass(frozen=True)
class MorphismClass:
    monic: bool
    epic: bool
    iso: bool


def classify_morphism(mor: GisMorphism) -> MorphismClass:
    """Monic/epic/iso from f and phi, which must agree with each other."""
    f_inj = len(set(mor.f)) == len(mor.f)
    f_surj = len(set(mor.f)) == len(mor.target.space)
    if f_inj != mor.phi.injective:
        raise LibraryBug(f"f injective={f_inj} but phi injective={mor.phi.injective}")
    if f_surj != mor.phi.surjective:
        raise LibraryBug(f"f surjective={f_surj} but phi surjective={mor.phi.surjective}")
    return MorphismClass(monic=f_inj, epic=f_surj, iso=f_inj and f_surj)


def interval_preserving_maps(gis: Gis) -> FiniteGroup:
    """All bijections p with int(p s, p t) = int(s, t).

    Such a p is pinned down by p(s0), so there are at most |S| candidates.
    """
    n = len(gis.space)
    perms = []
    for target in range(n):
        # int(s0, t) = int(p s0, p t) forces p t
        images = tuple(gis.int_table[target].index(gis.int_table[0][t]) for t in range(n))
        if all(
            gis.int_table[images[s]][images[t]] == gis.int_table[s][t] for s in range(n) for t in range(n)
        ):
            perms.append(Perm(images, f"p[{gis.space[target]}]"))
    return FiniteGroup(gis.space, perms, f"IP({gis.name})" if gis.name else None)


def gis_morphism_to_action(mor: GisMorphism) -> tuple[FiniteGroup, FiniteGroup, ActionMorphism]:
    """Functor GIS -> SimpTransGrpAct: (f, phi) -> (f, phibar), phibar(T_i) = T_phi(i)."""
    a1, a2 = action_from_gis(mor.source), action_from_gis(mor.target)
    elems2 = list(a2)
    group_map = {g.images: elems2[mor.phi(i)] for i, g in enumerate(a1)}
    return a1, a2, ActionMorphism(a1, a2, mor.f, group_map)


def action_morphism_to_gis(mor: ActionMorphism) -> GisMorphism:
    """Inverse direction: (f, nu) -> (f, phi) with nu(T_i) = T_phi(i).

    Both actions must be simply transitive; the interval groups are the
    opposite groups of the acting groups.
    """
    g1, g2 = gis_from_action(mor.source), gis_from_action(mor.target)
    idx2 = {g.images: i for i, g in enumerate(mor.target)}
    mapping = tuple(idx2[mor.phi(g).images] for g in mor.source)
    phi = GroupHom(g1.ivls, g2.ivls, mapping)
    return check_gis_morphism(g1, g2, mor.point_map, phi)


def canonical_morphism(source: AbstractGroup, target: AbstractGroup, a: int, phi: GroupHom) -> GisMorphism:
    """Functor GrpAff -> GIS on the affine map g -> a*phi(g)."""
    g1, g2 = canonical_gis(source), canonical_gis(target)
    f = tuple(target.mul(a, phi(g)) for g in range(len(source)))
    return check_gis_morphism(g1, g2, f, phi)


def gis_dual_pair(gis: Gis) -> tuple[FiniteGroup, FiniteGroup]:
    """(transpositions, interval preserving bijections) as groups on the space."""
    return action_from_gis(gis), interval_preserving_maps(gis)


def interval_preserving_equals_dual(gis: Gis) -> bool:
    return interval_preserving_maps(gis).same_elements(dual_group(action_from_gis(gis)))
