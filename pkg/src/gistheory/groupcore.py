"""Explicit permutation groups on small indexed carriers.

Everything is element-by-element: groups here have at most a few dozen
elements, so closure is a breadth-first search and duals are built directly
from simple transitivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import DomainError, LibraryBug, MembershipError, PreconditionError
from .pcmath import AffineMap


class Carrier:
    """Finite indexed set of points.

    By default the points are sorted, which for segments is lexicographic
    order on the entry tuples. ``Carrier.ordered`` keeps a caller-supplied
    order instead (used for abstract group elements).
    """

    __slots__ = ("_elements", "_index")

    def __init__(self, elements: Iterable[Hashable], *, sort: bool = True):
        items = list(dict.fromkeys(elements))
        if sort:
            items.sort()
        self._elements = tuple(items)
        self._index = {e: i for i, e in enumerate(self._elements)}

    @classmethod
    def ordered(cls, elements: Iterable[Hashable]) -> "Carrier":
        return cls(elements, sort=False)

    @property
    def elements(self) -> tuple:
        return self._elements

    def index(self, point) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise MembershipError(f"{point} is not in the carrier") from None

    def __contains__(self, point) -> bool:
        return point in self._index

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __getitem__(self, i: int):
        return self._elements[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Carrier) and self._elements == other._elements

    def __hash__(self) -> int:
        return hash(self._elements)

    def __repr__(self) -> str:
        return f"Carrier(<{len(self)} points>)"


@dataclass(frozen=True, eq=False)
class Perm:
    """Bijection of carrier indices; ``images[i]`` is the index of the image of point i.

    Equality and hashing look at ``images`` only; ``label`` is a readable name.
    ``p * q`` is p after q.
    """

    images: tuple[int, ...]
    label: str | None = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        if len(self.images) != len(other.images):
            raise DomainError("permutations act on carriers of different size")
        return Perm(tuple(self.images[i] for i in other.images), _join_labels(self.label, other.label))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def __repr__(self) -> str:
        return f"Perm({self.label or '?'})"

    @classmethod
    def identity(cls, n: int, label: str = "Id") -> "Perm":
        return cls(tuple(range(n)), label)

    @classmethod
    def from_function(cls, carrier: Carrier, fn: Callable, label: str | None = None) -> "Perm":
        """Permutation induced by a point function; it must map the carrier onto itself."""
        images = tuple(carrier.index(fn(p)) for p in carrier)
        if len(set(images)) != len(images):
            raise DomainError(f"{label or 'map'} is not a bijection of the carrier")
        return cls(images, label)

    def relabel(self, label: str | None) -> "Perm":
        return Perm(self.images, label)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv), None if self.label is None else f"({self.label})^-1")

    def order(self) -> int:
        k, p = 1, self
        while not p.is_identity:
            p = p * self
            k += 1
        return k

    def apply_point(self, carrier: Carrier, point):
        return carrier[self.images[carrier.index(point)]]


def _join_labels(a: str | None, b: str | None) -> str | None:
    if a is None or b is None:
        return None
    if a == "Id":
        return b
    if b == "Id":
        return a
    return f"{a}*{b}"


class FiniteGroup:
    """A permutation group on a carrier, i.e. a group together with its action.

    Construction verifies identity, closure and inverses. ``elements`` keeps
    insertion order, which ``close_generators`` makes shortest-word-first.
    """

    def __init__(self, carrier: Carrier, elements: Iterable[Perm], name: str | None = None):
        self.carrier = carrier
        self.name = name
        by_images: dict[tuple[int, ...], Perm] = {}
        n = len(carrier)
        for p in elements:
            if len(p.images) != n or sorted(p.images) != list(range(n)):
                raise DomainError(f"{p!r} is not a bijection of the carrier")
            by_images.setdefault(p.images, p)
        self._by_images = by_images
        self._elements = tuple(by_images.values())
        self._verify()

    def _verify(self) -> None:
        n = len(self.carrier)
        if tuple(range(n)) not in self._by_images:
            raise PreconditionError("group does not contain the identity")
        for p in self._elements:
            if p.inverse().images not in self._by_images:
                raise PreconditionError(f"group is not closed under inverses ({p!r})")
            for q in self._elements:
                if (p * q).images not in self._by_images:
                    raise PreconditionError(f"group is not closed under composition ({p!r}*{q!r})")

    @property
    def elements(self) -> tuple[Perm, ...]:
        return self._elements

    @property
    def order(self) -> int:
        return len(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, p: Perm) -> bool:
        return p.images in self._by_images

    def find(self, p: Perm) -> Perm:
        """The stored (labelled) element equal to ``p``."""
        try:
            return self._by_images[p.images]
        except KeyError:
            raise MembershipError(f"{p!r} is not in the group") from None

    def identity(self) -> Perm:
        return self._by_images[tuple(range(len(self.carrier)))]

    def image_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self._by_images)

    def same_elements(self, other: "FiniteGroup") -> bool:
        """Pointwise equality of the two permutation sets on the same carrier."""
        return self.carrier == other.carrier and self.image_set() == other.image_set()

    def solve(self, s: int, t: int) -> list[Perm]:
        """All elements mapping point index s to point index t."""
        return [g for g in self._elements if g.images[s] == t]

    def orbit(self, s: int) -> list[int]:
        return sorted({g.images[s] for g in self._elements})

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order}, on {len(self.carrier)} points)"


# A permutation group already carries its action on the carrier.
GroupAction = FiniteGroup


def close_generators(carrier: Carrier, gens: Sequence[Perm], name: str | None = None) -> FiniteGroup:
    """Smallest group containing ``gens``.

    Each element is labelled with a shortest word in the generator labels,
    ties broken lexicographically on the generator names; ``"Q3*P"`` means
    apply P, then Q3.
    """
    n = len(carrier)
    named = []
    for k, g in enumerate(gens):
        if len(g.images) != n or sorted(g.images) != list(range(n)):
            raise DomainError(f"generator {g.label or k} is not a bijection of the carrier")
        named.append((g.label or f"g{k}", g))
    named.sort(key=lambda item: item[0])

    ident = Perm.identity(n)
    seen = {ident.images: ident}
    frontier = [(tuple(), ident)]
    while frontier:
        nxt = []
        for gname, g in named:
            for word, elem in frontier:
                prod = tuple(g.images[i] for i in elem.images)
                if prod in seen:
                    continue
                new_word = (gname,) + word
                p = Perm(prod, "*".join(new_word))
                seen[prod] = p
                nxt.append((new_word, p))
        nxt.sort(key=lambda item: item[0])
        frontier = nxt
    return FiniteGroup(carrier, seen.values(), name)


def is_transitive(group: FiniteGroup) -> bool:
    return len(group.orbit(0)) == len(group.carrier) if len(group.carrier) else True


def is_simply_transitive(group: FiniteGroup) -> bool:
    """True iff each ordered pair of points is joined by exactly one element."""
    n = len(group.carrier)
    if group.order != n:
        return False
    for s in range(n):
        if len({g.images[s] for g in group}) != n:
            return False
    return True


def _require_simply_transitive(group: FiniteGroup, what: str = "group") -> None:
    if not is_simply_transitive(group):
        raise PreconditionError(f"{what} does not act simply transitively on its carrier")


def transporters(group: FiniteGroup, base: int = 0) -> list[Perm]:
    """For a simply transitive group, ``result[p]`` is the unique g with g(base) = p."""
    _require_simply_transitive(group)
    out: list[Perm | None] = [None] * len(group.carrier)
    for g in group:
        out[g.images[base]] = g
    return out  # type: ignore[return-value]


def dual_group(group: FiniteGroup, base: int = 0, name: str | None = None) -> FiniteGroup:
    """The group {h_t} with h_t(g * s0) = g * t, where s0 is carrier[base].

    This is the full centralizer of a simply transitive group in Sym(S) and
    does not depend on ``base``.
    """
    g_at = transporters(group, base)
    duals = []
    for t in range(len(group.carrier)):
        images = tuple(g_at[p].images[t] for p in range(len(group.carrier)))
        duals.append(Perm(images, f"h[{group.carrier[t]}]"))
    return FiniteGroup(group.carrier, duals, name or (f"dual({group.name})" if group.name else None))


def commute_elementwise(g1: FiniteGroup, g2: FiniteGroup) -> bool:
    if g1.carrier != g2.carrier:
        raise DomainError("groups act on different carriers")
    return all((a * b).images == (b * a).images for a in g1 for b in g2)


def generated_by(group: FiniteGroup, gens: Sequence[Perm]) -> bool:
    return close_generators(group.carrier, gens).order == group.order


def is_dihedral_of_order(group: FiniteGroup, two_n: int) -> bool:
    """True iff the group has order two_n and is generated by s of order two_n/2
    and t of order 2 with t s t = s^-1."""
    if two_n < 2 or two_n % 2:
        raise DomainError(f"dihedral order must be even and >= 2, got {two_n}")
    if group.order != two_n:
        return False
    n = two_n // 2
    orders = {p.images: p.order() for p in group}
    rotations = [p for p in group if orders[p.images] == n]
    flips = [p for p in group if orders[p.images] == 2]
    for s in rotations:
        s_inv = s.inverse()
        for t in flips:
            if (t * s * t).images == s_inv.images and generated_by(group, [s, t]):
                return True
    return False


def dihedral_witness(group: FiniteGroup) -> tuple[Perm, Perm] | None:
    """Some (s, t) exhibiting the group as dihedral, or None."""
    if group.order % 2:
        return None
    n = group.order // 2
    for s in group:
        if s.order() != n:
            continue
        for t in group:
            if t.order() == 2 and (t * s * t).images == s.inverse().images and generated_by(group, [s, t]):
                return s, t
    return None


def is_klein_four(group: FiniteGroup) -> bool:
    return group.order == 4 and all(p.order() <= 2 for p in group)


def setwise_stabilizer(maps: Iterable[AffineMap], subset: Iterable[int]) -> list[AffineMap]:
    """The maps sending ``subset`` onto itself, in input order."""
    target = frozenset(subset)
    return [f for f in maps if frozenset(f(x) for x in target) == target]


def affine_perm(carrier: Carrier, f: AffineMap) -> Perm:
    """Componentwise action of an affine map on a carrier of segments."""
    return Perm.from_function(carrier, f, f.label)


def restrict(group: FiniteGroup, subset: Iterable, name: str | None = None) -> FiniteGroup:
    """Restriction of a group that preserves ``subset`` to the sub-carrier."""
    sub = Carrier(subset)
    elems = []
    for g in group:
        elems.append(Perm.from_function(sub, lambda p, g=g: g.apply_point(group.carrier, p), g.label))
    return FiniteGroup(sub, elems, name or group.name)


def restrict_perm(group_carrier: Carrier, g: Perm, sub: Carrier) -> Perm:
    return Perm.from_function(sub, lambda p: g.apply_point(group_carrier, p), g.label)


@dataclass
class ActionMorphism:
    """Morphism (f, phi) of group actions: f(g s) = phi(g) f(s).

    ``point_map[i]`` is the target index of source point i; ``group_map`` sends
    source elements (by images) to target elements.
    """

    source: FiniteGroup
    target: FiniteGroup
    point_map: tuple[int, ...]
    group_map: dict[tuple[int, ...], Perm] = field(repr=False)

    def __post_init__(self):
        self.verify()

    def phi(self, g: Perm) -> Perm:
        return self.group_map[g.images]

    def f(self, point):
        return self.target.carrier[self.point_map[self.source.carrier.index(point)]]

    def verify(self) -> None:
        if set(self.group_map) != self.source.image_set():
            raise PreconditionError("group map is not defined on the whole source group")
        for img in self.group_map.values():
            if img not in self.target:
                raise PreconditionError(f"{img!r} is not in the target group")
        for a in self.source:
            for b in self.source:
                if self.phi(a * b).images != (self.phi(a) * self.phi(b)).images:
                    raise PreconditionError(f"group map is not a homomorphism at ({a.label}, {b.label})")
        for g in self.source:
            h = self.phi(g)
            for s in range(len(self.source.carrier)):
                if self.point_map[g.images[s]] != h.images[self.point_map[s]]:
                    raise PreconditionError(
                        f"f(g s) != phi(g) f(s) for g={g.label}, s={self.source.carrier[s]}"
                    )

    def compose(self, first: "ActionMorphism") -> "ActionMorphism":
        """self after first."""
        return ActionMorphism(
            first.source,
            self.target,
            tuple(self.point_map[i] for i in first.point_map),
            {k: self.phi(v) for k, v in first.group_map.items()},
        )

    @property
    def injective(self) -> bool:
        return len(set(self.point_map)) == len(self.point_map)

    @property
    def surjective(self) -> bool:
        return len(set(self.point_map)) == len(self.target.carrier)


def identity_morphism(group: FiniteGroup) -> ActionMorphism:
    return ActionMorphism(group, group, tuple(range(len(group.carrier))), {g.images: g for g in group})


def conjugate_transfer(group: FiniteGroup, f: Callable | Mapping) -> tuple[FiniteGroup, ActionMorphism]:
    """Transport an action along a bijection f: S1 -> S2.

    Returns (f G f^-1 acting on S2, the isomorphism (f, g -> f g f^-1)).
    """
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    src = group.carrier
    images = [fn(p) for p in src]
    if len(set(images)) != len(images):
        raise DomainError("transfer map is not injective on the carrier")
    target_carrier = Carrier(images)
    point_map = tuple(target_carrier.index(q) for q in images)
    inv_map = [0] * len(point_map)
    for i, j in enumerate(point_map):
        inv_map[j] = i
    conj = {}
    for g in group:
        conj[g.images] = Perm(tuple(point_map[g.images[inv_map[j]]] for j in range(len(point_map))), g.label)
    target = FiniteGroup(target_carrier, conj.values(), group.name)
    return target, ActionMorphism(group, target, point_map, {k: target.find(v) for k, v in conj.items()})


def check_action_isomorphic_transport(morphism: ActionMorphism, dual_source: FiniteGroup, dual_target: FiniteGroup) -> bool:
    """dual(target) equals the transport of dual(source) along the point map."""
    inv = [0] * len(morphism.point_map)
    for i, j in enumerate(morphism.point_map):
        inv[j] = i
    moved = {
        tuple(morphism.point_map[h.images[inv[j]]] for j in range(len(inv))) for h in dual_source
    }
    return moved == dual_target.image_set()


def assert_group(condition: bool, message: str) -> None:
    if not condition:
        raise LibraryBug(message)
