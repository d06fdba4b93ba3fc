"""Contextual groups on T/I-orbits of pitch-class segments.

For a seed X the T/I-orbit S splits into T-forms (T_i X) and I-forms (I_j X).
On S we have

* K(Y) = I_{y1+y2} Y and, more generally, J^{q,r}(Y) = I_{yq+yr} Y;
* Q_i(Y) = T_i Y on T-forms and T_{-i} Y on I-forms.

For triads P, L, R are J^{1,3}, J^{2,3}, J^{1,2}. The group <K, Q_1> is
dihedral of order 2m and dual to the T/I-group whenever X satisfies the
tritone condition.

With the affine group {x -> ax+b : a in U} acting simply transitively on the
orbit of X, every Y = T_b M_a X has a well-defined linear part a. The side
transformation W_a and the generalized Schritt Qbar_j built from it commute
with affine maps and generate the dual of that affine group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DegenerateInputError,
    DegenerateSymmetryError,
    DomainError,
    LibraryBug,
    MembershipError,
    PreconditionError,
)
from .groupcore import (
    ActionMorphism,
    Carrier,
    FiniteGroup,
    Perm,
    close_generators,
    commute_elementwise,
    dual_group,
    is_dihedral_of_order,
    is_simply_transitive,
    restrict,
    restrict_perm,
)
from .pcmath import AffineMap, PcSegment, all_affine_maps, ti_group
from .pcmath import units as unit_group

TRIAD_NAMES = {"P": (1, 3), "L": (2, 3), "R": (1, 2)}


def tritone_condition(x: PcSegment) -> bool:
    """Some two distinct entries of x span an interval other than m/2."""
    m = x.m
    vals = set(x.entries)
    for a in vals:
        for b in vals:
            if a != b and (2 * (a - b)) % m != 0:
                return True
    return False


@dataclass(frozen=True)
class TiOrbit:
    """T/I-orbit of a seed with its T-form / I-form split.

    ``t_index[Y] = i`` when Y = T_i X and ``i_index[Y] = j`` when Y = I_j X.
    """

    seed: PcSegment
    carrier: Carrier
    t_index: dict = field(repr=False, compare=False)
    i_index: dict = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.seed.m

    @property
    def n(self) -> int:
        return len(self.seed)

    @property
    def t_forms(self) -> frozenset[PcSegment]:
        return frozenset(self.t_index)

    @property
    def i_forms(self) -> frozenset[PcSegment]:
        return frozenset(self.i_index)

    def is_t_form(self, y: PcSegment) -> bool:
        self._check(y)
        return y in self.t_index

    def _check(self, y: PcSegment) -> None:
        if y not in self.carrier:
            raise MembershipError(f"{y} is not in the T/I-orbit of {self.seed}")

    # contextual operations on points

    def K(self, y: PcSegment) -> PcSegment:
        return self.J(1, 2, y)

    def J(self, q: int, r: int, y: PcSegment) -> PcSegment:
        self._check(y)
        if not 1 <= q < r <= self.n:
            raise DomainError(f"J({q},{r}) needs 1 <= q < r <= {self.n}")
        return AffineMap.I(y[q - 1] + y[r - 1], self.m)(y)

    def Q(self, i: int, y: PcSegment) -> PcSegment:
        self._check(y)
        shift = i if y in self.t_index else -i
        return AffineMap.T(shift, self.m)(y)

    def P(self, y: PcSegment) -> PcSegment:
        return self.J(1, 3, y)

    def L(self, y: PcSegment) -> PcSegment:
        return self.J(2, 3, y)

    def R(self, y: PcSegment) -> PcSegment:
        return self.J(1, 2, y)

    # the same operations as permutations of the carrier

    def perm_J(self, q: int, r: int, label: str | None = None) -> Perm:
        if label is None:
            label = next((k for k, v in TRIAD_NAMES.items() if v == (q, r) and self.n == 3), None)
            label = label or ("K" if (q, r) == (1, 2) else f"J({q},{r})")
        return Perm.from_function(self.carrier, lambda y: self.J(q, r, y), label)

    def perm_K(self) -> Perm:
        return Perm.from_function(self.carrier, self.K, "K")

    def perm_Q(self, i: int) -> Perm:
        return Perm.from_function(self.carrier, lambda y: self.Q(i, y), f"Q{i % self.m}")

    def perm_named(self, name: str) -> Perm:
        """``P``, ``L``, ``R`` (triads only) or ``K`` as a permutation."""
        if name == "K":
            return self.perm_K()
        if name in TRIAD_NAMES and self.n == 3:
            return self.perm_J(*TRIAD_NAMES[name], label=name)
        raise DomainError(f"unknown contextual operation {name!r} for segments of length {self.n}")

    def affine_perm(self, f: AffineMap) -> Perm:
        return Perm.from_function(self.carrier, f, f.label)


def ti_orbit(x: PcSegment) -> TiOrbit:
    if not tritone_condition(x):
        raise DegenerateInputError(f"{x} fails the tritone condition")
    t_index: dict[PcSegment, int] = {}
    i_index: dict[PcSegment, int] = {}
    for i in range(x.m):
        t_index.setdefault(AffineMap.T(i, x.m)(x), i)
        i_index.setdefault(AffineMap.I(i, x.m)(x), i)
    both = set(t_index) & set(i_index)
    if both:
        y = min(both)
        raise DegenerateSymmetryError(f"{y} is both a T-form and an I-form of {x}")
    carrier = Carrier(list(t_index) + list(i_index))
    return TiOrbit(x, carrier, t_index, i_index)


def op_K(orbit: TiOrbit, y: PcSegment) -> PcSegment:
    return orbit.K(y)


def op_Q(orbit: TiOrbit, i: int, y: PcSegment) -> PcSegment:
    return orbit.Q(i, y)


def op_J(orbit: TiOrbit, q: int, r: int, y: PcSegment) -> PcSegment:
    return orbit.J(q, r, y)


def ti_group_perms(orbit: TiOrbit) -> FiniteGroup:
    """The T/I-group acting componentwise on the orbit."""
    return FiniteGroup(orbit.carrier, [orbit.affine_perm(f) for f in ti_group(orbit.m)], "T/I")


def contextual_group(orbit: TiOrbit) -> FiniteGroup:
    """<K, Q_1>; element labels are the Q_i / Q_iK normal forms."""
    group = close_generators(orbit.carrier, [orbit.perm_K(), orbit.perm_Q(1)], f"H{orbit.seed}")
    forms = schritt_wechsel_forms(orbit)
    if any(g.images not in forms for g in group):
        raise LibraryBug(f"contextual group of {orbit.seed} has an element outside Q_i / Q_iK")
    return FiniteGroup(orbit.carrier, [g.relabel(forms[g.images]) for g in group], group.name)


def schritt_wechsel_forms(orbit: TiOrbit) -> dict[tuple[int, ...], str]:
    """Images of every Q_i and Q_i K, keyed by permutation images."""
    K = orbit.perm_K()
    forms = {}
    for i in range(orbit.m):
        Qi = orbit.perm_Q(i)
        forms.setdefault(Qi.images, f"Q{i}")
        forms.setdefault((Qi * K).images, f"Q{i}K")
    return forms


def schritt_wechsel_label(orbit: TiOrbit, g: Perm) -> str:
    forms = schritt_wechsel_forms(orbit)
    try:
        return forms[g.images]
    except KeyError:
        raise MembershipError(f"{g!r} is not of the form Q_i or Q_iK") from None


def ti_label(orbit: TiOrbit, g: Perm) -> str:
    for f in ti_group(orbit.m):
        if orbit.affine_perm(f).images == g.images:
            return f.label
    raise MembershipError(f"{g!r} is not in the T/I-group")


@dataclass(frozen=True)
class AffOrbitSystem:
    """Orbit of a seed under {x -> ax+b : a in units}, acted on simply transitively.

    ``decomposition[Y] = (a, b)`` with Y = T_b M_a X.
    """

    seed: PcSegment
    units: tuple[int, ...]
    carrier: Carrier
    decomposition: dict = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.seed.m

    def _check(self, y: PcSegment) -> None:
        if y not in self.decomposition:
            raise MembershipError(f"{y} is not in the affine orbit of {self.seed}")

    def linear_part(self, y: PcSegment) -> int:
        self._check(y)
        return self.decomposition[y][0]

    def W(self, a: int, y: PcSegment) -> PcSegment:
        self._check(y)
        if a % self.m not in self.units:
            raise DomainError(f"{a} is not among the units {self.units}")
        return side_transform(a, y)

    def Qbar(self, j: int, y: PcSegment) -> PcSegment:
        a = self.linear_part(y)
        return AffineMap.T(a * j, self.m)(y)

    def group_maps(self) -> list[AffineMap]:
        return [AffineMap(a, b, self.m) for a in self.units for b in range(self.m)]

    @cached_property
    def affine_group(self) -> FiniteGroup:
        return FiniteGroup(
            self.carrier, [Perm.from_function(self.carrier, f, f.label) for f in self.group_maps()], "Aff"
        )

    @cached_property
    def dual(self) -> FiniteGroup:
        """{Qbar_j W_a : a in units, j in Z_m}."""
        elems = []
        for a in self.units:
            for j in range(self.m):
                label = f"Qbar{j}W{a}"
                elems.append(Perm.from_function(self.carrier, lambda y, a=a, j=j: self.Qbar(j, self.W(a, y)), label))
        return FiniteGroup(self.carrier, elems, "Qbar.W")


def side_transform(a: int, y: PcSegment) -> PcSegment:
    """W_a(Y) = T_{(1-a) y1} M_a Y: the transposition of M_a Y that keeps y1."""
    m = y.m
    return AffineMap.T((1 - a) * y[0], m)(AffineMap.M(a, m)(y))


def affine_system(x: PcSegment, units: Iterable[int] | None = None) -> AffOrbitSystem:
    m = x.m
    us = tuple(sorted({u % m for u in (units if units is not None else unit_group(m))}))
    for u in us:
        if AffineMap.M(u, m).is_invertible is False:
            raise DomainError(f"{u} is not a unit mod {m}")
    for u in us:
        for v in us:
            if (u * v) % m not in us:
                raise DomainError(f"units {us} are not closed under multiplication")
    if 1 not in us:
        raise DomainError("units must contain 1")
    decomposition: dict[PcSegment, tuple[int, int]] = {}
    for a in us:
        for b in range(m):
            y = AffineMap(a, b, m)(x)
            if y in decomposition:
                a0, b0 = decomposition[y]
                raise PreconditionError(
                    f"affine group is not simply transitive on the orbit of {x}: "
                    f"aff({a0},{b0}) and aff({a},{b}) both give {y}"
                )
            decomposition[y] = (a, b)
    return AffOrbitSystem(x, us, Carrier(decomposition), decomposition)


def op_W(system: AffOrbitSystem, a: int, y: PcSegment) -> PcSegment:
    return system.W(a, y)


def op_Qbar(system: AffOrbitSystem, j: int, y: PcSegment) -> PcSegment:
    return system.Qbar(j, y)


@dataclass
class CommutationReport:
    passed: bool
    checked: int
    counterexample: str | None = None

    def __bool__(self) -> bool:
        return self.passed


def verify_affine_commutation(
    orbit: TiOrbit, f: AffineMap, system: AffOrbitSystem | None = None
) -> CommutationReport:
    """Check f J^{q,r} = J^{q,r} f on every orbit point and every q < r.

    With ``system`` also check W_a f = f W_a and Qbar_j f = f Qbar_j on its
    carrier; Qbar is only defined there when f maps the carrier into itself.
    """
    checked = 0
    n = orbit.n
    for y in orbit.carrier:
        fy = f(y)
        for q in range(1, n + 1):
            for r in range(q + 1, n + 1):
                checked += 1
                lhs = f(orbit.J(q, r, y))
                rhs = AffineMap.I(fy[q - 1] + fy[r - 1], f.m)(fy)
                if lhs != rhs:
                    return CommutationReport(False, checked, f"J({q},{r}) at {y}: f J Y = {lhs}, J f Y = {rhs}")
    if system is not None:
        closed = all(f(y) in system.carrier for y in system.carrier)
        for y in system.carrier:
            fy = f(y)
            for a in system.units:
                checked += 1
                lhs, rhs = f(side_transform(a, y)), side_transform(a, fy)
                if lhs != rhs:
                    return CommutationReport(False, checked, f"W{a} at {y}: f W Y = {lhs}, W f Y = {rhs}")
            if not closed:
                continue
            for j in range(system.m):
                checked += 1
                lhs, rhs = f(system.Qbar(j, y)), system.Qbar(j, fy)
                if lhs != rhs:
                    return CommutationReport(False, checked, f"Qbar{j} at {y}: f Q Y = {lhs}, Q f Y = {rhs}")
    return CommutationReport(True, checked)


def contextual_subgroup(orbit: TiOrbit, pairs: Sequence[tuple[int, int]]) -> FiniteGroup:
    """Subgroup generated by the contextual inversions J^{q,r} for the given pairs."""
    return close_generators(orbit.carrier, [orbit.perm_J(q, r) for q, r in pairs])


def morphism_from_affine(
    orbit: TiOrbit,
    f: AffineMap,
    pairs: Sequence[tuple[int, int]] = ((1, 2), (2, 3)),
    codomain: FiniteGroup | None = None,
) -> ActionMorphism:
    """Morphism of simply transitive actions induced by an affine map.

    G_0 is generated by the J^{q,r} for ``pairs`` (default: L and R for triads).
    phi(g) is the unique element of the codomain with phi(g) f(X) = f(g X); the
    codomain defaults to the contextual group of f(X) on its T/I-orbit. The
    result is restricted to S_0 = G_0 X, after checking f(g s) = phi(g) f(s)
    on the whole orbit and phi(J^{q,r}) = J^{q,r}.
    """
    x = orbit.seed
    fx = f(x)
    if not tritone_condition(fx):
        raise DegenerateInputError(f"image {fx} of the seed fails the tritone condition")
    target_orbit = ti_orbit(fx)
    g0 = contextual_subgroup(orbit, pairs)
    target = codomain if codomain is not None else contextual_group(target_orbit)
    if not is_simply_transitive(target):
        raise PreconditionError("codomain is not simply transitive")
    tc = target.carrier
    if fx not in tc:
        raise PreconditionError(f"f(X) = {fx} is not in the codomain carrier")
    base = tc.index(fx)
    by_image = {g.images[base]: g for g in target}

    phi_full: dict[tuple[int, ...], Perm] = {}
    for g in g0:
        gx = g.apply_point(orbit.carrier, x)
        phi_full[g.images] = by_image[tc.index(f(gx))]

    # f(g s) = phi(g) f(s) wherever f(s) lies in the codomain
    for g in g0:
        h = phi_full[g.images]
        for s in orbit.carrier:
            fs = f(s)
            if fs not in tc:
                continue
            if f(g.apply_point(orbit.carrier, s)) != h.apply_point(tc, fs):
                raise LibraryBug(f"f(g s) != phi(g) f(s) for g={g.label}, s={s}")
    for q, r in pairs:
        J_src = orbit.perm_J(q, r)
        expected = Perm.from_function(tc, lambda y: target_orbit.J(q, r, y)) if _closed(tc, target_orbit, q, r) else None
        got = phi_full[J_src.images]
        if expected is not None and got.images != expected.images:
            raise LibraryBug(f"phi(J({q},{r})) is not J({q},{r}) in the target")

    s0 = sorted({g.apply_point(orbit.carrier, x) for g in g0})
    source = restrict(g0, s0, f"<{','.join(orbit.perm_J(q, r).label for q, r in pairs)}>")
    sub = source.carrier
    group_map = {}
    for g_full in g0:
        res = restrict_perm(orbit.carrier, g_full, sub).images
        if res in group_map and group_map[res] != phi_full[g_full.images]:
            raise PreconditionError("G_0 does not act faithfully on S_0")
        group_map[res] = phi_full[g_full.images]
    point_map = tuple(tc.index(f(s)) for s in sub)
    return ActionMorphism(source, target, point_map, group_map)


def _closed(carrier: Carrier, orbit: TiOrbit, q: int, r: int) -> bool:
    return all(y in orbit.carrier and orbit.J(q, r, y) in carrier for y in carrier)


def contextual_summary(orbit: TiOrbit) -> dict:
    """Facts the CLI reports about the contextual group of an orbit."""
    H = contextual_group(orbit)
    G = ti_group_perms(orbit)
    return {
        "seed": orbit.seed,
        "order": H.order,
        "dihedral": is_dihedral_of_order(H, 2 * orbit.m),
        "simply_transitive": is_simply_transitive(H),
        "dual_to_TI": commute_elementwise(G, H) and dual_group(G).same_elements(H),
        "group": H,
    }


def exhaustive_affine_commutation(orbit: TiOrbit, system: AffOrbitSystem | None = None) -> list[str]:
    """Counterexamples over all m*m affine maps (empty when the theorem holds)."""
    bad = []
    for f in all_affine_maps(orbit.m):
        rep = verify_affine_commutation(orbit, f, system)
        if not rep.passed:
            bad.append(f"{f.label}: {rep.counterexample}")
    return bad


def check_orbit(orbit: TiOrbit) -> None:
    if len(orbit.carrier) != 2 * orbit.m:
        raise LibraryBug(f"orbit of {orbit.seed} has {len(orbit.carrier)} elements, expected {2 * orbit.m}")
