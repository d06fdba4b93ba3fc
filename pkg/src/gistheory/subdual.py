"""Sub dual groups: restricting a dual pair (G, H) on S to the orbit of a subgroup.

Given G_0 <= G and s0 in S, put S_0 = G_0 s0 and H_0 = {h in H : h s0 in S_0}.
Then G_0 and H_0 both preserve S_0, act simply transitively on it, and their
restrictions are again dual. ``build_sub_dual`` constructs all of this and
checks each clause of the theorem separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .contextual import TiOrbit, contextual_group, ti_group_perms, ti_orbit
from .errors import DomainError, LibraryBug, MembershipError, PreconditionError
from .groupcore import (
    Carrier,
    FiniteGroup,
    Perm,
    close_generators,
    commute_elementwise,
    dual_group,
    is_simply_transitive,
    restrict,
    restrict_perm,
    setwise_stabilizer,
)
from .pcmath import AffineMap, PcSegment, ti_group

CLAUSES = (
    "i_g0_simply_transitive",
    "ii_g_stabilizes_orbit",
    "iii_h0_simply_transitive",
    "iv_restriction_injective",
    "v_unique_extension",
    "vi_restrictions_dual",
)

OCTATONIC_SHIFT = {"01": 0, "12": 1, "23": 2}
FAMILIES = (("major/minor", (0, 4, 7)), ("jet/shark", (0, 4, 1)), ("stride/strain", (0, 4, 10)))


@dataclass
class SubDualSystem:
    parent_g: FiniteGroup
    parent_h: FiniteGroup
    g0: FiniteGroup
    s0: PcSegment
    orbit_s0: Carrier
    h0: FiniteGroup
    g0_restricted: FiniteGroup
    h0_restricted: FiniteGroup
    clauses: dict[str, bool] = field(default_factory=dict)
    name: str | None = None

    @property
    def carrier(self) -> Carrier:
        return self.parent_g.carrier

    def all_clauses_hold(self) -> bool:
        return all(self.clauses.get(c, False) for c in CLAUSES)


def _check_dual_parents(parent_g: FiniteGroup, parent_h: FiniteGroup) -> None:
    if parent_g.carrier != parent_h.carrier:
        raise PreconditionError("parent groups act on different carriers")
    for grp, what in ((parent_g, "G"), (parent_h, "H")):
        if not is_simply_transitive(grp):
            raise PreconditionError(f"parent group {what} is not simply transitive")
    if not commute_elementwise(parent_g, parent_h):
        raise PreconditionError("parent groups do not commute elementwise")
    if not dual_group(parent_g).same_elements(parent_h):
        raise PreconditionError("parent H is not the centralizer of parent G")


def _extensions(parent: FiniteGroup, sub: Carrier, target: Perm) -> list[Perm]:
    """Elements of ``parent`` that preserve ``sub`` and restrict to ``target``."""
    idx = [parent.carrier.index(p) for p in sub]
    allowed = set(idx)
    out = []
    for g in parent:
        if any(g.images[i] not in allowed for i in idx):
            continue
        if restrict_perm(parent.carrier, g, sub).images == target.images:
            out.append(g)
    return out


def build_sub_dual(
    parent_g: FiniteGroup,
    parent_h: FiniteGroup,
    g0: FiniteGroup | Iterable[Perm],
    s0: PcSegment,
    name: str | None = None,
) -> SubDualSystem:
    """Construct (G_0, S_0, H_0) and verify the six clauses of the theorem.

    Precondition failures raise :class:`PreconditionError`; a failing clause
    is a theorem violation and raises :class:`LibraryBug`.
    """
    _check_dual_parents(parent_g, parent_h)
    carrier = parent_g.carrier
    if s0 not in carrier:
        raise MembershipError(f"{s0} is not in the carrier")
    if not isinstance(g0, FiniteGroup):
        g0 = close_generators(carrier, list(g0))
    if g0.carrier != carrier:
        raise PreconditionError("G_0 acts on a different carrier")
    for g in g0:
        if g not in parent_g:
            raise PreconditionError(f"{g!r} is not an element of the parent group G")
    g0 = FiniteGroup(carrier, [parent_g.find(g) if g.label is None else g for g in g0], g0.name or "G0")

    base = carrier.index(s0)
    orbit_idx = set(g0.orbit(base))
    orbit_s0 = Carrier(carrier[i] for i in orbit_idx)
    h0_elems = [h for h in parent_h if h.images[base] in orbit_idx]
    try:
        h0 = FiniteGroup(carrier, h0_elems, "H0")
    except PreconditionError as exc:
        raise LibraryBug(f"H_0 is not a subgroup: {exc}") from None

    clauses: dict[str, bool] = {}
    n0 = len(orbit_s0)

    def preserves(g: Perm) -> bool:
        return all(g.images[i] in orbit_idx for i in orbit_idx)

    g0_res_list = [restrict_perm(carrier, g, orbit_s0) for g in g0] if all(preserves(g) for g in g0) else None
    h0_res_list = [restrict_perm(carrier, h, orbit_s0) for h in h0] if all(preserves(h) for h in h0) else None
    if g0_res_list is None or h0_res_list is None:
        raise LibraryBug("G_0 or H_0 does not preserve S_0")

    # (iv) restriction is injective on both groups
    clauses["iv_restriction_injective"] = (
        len({p.images for p in g0_res_list}) == g0.order and len({p.images for p in h0_res_list}) == h0.order
    )
    g0_restricted = restrict(g0, orbit_s0, "G0|S0")
    h0_restricted = restrict(h0, orbit_s0, "H0|S0")

    # (i) and (iii)
    clauses["i_g0_simply_transitive"] = is_simply_transitive(g0_restricted)
    clauses["iii_h0_simply_transitive"] = is_simply_transitive(h0_restricted) and h0.order == n0

    # (ii) any g in G moving s0 into S_0 lies in G_0 and preserves S_0
    clauses["ii_g_stabilizes_orbit"] = all(
        g in g0 and preserves(g) for g in parent_g if g.images[base] in orbit_idx
    )

    # (v) each element of the commutant of one restriction extends uniquely
    # into the other parent, and the extension lies in the sub group
    ok = clauses["i_g0_simply_transitive"] and clauses["iii_h0_simply_transitive"]
    if ok:
        for restricted, parent, sub in ((h0_restricted, parent_g, g0), (g0_restricted, parent_h, h0)):
            for c in dual_group(restricted):
                ext = _extensions(parent, orbit_s0, c)
                if len(ext) != 1 or ext[0] not in sub:
                    ok = False
                    break
            if not ok:
                break
    clauses["v_unique_extension"] = ok

    # (vi) the restrictions are dual in Sym(S_0)
    clauses["vi_restrictions_dual"] = (
        clauses["i_g0_simply_transitive"]
        and commute_elementwise(g0_restricted, h0_restricted)
        and dual_group(g0_restricted).same_elements(h0_restricted)
    )

    failed = [c for c in CLAUSES if not clauses[c]]
    if failed:
        raise LibraryBug(f"sub dual clauses failed for s0={s0}: {', '.join(failed)}")
    return SubDualSystem(parent_g, parent_h, g0, s0, orbit_s0, h0, g0_restricted, h0_restricted, clauses, name)


def conjugate_orbit(system: SubDualSystem, k: Perm) -> SubDualSystem:
    """Move the base point to k s0.

    For k in H the new orbit is k S_0 with sub group k H_0 k^-1 and the same
    G_0. For k in G the roles swap: the new sub group of G is k G_0 k^-1 and
    H_0 keeps its operations, only restricted to k S_0.
    """
    carrier = system.carrier
    if k in system.parent_h:
        g0_new = system.g0
        expect_h0 = {(k * h * k.inverse()).images for h in system.h0}
    elif k in system.parent_g:
        g0_new = FiniteGroup(carrier, [system.parent_g.find(k * g * k.inverse()) for g in system.g0], system.g0.name)
        expect_h0 = system.h0.image_set()
    else:
        raise MembershipError(f"{k!r} lies in neither parent group")
    new_s0 = k.apply_point(carrier, system.s0)
    out = build_sub_dual(system.parent_g, system.parent_h, g0_new, new_s0, system.name)
    if out.h0.image_set() != expect_h0:
        raise LibraryBug("conjugated dual group differs from the predicted one")
    if set(out.orbit_s0) != {k.apply_point(carrier, p) for p in system.orbit_s0}:
        raise LibraryBug("conjugated orbit differs from k S_0")
    return out


# octatonic systems


def octatonic_set(octatonic_id: str) -> frozenset[int]:
    shift = _shift(octatonic_id)
    return frozenset((x + shift) % 12 for x in (0, 1, 3, 4, 6, 7, 9, 10))


def octatonic_stabilizer(octatonic_id: str) -> list[AffineMap]:
    """T/I elements fixing the octatonic setwise (order 8)."""
    return setwise_stabilizer(ti_group(12), octatonic_set(octatonic_id))


def _shift(octatonic_id: str) -> int:
    try:
        return OCTATONIC_SHIFT[str(octatonic_id)]
    except KeyError:
        raise DomainError(f"unknown octatonic {octatonic_id!r}; expected one of 01, 12, 23") from None


def ti_sub_dual(seed: PcSegment, g0_maps: Iterable[AffineMap], base: PcSegment | None = None, name: str | None = None) -> SubDualSystem:
    """Sub dual system with G = T/I and H = contextual group on the orbit of ``seed``."""
    orbit = ti_orbit(seed)
    G = ti_group_perms(orbit)
    H = contextual_group(orbit)
    g0 = FiniteGroup(orbit.carrier, [orbit.affine_perm(f) for f in g0_maps], "G0")
    return build_sub_dual(G, H, g0, base if base is not None else seed, name)


def build_octatonic_table(octatonic_id: str) -> list[SubDualSystem]:
    """Major/minor, jet/shark and stride/strain systems covering the octatonic."""
    shift = _shift(octatonic_id)
    maps = octatonic_stabilizer(octatonic_id)
    out = []
    for family, seed in FAMILIES:
        s = AffineMap.T(shift)(PcSegment(seed))
        out.append(ti_sub_dual(s, maps, name=family))
    return out


def t_form_rows(system: SubDualSystem, orbit: TiOrbit) -> tuple[list[PcSegment], list[PcSegment]]:
    """S_0 as two table rows: forms of the seed's kind by ascending transposition, then their P-images."""
    same = sorted((y for y in system.orbit_s0 if orbit.is_t_form(y) == orbit.is_t_form(system.s0)),
                  key=lambda y: (y[0] - system.s0[0]) % orbit.m)
    return same, [orbit.P(y) for y in same]


def schritt_p_label(orbit: TiOrbit, h: Perm) -> str:
    """Name h as Q_i or Q_i P (``P`` alone for Q_0 P)."""
    P = orbit.perm_named("P")
    for i in range(orbit.m):
        Qi = orbit.perm_Q(i)
        if Qi.images == h.images:
            return f"Q{i}"
        if (Qi * P).images == h.images:
            return "P" if i == 0 else f"Q{i}P"
    raise MembershipError(f"{h!r} is not of the form Q_i or Q_iP")


def h0_labels(system: SubDualSystem, orbit: TiOrbit) -> list[str]:
    return sorted((schritt_p_label(orbit, h) for h in system.h0), key=lambda s: (s.endswith("P"), len(s), s))


def pr_subgroup(orbit: TiOrbit) -> FiniteGroup:
    return close_generators(orbit.carrier, [orbit.perm_named("P"), orbit.perm_named("R")], "<P,R>")


def pr_octatonic_system() -> SubDualSystem:
    """Swapped roles: G = PLR-group, G_0 = <P,R>, H = T/I on the 24 consonant triads."""
    orbit = ti_orbit(PcSegment((0, 4, 7)))
    return build_sub_dual(contextual_group(orbit), ti_group_perms(orbit), pr_subgroup(orbit), orbit.seed, "<P,R>")


# the M_7 / M_10 network of PR-octagons

_OUTER = ["0,4,1", "4,0,3", "3,7,4", "7,3,6", "6,10,7", "10,6,9", "9,1,10", "1,9,0"]
_INNER = ["0,4,7", "4,0,9", "9,1,4", "1,9,6", "6,10,1", "10,6,3", "3,7,10", "7,3,0"]
_STRIDE_A = ["0,4,10", "4,0,6", "6,10,4", "10,6,0"]
_STRIDE_B = ["3,7,1", "7,3,9", "9,1,7", "1,9,3"]
_M10 = [("0,4,7", "0,4,10"), ("10,6,3", "4,0,6"), ("3,7,10", "6,10,4"), ("7,3,0", "10,6,0")]
_QCONN = [("0,4,10", "3,7,1", "Q3"), ("4,0,6", "7,3,9", "Q9"), ("6,10,4", "9,1,7", "Q3"), ("10,6,0", "1,9,3", "Q9")]


def _node_id(seg: str) -> str:
    return "n" + seg.replace(",", "_")


def m7_m10_document() -> dict:
    """The PR-octagon diagram as a plain network dictionary."""
    nodes: dict[str, dict] = {}
    edges: list[dict] = []

    def add_nodes(system, segs):
        for s in segs:
            nodes[_node_id(s)] = {"system": system, "segment": s}

    def ring(segs, ops):
        for k, s in enumerate(segs):
            t = segs[(k + 1) % len(segs)]
            edges.append({"from": _node_id(s), "to": _node_id(t), "op": ops[k % 2]})

    add_nodes("jet", _OUTER)
    add_nodes("major", _INNER)
    add_nodes("stride", _STRIDE_A + _STRIDE_B)
    ring(_OUTER, ("R", "P"))
    ring(_INNER, ("R", "P"))
    ring(_STRIDE_A, ("R", "P"))
    ring(_STRIDE_B, ("R", "P"))
    for s, t in zip(_INNER, _OUTER):
        edges.append({"from": _node_id(s), "to": _node_id(t), "op": "M7"})
    for s, t in _M10:
        edges.append({"from": _node_id(s), "to": _node_id(t), "op": "M10"})
    for s, t, op in _QCONN:
        edges.append({"from": _node_id(s), "to": _node_id(t), "op": op})
    return {
        "modulus": 12,
        "systems": {
            "major": {"kind": "ti-orbit", "seed": "0,4,7"},
            "jet": {"kind": "ti-orbit", "seed": "0,4,1"},
            "stride": {"kind": "ti-orbit", "seed": "0,4,10"},
        },
        "nodes": nodes,
        "edges": edges,
    }


def build_m7_m10_network():
    """The diagram as a verified NetworkDoc."""
    from .netio import load_network_dict, verify_network

    doc = load_network_dict(m7_m10_document())
    report = verify_network(doc)
    if not report.passed:
        raise LibraryBug(f"M7/M10 network fails verification: {report.failures()[0]}")
    return doc


def sub_dual_morphism(source: SubDualSystem, target: SubDualSystem, f: AffineMap, pairs=((1, 3), (1, 2))):
    """Morphism (f, phi) from (H_0, S_0) of ``source`` to (H_0, S_0) of ``target``.

    H_0 of the source must be generated by the contextual inversions in
    ``pairs`` (P and R by default).
    """
    from .contextual import morphism_from_affine

    mor = morphism_from_affine(ti_orbit(source.s0), f, pairs, codomain=target.h0_restricted)
    if mor.source.carrier != source.orbit_s0 or not mor.source.same_elements(source.h0_restricted):
        raise PreconditionError("the given contextual inversions do not generate H_0 of the source")
    return mor
