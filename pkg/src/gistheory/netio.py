"""Transformational network documents: parsing, verification, JSON and DOT.

A document declares systems, nodes (segments tagged with a system) and edges
labelled by operation expressions such as ``(13)*R`` or ``aff(7,7)``.
Composition is right to left: ``g*f`` applies f first. Contextual atoms
(P, L, R, K, Q, J, Qbar, W) are resolved in the system of the edge's source
node; edges between systems may only use affine maps, voice permutations and
RICH.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable

from .contextual import affine_system, contextual_group, ti_group_perms, ti_orbit
from .errors import GisError, NetworkError
from .groupcore import FiniteGroup, close_generators
from .pcmath import AffineMap, PcSegment, VoicePerm, parse_cycles, parse_segment
from .serial import DEFAULT_ORDERINGS, retro_system, rich

SYSTEM_KINDS = ("ti-orbit", "sub-dual", "retro")
GLOBAL_KINDS = ("affine", "perm", "rich")

_ATOMS: list[tuple[str, re.Pattern]] = [
    ("T", re.compile(r"T(-?\d+)")),
    ("I", re.compile(r"I(-?\d+)")),
    ("M", re.compile(r"M(-?\d+)")),
    ("aff", re.compile(r"aff\((-?\d+),(-?\d+)\)")),
    ("Qbar", re.compile(r"Qbar(-?\d+)")),
    ("Q", re.compile(r"Q(-?\d+)")),
    ("W", re.compile(r"W(-?\d+)")),
    ("J", re.compile(r"J\((\d+),(\d+)\)")),
    ("RICH", re.compile(r"RICH")),
    ("PLRK", re.compile(r"[PLRK]")),
    ("perm", re.compile(r"perm\((.*)\)")),
    ("cycles", re.compile(r"(?:\([\d,]*\))+")),
]


@dataclass(frozen=True)
class Atom:
    """One factor of an operation expression.

    ``kind`` is ``affine``, ``perm``, ``rich``, ``contextual`` (P, L, R, K, Q, J)
    or ``schritt`` (Qbar, W).
    """

    kind: str
    text: str
    affine: AffineMap | None = None
    cycles: tuple[tuple[int, ...], ...] | None = None
    name: str | None = None
    args: tuple[int, ...] = ()

    @property
    def is_global(self) -> bool:
        return self.kind in GLOBAL_KINDS


@dataclass(frozen=True)
class OpExpr:
    """Product of atoms; ``atoms[-1]`` is applied first."""

    atoms: tuple[Atom, ...]

    @property
    def text(self) -> str:
        return "*".join(a.text for a in self.atoms)

    @property
    def is_global(self) -> bool:
        return all(a.is_global for a in self.atoms)

    def __str__(self) -> str:
        return self.text


def parse_atom(text: str, m: int = 12) -> Atom:
    for kind, pattern in _ATOMS:
        match = pattern.fullmatch(text)
        if match is None:
            continue
        if kind in ("T", "I", "M"):
            f = {"T": AffineMap.T, "I": AffineMap.I, "M": AffineMap.M}[kind](int(match[1]), m)
            return Atom("affine", text, affine=f)
        if kind == "aff":
            return Atom("affine", text, affine=AffineMap(int(match[1]), int(match[2]), m))
        if kind in ("Qbar", "W"):
            return Atom("schritt", text, name=kind, args=(int(match[1]),))
        if kind == "Q":
            return Atom("contextual", text, name="Q", args=(int(match[1]),))
        if kind == "J":
            return Atom("contextual", text, name="J", args=(int(match[1]), int(match[2])))
        if kind == "PLRK":
            return Atom("contextual", text, name=text)
        if kind == "RICH":
            return Atom("rich", text)
        body = match[1] if kind == "perm" else text
        try:
            cycles = tuple(parse_cycles(body))
        except GisError as exc:
            raise NetworkError(str(exc)) from None
        return Atom("perm", text, cycles=cycles)
    raise NetworkError(f"unknown atom {text!r}")


def parse_expr(text: str, m: int = 12) -> OpExpr:
    """Parse ``term ("*" term)*``; whitespace is ignored."""
    if not isinstance(text, str):
        raise NetworkError(f"operation must be a string, got {text!r}")
    body = "".join(text.split())
    if not body:
        raise NetworkError("empty operation")
    return OpExpr(tuple(parse_atom(t, m) for t in body.split("*")))


# systems


@dataclass(frozen=True)
class SystemDecl:
    name: str
    kind: str
    seed: PcSegment
    subgroup_gens: tuple[str, ...] | None = None
    base: PcSegment | None = None
    orderings: tuple[str, ...] | None = None
    units: tuple[int, ...] | None = None


class SystemContext:
    """Resolves contextual atoms for one declared system."""

    def __init__(self, decl: SystemDecl):
        self.decl = decl
        self.m = decl.seed.m
        if decl.kind == "retro":
            self.retro = retro_system(decl.seed, decl.orderings or DEFAULT_ORDERINGS)
            self.orbit = self.retro.root_orbit
            self.members = frozenset(self.retro.carrier)
        else:
            self.retro = None
            self.orbit = ti_orbit(decl.seed)
            self.members = frozenset(self.orbit.carrier)
        if decl.kind == "sub-dual":
            self.sub = self._build_sub_dual()
            self.members = frozenset(self.sub.orbit_s0)

    def _build_sub_dual(self):
        from .subdual import build_sub_dual

        decl = self.decl
        gens = [parse_expr(g, self.m) for g in (decl.subgroup_gens or ())]
        if not gens:
            raise NetworkError("sub-dual system needs subgroup_gens")
        perms = []
        affine = all(e.is_global for e in gens)
        for e in gens:
            if affine != e.is_global or any(a.kind not in ("affine", "contextual") for a in e.atoms):
                raise NetworkError("subgroup_gens must be all affine or all contextual")
            perms.append(self.orbit_perm(e))
        G, H = ti_group_perms(self.orbit), contextual_group(self.orbit)
        parent_g, parent_h = (G, H) if affine else (H, G)
        g0 = close_generators(self.orbit.carrier, perms, "G0")
        return build_sub_dual(parent_g, parent_h, g0, decl.base or decl.seed, decl.name)

    def orbit_perm(self, expr: OpExpr):
        from .groupcore import Perm

        return Perm.from_function(self.orbit.carrier, lambda y: evaluate(expr, y, self), expr.text)

    @cached_property
    def affine(self):
        units = self.decl.units or (1, self.m - 1)
        return affine_system(self.decl.seed, units)

    def apply(self, atom: Atom, y: PcSegment) -> PcSegment:
        if atom.kind == "schritt":
            if self.retro is not None:
                raise NetworkError(f"{atom.text} is not defined on retro systems")
            a = atom.args[0]
            return self.affine.W(a, y) if atom.name == "W" else self.affine.Qbar(a, y)
        if self.retro is not None:
            return self.retro.conj(lambda z: self._root(atom, z), y)
        return self._root(atom, y)

    def _root(self, atom: Atom, y: PcSegment) -> PcSegment:
        o = self.orbit
        if atom.name == "Q":
            return o.Q(atom.args[0], y)
        if atom.name == "J":
            return o.J(atom.args[0], atom.args[1], y)
        if atom.name == "K":
            return o.K(y)
        if o.n != 3:
            raise NetworkError(f"{atom.text} needs triads; system {self.decl.name} has length {o.n}")
        return getattr(o, atom.name)(y)


def apply_global(atom: Atom, y: PcSegment) -> PcSegment:
    if atom.kind == "affine":
        return atom.affine(y)
    if atom.kind == "rich":
        return rich(y)
    sigma = VoicePerm.from_cycles(atom.cycles, len(y))
    return sigma(y)


def evaluate(expr: OpExpr, y: PcSegment, context: SystemContext | None = None) -> PcSegment:
    for atom in reversed(expr.atoms):
        if atom.is_global:
            y = apply_global(atom, y)
        elif context is None:
            raise NetworkError(f"{atom.text} needs a system context")
        else:
            y = context.apply(atom, y)
    return y


# documents


@dataclass(frozen=True)
class Node:
    id: str
    system: str
    segment: PcSegment


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    op: OpExpr
    note: str | None = None


@dataclass(frozen=True)
class Square:
    corners: tuple[str, str, str, str]


@dataclass
class NetworkDoc:
    modulus: int = 12
    systems: dict[str, SystemDecl] = field(default_factory=dict)
    nodes: dict[str, Node] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    squares: list[Square] = field(default_factory=list)
    contexts: dict[str, SystemContext] = field(default_factory=dict, repr=False, compare=False)

    def context(self, system: str) -> SystemContext:
        if system not in self.contexts:
            self.contexts[system] = SystemContext(self.systems[system])
        return self.contexts[system]

    def find_edge(self, a: str, b: str) -> Edge | None:
        return next((e for e in self.edges if e.source == a and e.target == b), None)


def _require(cond: bool, message: str, locus: str) -> None:
    if not cond:
        raise NetworkError(message, locus)


def _segment(value: Any, m: int, locus: str) -> PcSegment:
    _require(isinstance(value, str), f"expected a segment string such as \"0,4,7\", got {value!r}", locus)
    try:
        return parse_segment(value, m)
    except GisError as exc:
        raise NetworkError(str(exc), locus) from None


def _strings(value: Any, locus: str) -> tuple[str, ...]:
    _require(isinstance(value, list) and all(isinstance(v, str) for v in value), "expected a list of strings", locus)
    return tuple(value)


def load_network_dict(data: Any) -> NetworkDoc:
    """Validate and resolve a document given as plain JSON data."""
    _require(isinstance(data, dict), "document must be a JSON object", "$")
    unknown = set(data) - {"modulus", "systems", "nodes", "edges", "squares"}
    _require(not unknown, f"unknown fields {sorted(unknown)}", "$")
    m = data.get("modulus", 12)
    _require(isinstance(m, int) and not isinstance(m, bool) and m >= 2, "modulus must be an integer >= 2", "modulus")
    doc = NetworkDoc(modulus=m)

    systems = data.get("systems", {})
    _require(isinstance(systems, dict), "expected an object", "systems")
    for name, decl in systems.items():
        locus = f"systems.{name}"
        _require(isinstance(decl, dict), "expected an object", locus)
        kind = decl.get("kind")
        _require(kind in SYSTEM_KINDS, f"kind must be one of {', '.join(SYSTEM_KINDS)}", f"{locus}.kind")
        seed = _segment(decl.get("seed"), m, f"{locus}.seed")
        gens = _strings(decl["subgroup_gens"], f"{locus}.subgroup_gens") if "subgroup_gens" in decl else None
        base = _segment(decl["base"], m, f"{locus}.base") if "base" in decl else None
        orderings = _strings(decl["orderings"], f"{locus}.orderings") if "orderings" in decl else None
        units = None
        if "units" in decl:
            u = decl["units"]
            _require(isinstance(u, list) and all(isinstance(x, int) for x in u), "expected a list of ints", f"{locus}.units")
            units = tuple(u)
        _require(kind == "sub-dual" or (gens is None and base is None), "subgroup_gens/base need kind sub-dual", locus)
        _require(kind == "retro" or orderings is None, "orderings need kind retro", locus)
        doc.systems[name] = SystemDecl(name, kind, seed, gens, base, orderings, units)
        try:
            doc.context(name)
        except NetworkError as exc:
            raise NetworkError(str(exc), locus) from None
        except GisError as exc:
            raise NetworkError(str(exc), locus) from None

    nodes = data.get("nodes", {})
    _require(isinstance(nodes, dict), "expected an object", "nodes")
    for nid, node in nodes.items():
        locus = f"nodes.{nid}"
        _require(isinstance(node, dict), "expected an object", locus)
        system = node.get("system")
        _require(system in doc.systems, f"unknown system {system!r}", f"{locus}.system")
        seg = _segment(node.get("segment"), m, f"{locus}.segment")
        seed = doc.systems[system].seed
        _require(len(seg) == len(seed), f"segment length {len(seg)} does not match seed length {len(seed)}", f"{locus}.segment")
        _require(seg in doc.context(system).members, f"{seg} is not in system {system}", f"{locus}.segment")
        doc.nodes[nid] = Node(nid, system, seg)

    edges = data.get("edges", [])
    _require(isinstance(edges, list), "expected a list", "edges")
    for k, edge in enumerate(edges):
        locus = f"edges[{k}]"
        _require(isinstance(edge, dict), "expected an object", locus)
        for end in ("from", "to"):
            _require(edge.get(end) in doc.nodes, f"unknown node {edge.get(end)!r}", f"{locus}.{end}")
        try:
            op = parse_expr(edge.get("op"), m)
        except NetworkError as exc:
            raise NetworkError(str(exc), f"{locus}.op") from None
        src, dst = doc.nodes[edge["from"]], doc.nodes[edge["to"]]
        for atom in op.atoms:
            if atom.kind == "perm":
                try:
                    VoicePerm.from_cycles(atom.cycles, len(src.segment))
                except GisError as exc:
                    raise NetworkError(f"arity mismatch in {atom.text}: {exc}", f"{locus}.op") from None
            if atom.name == "J" and not 1 <= atom.args[0] < atom.args[1] <= len(src.segment):
                raise NetworkError(f"arity mismatch in {atom.text}", f"{locus}.op")
        if src.system != dst.system:
            _require(op.is_global, "edges between systems may only use affine, perm or RICH atoms", f"{locus}.op")
        note = edge.get("note")
        _require(note is None or isinstance(note, str), "note must be a string", f"{locus}.note")
        doc.edges.append(Edge(src.id, dst.id, op, note))

    squares = data.get("squares", [])
    _require(isinstance(squares, list), "expected a list", "squares")
    for k, sq in enumerate(squares):
        locus = f"squares[{k}].corners"
        corners = sq.get("corners") if isinstance(sq, dict) else None
        _require(isinstance(corners, list) and len(corners) == 4, "expected four node ids", locus)
        a, b, c, d = corners
        for x, y in ((a, b), (b, c), (a, d), (d, c)):
            _require(doc.find_edge(x, y) is not None, f"no edge {x} -> {y}", locus)
        doc.squares.append(Square((a, b, c, d)))
    return doc


def parse_network(text: str) -> NetworkDoc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return load_network_dict(data)


def network_to_dict(doc: NetworkDoc) -> dict:
    systems = {}
    for name, s in doc.systems.items():
        d: dict[str, Any] = {"kind": s.kind, "seed": s.seed.text()}
        if s.subgroup_gens is not None:
            d["subgroup_gens"] = list(s.subgroup_gens)
        if s.base is not None:
            d["base"] = s.base.text()
        if s.orderings is not None:
            d["orderings"] = list(s.orderings)
        if s.units is not None:
            d["units"] = list(s.units)
        systems[name] = d
    edges = []
    for e in doc.edges:
        d = {"from": e.source, "to": e.target, "op": e.op.text}
        if e.note is not None:
            d["note"] = e.note
        edges.append(d)
    out: dict[str, Any] = {
        "modulus": doc.modulus,
        "systems": systems,
        "nodes": {n.id: {"system": n.system, "segment": n.segment.text()} for n in doc.nodes.values()},
        "edges": edges,
    }
    if doc.squares:
        out["squares"] = [{"corners": list(s.corners)} for s in doc.squares]
    return out


def serialize_network(doc: NetworkDoc) -> str:
    return json.dumps(network_to_dict(doc), indent=2) + "\n"


def docs_equal(a: NetworkDoc, b: NetworkDoc) -> bool:
    """Equality up to field ordering in the JSON source."""
    return network_to_dict(a) == network_to_dict(b)


# verification


@dataclass(frozen=True)
class EdgeResult:
    index: int
    edge: Edge
    expected: PcSegment
    computed: PcSegment | None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.computed == self.expected

    def describe(self) -> str:
        head = f"edges[{self.index}] {self.edge.source} -{self.edge.op.text}-> {self.edge.target}"
        if self.passed:
            return f"{head}: ok"
        if self.error:
            return f"{head}: error: {self.error}"
        return f"{head}: expected {self.expected}, computed {self.computed}"


@dataclass(frozen=True)
class SquareResult:
    index: int
    square: Square
    endpoints: tuple[PcSegment | None, PcSegment | None]
    expected: PcSegment
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.endpoints[0] == self.expected == self.endpoints[1]

    def describe(self) -> str:
        a, b, c, d = self.square.corners
        head = f"squares[{self.index}] {a}->{b}->{c} vs {a}->{d}->{c}"
        if self.passed:
            return f"{head}: ok"
        if self.error:
            return f"{head}: error: {self.error}"
        return f"{head}: endpoints {self.endpoints[0]} and {self.endpoints[1]}, expected {self.expected}"


@dataclass
class VerificationReport:
    edges: list[EdgeResult]
    squares: list[SquareResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.edges) and all(r.passed for r in self.squares)

    def failures(self) -> list[str]:
        return [r.describe() for r in (*self.edges, *self.squares) if not r.passed]

    def lines(self) -> list[str]:
        return [r.describe() for r in (*self.edges, *self.squares)]


def _apply_edge(doc: NetworkDoc, edge: Edge, y: PcSegment) -> PcSegment:
    return evaluate(edge.op, y, doc.context(doc.nodes[edge.source].system))


def verify_edge(doc: NetworkDoc, index: int) -> EdgeResult:
    edge = doc.edges[index]
    start = doc.nodes[edge.source].segment
    expected = doc.nodes[edge.target].segment
    try:
        return EdgeResult(index, edge, expected, _apply_edge(doc, edge, start))
    except GisError as exc:
        return EdgeResult(index, edge, expected, None, str(exc))


def verify_square(doc: NetworkDoc, index: int) -> SquareResult:
    sq = doc.squares[index]
    a, b, c, d = sq.corners
    expected = doc.nodes[c].segment
    start = doc.nodes[a].segment
    try:
        ends = tuple(
            _apply_edge(doc, doc.find_edge(mid, c), _apply_edge(doc, doc.find_edge(a, mid), start)) for mid in (b, d)
        )
    except GisError as exc:
        return SquareResult(index, sq, (None, None), expected, str(exc))
    return SquareResult(index, sq, ends, expected)


def verify_network(doc: NetworkDoc, order: Callable[[list[int]], list[int]] | None = None) -> VerificationReport:
    """Check every edge and declared square; ``order`` may permute the edge checks."""
    indices = list(range(len(doc.edges)))
    if order is not None:
        indices = order(indices)
    edges = sorted((verify_edge(doc, i) for i in indices), key=lambda r: r.index)
    squares = [verify_square(doc, i) for i in range(len(doc.squares))]
    return VerificationReport(edges, squares)


# DOT export


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(doc: NetworkDoc, rankdir: str = "LR", clusters: bool = True, notes: bool = True) -> str:
    """Deterministic DOT text: one cluster per system, nodes in document order."""
    if not doc.nodes and not doc.edges:
        return "digraph {\n}\n"
    lines = ["digraph {", f"  rankdir={rankdir};", "  node [shape=box];"]
    by_system: dict[str, list[Node]] = {name: [] for name in doc.systems}
    for node in doc.nodes.values():
        by_system[node.system].append(node)
    for k, (name, members) in enumerate(by_system.items()):
        if not members:
            continue
        decl = doc.systems[name]
        indent = "  "
        if clusters:
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f"    label={_quote(f'{name} ({decl.kind} {decl.seed})')};")
            indent = "    "
        for node in members:
            lines.append(f"{indent}{_quote(node.id)} [label={_quote(str(node.segment))}];")
        if clusters:
            lines.append("  }")
    for e in doc.edges:
        label = e.op.text
        if notes and e.note:
            label = f"{label}\\n{e.note}"
            lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [label=\"{_escape_keep_newline(label)}\"];")
        else:
            lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _escape_keep_newline(text: str) -> str:
    head, _, tail = text.partition("\\n")
    esc = lambda s: s.replace("\\", "\\\\").replace('"', '\\"')  # noqa: E731
    return esc(head) + "\\n" + esc(tail)
