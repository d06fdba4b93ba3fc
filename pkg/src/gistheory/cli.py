"""Command-line front end: ``gis <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
domain errors. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .errors import GisError
from .pcmath import DEFAULT_MODULUS, PcSegment, parse_affine, parse_segment

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _modulus(args) -> int:
    if args.modulus is not None:
        return args.modulus
    env = os.environ.get("GIS_MODULUS")
    if env is None:
        return DEFAULT_MODULUS
    try:
        m = int(env)
    except ValueError:
        raise UsageError(f"GIS_MODULUS must be an integer, got {env!r}") from None
    if m < 2:
        raise UsageError("GIS_MODULUS must be >= 2")
    return m


def _seed(args) -> PcSegment:
    return parse_segment(args.seed, _modulus(args))


def _emit(args, text_lines: list[str], data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        for line in text_lines:
            print(line)


# subcommands


def cmd_orbit(args) -> int:
    from .contextual import ti_orbit

    orbit = ti_orbit(_seed(args))
    rows = [(f"T{i}", y) for y, i in sorted(orbit.t_index.items(), key=lambda kv: kv[1])]
    rows += [(f"I{j}", y) for y, j in sorted(orbit.i_index.items(), key=lambda kv: kv[1])]
    lines = [f"T/I-orbit of {orbit.seed}: {len(orbit.carrier)} elements"]
    lines += [f"{form:<4} {y}" for form, y in rows]
    _emit(args, lines, {"seed": orbit.seed.text(), "size": len(orbit.carrier),
                        "elements": [{"form": f, "segment": y.text()} for f, y in rows]})
    return EXIT_OK


def _context_rows(orbit, group):
    def key(g):
        label = g.label
        return (label.endswith("K"), int(label[1:].rstrip("K")))

    return [(g.label, g.apply_point(orbit.carrier, orbit.seed)) for g in sorted(group, key=key)]


def cmd_contextual(args) -> int:
    from .contextual import contextual_summary, ti_orbit

    orbit = ti_orbit(_seed(args))
    info = contextual_summary(orbit)
    rows = _context_rows(orbit, info["group"])
    verdict = (
        f"{'dihedral' if info['dihedral'] else 'not dihedral'} of order {info['order']}; "
        f"dual to T/I: {_yes(info['dual_to_TI'])}"
    )
    lines = [f"contextual group of {orbit.seed}: {info['order']} elements"]
    lines += [f"{label:<5} {orbit.seed} -> {y}" for label, y in rows]
    lines.append(verdict)
    _emit(args, lines, {"seed": orbit.seed.text(), "order": info["order"], "dihedral": info["dihedral"],
                        "simply_transitive": info["simply_transitive"], "dual_to_TI": info["dual_to_TI"],
                        "elements": [{"label": label, "image_of_seed": y.text()} for label, y in rows]})
    return EXIT_OK


def cmd_dual(args) -> int:
    from .contextual import contextual_group, schritt_wechsel_forms, ti_group_perms, ti_orbit
    from .groupcore import commute_elementwise, dual_group

    orbit = ti_orbit(_seed(args))
    G = ti_group_perms(orbit)
    D = dual_group(G, orbit.carrier.index(orbit.seed))
    forms = schritt_wechsel_forms(orbit)
    equal = D.same_elements(contextual_group(orbit))
    rows = sorted(((forms.get(h.images, "?"), h.label) for h in D),
                  key=lambda r: (r[0].endswith("K"), int(r[0][1:].rstrip("K")) if r[0] != "?" else 0))
    lines = [f"dual group of T/I on the orbit of {orbit.seed}: {D.order} elements"]
    lines += [f"{name:<5} {label}" for name, label in rows]
    lines.append(f"commutes with T/I: {_yes(commute_elementwise(G, D))}; equals contextual group: {_yes(equal)}")
    _emit(args, lines, {"seed": orbit.seed.text(), "order": D.order, "equals_contextual_group": equal,
                        "elements": [{"label": n, "transporter": lab} for n, lab in rows]})
    return EXIT_OK


def cmd_subdual(args) -> int:
    from .netio import SystemContext, SystemDecl
    from .subdual import CLAUSES

    m = _modulus(args)
    seed = parse_segment(args.seed, m)
    base = parse_segment(args.base, m) if args.base else None
    ctx = SystemContext(SystemDecl("cli", "sub-dual", seed, tuple(args.gens), base))
    system = ctx.sub
    orbit = ctx.orbit

    def name_h(h):
        from .contextual import schritt_wechsel_label, ti_label
        from .subdual import schritt_p_label

        try:
            return schritt_p_label(orbit, h) if orbit.n == 3 else schritt_wechsel_label(orbit, h)
        except GisError:
            return ti_label(orbit, h)

    s0 = sorted(system.orbit_s0)
    h0 = sorted((name_h(h) for h in system.h0), key=lambda t: (t.endswith("P") or t.endswith("K"), len(t), t))
    lines = [f"S_0 = G_0 {system.s0}: {len(s0)} elements"] + [f"  {y}" for y in s0]
    lines.append(f"H_0: {', '.join(h0)}")
    lines += [f"clause {c}: {'holds' if system.clauses[c] else 'fails'}" for c in CLAUSES]
    _emit(args, lines, {"s0": system.s0.text(), "orbit": [y.text() for y in s0], "h0": h0,
                        "clauses": {c: system.clauses[c] for c in CLAUSES}})
    return EXIT_OK if system.all_clauses_hold() else EXIT_FAIL


def cmd_covers(args) -> int:
    from .covers import enumerate_octatonic_covers

    reports = enumerate_octatonic_covers(args.octatonic)
    rows = []
    for r in reports:
        subset = "{" + ",".join(map(str, sorted(r.subset_x))) + "}"
        verdict = "simply transitive" if r.simply_transitive else "not simply transitive"
        rows.append((subset, r.stabilizer_size, len(r.cover), verdict))
    lines = [f"{'subset':<12} {'stabilizer':>10} {'cover':>5}  verdict"]
    lines += [f"{s:<12} {st:>10} {c:>5}  {v}" for s, st, c, v in rows]
    ok = all(r.simply_transitive for r in reports)
    lines.append(f"{sum(r.simply_transitive for r in reports)}/{len(reports)} simply transitive")
    _emit(args, lines, [{"subset": s, "stabilizer": st, "cover": c, "verdict": v} for s, st, c, v in rows])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_morphism(args) -> int:
    from .contextual import morphism_from_affine, ti_orbit
    from .gis import action_morphism_to_gis, classify_morphism

    m = _modulus(args)
    orbit = ti_orbit(parse_segment(args.from_seed, m))
    f = parse_affine(args.map, m)
    mor = morphism_from_affine(orbit, f)
    cls = classify_morphism(action_morphism_to_gis(mor))
    line = f"morphism: valid; monic: {_yes(cls.monic)}; epic: {_yes(cls.epic)}; iso: {_yes(cls.iso)}"
    target = f(orbit.seed)
    _emit(args, [f"{f.label}: orbit of {orbit.seed} -> orbit of {target}", line],
          {"map": f.label, "source_seed": orbit.seed.text(), "target_seed": target.text(), "valid": True,
           "monic": cls.monic, "epic": cls.epic, "iso": cls.iso})
    return EXIT_OK


def cmd_retro(args) -> int:
    from .groupcore import commute_elementwise, is_dihedral_of_order, is_klein_four, is_simply_transitive
    from .serial import build_retro_duality, build_row_subsystem, retro_system

    seed = _seed(args)
    system = retro_system(seed)
    g1, g2, common = build_retro_duality(seed)
    start = system.orderings[0](seed)
    row = build_row_subsystem(seed, start)
    kind = "dihedral" if is_dihedral_of_order(row, 8) else "Klein 4" if is_klein_four(row) else "other"
    inter = sorted(g.label for g in common)
    lines = [
        f"retro system of {seed}: {len(system.carrier)} elements",
        f"<T/I,(13)>: order {g1.order}, simply transitive: {_yes(is_simply_transitive(g1))}",
        f"<PLR(S),(13)>: order {g2.order}, simply transitive: {_yes(is_simply_transitive(g2))}",
        f"mutual commutants: {_yes(commute_elementwise(g1, g2))}",
        f"intersection: {{{', '.join(inter)}}}",
        f"<(13)R,(13)P> on the orbit of {start}: order {row.order} ({kind})",
    ]
    _emit(args, lines, {"seed": seed.text(), "carrier": len(system.carrier), "order_ti": g1.order,
                        "order_plr": g2.order, "intersection": inter, "row_order": row.order, "row_kind": kind,
                        "row": [y.text() for y in row.carrier]})
    return EXIT_OK


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_check_network(args) -> int:
    from .netio import parse_network, verify_network

    doc = parse_network(_read(args.file))
    report = verify_network(doc)
    n_edges = len(report.edges)
    n_sq = len(report.squares)
    verdict = "pass" if report.passed else "FAIL"
    lines = report.lines() if args.verbose else report.failures()
    lines = lines + [f"{n_edges} edges, {n_sq} squares: {verdict}"]
    _emit(args, lines, {"passed": report.passed, "edges": n_edges, "squares": n_sq, "results": report.lines()})
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_export_dot(args) -> int:
    from .netio import export_dot, parse_network

    text = export_dot(parse_network(_read(args.file)))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    from .netio import serialize_network
    from .serial import FIXTURES, fixture_text
    from .subdual import build_m7_m10_network

    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FIXTURES:
        path = out / f"{name}.json"
        path.write_text(fixture_text(name), encoding="utf-8")
        written.append(path)
    path = out / "m7_m10_network.json"
    path.write_text(serialize_network(build_m7_m10_network()), encoding="utf-8")
    written.append(path)
    _emit(args, [str(p) for p in written], [str(p) for p in written])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modulus", "-m", type=int, default=None, help="modulus (default: $GIS_MODULUS or 12)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="gis", description="Generalized interval systems and dual groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    add("orbit", cmd_orbit, "T/I-orbit of a segment").add_argument("--seed", required=True)
    add("contextual", cmd_contextual, "contextual group <K,Q1>").add_argument("--seed", required=True)
    add("dual", cmd_dual, "dual group of the T/I action").add_argument("--seed", required=True)
    p = add("subdual", cmd_subdual, "sub dual groups of a T/I-orbit")
    p.add_argument("--seed", required=True)
    p.add_argument("--gens", nargs="+", required=True, help="generators of G_0, e.g. T3 I1 or P R")
    p.add_argument("--base", default=None)
    add("covers", cmd_covers, "simply transitive covers of an octatonic").add_argument(
        "--octatonic", required=True, choices=("01", "12", "23"))
    p = add("morphism", cmd_morphism, "morphism induced by an affine map")
    p.add_argument("--from-seed", required=True)
    p.add_argument("--map", required=True, help="T<i>, I<j>, M<a> or aff(a,b)")
    add("retro", cmd_retro, "retrograde-refined dual groups").add_argument("--seed", required=True)
    add("check-network", cmd_check_network, "verify a network document").add_argument("file")
    p = add("export-dot", cmd_export_dot, "render a network document as DOT")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    add("fixtures", cmd_fixtures, "write the bundled figure documents").add_argument("--dir", default=".")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (GisError, UsageError) as exc:
        print(f"gis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
