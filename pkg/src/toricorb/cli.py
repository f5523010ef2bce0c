"""Command-line front end.

Exit codes: 0 on success (including 'violated' or 'inconclusive' verdicts),
2 for malformed input, 3 when the data fails a mathematical precondition.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any

from . import io
from . import polynomial as poly
from .charpair import face_group, induced_pair, local_group_at_vertex, local_group_on_face, validate
from .errors import EnumerationCapError, NoAdmissibleRetractionError, ToricError, ValidationError
from .evenness import evenness_certificate
from .fan import integrality_matrix, pair_to_fan
from .gradedring import GradedRing, ring_presentation
from .polytope import vertex_label
from .retraction import RetractionExplorer, dimension_profile, free_vertices
from .towers import (HirzebruchParams, fibration_check, hirzebruch, hirzebruch_params,
                     tower_char_matrix)

EXIT_OK, EXIT_INPUT, EXIT_INVALID = 0, 2, 3

CAVEAT = "realizability of the polytope or fan is assumed, not checked"


def _read(arg: str) -> Any:
    text = arg if arg.lstrip().startswith("{") else _read_file(arg)
    return io.loads(text)


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise io.InputError(f"cannot read {path}: {exc.strerror}") from exc


def _faces_1b(S) -> list[int]:
    return sorted(i + 1 for i in S)


def _xnames(m: int) -> list[str]:
    return [f"x{i + 1}" for i in range(m)]


# -- subcommands: each returns (json payload, text lines) -------------------


def cmd_validate(args) -> tuple[dict, list[str]]:
    d = _read(args.input)
    if io.is_fan(d):
        fan = io.fan_from_json(d)
        complete = fan.is_complete()
        payload = {"kind": "fan", "ok": True, "complete": complete, "caveat": CAVEAT}
        return payload, [f"fan ok ({len(fan.rays)} rays, {len(fan.max_cones)} maximal cones, "
                         f"{'complete' if complete else 'not complete'})", f"note: {CAVEAT}"]
    if io.is_pair(d):
        pair = io.pair_from_json(d)
        rep = validate(pair)
        payload = {"kind": "pair", "ok": rep.ok, "caveat": CAVEAT,
                   "violations": [{"kind": v.kind, "message": v.message} for v in rep.violations]}
        if not rep.ok:
            raise _Invalid(payload, [f"INVALID: {v.message}" for v in rep.violations])
        return payload, ["characteristic pair ok", f"note: {CAVEAT}"]
    P = io.polytope_from_json(d)
    return ({"kind": "polytope", "ok": True, "f_vector": list(P.f_vector()), "caveat": CAVEAT},
            [f"simple polytope ok, f-vector {P.f_vector()}", f"note: {CAVEAT}"])


class _Invalid(Exception):
    def __init__(self, payload, lines):
        super().__init__(lines[0])
        self.payload, self.lines = payload, lines


def _valid_pair(d):
    pair, fan = io.pair_or_fan(d)
    rep = validate(pair)
    if not rep.ok:
        raise ValidationError(rep.violations[0].message)
    return pair, fan


def cmd_local_groups(args) -> tuple[dict, list[str]]:
    pair, _ = _valid_pair(_read(args.input))
    P = pair.polytope
    verts = []
    lines = ["vertex local groups:"]
    for v in P.vertices:
        g = local_group_at_vertex(pair, v)
        verts.append({"vertex": _faces_1b(v), "order": g.order, "invariants": list(g.invariants)})
        lines.append(f"  {vertex_label(v)}: {g} (order {g.order})")
    faces = []
    wanted = [frozenset(i - 1 for i in f) for f in (args.face or [])]
    for E in wanted:
        if not P.is_face(E) or not E:
            raise ValidationError(f"{_faces_1b(E)} is not a proper face")
        ind = induced_pair(pair, E)
        at = []
        for v in P.face_vertices(E):
            g = local_group_on_face(pair, E, v)
            at.append({"vertex": _faces_1b(v), "order": g.order, "invariants": list(g.invariants)})
        G = face_group(pair, E)
        faces.append({
            "face": _faces_1b(E), "group": list(G.invariants), "projection": [list(r) for r in ind.projection],
            "induced": [{"facet": j + 1, "vector": list(ind.lam[j]), "multiplier": ind.multipliers[j]}
                        for j in ind.facets],
            "vertex_groups": at})
        lines.append(f"face {_faces_1b(E)}: G_E = {G}")
        for j in ind.facets:
            lines.append(f"  lambda_E(F{j + 1}) = {list(ind.lam[j])}")
        for a in at:
            lines.append(f"  G_E({vertex_label(i - 1 for i in a['vertex'])}) order {a['order']}")
    return {"vertices": verts, "faces": faces}, lines


def _polytope_of(d):
    if io.is_fan(d) or io.is_pair(d):
        return io.pair_or_fan(d)[0].polytope
    return io.polytope_from_json(d)


def cmd_retract(args) -> tuple[dict, list[str]]:
    P = _polytope_of(_read(args.input))
    ex = RetractionExplorer(P, args.max_vertices)
    prof = dimension_profile(P.f_vector())
    start = frozenset(i - 1 for i in args.start) if args.start else None
    seqs = list(ex.sequences(start=start, limit=args.limit))
    lines = [f"dimension profile: {prof.dims}",
             f"free vertices of Q: {len(free_vertices(P.full_complex()))}"]
    for k, s in enumerate(seqs, 1):
        lines.append(f"retraction {k}: " + " ".join(vertex_label(b) for b in s.vertices))
    if not seqs:
        lines.append("no admissible retraction found")
    dead = ex.dead_ends()
    return ({"dimension_profile": list(prof.dims), "retractions": [s.to_json() for s in seqs],
             "dead_end_choices": [{"maximal_faces": [list(m) for m in B.key()], "vertex": _faces_1b(v)}
                                  for B, v in dead]}, lines)


def cmd_r_vector(args) -> tuple[dict, list[str]]:
    P = _polytope_of(_read(args.input))
    try:
        r = RetractionExplorer(P, args.max_vertices).r_vector()
    except (EnumerationCapError, NoAdmissibleRetractionError) as exc:
        return {"status": "inconclusive", "reason": str(exc), "r_vector": None}, [f"inconclusive: {exc}"]
    text = "(" + ", ".join(map(str, r)) + ")"
    return {"status": "ok", "r_vector": list(r)}, [text]


def cmd_evenness(args) -> tuple[dict, list[str]]:
    pair, _ = _valid_pair(_read(args.input))
    cert = evenness_certificate(pair, args.max_vertices, oracle=args.oracle)
    lines = [f"verdict: {cert.verdict}"]
    if cert.r_vector:
        lines.append(f"r-vector: {tuple(cert.r_vector)}")
    if cert.reason:
        lines.append(f"reason: {cert.reason}")
    for v in cert.violations:
        lines.append(f"  dim {v.collection.dim} step {v.collection.step}: {list(v.collection.orders)} "
                     f"not {v.k}-relatively prime (p = {v.prime}, witness {list(v.witness)})")
    lines.append("note: the criterion is sufficient only; 'violated' does not imply torsion")
    return cert.to_json(), lines


def _fan_of(d):
    pair, fan = _valid_pair(d)
    return fan or pair_to_fan(pair)


def cmd_integrality(args) -> tuple[dict, list[str]]:
    fan = _fan_of(_read(args.input))
    G = integrality_matrix(fan)
    lines = [f"sigma{''.join(map(str, (i + 1 for i in c)))}: {list(r)}" for c, r in zip(G.cones, G.rows)]
    return {"integrality_matrix": G.to_json(), "caveat": CAVEAT}, lines


def _ring_report(fan, certified, max_degree=None, generators=None):
    ring = GradedRing(fan)
    top = fan.dim if max_degree is None else min(max_degree, fan.dim)
    pres = ring_presentation(fan, certified, generators=generators, ring=ring)
    xn = _xnames(fan.n_rays)
    body = pres.to_json(xn)
    body["modules"] = body["modules"][: top + 1]
    lines = []
    for m in pres.modules[: top + 1]:
        t = f" + torsion {list(m.torsion)}" if m.torsion else ""
        lines.append(f"H^{2 * m.degree}: Z^{m.rank}{t}")
    if pres.generators:
        lines.append("generators: " + ", ".join(
            f"{g.name} (deg {2 * g.degree}) = {poly.to_str(g.poly, xn)}" for g in pres.generators))
        lines.append("relations: " + ", ".join(pres.relation_strings()))
    lines.append(f"flag: {pres.flag}")
    return body, lines


def cmd_cohomology(args) -> tuple[dict, list[str]]:
    pair, fan = _valid_pair(_read(args.input))
    fan = fan or pair_to_fan(pair)
    cert = evenness_certificate(pair, args.max_vertices, oracle=args.oracle)
    body, lines = _ring_report(fan, cert.satisfied, args.max_degree)
    body["certificate"] = {"verdict": cert.verdict, "r_vector": list(cert.r_vector or [])}
    body["caveat"] = CAVEAT
    return body, [f"evenness certificate: {cert.verdict}"] + lines


def cmd_tower(args) -> tuple[dict, list[str]]:
    spec = io.tower_from_json(_read(args.input))
    t = tower_char_matrix(spec)
    pair = t.pair()
    rep = validate(pair)
    checks = [fibration_check(spec, i) for i in range(2, spec.k + 1)]
    lines = ["Lambda (raw):"] + [f"  {list(r)}" for r in t.raw]
    lines += ["Lambda (primitive columns):"] + [f"  {list(r)}" for r in t.primitive]
    lines.append(f"pair valid: {rep.ok}")
    for c in checks:
        lines.append(f"stage {c.stage}: ell = {c.ell}, {'genuine' if c.genuine else 'not genuine (sufficient condition fails)'}")
    return {"matrix": t.to_json(), "pair_valid": rep.ok,
            "fibration": [c.to_json() for c in checks]}, lines


def cmd_hirzebruch(args) -> tuple[dict, list[str]]:
    if args.input:
        params = io.hirzebruch_from_json(_read(args.input))
    elif args.alpha is not None:
        if args.beta is None:
            raise io.InputError("--alpha needs --beta")
        params = HirzebruchParams(args.alpha, args.beta)
    elif args.packed:
        params = hirzebruch_params(*args.packed)
    else:
        raise io.InputError("give an input file, --alpha/--beta or --packed a1 b1 a2 b2 c d")
    rep = hirzebruch(params, args.max_vertices)
    cert = rep["certificate"]
    xn = _xnames(4)
    body = {
        "alpha": rep["alpha"], "beta": rep["beta"],
        "reduced_matrix": rep["reduced_matrix"],
        "vertex_orders": rep["vertex_orders"],
        "certificate": {"verdict": cert.verdict, "r_vector": list(cert.r_vector or [])},
        "integrality_matrix": rep["integrality"].to_json(),
        "ranks": list(rep["ranks"]),
        "presentation": rep["presentation"].to_json(xn),
        "xyz_generators": rep["xyz_presentation"].to_json(xn),
    }
    lines = [f"X({rep['alpha']}, {rep['beta']})",
             f"reduced matrix: {rep['reduced_matrix']}",
             f"vertex orders: {rep['vertex_orders']}; certificate {cert.verdict}"]
    G = rep["integrality"]
    lines += [f"  sigma{''.join(str(i + 1) for i in c)}: {list(r)}" for c, r in zip(G.cones, G.rows)]
    lines.append(f"ranks: {tuple(rep['ranks'])}")
    pp = rep["xyz_presentation"]
    lines.append("Z[x,y,z] / <" + ", ".join(pp.relation_strings()) + ">  with x = alpha*x1, y = alpha*x4, z = x2*x4")
    if "tower" in rep:
        body["tower"] = rep["tower"].to_json()
        body["fibration"] = rep["fibration"].to_json()
        lines.append(f"fibration: ell = {rep['fibration'].ell}, genuine = {rep['fibration'].genuine}")
    return body, lines


COMMANDS = {
    "validate": cmd_validate,
    "local-groups": cmd_local_groups,
    "retract": cmd_retract,
    "r-vector": cmd_r_vector,
    "evenness": cmd_evenness,
    "integrality": cmd_integrality,
    "cohomology": cmd_cohomology,
    "tower": cmd_tower,
    "hirzebruch": cmd_hirzebruch,
}


def _face_arg(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad face '{s}'") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--pretty", action="store_true", help="indent JSON output")
    common.add_argument("--max-vertices", type=int, default=12, metavar="N",
                        help="exhaustive retraction search cap (default 12)")
    common.add_argument("--oracle", action="store_true", help="cross-check with naive oracles")
    common.add_argument("--max-degree", type=int, default=None, metavar="D")

    p = argparse.ArgumentParser(prog="toricorb", description="Cohomology workbench for toric orbifolds.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "hirzebruch":
            sp.add_argument("input", nargs="?", help="JSON file or inline JSON")
            sp.add_argument("--alpha", type=int)
            sp.add_argument("--beta", type=int)
            sp.add_argument("--packed", type=int, nargs=6, metavar=("A1", "B1", "A2", "B2", "C", "D"))
        else:
            sp.add_argument("input", help="JSON file or inline JSON")
        if name == "local-groups":
            sp.add_argument("--face", type=_face_arg, action="append",
                            help="1-based facet indices of a face, e.g. '1,2' (repeatable)")
        if name == "retract":
            sp.add_argument("--limit", type=int, default=1, help="number of retractions to list")
            sp.add_argument("--start", type=_face_arg, help="starting vertex as 1-based facets")
    return p


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        payload, lines = COMMANDS[args.command](args)
        code = EXIT_OK
    except io.InputError as exc:
        payload, lines, code = {"error": "input", "message": str(exc)}, [f"input error: {exc}"], EXIT_INPUT
    except _Invalid as exc:
        payload, lines, code = exc.payload, exc.lines, EXIT_INVALID
    except ValidationError as exc:
        payload, lines, code = {"error": "validation", "message": str(exc)}, [f"invalid: {exc}"], EXIT_INVALID
    except ToricError as exc:
        payload, lines, code = {"error": "validation", "message": str(exc)}, [f"error: {exc}"], EXIT_INVALID
    if args.json:
        report = {"schema_version": io.SCHEMA_VERSION, "command": args.command, "result": payload}
        print(io.dumps(report, args.pretty), file=out)
    else:
        print("\n".join(lines), file=out)
    return code


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
