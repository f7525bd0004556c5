"""Batch command line front end.

Subcommands: analyze, polymology, sector, qsr, correlator, verify.  Reports
are deterministic (stable ordering, fixed seeds, no timestamps); text and
JSON renderings carry the same content.  Exit codes: 0 success, 1 validation
error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import cache
from .fan import FanError
from .lattice import LatticeError, beta_K, effective_cones_coincide, find_anchor
from .poly import ParseError, PolyError, Polynomial, parse_polynomial
from .deform import (DeformError, d_symbols, local_freeness_check, polymology,
                     sr_ideal)
from .sectors import SectorError, sector
from .quantum import (QuantumError, UnsupportedNovikovShape, correlator_series,
                      effective_window, novikov_series_str, qsr_generators,
                      quantum_groebner, verify_qc_relation, _mori_change_of_basis)
from .model import Model, ModelError, load_model

SCHEMA = "qsheaf-report/1"

VALIDATION_ERRORS = (FanError, LatticeError, PolyError, DeformError,
                     SectorError, QuantumError, ModelError, ValueError)


def _frac(x: Fraction) -> str:
    return str(x)


def _beta_dict(cl, beta) -> dict:
    d = {"coords": list(beta.coords), "d": list(beta.d)}
    mori = cl.mori_coordinates(beta)
    if mori is not None:
        d["mori"] = list(mori)
    return d


def _display_poly(cl, p: Polynomial) -> str:
    """Render with Novikov exponents in Mori coordinates when possible."""
    if p.nq == 0 or not p.has_q():
        return p.to_str()
    try:
        to_mori, _ = _mori_change_of_basis(cl)
    except UnsupportedNovikovShape:
        return p.to_str(q_names=[f"qc{j + 1}" for j in range(p.nq)])
    return p.map_q(to_mori, p.nq).to_str()


def _beta_str(cl, beta) -> str:
    mori = cl.mori_coordinates(beta)
    base = f"d={list(beta.d)}"
    if mori is not None:
        base += f" mori={list(mori)}"
    return base


# ---- subcommands -----------------------------------------------------------

def _psi_legend(cl) -> list:
    """Each Picard basis generator as a combination of divisor symbols."""
    legend = []
    for k in range(cl.pic_rank):
        chunks = []
        for rho in range(cl.fan.n_rays):
            c = cl._section[rho][k]
            if not c:
                continue
            body = f"D{rho + 1}" if abs(c) == 1 else f"{abs(c)}*D{rho + 1}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        legend.append({"symbol": f"psi{k + 1}",
                       "in_divisors": " ".join(chunks) or "0"})
    return legend


def cmd_analyze(model: Model, args) -> tuple:
    cl = model.cl
    fan = model.fan
    trials = args.trials if args.trials is not None else model.option("trials")
    verdict = local_freeness_check(cl, model.deformation, trials=trials)
    coincide = effective_cones_coincide(cl)
    bk_rows = []
    for K in cl.primitive_collections:
        bk, kminus = beta_K(cl, K)
        bk_rows.append({
            "collection": list(K.edges),
            "beta": _beta_dict(cl, bk),
            "kminus": [{"class_index": c.index, "members": list(c.members),
                        "multiplicity": m} for c, m in kminus],
        })
    report = {
        "schema": SCHEMA,
        "command": "analyze",
        "fan": {"rank": fan.rank, "rays": [list(v) for v in fan.rays],
                "max_cones": [list(c) for c in fan.max_cones]},
        "pic_rank": cl.pic_rank,
        "divisor_classes": [{"ray": rho, "symbol": f"D{rho + 1}",
                             "class": list(cl.divisor_classes[rho])}
                            for rho in range(fan.n_rays)],
        "picard_basis": _psi_legend(cl),
        "equiv_classes": [{"index": c.index, "members": list(c.members),
                           "class": list(c.vec)} for c in cl.equiv],
        "primitive_collections": [list(K.edges) for K in cl.primitive_collections],
        "mori_generators": [{"symbol": f"q{j + 1}", "coords": list(g.coords),
                             "d": list(g.d), "c1": g.c1()}
                            for j, g in enumerate(cl.mori)],
        "beta_K": bk_rows,
        "effective_cones_coincide": coincide,
        "deformation": {"is_tangent": model.deformation.is_tangent,
                        "entries": [{"rho": e.rho, "m": list(e.m),
                                     "coeff": e.coeff.to_str(),
                                     "coeff_input": e.source}
                                    for e in model.deformation.entries]},
        "local_freeness": {"passed": verdict.passed,
                           "witness": None if verdict.witness is None
                           else [_frac(x) for x in verdict.witness],
                           "trials": trials, "note": verdict.note},
    }
    lines = [
        f"fan: rank {fan.rank}, {fan.n_rays} rays, {len(fan.max_cones)} maximal cones",
        f"pic rank: {cl.pic_rank}",
    ]
    for row in report["divisor_classes"]:
        lines.append(f"  [{row['symbol']}] = {row['class']}")
    lines.append("picard basis:")
    for row in report["picard_basis"]:
        lines.append(f"  {row['symbol']} = {row['in_divisors']}")
    lines.append("equivalence classes:")
    for c in report["equiv_classes"]:
        lines.append(f"  c{c['index']}: rays {c['members']} class {c['class']}")
    lines.append("primitive collections:")
    for pc in report["primitive_collections"]:
        lines.append(f"  {pc}")
    lines.append("mori generators:")
    for g in report["mori_generators"]:
        lines.append(f"  {g['symbol']}: d={g['d']} c1={g['c1']}")
    lines.append("beta_K:")
    for row in bk_rows:
        km = ", ".join(f"c{e['class_index']}^{e['multiplicity']}" for e in row["kminus"])
        lines.append(f"  K={row['collection']}: d={row['beta']['d']}"
                     + (f" [K-]: {km}" if km else ""))
    lines.append(f"beta_K cone == wall-curve cone: {coincide}")
    lines.append(f"deformation: {'tangent bundle' if model.deformation.is_tangent else 'deformed'}"
                 f" ({len(model.deformation.entries)} entries)")
    if not model.deformation.is_tangent:
        for e in model.deformation.entries:
            src = f"  (input: {e.source})" if e.source else ""
            lines.append(f"  rho={e.rho} m={list(e.m)}: {e.coeff.to_str()}{src}")
    lines.append(f"local freeness ({trials} trials): "
                 + ("pass (probabilistic)" if verdict.passed
                    else f"FAIL witness={report['local_freeness']['witness']}"))
    return lines, report, 0


def cmd_polymology(model: Model, args) -> tuple:
    cl = model.cl
    result = polymology(model.lin)
    ideal = sr_ideal(model.lin)
    report = {
        "schema": SCHEMA,
        "command": "polymology",
        "sr_generators": [g.to_str() for g in ideal.generators],
        "groebner_basis": [g.to_str() for g in result.gb.polys],
        "dims": list(result.dims),
        "generator": result.generator.to_str(),
        "h_vector": list(model.fan.h_vector()),
        "divisor_classes": [{"symbol": f"D{rho + 1}",
                             "class": list(cl.divisor_classes[rho])}
                            for rho in range(model.fan.n_rays)],
    }
    lines = ["stanley-reisner generators:"]
    lines += [f"  {s}" for s in report["sr_generators"]]
    lines.append("groebner basis:")
    lines += [f"  {s}" for s in report["groebner_basis"]]
    lines.append("graded dims: " + ",".join(str(d) for d in result.dims))
    lines.append(f"top-degree generator: {report['generator']}")
    lines.append("h-vector: " + ",".join(str(h) for h in report["h_vector"]))
    return lines, report, 0


def _parse_beta(model: Model, text: str):
    cl = model.cl
    parts = [p for p in text.split(",") if p.strip() != ""]
    coeffs = [int(p) for p in parts]
    if len(coeffs) != len(cl.mori):
        raise ModelError(
            f"--beta needs {len(cl.mori)} Mori coordinates, got {len(coeffs)}")
    beta = cl.zero_curve
    for a, g in zip(coeffs, cl.mori):
        beta = beta + a * g
    return beta


def cmd_sector(model: Model, args) -> tuple:
    if not args.beta:
        raise ModelError("sector requires --beta <comma-separated Mori coordinates>")
    cl = model.cl
    beta = _parse_beta(model, args.beta)
    sec = sector(model.lin, beta)
    report = {
        "schema": SCHEMA,
        "command": "sector",
        "beta": _beta_dict(cl, beta),
        "enhanced_edges": [list(e) for e in sec.enhanced_edges],
        "degenerate_edges": [list(e) for e in sec.degenerate],
        "n_beta": sec.n_beta,
        "nonempty": sec.nonempty,
        "effective": sec.effective,
        "ideal_generators": [g.to_str() for g in sec.ideal_gens],
    }
    lines = [
        f"sector beta: {_beta_str(cl, beta)}",
        f"enhanced edges ({len(sec.enhanced_edges)}): "
        + " ".join(f"({r},{i})" for r, i in sec.enhanced_edges),
        f"degenerate edges: " + (" ".join(f"({r},{i})" for r, i in sec.degenerate) or "none"),
        f"n_beta: {sec.n_beta}",
        f"nonempty: {sec.nonempty}",
        f"effective: {sec.effective}",
        "ideal generators:",
    ]
    lines += [f"  {s}" for s in report["ideal_generators"]]
    return lines, report, 0


def cmd_qsr(model: Model, args) -> tuple:
    cl = model.cl
    rels = qsr_generators(model.lin)
    rows = []
    for rel in rels:
        rows.append({
            "collection": list(rel.collection.edges),
            "beta_K": _beta_dict(cl, rel.beta_k),
            "lhs": rel.lhs.to_str(),
            "rhs": _display_poly(cl, rel.rhs),
            "difference": _display_poly(cl, rel.difference),
            "degree": rel.degree(),
        })
    report = {"schema": SCHEMA, "command": "qsr", "relations": rows}
    lines = ["quantum stanley-reisner relations:"]
    for rel, row in zip(rels, rows):
        mori = cl.mori_coordinates(rel.beta_k)
        if mori is not None:
            qsym = "*".join(f"q{j + 1}" + (f"^{e}" if e > 1 else "")
                            for j, e in enumerate(mori) if e) or "1"
        else:
            qsym = "q^" + str(list(rel.beta_k.coords))
        structure = " * ".join([qsym] + [f"Qc{c.index}" + (f"^{m}" if m > 1 else "")
                                         for c, m in rel.kminus])
        lines.append(f"  K={row['collection']} (degree {row['degree']}): "
                     f"Q_K = {structure}")
        lines.append(f"    Q_K = {row['lhs']}")
        lines.append(f"    rhs = {row['rhs']}")
    return lines, report, 0


def cmd_correlator(model: Model, args) -> tuple:
    if not args.poly:
        raise ModelError("correlator requires --poly <expression>")
    cl = model.cl
    syms = d_symbols(cl)
    p = parse_polynomial(args.poly, syms)
    if p.has_q():
        raise ModelError("correlator insertions must not contain Novikov symbols")
    max_degree = args.max_degree if args.max_degree is not None else model.option("max_c1_degree")
    rep = correlator_series(model.lin, p, max_degree,
                            anchor_bound=model.option("anchor_bound"))
    rows = [{"beta": _beta_dict(cl, r.beta), "scalar": _frac(r.scalar),
             "reason": r.reason} for r in rep.rows]
    series = novikov_series_str(cl, rep.series)
    report = {
        "schema": SCHEMA,
        "command": "correlator",
        "poly": p.to_str(),
        "anchor": _beta_dict(cl, rep.anchor),
        "generator": rep.generator.to_str(),
        "sectors": rows,
        "series": series,
    }
    lines = [
        f"insertion: {report['poly']}",
        f"anchor: {_beta_str(cl, rep.anchor)}",
        f"anchor generator: {report['generator']} (normalization reference)",
        "sectors:",
    ]
    for r in rep.rows:
        lines.append(f"  beta {_beta_str(cl, r.beta)}: {r.scalar} [{r.reason}]")
    lines.append(f"series: {series}")
    return lines, report, 0


def cmd_verify(model: Model, args) -> tuple:
    cl = model.cl
    grid = args.grid if args.grid is not None else 6
    if args.all:
        window = effective_window(cl, grid, coeff_bound=grid)
    else:
        window = tuple(sorted({cl.zero_curve, *cl.mori}, key=lambda b: b.d))
        window = tuple(b for b in window if cl.is_effective(b))
    cases = []
    for K in cl.primitive_collections:
        bk, _ = beta_K(cl, K)
        for beta in window:
            cases.append((K, bk, beta))
    rng = random.Random(20240)
    expand_idx = set()
    if args.all and cases:
        sample = min(10, len(cases))
        expand_idx = set(rng.sample(range(len(cases)), sample))
    rows = []
    all_ok = True
    for idx, (K, bk, beta) in enumerate(cases):
        anchor = find_anchor(cl, [beta, beta + bk],
                             bound=model.option("anchor_bound"))
        ok = verify_qc_relation(model.lin, K, beta, anchor)
        routes = ["exponent"]
        if idx in expand_idx:
            ok = ok and verify_qc_relation(model.lin, K, beta, anchor, route="expand")
            routes.append("expand")
        all_ok = all_ok and ok
        rows.append({"collection": list(K.edges), "beta": _beta_dict(cl, beta),
                     "anchor": _beta_dict(cl, anchor),
                     "routes": routes, "passed": ok})
    report = {
        "schema": SCHEMA,
        "command": "verify",
        "grid": grid,
        "cases": rows,
        "all_passed": all_ok,
    }
    lines = [f"verifying quantum relations over {len(window)} sector(s), grid {grid}:"]
    for row in rows:
        status = "pass" if row["passed"] else "FAIL"
        lines.append(f"  K={row['collection']} beta d={row['beta']['d']} "
                     f"[{'+'.join(row['routes'])}]: {status}")
    lines.append("result: " + ("all relations verified" if all_ok else "FAILURES detected"))
    return lines, report, 0 if all_ok else 2


COMMANDS = {
    "analyze": cmd_analyze,
    "polymology": cmd_polymology,
    "sector": cmd_sector,
    "qsr": cmd_qsr,
    "correlator": cmd_correlator,
    "verify": cmd_verify,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsheaf",
        description="exact quantum sheaf cohomology of toric tangent-bundle deformations")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("model", help="path to a JSON model file")
    parser.add_argument("--beta", help="curve class as comma-separated Mori coordinates")
    parser.add_argument("--poly", help="insertion polynomial in D-symbols")
    parser.add_argument("--max-degree", type=int, dest="max_degree",
                        help="bound on c1-degree for series enumeration")
    parser.add_argument("--grid", type=int, help="c1-degree bound for verify")
    parser.add_argument("--all", action="store_true",
                        help="verify over the full sector window")
    parser.add_argument("--trials", type=int, help="local-freeness sample count")
    parser.add_argument("--no-cache", action="store_true", dest="no_cache",
                        help="disable the persistent Groebner cache")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


def run(argv) -> int:
    args = make_parser().parse_args(argv)
    if not args.no_cache:
        try:
            cache.set_store(cache.FileCache())
        except OSError:
            cache.set_store(None)
    else:
        cache.set_store(None)
    try:
        model = load_model(args.model)
        lines, report, code = COMMANDS[args.command](model, args)
    except ParseError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    except VALIDATION_ERRORS as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    finally:
        cache.set_store(None)
    if args.format == "json":
        print(json.dumps(report, indent=2, default=_json_default))
    else:
        print("\n".join(lines))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
