"""Command-line front end: ``chow-census <count|bounds|chow|census|verify> ...``.

Exit status: 0 success, 1 internal error, 2 invalid input, 3 a verified
bound failed (``verify`` only).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

from . import bounds, census, chow, forms, qcount
from .bounds import BoundDomainError
from .census import CensusError
from .chow import ChowError
from .forms import FormError
from .gf import FieldError, field_of_size

SCHEMA_VERSION = census.SCHEMA_VERSION

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_BOUND_FAILED = 0, 1, 2, 3
VALIDATION_ERRORS = (BoundDomainError, CensusError, ChowError, FormError, FieldError, ValueError)

COUNT_TARGETS = ("proj", "grassmannian", "plane-curves", "fiber", "planar", "smooth-conics")
BOUND_TARGETS = ("dims", "dim", "codim", "g", "degree", "rel-degree", "calc", "prob-reducible",
                 "nonplanar", "rel-irr", "weil", "plane-reducible", "counts")
CHOW_TARGETS = ("line", "support", "field", "galois", "norm", "factor")
CENSUS_TARGETS = ("classify", "sample", "points", "planar", "form")


class UsageError(ValueError):
    pass


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} {args.target or ''}".strip()
                         + " requires " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return [getattr(args, n) for n in names]


def _count(n: qcount.ExactCount, **inputs) -> dict:
    return {"formula_id": n.formula_id, "inputs": inputs, "value": int(n)}


# -- subcommands --------------------------------------------------------------------

def cmd_count(args) -> dict:
    t = args.target
    if t == "proj":
        r, q = _need(args, "r", "q")
        return _count(qcount.proj_space_count(r, q), r=r, q=q)
    if t == "grassmannian":
        k, r, q = _need(args, "k", "r", "q")
        return _count(qcount.grassmannian_count(k, r, q), k=k, r=r, q=q)
    if t == "plane-curves":
        d, q = _need(args, "d", "q")
        return _count(qcount.plane_curve_space_count(d, q), d=d, q=q)
    if t == "fiber":
        r, q = _need(args, "r", "q")
        return _count(qcount.line_power_fiber(r, q), r=r, q=q)
    if t == "planar":
        d, r, q = _need(args, "d", "r", "q")
        return _count(qcount.planar_curves_count(d, r, q), d=d, r=r, q=q)
    q, = _need(args, "q")
    return _count(qcount.smooth_conic_count(q), q=q)


def cmd_bounds(args) -> dict:
    t = args.target
    if t == "dims":
        d, r = _need(args, "d", "r")
        lines, planar = bounds.component_dims(d, r)
        return {"inputs": {"d": d, "r": r},
                "lines": {"value": lines, "formula_id": "lines_locus_dimension"},
                "planar": {"value": planar, "formula_id": "planar_locus_dimension"}}
    if t == "dim":
        d, r = _need(args, "d", "r")
        return bounds.chow_dim(d, r).to_dict()
    if t == "codim":
        d, r = _need(args, "d", "r")
        return bounds.reducible_codim(d, r).to_dict()
    if t == "g":
        d, r = _need(args, "d", "r")
        return {"formula_id": "grassmannian_piece_dimension", "inputs": {"d": d, "r": r},
                "value": bounds.g_coeff(d, r)}
    if t == "degree":
        d, r = _need(args, "d", "r")
        res = bounds.chow_degree_bounds(d, r)
        return {"inputs": {"d": d, "r": r},
                "restricted": res["restricted"].to_dict(), "hat": res["hat"].to_dict(),
                "full": res["full"].to_dict(),
                "validity_flags": {"restricted_in_domain": res["restricted_in_domain"]}}
    if t == "rel-degree":
        ell, d, r = _need(args, "ell", "d", "r")
        return {"inputs": {"ell": ell, "d": d, "r": r}, **bounds.rel_irr_degree_bound(ell, d, r).to_dict()}
    if t == "calc":
        kind, values = _need(args, "kind", "values")
        nums = [int(v) for v in values.split(",") if v.strip()]
        sp = bounds.degree_bound_calculator(kind, *nums)
        return {"inputs": {"kind": kind, "values": nums}, "formula_id": sp.formula_id,
                "value": int(sp.exact())}
    if t == "prob-reducible":
        d, r, q = _need(args, "d", "r", "q")
        return bounds.prob_reducible_interval(d, r, q).to_dict()
    if t == "nonplanar":
        d, r, q = _need(args, "d", "r", "q")
        return {"inputs": {"d": d, "r": r, "q": q}, **bounds.nonplanar_fraction_bound(d, r, q).to_dict()}
    if t == "rel-irr":
        d, r, q = _need(args, "d", "r", "q")
        return bounds.rel_irr_interval(d, r, q).to_dict()
    if t == "weil":
        d, r, q = _need(args, "d", "r", "q")
        return bounds.avg_weil_bounds(d, r, q).to_dict()
    if t == "plane-reducible":
        d, q = _need(args, "d", "q")
        return bounds.plane_reducible_interval(d, q).to_dict()
    d, r, q = _need(args, "d", "r", "q")
    return bounds.count_bounds(d, r, q).to_dict()


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            text = " ".join(line.split("#", 1)[0] for line in fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not text.strip():
        raise UsageError(f"{path} is empty")
    return text


def _point_list(points) -> list:
    return [list(p) for p in sorted(points)]


def cmd_chow(args) -> dict:
    t = args.target
    if t == "line":
        pts, q = _need(args, "points", "q")
        field = field_of_size(q)
        rows = [[int(x) for x in part.split(",")] for part in pts.split(";")]
        F = chow.line_chow_form(chow.Line(field, rows))
        return {"formula_id": "line_chow_form", "inputs": {"points": rows, "q": q},
                "chow_form": F.to_text()}
    path, = _need(args, "form_file")
    F = chow.ChowForm.from_text(_read_text(path))
    inputs = {"form": F.to_text()}
    if t == "support":
        s = args.ext or 1
        pts = chow.support_points(F, s)
        return {"formula_id": "chow_support", "inputs": {**inputs, "ext": s},
                "count": {"value": len(pts), "formula_id": "chow_support"}, "points": _point_list(pts)}
    if t == "field":
        K = chow.field_of_definition(F)
        return {"formula_id": "field_of_definition", "inputs": inputs, "q": {"value": K.q,
                "formula_id": "field_of_definition"}}
    if t == "galois":
        power = args.ext or 1
        return {"formula_id": "galois_image", "inputs": {**inputs, "power": power},
                "chow_form": chow.galois_image(F, power).to_text()}
    if t == "norm":
        q, = _need(args, "q")
        N = chow.norm_map(F, field_of_size(q))
        return {"formula_id": "norm_map", "inputs": {**inputs, "q": q}, "chow_form": N.to_text()}
    cyc = chow.factor_line_cycle(F)
    return {"formula_id": "line_cycle_factorization", "inputs": inputs,
            "components": [{"line": [list(r) for r in L.rows], "multiplicity": m}
                           for L, m in cyc.components]}


def cmd_census(args):
    t = args.target
    workers = args.workers or 1
    if t == "classify":
        d, q = _need(args, "d", "q")
        if args.sample:
            return census.sample_census(d, q, args.sample, args.seed or 0).to_dict()
        return census.classify_census(d, q, workers).to_dict()
    if t == "sample":
        d, q, n = _need(args, "d", "q", "sample")
        return census.sample_census(d, q, n, args.seed or 0).to_dict()
    if t == "points":
        d, q = _need(args, "d", "q")
        stats = census.point_statistics(d, q, args.filter, workers)
        return stats
    if t == "planar":
        d, r, q = _need(args, "d", "r", "q")
        return _count(census.planar_in_Pr_census(d, r, q), d=d, r=r, q=q)
    path, = _need(args, "form_file")
    f = forms.HomogeneousForm.from_text(_read_text(path))
    fac = forms.factor(f)
    out = {"formula_id": "form_report", "inputs": {"form": f.to_text()},
           "class": str(forms.classify(f)),
           "factors": [{"factor": g.to_text(), "multiplicity": e} for g, e in fac.factors]}
    if f.n == 3:
        out["points"] = {"value": forms.point_count(f, args.ext or 1), "formula_id": "projective_zeros"}
    return out


def cmd_verify(args):
    workers = args.workers or 1
    if args.suite:
        return census.run_suite(args.suite, workers, args.d, args.q)
    if args.d is None and args.r is None and args.q is None:
        return census.run_suite("all", workers)
    d, r, q = _need(args, "d", "r", "q")
    return census.verify_bounds(d, r, q, workers)


COMMANDS = {"count": cmd_count, "bounds": cmd_bounds, "chow": cmd_chow, "census": cmd_census,
            "verify": cmd_verify}
TARGETS = {"count": COUNT_TARGETS, "bounds": BOUND_TARGETS, "chow": CHOW_TARGETS,
           "census": CENSUS_TARGETS, "verify": ()}


# -- parsing and output ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="chow-census",
        description="Counts, bounds, Chow forms and plane-curve censuses over finite fields.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("target", nargs="?", help="what to compute, e.g. 'count planar', 'bounds codim'")
    for name in ("d", "r", "q", "k", "ell", "ext", "sample", "seed", "workers"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--form-file", dest="form_file")
    p.add_argument("--no-timestamp", action="store_true")
    p.add_argument("--suite", help="verify: named suite (lemma-counting, plane-reducible, census, "
                                   "weil, codim, g-identities, chow-support, all)")
    p.add_argument("--filter", choices=[k.value for k in forms.IrreducibilityKind])
    p.add_argument("--points", help="chow line: two spanning points, e.g. '1,0,0,0;0,1,0,0'")
    p.add_argument("--kind", help="bounds calc: BEZOUT, HEINTZ_SCHNORR, COMPONENTS_CODIM or IMAGE")
    p.add_argument("--values", help="bounds calc: comma-separated integer inputs")
    p.add_argument("--output", help="write the report here instead of standard output")
    return p


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, rows)
    else:
        rows.append((prefix, obj))


def render(result, args) -> str:
    """Serialize a command result in the requested format (LF-terminated)."""
    if isinstance(result, census.PointStats):
        if args.format == "csv":
            return result.to_csv()
        payload = result.to_dict()
    elif isinstance(result, census.BoundCheckReport):
        if args.format == "text":
            return "\n".join(result.lines()) + "\n"
        payload = result.to_dict()
    else:
        payload = result
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "target": args.target,
               "result": payload}
        if not args.no_timestamp:
            doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n"
    rows: list = []
    _flatten("", payload, rows)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def _validate(args):
    targets = TARGETS[args.command]
    if targets and args.target not in targets:
        raise UsageError(f"{args.command} needs a target from: {', '.join(targets)}")
    if not targets and args.target is not None:
        raise UsageError(f"{args.command} takes no target, got {args.target!r}")
    for name in ("d", "r", "q", "k", "ell", "ext", "sample", "workers"):
        v = getattr(args, name)
        if v is not None and v < 0:
            raise UsageError(f"--{name} must be nonnegative")
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        _validate(args)
        result = COMMANDS[args.command](args)
    except VALIDATION_ERRORS as exc:
        print(f"chow-census: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        print(f"chow-census: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = render(result, args)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if isinstance(result, census.BoundCheckReport) and result.failed:
        return EXIT_BOUND_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
