"""Command line front end.

Every verb prints a single JSON document (sorted keys) on stdout, or CSV
for sweeps.  Exit status 0 on success, 1 on invalid input and 2 when an
internal consistency check fails (the package's encoded tables disagreeing
with a recomputation).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import classify as _classify
from . import divisors as _div
from . import fans as _fans
from . import polytopes as _poly
from . import toric_ideal as _ti

SCHEMA = "torhyp/1"


class CliError(Exception):
    pass


def _bound_default() -> int:
    env = os.environ.get("TORHYP_MARKOV_BOUND")
    if env is None:
        return _ti.DEFAULT_MARKOV_BOUND
    try:
        return int(env)
    except ValueError:
        raise CliError(f"TORHYP_MARKOV_BOUND must be an integer, got {env!r}")


def _emit(data: dict, pretty: bool) -> None:
    data = {"schema": SCHEMA, **data}
    print(json.dumps(data, sort_keys=True, indent=2 if pretty else None, default=_json_default))


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serialisable: {obj!r}")


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--case", help="family case id, e.g. 2.0.1")
    p.add_argument("--fan", help="path to a fan JSON file (generic input)")
    for name in ("l", "l1", "l2", "r", "a", "b", "b1", "b2", "c2"):
        p.add_argument(f"--{name}", type=int, default=None)


def _fan_from_args(args, need_catalog: bool = False) -> _fans.Fan:
    if args.case:
        params = {
            name: getattr(args, name)
            for name in _fans.PARAM_NAMES[args.case]
            if args.case in _fans.PARAM_NAMES
        } if args.case in _fans.PARAM_NAMES else {}
        if args.case not in _fans.CASE_IDS:
            raise CliError(f"unknown case {args.case!r}; choose from {', '.join(_fans.CASE_IDS)}")
        missing = [n for n, v in params.items() if v is None]
        if missing:
            raise CliError(f"case {args.case} needs --{' --'.join(missing)}")
        return _fans.family_fan(args.case, **params)
    if args.fan:
        if need_catalog:
            raise CliError("this verb needs a catalog fan (--case)")
        with open(args.fan) as fh:
            return _fans.fan_from_json_str(fh.read())
    raise CliError("give either --case with its parameters or --fan FILE")


def _divisor_from_flag(fan: _fans.Fan, text: str) -> _div.TDivisor:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"divisor must be JSON ({exc})")
    try:
        return _div.divisor_from_json(fan, data)
    except (KeyError, ValueError) as exc:
        raise CliError(str(exc))


def _coeffs_from_flag(fan: _fans.Fan, text: str) -> tuple[int, ...]:
    try:
        coeffs = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CliError("--coeffs wants a comma-separated integer list")
    return coeffs


def _class_json(cls: _div.PicClass) -> dict:
    return {"basis": list(cls.basis.labels()), "coords": list(cls.coords)}


def cmd_describe(args) -> dict:
    fan = _fan_from_args(args, need_catalog=True)
    basis = _div.picard_basis(fan)
    nef = _div.nef_generators(fan)
    eff = _div.eff_generators(fan)
    kdiv = _div.canonical_divisor(fan)
    kcls = _div.class_of(kdiv)
    ref = _div.canonical_reference_coords(fan)
    out = {
        "fan": _fans.fan_to_json(fan),
        "splitting": _fans.is_splitting(fan.collections),
        "picard": {
            "rank": basis.rank,
            "basis": list(basis.labels()),
        },
        "nef_generators": [
            {"divisor": g.label_dict(), "class": _class_json(_div.class_of(g)), "nef": _div.is_nef(g)}
            for g in nef
        ],
        "eff_generators": [
            {"divisor": g.label_dict(), "class": _class_json(_div.class_of(g))} for g in eff
        ],
        "canonical": {
            "divisor": {lab: -1 for lab in fan.ray_labels},
            "class": _class_json(kcls),
            "reference_coords": list(ref),
            "matches_reference": tuple(kcls.coords) == tuple(ref),
        },
    }
    if not out["canonical"]["matches_reference"]:
        raise _ti.InternalInconsistencyError("canonical class disagrees with the encoded table")
    return out


def cmd_nef(args) -> dict:
    fan = _fan_from_args(args)
    d = _divisor_from_flag(fan, args.D)
    res = {"divisor": d.label_dict(), "nef": _div.is_nef(d), "ample": _div.is_ample(d)}
    if res["nef"]:
        res["big"] = _div.is_big(d)
    return res


def cmd_polytope(args) -> dict:
    fan = _fan_from_args(args)
    d = _divisor_from_flag(fan, args.D)
    p = _poly.polytope_of(d)
    out = _poly.polytope_json(p)
    out["volume"] = str(_poly.volume(p))
    return out


def cmd_points(args) -> dict:
    fan = _fan_from_args(args)
    d = _divisor_from_flag(fan, args.D)
    pts = _poly.lattice_points(_poly.polytope_of(d))
    return {"lattice_points": [list(m) for m in pts], "count": len(pts)}


def cmd_faces(args) -> dict:
    fan = _fan_from_args(args)
    if args.coeffs:
        d = _classify.surface_divisor(fan, _coeffs_from_flag(fan, args.coeffs))
    elif args.D:
        d = _divisor_from_flag(fan, args.D)
    else:
        raise CliError("faces wants --coeffs or --D")
    profile = _classify.boundary_genus_profile(d)
    return {"divisor": d.label_dict(), "boundary": profile.as_json(),
            "counts": [e.interior_count for e in profile.entries]}


def cmd_idp(args) -> dict:
    fan = _fan_from_args(args)
    e = _divisor_from_flag(fan, args.E)
    ep = _divisor_from_flag(fan, args.Eprime)
    res = _poly.idp_check(e, ep)
    return {
        "E": e.label_dict(),
        "Eprime": ep.label_dict(),
        "idp": res.ok,
        "witness": list(res.witness) if res.witness else None,
    }


def cmd_markov(args) -> dict:
    fan = _fan_from_args(args, need_catalog=True)
    gale = _ti.gale_matrix(fan)
    candidate = _ti.markov_candidate(fan)
    cert = _ti.markov_verify(fan, candidate, args.bound)
    return {
        "B": gale.b.to_rows(),
        "column_labels": list(gale.column_labels),
        "row_labels": list(gale.row_labels),
        "candidate": [list(m) for m in candidate],
        "certificate": cert.as_json(),
    }


def cmd_connected_sections(args) -> dict:
    fan = _fan_from_args(args, need_catalog=True)
    e = _divisor_from_flag(fan, args.E)
    ep = _divisor_from_flag(fan, args.Eprime)
    rep = _ti.connected_sections_check(e, ep, args.bound, verify_idp=not args.skip_idp)
    return {"E": e.label_dict(), "Eprime": ep.label_dict(), **rep.as_json()}


def cmd_intersect(args) -> dict:
    fan = _fan_from_args(args, need_catalog=True)
    ds = [_divisor_from_flag(fan, t) for t in (args.d1, args.d2, args.d3)]
    prod = _poly.triple_intersection(*ds)
    return {"divisors": [d.label_dict() for d in ds], "product": prod}


def cmd_classify(args) -> dict:
    fan = _fan_from_args(args, need_catalog=True)
    coeffs = _coeffs_from_flag(fan, args.coeffs)
    verdict = _classify.derive_verdict(fan.family, coeffs, args.bound)
    out = {"case": fan.family.case_id, "params": fan.family.as_dict()}
    out.update(dict(zip(_classify.COEFF_NAMES[fan.family.case_id], coeffs)))
    out.update(verdict.as_json())
    return out


def cmd_sweep(args) -> int:
    fan = _fan_from_args(args, need_catalog=True)
    lo, hi = (int(x) for x in args.range.split(".."))
    rows = _classify.sweep(fan.family, range(lo, hi + 1), args.bound)
    names = ["case"] + list(_fans.PARAM_NAMES[fan.family.case_id]) + list(
        _classify.COEFF_NAMES[fan.family.case_id]
    ) + ["derived", "table", "agree"]
    if args.out == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=names)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    else:
        print(json.dumps({"schema": SCHEMA, "rows": list(rows)}, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="torhyp",
        description="Exact computations on the nine classified toric threefold "
        "families: fans, divisor polytopes, move-set verification, and "
        "hyperbolicity verdicts.",
    )
    top.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = top.add_subparsers(dest="verb", required=True)

    def verb(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        _add_param_flags(p)
        p.set_defaults(fn=fn)
        return p

    verb("describe", cmd_describe, help="rays, cones, collections, cones and canonical data")
    p = verb("nef", cmd_nef, help="nef/ample/big tests for a divisor")
    p.add_argument("--D", required=True, help='divisor JSON, e.g. {"coeffs": {"D_2": 1}}')
    p = verb("polytope", cmd_polytope, help="H-representation, vertices, points, volume")
    p.add_argument("--D", required=True)
    p = verb("points", cmd_points, help="lattice points of the divisor polytope")
    p.add_argument("--D", required=True)
    p = verb("faces", cmd_faces, help="per-ray minimum faces with interior counts")
    p.add_argument("--D")
    p.add_argument("--coeffs", help="surface-class coefficients, e.g. 2,4")
    p = verb("idp", cmd_idp, help="integer decomposition check for a nef pair")
    p.add_argument("--E", required=True)
    p.add_argument("--Eprime", required=True)
    p = verb("markov", cmd_markov, help="verify the reference move set up to a bound")
    p.add_argument("--bound", type=int, default=None)
    p = verb("connected-sections", cmd_connected_sections, help="sufficient criterion report")
    p.add_argument("--E", required=True)
    p.add_argument("--Eprime", required=True)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--skip-idp", action="store_true")
    p = verb("intersect", cmd_intersect, help="triple intersection number")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--d3", required=True)
    p = verb("classify", cmd_classify, help="derived verdict and reference-table comparison")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--bound", type=int, default=None)
    p = verb("sweep", cmd_sweep, help="grid comparison, CSV or JSON")
    p.add_argument("--range", default="0..8")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--bound", type=int, default=None)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "bound", None) is None and hasattr(args, "bound"):
            args.bound = _bound_default()
        if args.verb == "sweep":
            return cmd_sweep(args)
        out = args.fn(args)
        _emit(out, args.pretty)
        return 0
    except (CliError, _fans.ParameterError, ValueError) as exc:
        _emit({"error": str(exc)}, getattr(args, "pretty", False))
        return 1
    except _ti.InternalInconsistencyError as exc:
        _emit({"internal_error": str(exc)}, getattr(args, "pretty", False))
        return 2


if __name__ == "__main__":
    sys.exit(main())
