"""Command-line front end: ``burgers-lab <command> ...``.

All output is JSON (sorted keys, ``"schema": "1"``).  Exit codes: 0 pass,
1 verification failure, 2 configuration error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import catalog, evolve as evolve_mod, lie_algebra as la, reduce as red, sym_group as sg, verify
from .errors import BurgersLabError, ConfigError
from .fields import Grid, Point

SCHEMA = "1"
EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# helpers


def _plain(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return str(obj)


def emit(payload, out=None):
    payload = dict(payload)
    payload["schema"] = SCHEMA
    text = json.dumps(_plain(payload), sort_keys=True, indent=2, allow_nan=False)
    (out or sys.stdout).write(text + "\n")


def _json_arg(text, what):
    if text is None:
        return None
    if isinstance(text, (dict, list)):
        return text
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what}: invalid JSON ({exc})") from exc


def _grid(spec, fld=None, n=(3, 7, 7)):
    if spec is None:
        box = (fld.meta.get("box") if fld is not None else None) or catalog.BOX_STD
        return catalog.default_grid(box, n)
    if isinstance(spec, dict) and all(k in spec for k in "txy") and all(len(spec[k]) == 2 for k in "txy"):
        return catalog.default_grid(spec, n)
    return Grid.from_spec(spec)


def _make(fid, params, box, instance=0):
    """Family instance.  Missing params or box fall back to the family's default set ``instance``."""
    defaults = catalog.family(fid).defaults
    if not 0 <= instance < len(defaults):
        raise ConfigError(f"{fid} has {len(defaults)} default instances")
    p0, b0 = defaults[instance]
    return catalog.make(fid, p0 if params is None else params, b0 if box is None else box)


def _box_from(args_box, fld):
    box = _json_arg(args_box, "--box")
    if box is None:
        box = fld.meta.get("box") or catalog.BOX_STD
    for k in ("x", "y"):
        if k not in box or len(box[k]) != 2:
            raise ConfigError(f"box needs a two-element {k!r} range")
    return box


# ---------------------------------------------------------------------------
# run configuration


CONFIG_KEYS = {
    "catalog-verify-all": {"families", "tol", "grid_n", "threads", "seed"},
    "group-sweep": {"families", "n", "seed", "identity", "grid_n", "factor", "threads", "elements"},
}


def load_config(path, command):
    """JSON run configuration; unknown keys are rejected before anything runs."""
    if path is None:
        return {}
    cfg = _json_arg("@" + path if not path.startswith("@") else path, "--config")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    cfg = {k: v for k, v in cfg.items() if k != "schema"}
    allowed = CONFIG_KEYS[command]
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}; allowed: {sorted(allowed)}")
    return cfg


def _merge(args, cfg, key, default=None):
    val = getattr(args, key, None)
    if val is None or val == []:
        val = cfg.get(key, default)
    return default if val is None else val


# ---------------------------------------------------------------------------
# commands


def cmd_algebra(args):
    if args.what == "table":
        table = la.table_as_names()
        out = {f"[{a},{b}]": {k: str(v) for k, v in coeffs.items()} for (a, b), coeffs in table.items()}
        emit({"command": "algebra table", "basis": list(la.BASIS_NAMES), "nonzero_brackets": out})
        return EXIT_PASS
    dims = [args.dim] if args.dim else [1, 2]
    rows, ok = [], True
    for d in dims:
        for s in la.subalgebras(d):
            samples = la.sample_parameters(s, n=5, seed=args.seed)
            closed = [la.subalgebra_closure_check(s, p) for p in samples]
            ok &= all(closed)
            row = s.describe()
            row.update({"closure_checked": len(closed), "closed": all(closed)})
            rows.append(row)
    emit({"command": "algebra subalgebras", "subalgebras": rows, "verdict": "pass" if ok else "fail"})
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_family(args):
    if args.what == "list":
        emit({"command": "family list", "families": catalog.list_families()})
        return EXIT_PASS
    if not args.family:
        raise ConfigError("family eval needs --family")
    params = _json_arg(args.params, "--params")
    box = _json_arg(args.box, "--box")
    fld = _make(args.family, params, box, args.instance)
    if args.point:
        try:
            t, x, y = (float(v) for v in args.point.split(","))
        except ValueError:
            raise ConfigError("--point must be t,x,y") from None
        p = Point(t, x, y)
        arr = fld.jets(np.float64(t), np.float64(x), np.float64(y))
        res = verify.residual_arrays(arr)
        emit({"command": "family eval", "family": args.family, "point": [t, x, y],
              "u": float(arr[0, 0]), "v": float(arr[1, 0]), "singular": fld.is_singular(p),
              "R1": float(res["R1"]), "R2": float(res["R2"]), "meta": fld.meta})
        return EXIT_PASS
    grid = _grid(_json_arg(args.grid, "--grid"), fld)
    if args.csv:
        from .fields import export_csv
        n = export_csv(fld, grid, args.csv, residuals=args.residuals)
        emit({"command": "family eval", "family": args.family, "csv": args.csv, "rows": n})
        return EXIT_PASS
    T, X, Y, masked = grid.points(fld)
    arr = verify.evaluate_jets(fld, T, X, Y)
    emit({"command": "family eval", "family": args.family, "n_masked": masked,
          "t": T, "x": X, "y": Y, "u": arr[0, 0], "v": arr[1, 0]})
    return EXIT_PASS


def cmd_verify(args):
    params = _json_arg(args.params, "--params")
    box = _json_arg(args.box, "--box")
    fld = _make(args.family, params, box, args.instance)
    grid = _grid(_json_arg(args.grid, "--grid"), fld)
    rep = verify.residual_report(fld, grid, args.system, args.tol)
    out = rep.to_json()
    out.update({"command": "verify", "family": args.family, "params": params,
                "flags": fld.meta.get("flags")})
    emit(out)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_reduce(args):
    spec = _json_arg(args.solution, "--solution")
    if spec is None:
        items = red.controls(args.ansatz)
    else:
        if not isinstance(spec, dict):
            raise ConfigError("--solution must be a JSON object")
        items = [red.solution_from_spec(args.ansatz, spec)]
    reports = [red.consistency_check(rs, n=args.n, seed=args.seed, tol=args.tol, expect=e) for rs, e in items]
    ok = all(r.passed for r in reports)
    emit({"command": "reduce check", "ansatz": args.ansatz, "reports": [r.to_json() for r in reports],
          "verdict": "pass" if ok else "fail"})
    return EXIT_PASS if ok else EXIT_FAIL


MASK_REL = 1e-3     # grid points with |c t + d| below this (relative) are masked, not failed


def _transformed_residual(g, fld, T, X, Y):
    """Max residual of g.fld at the images of (T, X, Y); points near c t + d = 0 are masked."""
    scale = max(abs(g.c) * float(np.max(np.abs(T), initial=0.0)), abs(g.d), 1.0)
    keep = np.abs(sg.denominator(g, T)) > MASK_REL * scale
    Ti, Xi, Yi = sg.act_points(g, T[keep], X[keep], Y[keep])
    F = sg.act_field(g, fld)
    arr = verify.evaluate_jets(F, Ti, Xi, Yi)
    res = verify.residual_arrays(arr)
    worst = float(max(np.max(np.abs(res["R1"]), initial=0.0), np.max(np.abs(res["R2"]), initial=0.0)))
    return worst, int((~keep).sum())


def cmd_group(args):
    if args.what == "apply":
        if not args.family:
            raise ConfigError("group apply needs --family")
        if args.element and len(args.element) > 1:
            raise ConfigError("group apply takes a single --element")
        g = sg.GroupElement.from_json(_json_arg(args.element[0], "--element") if args.element else {})
        params = _json_arg(args.params, "--params")
        fld = _make(args.family, params, _json_arg(args.box, "--box"), args.instance)
        grid = _grid(_json_arg(args.grid, "--grid"), fld)
        T, X, Y, _ = grid.points(fld)
        worst, masked = _transformed_residual(g, fld, T, X, Y)
        tol = float(fld.meta.get("tolerance", 1e-10))
        ok = worst <= args.factor * tol
        emit({"command": "group apply", "family": args.family, "element": g.to_json(),
              "max_residual": worst, "n_masked": masked, "tolerance": args.factor * tol,
              "verdict": "pass" if ok else "fail"})
        return EXIT_PASS if ok else EXIT_FAIL
    cfg = load_config(args.config, "group-sweep")
    elements = [sg.GroupElement.from_json(_json_arg(e, "--element")) for e in args.element or []]
    elements += [sg.GroupElement.from_json(e) for e in cfg.get("elements", [])]
    return group_sweep(families=_merge(args, cfg, "families", []), n=int(_merge(args, cfg, "n", 20)),
                       elements=elements or None,
                       seed=int(_merge(args, cfg, "seed", 42)), identity=bool(_merge(args, cfg, "identity", False)),
                       grid_n=int(_merge(args, cfg, "grid_n", 5)), factor=float(_merge(args, cfg, "factor", 10.0)))


def group_sweep(families=(), n=20, seed=42, identity=False, grid_n=5, factor=10.0, elements=None,
                emit_out=True):
    """Group elements applied to default family instances; residual preservation table.

    Without explicit ``elements`` each instance gets ``n`` random elements whose
    c t + d keeps away from zero on the instance's time range, plus the mirror.
    """
    fids = list(families) or list(catalog.FAMILIES)
    for fid in fids:
        catalog.family(fid)
    rng = np.random.default_rng(seed)
    rows, ok = [], True
    for fid in fids:
        fam = catalog.family(fid)
        for k, (p, box) in enumerate(fam.defaults):
            fld = fam.make(p, box)
            T, X, Y, _ = catalog.default_grid(box, (3, grid_n, grid_n)).points(fld)
            if identity:
                els = [sg.IDENTITY]
            elif elements:
                els = list(elements)
            else:
                els = [sg.random_element(rng, box["t"]) for _ in range(n)] + [sg.MIRROR]
            worst, masked = 0.0, 0
            for g in els:
                w, m = _transformed_residual(g, fld, T, X, Y)
                worst, masked = max(worst, w), masked + m
            tol = factor * float(fld.meta.get("tolerance", fam.tolerance))
            passed = bool(worst <= tol)
            ok &= passed
            rows.append({"family": fid, "instance": k, "elements": len(els), "max_residual": worst,
                         "n_masked": masked, "tolerance": tol, "passed": passed})
    result = {"command": "group sweep", "seed": seed, "identity_only": identity, "rows": rows,
              "verdict": "pass" if ok else "fail"}
    if emit_out:
        emit(result)
        return EXIT_PASS if ok else EXIT_FAIL
    return result


def cmd_evolve(args):
    params = _json_arg(args.params, "--params")
    fld = _make(args.family, params, _json_arg(args.box, "--box"), args.instance)
    box = _box_from(args.box, fld)
    t0 = float(box["t"][0]) if "t" in box else 0.5
    t_span = (t0, t0 + args.duration)
    levels = [9 * 2 ** k - (2 ** k - 1) for k in range(args.levels)]    # 9, 17, 33, ...
    snaps = [] if args.csv_dir else None
    rep = evolve_mod.cross_validate(fld, box, t_span, levels=levels, scheme=args.scheme, snapshots=snaps)
    out = rep.to_json(args.min_order)
    if snaps is not None:
        os.makedirs(args.csv_dir, exist_ok=True)
        paths = []
        for nx, X, Y, state in snaps:
            path = os.path.join(args.csv_dir, f"{args.family}_n{nx}.csv")
            evolve_mod.write_snapshot_csv(path, X, Y, state)
            paths.append(path)
        out["csv"] = paths
    out.update({"command": "evolve", "family": args.family, "params": params, "t_range": list(t_span)})
    emit(out)
    return EXIT_PASS if rep.passed(args.min_order) else EXIT_FAIL


def _invariance_residual(fld, grid):
    inv = fld.meta.get("invariance")
    if not inv:
        return None
    s = la.subalgebra(inv["id"])
    T, X, Y, _ = grid.points(fld)
    arr = verify.evaluate_jets(fld, T, X, Y, threads=1)
    return float(max(np.max(np.abs(q)) for V in s.basis(inv.get("params") or {})
                     for q in la.characteristic(V, T, X, Y, arr)))


def _verify_family(fid, tol, grid_n):
    fam = catalog.family(fid)
    instances = []
    for k, (p, box) in enumerate(fam.defaults):
        fld = fam.make(p, box)
        grid = catalog.default_grid(box, (3, grid_n, grid_n))
        t_res = float(fld.meta.get("tolerance", fam.tolerance)) if tol is None else tol
        rep = verify.residual_report(fld, grid, "burgers", t_res, threads=1)
        flags, _ = verify.flagged_constraints_hold(fld, grid, tol=1e-10 if tol is None else tol)
        inv = _invariance_residual(fld, grid)
        inv_ok = inv is None or inv <= max(t_res, 1e-300)
        instances.append({"instance": k, "params": p, "max_residual": rep.max_residual, "tolerance": t_res,
                          "residual_ok": rep.passed, "flags_verified": flags, "invariance_residual": inv,
                          "invariance_ok": inv_ok,
                          "passed": bool(rep.passed and all(flags.values()) and inv_ok)})
    return {"family": fid, "instances": instances,
            "max_residual": max(i["max_residual"] for i in instances),
            "passed": all(i["passed"] for i in instances)}


def catalog_verify_all(families=(), tol=None, grid_n=7, threads=None):
    fids = list(families) or list(catalog.FAMILIES)
    for fid in fids:
        catalog.family(fid)
    workers = verify.n_threads(threads)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda f: _verify_family(f, tol, grid_n), fids))
    ok = all(r["passed"] for r in results)
    return {"command": "catalog-verify-all", "families": results, "n_families": len(results),
            "tolerance_override": tol, "verdict": "pass" if ok else "fail"}


def cmd_catalog_verify_all(args):
    cfg = load_config(args.config, "catalog-verify-all")
    tol = _merge(args, cfg, "tol", None)
    out = catalog_verify_all(_merge(args, cfg, "families", []), None if tol is None else float(tol),
                             int(_merge(args, cfg, "grid_n", 7)), _merge(args, cfg, "threads", None))
    emit(out)
    return EXIT_PASS if out["verdict"] == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="burgers-lab", description="Exact solutions and symmetries of the 2D Burgers system")
    p.add_argument("--threads", type=int, help="worker cap (overrides BURGERS_LAB_THREADS)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("algebra", help="commutation table and subalgebra closure")
    a.add_argument("what", choices=["table", "subalgebras"])
    a.add_argument("--dim", type=int, choices=[1, 2])
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=cmd_algebra)

    f = sub.add_parser("family", help="list catalog families or evaluate one")
    f.add_argument("what", choices=["list", "eval"])
    f.add_argument("--family")
    f.add_argument("--params", help="JSON object; omitted: a default parameter set")
    f.add_argument("--instance", type=int, default=0, help="which default set (with no --params)")
    f.add_argument("--box")
    f.add_argument("--grid")
    f.add_argument("--point", help="t,x,y")
    f.add_argument("--csv")
    f.add_argument("--residuals", action="store_true")
    f.set_defaults(func=cmd_family)

    v = sub.add_parser("verify", help="residual report of a family instance")
    v.add_argument("--family", required=True)
    v.add_argument("--params", help="JSON object; omitted: a default parameter set")
    v.add_argument("--instance", type=int, default=0, help="which default set (with no --params)")
    v.add_argument("--box")
    v.add_argument("--grid", help='{"t":[a,b,n],"x":[a,b,n],"y":[a,b,n]}')
    v.add_argument("--system", default="burgers", choices=sorted(verify.SYSTEMS))
    v.add_argument("--tol", type=float)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="full/reduced consistency of an ansatz")
    r.add_argument("what", choices=["check"])
    r.add_argument("--ansatz", required=True, choices=list(red.ANSATZ_IDS))
    r.add_argument("--solution", help="JSON solution spec; omitted: run the standard controls")
    r.add_argument("--n", type=int, default=120)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--tol", type=float, default=1e-8)
    r.set_defaults(func=cmd_reduce)

    g = sub.add_parser("group", help="apply group elements to families")
    g.add_argument("what", choices=["apply", "sweep"])
    g.add_argument("--family", action="append", dest="families", default=[])
    g.add_argument("--params", help="JSON object; omitted: a default parameter set")
    g.add_argument("--instance", type=int, default=0, help="which default set (with no --params)")
    g.add_argument("--box")
    g.add_argument("--grid")
    g.add_argument("--element", action="append", help='{"sl2":[a,b,c,d],"angle":θ,"reflect":bool,"boost":[m1,m2],"shift":[n1,n2]}')
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--identity", action="store_true", default=None)
    g.add_argument("--grid-n", type=int, dest="grid_n")
    g.add_argument("--factor", type=float, default=None)
    g.add_argument("--config")
    g.set_defaults(func=cmd_group)

    e = sub.add_parser("evolve", help="finite-difference cross-validation of a family instance")
    e.add_argument("--family", required=True)
    e.add_argument("--params", help="JSON object; omitted: a default parameter set")
    e.add_argument("--instance", type=int, default=0, help="which default set (with no --params)")
    e.add_argument("--box")
    e.add_argument("--levels", type=int, default=3)
    e.add_argument("--duration", type=float, default=0.1)
    e.add_argument("--scheme", default="euler", choices=list(evolve_mod.SCHEMES))
    e.add_argument("--min-order", type=float, default=1.5, dest="min_order")
    e.add_argument("--csv-dir", dest="csv_dir")
    e.set_defaults(func=cmd_evolve)

    c = sub.add_parser("catalog-verify-all", help="verify every family at its default parameter sets")
    c.add_argument("--family", action="append", dest="families", default=[])
    c.add_argument("--tol", type=float)
    c.add_argument("--grid-n", type=int, dest="grid_n")
    c.add_argument("--config")
    c.set_defaults(func=cmd_catalog_verify_all)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be >= 1")
            os.environ["BURGERS_LAB_THREADS"] = str(args.threads)
        if args.command == "group" and args.what == "apply":
            args.family = args.families[0] if args.families else None
            if args.factor is None:
                args.factor = 10.0
        return args.func(args)
    except BurgersLabError as exc:
        emit({"error": type(exc).__name__, "message": str(exc), "verdict": "error"}, sys.stderr)
        return exc.exit_code
    except (OSError, KeyError, ValueError, TypeError) as exc:
        emit({"error": type(exc).__name__, "message": str(exc), "verdict": "error"}, sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
