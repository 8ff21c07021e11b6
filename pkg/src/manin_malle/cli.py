"""Command-line workbench.

    python3 -m manin_malle <subcommand> [flags]

Outputs are deterministic CSV/JSON.  A ``--config`` file of key=value lines
overrides flags (keys use flag names with dashes or underscores).  The
environment variable MANIN_MALLE_CACHE names a directory for memoized
quotient-experiment counts.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import gfields, permgroup as pg, reps
from .asymptotics import CountSeries, decade_points, fit_asymptotic, fmt_num, prediction_consistency
from .heights import MetricTwist, count_series
from .peyre import peyre_constant
from .quotient_lab import (affine_points, convolution_prediction, heuristic_consistency_report,
                           height_zeta_identity_check, xprim_count)
from .vdisc import WildRamificationError, quadratic_rep, v_discriminant

SCHEMA_VERSION = 1
CACHE_ENV = "MANIN_MALLE_CACHE"


class UsageError(Exception):
    pass


def _clean(obj):
    """Round floats to 15 significant digits, Fractions to strings, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return str(obj)
        return float(format(obj, ".15g"))
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def num(value, provenance: str) -> dict:
    return {"value": value, "provenance": provenance}


def _envelope(cmd: str, config: dict, body: dict) -> dict:
    return {"schema": f"manin_malle.{cmd}/{SCHEMA_VERSION}", "version": __version__,
            "config": config, **body}


def _dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n"


class Output:
    """Collects named artifacts; written atomically at the end, nothing left behind on failure."""

    def __init__(self):
        self.files: list[tuple[Path | None, str]] = []

    def add(self, path, text: str):
        self.files.append((Path(path) if path else None, text))

    def commit(self, stdout):
        written = []
        try:
            for path, text in self.files:
                if path is None:
                    stdout.write(text)
                    continue
                path.parent.mkdir(parents=True, exist_ok=True)
                fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
                with os.fdopen(fd, "w", newline="") as fh:
                    fh.write(text)
                os.replace(tmp, path)
                written.append(path)
        except BaseException:
            for p in written:
                p.unlink(missing_ok=True)
            raise


def _parse_bound(text: str) -> Fraction:
    try:
        if "e" in text.lower() and "/" not in text:
            mant, exp = text.lower().split("e")
            return Fraction(mant) * Fraction(10) ** int(exp)
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="manin-malle", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--config", help="key=value file overriding flags")
        sp.add_argument("--threads", type=int, default=1, help="worker count (results do not depend on it)")

    sp = sub.add_parser("count-points", help="N(B) for P^d at decade points")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--bound", type=_parse_bound, required=True)
    sp.add_argument("--twist", default="", help="p=a,... metric twist")
    sp.add_argument("--per-decade", type=int, default=1)
    common(sp)

    sp = sub.add_parser("peyre", help="Peyre constant factor breakdown")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--twist", default="")
    common(sp)

    sp = sub.add_parser("invariants", help="singularity invariants of a representation")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--group", help="group text file (n, then generator images)")
    g.add_argument("--cyclic", type=int, help="order n of a diagonal cyclic action")
    g.add_argument("--rep", help="representation JSON file")
    sp.add_argument("--weights", type=_int_list, help="weights for --cyclic")
    sp.add_argument("--kind", choices=["perm", "double"], default="double",
                    help="representation built from --group")
    sp.add_argument("--H", type=_int_list, default=None, help="residues acting by power maps (default: all units)")
    common(sp)

    sp = sub.add_parser("count-fields", help="n(G, B) for Galois fields at decade points")
    sp.add_argument("--group", choices=["C2", "C3", "V4"])
    sp.add_argument("--input", help="field CSV to ingest instead of enumerating")
    sp.add_argument("--bound", type=_parse_bound, required=True)
    sp.add_argument("--per-decade", type=int, default=1)
    sp.add_argument("--large", action="store_true", help="count large G-fields (fiber ratio applied)")
    sp.add_argument("--records-out", help="also write the field records as CSV")
    common(sp)

    sp = sub.add_parser("vdisc", help="V-discriminants of quadratic fields")
    sp.add_argument("--group", choices=["C2"], default="C2")
    sp.add_argument("--rep", help="representation JSON (default: doubled permutation rep)")
    sp.add_argument("--bound", type=_parse_bound, required=True)
    common(sp)

    sp = sub.add_parser("fit", help="fit N ~ C B^alpha (log B)^beta")
    sp.add_argument("--input", required=True, help="CSV with header B,N")
    sp.add_argument("--beta-grid", type=_int_list, default=[0, 1, 2, 3])
    common(sp)

    sp = sub.add_parser("quotient-experiment", help="C2 on A^3: counts, identity and heuristic")
    sp.add_argument("--bound", type=_parse_bound, default=Fraction(10**4))
    sp.add_argument("--identity-bound", type=_parse_bound, default=Fraction(1000))
    sp.add_argument("--per-decade", type=int, default=2)
    common(sp)

    sp = sub.add_parser("report", help="prediction consistency plus fitted series")
    sp.add_argument("--cyclic", type=int, default=2)
    sp.add_argument("--weights", type=_int_list, default=[1, 1, 0])
    sp.add_argument("--bound", type=_parse_bound, default=Fraction(10**6))
    sp.add_argument("--per-decade", type=int, default=2)
    common(sp)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        lines = Path(args.config).read_text().splitlines()
    except OSError as exc:
        parser.error(f"cannot read config: {exc}")
    extra = []
    for ln in lines:
        ln = ln.split("#")[0].strip()
        if not ln:
            continue
        if "=" not in ln:
            parser.error(f"config line without '=': {ln!r}")
        k, v = (s.strip() for s in ln.split("=", 1))
        extra += [f"--{k.replace('_', '-')}", v]
    return parser.parse_args(argv + extra)


def _config_of(args) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(args).items())
            if k not in ("threads",)}


def _samples(bound: Fraction, per_decade: int, start: float = 1.0) -> list[float]:
    top = float(bound)
    pts = decade_points(top, start, per_decade) if top > start else [top]
    return pts


def cmd_count_points(args, out: Output):
    tw = MetricTwist.parse(args.twist)
    Bs = _samples(args.bound, args.per_decade)
    s = count_series(args.dim, Bs, tw)
    out.add(args.out, s.to_csv())


def cmd_peyre(args, out: Output):
    pc = peyre_constant(args.dim, MetricTwist.parse(args.twist))
    body = {
        "d": args.dim,
        "twist": {str(p): str(a) for p, a in pc.twist.entries},
        "residue_factor": num(pc.residue_factor, "exact"),
        "finite_part": num(pc.finite_part, "computed"),
        "archimedean_raw": num(pc.archimedean_part, "exact"),
        "normalization": num(pc.normalization, "exact"),
        "value": num(pc.value, "computed"),
    }
    out.add(args.out, _dumps(_envelope("peyre", _config_of(args), body)))


def _load_rep(args) -> reps.EigenRep:
    if args.rep:
        return reps.rep_from_json(Path(args.rep).read_text())
    if args.cyclic is not None:
        if not args.weights:
            raise UsageError("--cyclic needs --weights")
        return reps.cyclic_weight_rep(args.cyclic, args.weights)
    G = pg.parse_group_text(Path(args.group).read_text())
    r = reps.permutation_rep(G)
    return reps.double(r) if args.kind == "double" else r


def cmd_invariants(args, out: Output):
    r = _load_rep(args)
    inv = reps.singularity_invariants(r, args.H)
    body = {"group_order": r.group.order, "N": r.N, "dim": r.dim}
    prov = {"age_G": "exact", "mld": "exact", "upsilon": "exact", "delta": "exact", "gamma": "exact",
            "rho": "exact", "manin_alpha": "exact", "manin_log_exponent": "exact",
            "toric_alpha_bound": "exact", "malle_alpha": "exact", "malle_log_exponent": "exact"}
    for k, v in inv.to_json().items():
        body[k] = num(v, prov[k]) if k in prov else v
    out.add(args.out, _dumps(_envelope("invariants", _config_of(args), body)))


def cmd_count_fields(args, out: Output):
    Bs = _samples(args.bound, args.per_decade)
    top = math.floor(args.bound)
    if args.input:
        recs = gfields.ingest_fields_csv(args.input)
        if recs.rejected:
            for line, why in recs.rejected:
                print(f"rejected line {line}: {why}", file=sys.stderr)
        label = recs[0].group_label if recs else (args.group or "C2")
        s = gfields.large_field_count(recs, label, Bs) if args.large else gfields.malle_count(recs, Bs)
    else:
        if not args.group:
            raise UsageError("count-fields needs --group or --input")
        recs = None
        if args.group == "C2" and not args.large and not args.records_out:
            s = gfields.quadratic_count_series(Bs)
        elif args.group == "C3" and not args.large and not args.records_out:
            s = gfields.cyclic_cubic_count_series(Bs)
        else:
            enum = {"C2": gfields.enumerate_quadratic, "C3": gfields.enumerate_cyclic_cubic,
                    "V4": gfields.enumerate_v4}[args.group]
            recs = enum(top)
            s = gfields.large_field_count(recs, args.group, Bs) if args.large else gfields.malle_count(recs, Bs)
        if args.records_out and recs is not None:
            out.add(args.records_out, gfields.fields_csv_text(recs))
    out.add(args.out, s.to_csv())


def cmd_vdisc(args, out: Output):
    rep = reps.rep_from_json(Path(args.rep).read_text()) if args.rep else quadratic_rep()
    lines = ["disc,d_L,D_V,match"]
    for r in gfields.enumerate_quadratic(math.floor(args.bound)):
        try:
            vd = v_discriminant(r, rep)
        except WildRamificationError:
            lines.append(f"{r.disc},{r.d_L},,skipped-wild")
            continue
        lines.append(f"{r.disc},{r.d_L},{fmt_num(vd.D)},{str(vd.D == r.d_L).lower()}")
    out.add(args.out, "\n".join(lines) + "\n")


def cmd_fit(args, out: Output):
    s = CountSeries.from_csv(Path(args.input).read_text(), label=args.input)
    f = fit_asymptotic(s, args.beta_grid)
    body = {
        "alpha": num(f.alpha, "fitted"), "beta": num(f.beta, "fitted"), "C": num(f.C, "fitted"),
        "residuals": {str(k): num(v, "computed") for k, v in f.residuals.items()},
        "drift_top_two_decades": num(f.drift, "computed"),
        "samples_used": f.used, "diagnostics": f.diagnostics,
    }
    out.add(args.out, _dumps(_envelope("fit", _config_of(args), body)))


def _cached_xprim(B: float) -> int:
    d = os.environ.get(CACHE_ENV)
    if not d:
        return xprim_count(B)
    path = Path(d) / f"xprim_{fmt_num(B)}.json"
    if path.exists():
        return int(json.loads(path.read_text())["N"])
    n = xprim_count(B)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"B": fmt_num(B), "N": n}))
    return n


def _side(path, name: str) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}.{name}.csv"))


def _series_body(label: str, f) -> dict:
    return {"series": label, "alpha": num(f.alpha, "fitted"), "beta": num(f.beta, "fitted"),
            "C": num(f.C, "fitted"), "drift_top_two_decades": num(f.drift, "computed"),
            "diagnostics": f.diagnostics}


def cmd_quotient_experiment(args, out: Output):
    Bs = _samples(args.bound, args.per_decade, start=10.0)
    ident_Bs = [b for b in _samples(args.identity_bound, args.per_decade)]
    idr = height_zeta_identity_check(ident_Bs)
    n_x = [_cached_xprim(b) for b in Bs]
    n_p = [convolution_prediction(b) for b in Bs]
    n_v = [affine_points(b) for b in Bs]
    rep = heuristic_consistency_report(Bs) if len(Bs) >= 6 and Bs[-1] / Bs[0] >= 1e3 else None
    body = {
        "label": "consistency, not ground truth",
        "identity": {"B": idr.B, "orbits": idr.orbit_counts, "predup": idr.predup_counts,
                     "complete_bound": num(idr.complete_bound, "exact"), "ok": idr.ok},
    }
    if rep is not None:
        body["heuristic"] = {
            "fit_xprim": _series_body("N_xprim", rep.fit_xprim),
            "fit_pred": _series_body("N_pred", rep.fit_pred),
            "ratio": [num(r, "computed") for r in rep.ratios],
            "ratio_drift_top_two_decades": num(rep.drift, "computed"),
            "predicted": rep.predicted, "compactification_strata": rep.strata, "checks": rep.checks,
        }
    else:
        body["heuristic"] = None
        body["note"] = "fewer than 6 samples over 3 decades: no fit"
    out.add(args.out, _dumps(_envelope("quotient-experiment", _config_of(args), body)))
    if args.out:  # series go to side files next to the JSON; stdout gets the JSON only
        out.add(_side(args.out, "xprim"), CountSeries(Bs, n_x, "N_xprim").to_csv())
        out.add(_side(args.out, "pred"), CountSeries(Bs, [float(x) for x in n_p], "N_pred").to_csv())
        out.add(_side(args.out, "affine"), CountSeries(Bs, n_v, "N_V").to_csv())


def cmd_report(args, out: Output):
    r = reps.cyclic_weight_rep(args.cyclic, args.weights)
    inv = reps.singularity_invariants(r)
    pc = prediction_consistency(inv)
    body = {"invariants": inv.to_json(), "prediction": pc}
    if (args.cyclic, tuple(w % args.cyclic for w in args.weights)) == (2, (1, 1, 0)):
        Bs = _samples(args.bound, args.per_decade, start=10.0)
        rep = heuristic_consistency_report(Bs)
        body["fitted"] = {"N_xprim": _series_body("N_xprim", rep.fit_xprim),
                          "N_pred": _series_body("N_pred", rep.fit_pred),
                          "ratio_drift_top_two_decades": num(rep.drift, "computed"),
                          "predicted": rep.predicted, "checks": rep.checks}
    body["fitted_quadratic_fields"] = _series_body(
        "n(C2)", fit_asymptotic(gfields.quadratic_count_series(decade_points(1e8, 10, 2))))
    out.add(args.out, _dumps(_envelope("report", _config_of(args), body)))


COMMANDS = {
    "count-points": cmd_count_points, "peyre": cmd_peyre, "invariants": cmd_invariants,
    "count-fields": cmd_count_fields, "vdisc": cmd_vdisc, "fit": cmd_fit,
    "quotient-experiment": cmd_quotient_experiment, "report": cmd_report,
}


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output()
    try:
        COMMANDS[args.cmd](args, out)
        out.commit(stdout)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
