"""Command-line front end: ``lzerosum <subcommand> ...``.

Subcommands: characters, constants, eval, zeros, compare.  Floats are
written with 15 significant digits; JSON documents follow the schemas in
``lzerosum/schemas``.  Relative output paths are resolved against
``$LZEROSUM_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import analytic, characters as chars
from .errors import LZeroSumError, NotPrimitiveError
from .lfunc import afe_value, delta_factor, l_function, rotated_Z
from .zeros import ScanConfig, scan_zeros, verify_completeness
from .zerosum import compare, constants

OUTPUT_DIR_ENV = "LZEROSUM_OUTPUT_DIR"
STDOUT = "-"


def fmt(x: float) -> str:
    return f"{x:.15g}"


def r15(x: float) -> float:
    """Round to 15 significant digits for JSON output."""
    x = float(x)
    return float(fmt(x)) if math.isfinite(x) else x


def cplx(z: complex) -> dict:
    return {"re": r15(z.real), "im": r15(z.imag)}


@dataclass
class RunConfig:
    command: str
    modulus: int | None = None
    selector: str | None = None  # "q.k", "k", or "all-primitive"
    t_min: float = 0.0
    t_max: float | None = None
    t_grid: list[float] = field(default_factory=list)
    points: list[complex] = field(default_factory=list)
    csv_path: str | None = None
    json_path: str | None = None
    threads: int = 1
    certify: bool = True
    grid_factor: float = 8.0
    refine_tol: float = 1e-9
    target: float = 1e-11
    method: str = "hurwitz"


class UsageError(Exception):
    pass


def _parse_grid(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse T grid {text!r}; expected e.g. 100,200,500")
    if not vals:
        raise UsageError("empty T grid")
    return vals


def _parse_point(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}; expected e.g. 0.5+14.13j")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lzerosum", description="Dirichlet L-function zeros and zero sums.")
    p.add_argument("--threads", type=int, default=1, help="worker threads for per-character work")
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp, csv_ok=True):
        sp.add_argument("--json", nargs="?", const=STDOUT, default=None, metavar="PATH",
                        help="write JSON (to stdout when PATH is omitted)")
        if csv_ok:
            sp.add_argument("--csv", nargs="?", const=STDOUT, default=None, metavar="PATH",
                            help="write CSV (to stdout when PATH is omitted)")

    def selector(sp, allow_all=False):
        sp.add_argument("--modulus", "-q", type=int, required=True)
        sp.add_argument("--char", "-k", default=None, help="character index k or label q.k")
        if allow_all:
            sp.add_argument("--all-primitive", action="store_true", help="every primitive character mod q")

    sp = sub.add_parser("characters", help="list the characters mod q with canonical labels")
    sp.add_argument("--modulus", "-q", type=int, required=True)
    sp.add_argument("--primitive-only", action="store_true")
    outputs(sp)

    sp = sub.add_parser("constants", help="Stieltjes, eta and Bernoulli constants (and a1, a2 for q)")
    sp.add_argument("--modulus", "-q", type=int, default=None)
    outputs(sp, csv_ok=False)

    sp = sub.add_parser("eval", help="L, L', Delta and Z at given points")
    selector(sp)
    sp.add_argument("--s", action="append", default=[], help="complex point, repeatable (e.g. 0.5+14.13j)")
    sp.add_argument("--t", action="append", default=[], type=float, help="height t, repeatable (paired with --sigma)")
    sp.add_argument("--sigma", type=float, default=0.5, help="real part used with --t (default 1/2)")
    sp.add_argument("--method", choices=["hurwitz", "afe"], default="hurwitz")
    sp.add_argument("--target", type=float, default=1e-11, help="absolute error target")
    outputs(sp)

    sp = sub.add_parser("zeros", help="critical-line zeros in (tmin, tmax] with a completeness certificate")
    selector(sp)
    sp.add_argument("--tmax", type=float, required=True)
    sp.add_argument("--tmin", type=float, default=0.0)
    sp.add_argument("--grid-factor", type=float, default=8.0)
    sp.add_argument("--refine-tol", type=float, default=1e-9)
    sp.add_argument("--no-certify", action="store_true", help="skip the argument-principle count")
    outputs(sp)

    sp = sub.add_parser("compare", help="zero sums of L' against the main term")
    selector(sp, allow_all=True)
    sp.add_argument("--tgrid", required=True, help="comma-separated increasing heights")
    sp.add_argument("--no-certify", action="store_true")
    outputs(sp)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, threads=ns.threads)
    if ns.threads < 1:
        raise UsageError("--threads must be at least 1")
    cfg.modulus = getattr(ns, "modulus", None)
    if cfg.modulus is not None and cfg.modulus < 1:
        raise UsageError("--modulus must be a positive integer")
    cfg.json_path = getattr(ns, "json", None)
    cfg.csv_path = getattr(ns, "csv", None)
    if cfg.json_path == STDOUT and cfg.csv_path == STDOUT:
        raise UsageError("--json and --csv cannot both write to stdout; give one of them a path")
    cfg.certify = not getattr(ns, "no_certify", False)

    if ns.command in ("eval", "zeros", "compare"):
        if getattr(ns, "all_primitive", False):
            if ns.char is not None:
                raise UsageError("use either --char or --all-primitive, not both")
            cfg.selector = "all-primitive"
        elif ns.char is None:
            raise UsageError("--char is required (or --all-primitive for compare)")
        else:
            cfg.selector = ns.char
    if ns.command == "eval":
        cfg.points = [_parse_point(s) for s in ns.s] + [complex(ns.sigma, t) for t in ns.t]
        cfg.method = ns.method
        if not cfg.points:
            raise UsageError("eval needs at least one --s or --t")
        cfg.target = ns.target
    if ns.command == "zeros":
        cfg.t_min, cfg.t_max = ns.tmin, ns.tmax
        if not 0 <= cfg.t_min <= cfg.t_max:
            raise UsageError("need 0 <= --tmin <= --tmax")
        if cfg.t_max > 1e4:
            raise UsageError("heights above 1e4 are not supported")
        cfg.grid_factor, cfg.refine_tol = ns.grid_factor, ns.refine_tol
    if ns.command == "compare":
        cfg.t_grid = _parse_grid(ns.tgrid)
        if any(b <= a for a, b in zip(cfg.t_grid, cfg.t_grid[1:])) or cfg.t_grid[0] <= 0:
            raise UsageError("--tgrid must be positive and strictly increasing")
        if cfg.t_grid[-1] > 1e4:
            raise UsageError("heights above 1e4 are not supported")
    return cfg


def select_characters(cfg: RunConfig, need_primitive: bool) -> list[chars.DirichletCharacter]:
    q = cfg.modulus
    if cfg.selector == "all-primitive":
        return chars.primitive_characters(q)
    sel = cfg.selector
    try:
        chi = chars.character_from_label(sel) if "." in sel else chars.character(q, int(sel))
    except (ValueError, IndexError) as e:
        raise UsageError(f"unknown character {sel!r} mod {q}: {e}")
    if chi.modulus != q:
        raise UsageError(f"label {sel!r} is not a character mod {q}")
    if need_primitive and not chi.is_primitive:
        ind = chars.primitive_inducing(chi)
        raise NotPrimitiveError(
            f"{chi.label} is not primitive (conductor {chi.conductor}); use the inducing character {ind.label}"
        )
    return [chi]


# ---------------------------------------------------------------------------
# output


def _resolve(path: str) -> str:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(path: str | None, text: str, out) -> None:
    if path is None:
        return
    if path == STDOUT:
        out.write(text)
        return
    target = _resolve(path)
    try:
        with open(target, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {target}: {e.strerror}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _table(header, rows) -> str:
    cells = [list(header)] + [[fmt(v) if isinstance(v, float) else str(v) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "\n".join("  ".join(c[i].rjust(widths[i]) for i in range(len(c))) for c in cells) + "\n"


def _write(cfg: RunConfig, doc, header, rows, out) -> None:
    _emit(cfg.json_path, _json_text(doc), out)
    _emit(cfg.csv_path, _csv_text(header, rows), out)
    if cfg.json_path != STDOUT and cfg.csv_path != STDOUT:
        out.write(_table(header, rows))


# ---------------------------------------------------------------------------
# subcommands


def cmd_characters(cfg: RunConfig, ns, out) -> None:
    q = cfg.modulus
    lst = chars.primitive_characters(q) if ns.primitive_only else chars.enumerate_characters(q)
    grp = chars.unit_group(q)
    recs = []
    for chi in lst:
        recs.append({
            "label": chi.label,
            "modulus": q,
            "index": chi.index,
            "exponents": [int(e) for e in chi.exponents],
            "order": chi.order,
            "conductor": chi.conductor,
            "primitive": chi.is_primitive,
            "parity": chi.kappa,
            "real": chi.is_real,
            "gauss_sum": cplx(complex(chars.gauss_sum(chi))),
        })
    doc = {
        "command": "characters",
        "modulus": q,
        "generators": [int(g) for g in grp.generators],
        "generator_orders": [int(o) for o in grp.orders],
        "labeling": "q.k with k the mixed-radix index of the exponent vector on the listed generators",
        "characters": recs,
    }
    header = ["label", "order", "conductor", "primitive", "parity", "real", "re_gauss_sum", "im_gauss_sum"]
    rows = [
        [r["label"], r["order"], r["conductor"], int(r["primitive"]), r["parity"], int(r["real"]),
         r["gauss_sum"]["re"], r["gauss_sum"]["im"]]
        for r in recs
    ]
    _write(cfg, doc, header, rows, out)


def cmd_constants(cfg: RunConfig, ns, out) -> None:
    tab = analytic.constants_table()
    doc = {
        "command": "constants",
        "gamma0": r15(tab.gamma0),
        "gamma1": r15(tab.gamma1),
        "eta0": r15(tab.eta[0]),
        "eta1": r15(tab.eta[1]),
        "bernoulli": [{"n": n, "exact": str(b), "value": r15(float(b))} for n, b in enumerate(tab.bernoulli[:13])],
    }
    rows = [["gamma0", tab.gamma0], ["gamma1", tab.gamma1], ["eta0", tab.eta[0]], ["eta1", tab.eta[1]]]
    if cfg.modulus is not None:
        c = constants(cfg.modulus)
        doc["modulus"] = c.q
        doc["a1"] = r15(c.a1)
        doc["a2"] = r15(c.a2)
        doc["euler_log_sum"] = r15(c.euler_log_sum)
        doc["euler_log2_sum"] = r15(c.euler_log2_sum)
        rows += [["a1", c.a1], ["a2", c.a2]]
    rows += [[f"B{n}", str(b)] for n, b in enumerate(tab.bernoulli[:13])]
    _write(cfg, doc, ["name", "value"], rows, out)


def cmd_eval(cfg: RunConfig, ns, out) -> None:
    (chi,) = select_characters(cfg, need_primitive=cfg.method == "afe")
    recs, rows = [], []
    for s in cfg.points:
        if cfg.method == "afe":
            ev = afe_value(chi, s)
            val, der, bnd = ev.value, None, ev.abs_error_bound
        else:
            val, der, bnd = l_function(chi, s, derivative=True, target=cfg.target)
        rec = {
            "s": cplx(s),
            "method": cfg.method,
            "L": cplx(val),
            "dL": None if der is None else cplx(der),
            "abs_error_bound": r15(bnd),
        }
        row = [s.real, s.imag, val.real, val.imag]
        row += ["", ""] if der is None else [der.real, der.imag]
        row.append(bnd)
        if chi.is_primitive and s.real == 0.5:
            z = float(rotated_Z(chi, s.imag, target=min(cfg.target, 1e-10)))
            rec["Z"] = r15(z)
            row.append(z)
        else:
            row.append("")
        if chi.is_primitive:
            try:
                rec["Delta"] = cplx(delta_factor(s, chi).value)
            except (LZeroSumError, OverflowError):
                pass  # pole of Gamma(1-s) or overflow; Delta is omitted
        recs.append(rec)
        rows.append(row)
    doc = {"command": "eval", "character": chi.label, "points": recs}
    header = ["re_s", "im_s", "re_L", "im_L", "re_dL", "im_dL", "abs_error_bound", "Z"]
    _write(cfg, doc, header, rows, out)


def cmd_zeros(cfg: RunConfig, ns, out) -> None:
    (chi,) = select_characters(cfg, need_primitive=True)
    sc = ScanConfig(grid_factor=cfg.grid_factor, refine_tol=cfg.refine_tol, t_min=cfg.t_min)
    zl = scan_zeros(chi, cfg.t_min, cfg.t_max, sc)
    if cfg.certify:
        zl = verify_completeness(zl)
    doc = {
        "command": "zeros",
        "character": chi.label,
        "t_min": r15(zl.t_min),
        "t_max": r15(zl.t_max),
        "count": len(zl),
        "certified_count": zl.certified_count,
        "zeros": [
            {"index": i + 1, "gamma": r15(z.gamma), "residual_halfwidth": r15(z.residual_halfwidth)}
            for i, z in enumerate(zl.zeros)
        ],
    }
    rows = [[i + 1, z.gamma, z.residual_halfwidth] for i, z in enumerate(zl.zeros)]
    _write(cfg, doc, ["index", "gamma", "residual_halfwidth"], rows, out)


def cmd_compare(cfg: RunConfig, ns, out) -> None:
    chis = select_characters(cfg, need_primitive=True)

    def run(chi):
        return compare(chi, cfg.t_grid, certify=cfg.certify)

    if cfg.threads > 1 and len(chis) > 1:
        with ThreadPoolExecutor(cfg.threads) as ex:
            reports = list(ex.map(run, chis))  # map keeps input order
    else:
        reports = [run(c) for c in chis]

    docs, rows = [], []
    for rep in reports:
        docs.append({
            "character": rep.label,
            "modulus": rep.q,
            "envelope_constant": None if rep.envelope_constant is None else r15(rep.envelope_constant),
            "growth_exponent": None if rep.growth_exponent is None else r15(rep.growth_exponent),
            "rows": [
                {
                    "T_requested": r15(r.T_requested),
                    "T_snapped": r15(r.T),
                    "n_zeros": r.n_zeros,
                    "empirical_sum": cplx(r.empirical_sum),
                    "main_term": r15(r.main_term),
                    "remainder": cplx(r.remainder),
                    "envelope_ratio": r15(r.envelope_ratio),
                    "unconditional_ratio": r15(r.unconditional_ratio),
                    "relative_remainder": r15(r.relative_remainder),
                    "imag_fraction": r15(r.imag_fraction),
                }
                for r in rep.rows
            ],
        })
        for r in rep.rows:
            row = [
                r.T, r.empirical_sum.real, r.empirical_sum.imag, r.main_term,
                r.remainder.real, r.remainder.imag, r.envelope_ratio,
            ]
            rows.append([rep.label] + row if len(reports) > 1 else row)
    header = ["T_snapped", "re_empirical", "im_empirical", "main_term", "re_remainder", "im_remainder", "envelope_ratio"]
    if len(reports) > 1:
        header = ["character"] + header
    doc = {"command": "compare", "modulus": cfg.modulus, "t_grid": [r15(t) for t in cfg.t_grid], "reports": docs}
    _write(cfg, doc, header, rows, out)


COMMANDS = {
    "characters": cmd_characters,
    "constants": cmd_constants,
    "eval": cmd_eval,
    "zeros": cmd_zeros,
    "compare": cmd_compare,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(ns)
        COMMANDS[cfg.command](cfg, ns, out)
    except UsageError as e:
        err.write(f"lzerosum {ns.command}: error: {e}\n")
        return 2
    except (LZeroSumError, ValueError, ArithmeticError) as e:
        err.write(f"lzerosum {ns.command}: {type(e).__name__}: {e}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
