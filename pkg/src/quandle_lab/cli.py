"""Command-line entry point (``quandle-lab``).

Exit status: 0 success, 1 a check or validation failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import coloring, core, lab
from .constructions import find_connected_extensions
from .errors import DataError, InvalidCocycle, InvalidQuandle, QuandleLabError
from .formats import (
    SCHEMA,
    load_quandle,
    load_quandle_list,
    read_cocycle,
    read_hom,
    read_matrix_file,
    write_cocycle,
    write_quandle,
)
from .knots import load_knot_table, parse_braid

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Config:
    workers: int = 1
    enum_cap: int = coloring.ENUMERATION_CAP
    cell_timeout: float | None = None
    fmt: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        if self.enum_cap < 1:
            raise UsageError("--enum-cap must be positive")
        if self.cell_timeout is not None and self.cell_timeout <= 0:
            raise UsageError("--cell-timeout must be positive")

    _pool: ProcessPoolExecutor | None = field(default=None, init=False, repr=False)

    def pool(self) -> ProcessPoolExecutor | None:
        """The single worker pool of this process, created on first use."""
        if self.workers <= 1:
            return None
        if self._pool is None:
            self._pool = ProcessPoolExecutor(max_workers=self.workers)
        return self._pool

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


def default_workers() -> int:
    env = os.environ.get("QUANDLE_LAB_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QUANDLE_LAB_WORKERS={env!r} is not an integer") from None
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# output


def emit(payload: dict, cfg: Config, text: str | None = None, rows: list[list] | None = None) -> None:
    if cfg.fmt == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, indent=2))
    elif cfg.fmt == "csv" and rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(text if text is not None else json.dumps(payload, indent=2))


def report_error(exc: BaseException, cfg: Config | None, kind: str) -> None:
    if cfg is not None and cfg.fmt == "json":
        body = {"schema": SCHEMA, "error": str(exc), "kind": kind}
        if isinstance(exc, (InvalidQuandle, InvalidCocycle)):
            body["violations"] = [_violation(v) for v in exc.violations[:50]]
        print(json.dumps(body, indent=2), file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


def _violation(v) -> dict:
    if hasattr(v, "axiom"):
        return {"axiom": v.axiom, "witness": [w + 1 for w in v.witness]}
    return {"kind": v[0], "witness": [w + 1 for w in v[1:]]}


# ---------------------------------------------------------------------------
# quandle subcommands


def _matrix_rows(Q: core.QuandleTable) -> list[list[int]]:
    return [[v + 1 for v in row] for row in Q.table.tolist()]


def _emit_table(Q: core.QuandleTable, args, cfg: Config) -> int:
    if getattr(args, "output", None):
        write_quandle(Q, args.output)
        emit({"order": Q.order, "written": str(args.output)}, cfg, text=f"wrote order-{Q.order} table to {args.output}")
    else:
        rows = _matrix_rows(Q)
        text = "\n".join([str(Q.order)] + [" ".join(map(str, r)) for r in rows])
        emit({"order": Q.order, "table": rows}, cfg, text=text, rows=rows)
    return EXIT_OK


def cmd_quandle(args, cfg: Config) -> int:
    sub = args.qcmd
    if sub == "validate":
        try:
            A = read_matrix_file(args.file) if Path(args.file).is_file() else load_quandle(args.file).table
        except FileNotFoundError as exc:
            raise UsageError(str(exc)) from exc
        if args.transpose:
            A = A.T
        violations = core.check_axioms(A, limit=args.limit)
        if violations:
            payload = {"valid": False, "order": int(A.shape[0]), "violations": [_violation(v) for v in violations]}
            lines = [f"invalid, order {A.shape[0]}"] + [
                f"  axiom {v.axiom} fails at {tuple(w + 1 for w in v.witness)}" for v in violations
            ]
            emit(payload, cfg, text="\n".join(lines))
            return EXIT_FAIL
        emit({"valid": True, "order": int(A.shape[0])}, cfg, text=f"valid, order {A.shape[0]}")
        return EXIT_OK

    Q = load_quandle(args.quandle, transpose=args.transpose)
    if sub == "props":
        props = core.properties(Q).as_dict()
        text = "\n".join([f"order {Q.order}"] + [f"{k}: {str(v).lower()}" for k, v in props.items()])
        emit({"order": Q.order, **props}, cfg, text=text, rows=[["property", "value"]] + [[k, v] for k, v in props.items()])
        return EXIT_OK
    if sub == "dual":
        return _emit_table(core.dual(Q), args, cfg)
    if sub == "product":
        return _emit_table(core.product(Q, load_quandle(args.other)), args, cfg)
    if sub == "relabel":
        if args.perm:
            perm = [int(v) - 1 for v in args.perm.split(",")]
        else:
            perm = list(range(Q.order))
            random.Random(cfg.seed).shuffle(perm)
        return _emit_table(core.relabel(Q, perm), args, cfg)
    if sub == "build":
        return _emit_table(Q, args, cfg)
    if sub == "iso":
        other = load_quandle(args.other)
        f = core.find_isomorphism(Q, other)
        if f is None:
            emit({"isomorphic": False}, cfg, text="not isomorphic")
            return EXIT_FAIL
        witness = [v + 1 for v in f.map]
        emit({"isomorphic": True, "witness": witness}, cfg, text="isomorphic, witness " + " ".join(map(str, witness)))
        return EXIT_OK
    if sub == "inn":
        G = core.inner_group(Q)
        emit({"order": Q.order, "inner_group_size": G.size}, cfg, text=f"|Inn| = {G.size}")
        return EXIT_OK
    if sub == "extensions":
        found = find_connected_extensions(Q, args.modulus)
        out = []
        for k, phi in enumerate(found, 1):
            entry = {"index": k, "values": phi.values.tolist()}
            if args.output_dir:
                d = Path(args.output_dir)
                d.mkdir(parents=True, exist_ok=True)
                path = d / f"cocycle_{k}.txt"
                write_cocycle(phi, path)
                entry["file"] = str(path)
            out.append(entry)
        emit(
            {"modulus": args.modulus, "count": len(found), "cocycles": out},
            cfg,
            text=f"{len(found)} connected extension class(es) with coefficients Z_{args.modulus}",
        )
        return EXIT_OK
    raise UsageError(f"unknown quandle subcommand {sub}")


# ---------------------------------------------------------------------------
# coloring commands


def _braid(args):
    return parse_braid(args.braid, args.strands)


def cmd_color(args, cfg: Config) -> int:
    Q = load_quandle(args.quandle, transpose=args.transpose)
    w = _braid(args)
    c = coloring.count_colorings(Q, w, workers=cfg.workers, full_enum=args.full_enum, executor=cfg.pool())
    d = c.as_dict()
    text = f"total {c.total}, nontrivial {c.nontrivial}, fixed strand {c.fixed_strand}, evaluations {c.evaluations}"
    emit(d, cfg, text=text, rows=[list(d), list(d.values())])
    return EXIT_OK


def cmd_colf(args, cfg: Config) -> int:
    Q1, Q0 = load_quandle(args.q1), load_quandle(args.q0)
    if Path(args.hom).is_file():
        f = read_hom(args.hom, Q1, Q0)
        if not f.is_homomorphism():
            raise QuandleLabError("the given map is not a homomorphism")
    else:
        try:
            k = int(args.hom)
        except ValueError:
            raise UsageError(f"--hom must be a file or a 1-based epimorphism index, got {args.hom!r}") from None
        epis = coloring.enumerate_homs(Q1, Q0, onto_only=True)
        if not 1 <= k <= len(epis):
            raise QuandleLabError(f"epimorphism index {k} out of range; {len(epis)} epimorphism(s) found")
        f = epis[k - 1]
    m = coloring.col_f(f, _braid(args), cap=cfg.enum_cap)
    payload = {"pairs": m.as_list(), "base_count": m.base_count, "lift_count": m.lift_count, "hom": [v + 1 for v in f.map]}
    emit(payload, cfg, text=str(m), rows=[["h", "k"]] + m.as_list())
    return EXIT_OK


def cmd_cocycle(args, cfg: Config) -> int:
    Q = load_quandle(args.quandle, transpose=args.transpose)
    phi = read_cocycle(args.cocycle, Q)
    inv = coloring.cocycle_invariant(phi, _braid(args), cap=cfg.enum_cap)
    values = [[v, k] for v, k in inv.multiset]
    text = "{" + ", ".join(f"{v}: {k}" for v, k in inv.multiset) + "}"
    emit({"modulus": inv.modulus, "multiset": values, "total": inv.total}, cfg, text=text, rows=[["value", "multiplicity"]] + values)
    return EXIT_OK


# ---------------------------------------------------------------------------
# batch


def cmd_batch(args, cfg: Config) -> int:
    sub = args.bcmd
    if sub == "matrix":
        knots = load_knot_table(args.knots)
        named = load_quandle_list(args.quandles)
        Mx = lab.build_matrix(
            [q for _, q in named],
            knots,
            names=[n for n, _ in named],
            workers=cfg.workers,
            cell_timeout=cfg.cell_timeout,
            executor=cfg.pool(),
        )
        csv_path, side = Mx.save(args.output)
        missing = Mx.sidecar()["missing_cells"]
        emit(
            {"matrix": str(csv_path), "sidecar": str(side), "shape": list(Mx.entries.shape), "missing_cells": missing},
            cfg,
            text=f"wrote {Mx.entries.shape[0]}x{Mx.entries.shape[1]} matrix to {csv_path} ({len(missing)} missing cell(s))",
        )
        return EXIT_OK

    Mx = lab.load_matrix(args.matrix)
    if sub == "distinguish":
        if args.prop35:
            rep = lab.check_prop35(Mx, condition_d=not args.no_d)
            d = rep.as_dict()
            text = _condition_text(d) + f"\nconclusion: {rep.conclusion}"
            emit(d, cfg, text=text, rows=_condition_rows(d))
            return EXIT_OK if rep.abc_hold else EXIT_FAIL
        rep = lab.check_distinguishing(Mx)
        d = rep.as_dict(Mx if args.witnesses else None)
        emit(d, cfg, text=_condition_text(d), rows=_condition_rows(d))
        return EXIT_OK if rep.holds else EXIT_FAIL
    if sub == "similar":
        part = lab.similarity_partition(Mx)
        d = part.as_dict()
        text = "\n".join(" ".join(b) for b in d["blocks"])
        rows = [["block", "quandle"]] + [[k + 1, n] for k, b in enumerate(d["blocks"]) for n in b]
        emit(d, cfg, text=text, rows=rows)
        return EXIT_OK
    if sub == "bounds":
        known = lab.load_known(args.known) if args.known else None
        reports = lab.bound_report(Mx, known)
        d = {
            "quandle_list": Mx.names,
            "simple_alexander": [Mx.names[i] for i in Mx.simple_alexander],
            "reports": [r.as_dict() for r in reports],
        }
        rows = [["knot", "mlq", "mlq_f", "bridge_lower", "nakanishi_lower", "tunnel", "unknotting_case", "data_errors"]]
        for r in reports:
            rows.append(
                [
                    r.knot,
                    r.mlq,
                    "" if r.mlq_f is None else r.mlq_f,
                    r.bridge_lower,
                    "" if r.nakanishi_lower is None else r.nakanishi_lower,
                    "" if r.tunnel is None else r.tunnel,
                    "" if r.unknotting_case is None else (r.unknotting_case.label or "unclassified"),
                    "; ".join(r.data_errors),
                ]
            )
        text = "\n".join(",".join(map(str, r)) for r in rows)
        emit(d, cfg, text=text, rows=rows)
        return EXIT_FAIL if any(r.data_errors for r in reports) else EXIT_OK
    if sub == "minimize":
        chosen = lab.minimize_set(Mx, args.goal)
        names = [Mx.names[i] for i in chosen]
        if args.output:
            Mx.subset(chosen).save(args.output)
        emit({"goal": args.goal, "size": len(chosen), "quandles": names}, cfg, text="\n".join(names), rows=[[n] for n in names])
        return EXIT_OK
    raise UsageError(f"unknown batch subcommand {sub}")


def _condition_text(d: dict) -> str:
    lines = []
    for name, c in d["conditions"].items():
        state = "holds" if c["holds"] else "fails"
        bad = c.get("failing_pairs", c.get("failing_knots", []))
        lines.append(f"condition ({name}) {state}" + (f": {len(bad)} failure(s)" if bad else ""))
        for b in bad:
            lines.append("  " + (" ".join(b) if isinstance(b, list) else b))
    return "\n".join(lines)


def _condition_rows(d: dict) -> list[list]:
    rows = [["condition", "holds", "failing"]]
    for name, c in d["conditions"].items():
        bad = c.get("failing_pairs", c.get("failing_knots", []))
        rows.append([name, c["holds"], " ".join("/".join(b) if isinstance(b, list) else b for b in bad)])
    return rows


# ---------------------------------------------------------------------------
# parser


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    def d(v):
        return argparse.SUPPRESS if suppress else v

    g = p.add_argument_group("global options")
    g.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=d("json"))
    g.add_argument("--workers", type=int, default=d(None), help="worker processes (default: $QUANDLE_LAB_WORKERS or CPU count)")
    g.add_argument("--seed", type=int, default=d(0), help="seed for randomized helpers")
    g.add_argument("--cell-timeout", type=float, default=d(None), help="seconds per matrix cell")
    g.add_argument("--enum-cap", type=int, default=d(coloring.ENUMERATION_CAP), help="cap on enumerated tuples")


def _braid_args(p) -> None:
    p.add_argument("--braid", required=True, help='signed letters, e.g. "1 -2 1 -2"')
    p.add_argument("--strands", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quandle-lab", description="Finite quandles and knot colorings.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(parent, name, **kw):
        p = parent.add_parser(name, **kw)
        _globals(p, suppress=True)
        return p

    q = add(sub, "quandle", help="construct, validate and inspect quandles")
    qs = q.add_subparsers(dest="qcmd", required=True)
    p = add(qs, "validate", help="check the quandle axioms on a matrix file")
    p.add_argument("file")
    p.add_argument("--transpose", action="store_true")
    p.add_argument("--limit", type=int, default=None, help="stop after this many violations")
    for name, extra in (
        ("props", None),
        ("dual", None),
        ("product", "other"),
        ("iso", "other"),
        ("inn", None),
        ("relabel", None),
        ("build", None),
        ("extensions", None),
    ):
        p = add(qs, name)
        p.add_argument("quandle", help="matrix file or constructor spec, e.g. 'alexander p=2 h=1,1,1'")
        if extra:
            p.add_argument(extra)
        p.add_argument("--transpose", action="store_true")
        if name in ("dual", "product", "relabel", "build"):
            p.add_argument("-o", "--output")
        if name == "relabel":
            p.add_argument("--perm", help="1-based images; random (from --seed) when omitted")
        if name == "extensions":
            p.add_argument("--modulus", type=int, required=True)
            p.add_argument("--output-dir")

    p = add(sub, "color", help="count colorings of a braid closure")
    p.add_argument("--quandle", required=True)
    p.add_argument("--transpose", action="store_true")
    p.add_argument("--full-enum", action="store_true", help="skip the fixed-first-strand shortcut")
    _braid_args(p)

    p = add(sub, "colf", help="lifting multiset of a homomorphism")
    p.add_argument("--q1", required=True)
    p.add_argument("--q0", required=True)
    p.add_argument("--hom", required=True, help="hom file (1-based images) or 1-based epimorphism index")
    _braid_args(p)

    p = add(sub, "cocycle", help="2-cocycle invariant")
    p.add_argument("--quandle", required=True)
    p.add_argument("--cocycle", required=True)
    p.add_argument("--transpose", action="store_true")
    _braid_args(p)

    b = add(sub, "batch", help="coloring matrix and reports")
    bs = b.add_subparsers(dest="bcmd", required=True)
    p = add(bs, "matrix")
    p.add_argument("--knots", required=True)
    p.add_argument("--quandles", required=True, help="directory of matrix files or a manifest")
    p.add_argument("-o", "--output", required=True)
    p = add(bs, "distinguish")
    p.add_argument("matrix")
    p.add_argument("--prop35", action="store_true")
    p.add_argument("--no-d", action="store_true", help="skip condition (D)")
    p.add_argument("--witnesses", action="store_true", help="list a separating quandle for every pair")
    p = add(bs, "similar")
    p.add_argument("matrix")
    p = add(bs, "bounds")
    p.add_argument("matrix")
    p.add_argument("--known", help="CSV of known invariants: name,bridge,unknotting,nakanishi")
    p = add(bs, "minimize")
    p.add_argument("matrix")
    p.add_argument("--goal", default="ABC", choices=lab.GOALS)
    p.add_argument("-o", "--output")
    return parser


COMMANDS = {"quandle": cmd_quandle, "color": cmd_color, "colf": cmd_colf, "cocycle": cmd_cocycle, "batch": cmd_batch}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = None
    try:
        cfg = Config(
            workers=args.workers if args.workers is not None else default_workers(),
            enum_cap=args.enum_cap,
            cell_timeout=args.cell_timeout,
            fmt=args.fmt,
            seed=args.seed,
        )
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        report_error(exc, cfg, "usage")
        return EXIT_USAGE
    except (OSError, DataError) as exc:
        report_error(exc, cfg, "input")
        return EXIT_USAGE
    except QuandleLabError as exc:
        report_error(exc, cfg, type(exc).__name__)
        return EXIT_FAIL
    finally:
        if cfg is not None:
            cfg.close()


if __name__ == "__main__":
    sys.exit(main())
