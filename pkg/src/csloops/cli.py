"""Command-line front end: build, verify, sweep, export.

Exit code 0 means every verifier in the run passed; on failure the first
failing stage (parse / frame / basis / well-definedness / B / A / loop)
is named on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline as pl
from .errors import CsloopsError
from .loops import loop_to_text


def _read_input(value: str, kind: str) -> str:
    """Read a file argument; frame specs may also be given inline."""
    p = Path(value)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    bundled = Path(__file__).parent / "data" / value
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8")
    if kind == "frame" and "=" in value:
        return value
    raise FileNotFoundError(f"{kind} input {value!r} is not a file"
                            + (" or inline spec" if kind == "frame" else ""))


def _emit(report: pl.RunReport, fmt: str, out=sys.stdout):
    out.write(report.to_kv() if fmt == "kv" else report.to_text())


def _finish(report: pl.RunReport) -> int:
    if report.passed:
        return 0
    stage = report.first_failing_stage()
    msg = report.error_message
    if msg is None:
        for r in report.reports:
            fail = r.first_failure()
            if fail is not None:
                msg = f"{r.title}: {fail.name}"
                break
    print(f"error: stage={stage}: {msg}", file=sys.stderr)
    return 1


def cmd_build(args) -> int:
    pres_text = _read_input(args.pc, "presentation")
    frame_text = _read_input(args.frame, "frame")
    params_text = _read_input(args.params, "params") if args.params else ""
    report, artifacts = pl.build_run(pres_text, frame_text, params_text)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if artifacts is not None and artifacts.delta is not None:
        (outdir / "delta.cocycle").write_text(
            pl.cocycle_to_text(artifacts.delta, artifacts.pres))
    if artifacts is not None and artifacts.mu is not None:
        (outdir / "mu.cocycle").write_text(
            pl.cocycle_to_text(artifacts.mu, artifacts.pres))
    if artifacts is not None and artifacts.loop is not None:
        (outdir / "loop.tbl").write_text(loop_to_text(artifacts.loop))
    (outdir / "report.txt").write_text(report.to_text())
    (outdir / "report.kv").write_text(report.to_kv())
    _emit(report, args.format)
    return _finish(report)


def cmd_verify(args) -> int:
    pres_text = _read_input(args.pc, "presentation")
    frame_text = _read_input(args.frame, "frame")
    if args.delta:
        table_text = _read_input(args.delta, "delta table")
        kind = "delta"
    else:
        table_text = _read_input(args.mu, "mu table")
        kind = "mu"
    report = pl.verify_run(pres_text, frame_text, table_text, kind)
    _emit(report, args.format)
    return _finish(report)


def cmd_sweep(args) -> int:
    pres_text = _read_input(args.pc, "presentation")
    frame_text = _read_input(args.frame, "frame")
    space_text = _read_input(args.params, "params") if args.params else ""
    vectors, rows, summary = pl.sweep_run(
        pres_text, frame_text, space_text, budget=args.budget, jobs=args.jobs)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    lines = []
    for rank, (vec, rep) in enumerate(zip(vectors, rows)):
        tag = ";".join(f"tau {i} {j} = {v}" for (i, j), v in sorted(vec.items()))
        lines.append(f"row {rank}: [{tag}] scenario={rep.scenario} "
                     f"class={rep.loop_stats.get('class')} "
                     f"inn={rep.loop_stats.get('inn_invariants')} "
                     f"mlt={rep.loop_stats.get('mlt_order')} "
                     f"assoc={rep.loop_stats.get('assoc_order')} "
                     f"result={'pass' if rep.passed else 'FAIL'}")
        (outdir / f"row{rank:04d}.kv").write_text(rep.to_kv())
    head = [f"rows = {len(rows)}"]
    for key, count in sorted(summary.items(), key=lambda kv: str(kv[0])):
        scenario, inn, mlt, assoc = key
        inn_s = ",".join(str(v) for v in inn) if inn else "-"
        head.append(f"bucket scenario={scenario} inn={inn_s} "
                    f"mlt={mlt} assoc={assoc}: {count}")
    text = "\n".join(head + lines) + "\n"
    (outdir / "summary.txt").write_text(text)
    sys.stdout.write(text)
    return 0 if all(r.passed for r in rows) else 1


def cmd_export(args) -> int:
    pres_text = _read_input(args.pc, "presentation")
    frame_text = _read_input(args.frame, "frame")
    params_text = _read_input(args.params, "params") if args.params else ""
    report, artifacts = pl.build_run(pres_text, frame_text, params_text,
                                     full_battery=False)
    if artifacts is None or artifacts.loop is None:
        return _finish(report)
    Path(args.out).write_text(loop_to_text(artifacts.loop))
    return _finish(report)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csloops",
        description="Construct and verify loops of Csörgő type from "
                    "power-commutator presentations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_required):
        p.add_argument("--pc", required=True,
                       help="presentation file (bundled names also work)")
        p.add_argument("--frame", required=True,
                       help="frame file or inline 'Z = ...; R = ...; M = ...'")
        p.add_argument("--format", choices=("text", "kv"), default="text")
        if out_required:
            p.add_argument("--out", required=True)

    p = sub.add_parser("build", help="run the full pipeline, write artifacts")
    common(p, out_required=True)
    p.add_argument("--params", help="parameter file (tau/psi/phi lines)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="verify a delta or mu table file")
    common(p, out_required=False)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta", help="delta table file")
    g.add_argument("--mu", help="mu table file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="one run per free-parameter vector")
    common(p, out_required=True)
    p.add_argument("--params", help="space file with vary lines")
    p.add_argument("--budget", type=int, default=4096,
                   help="maximum number of parameter vectors")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="write just the loop Cayley table")
    common(p, out_required=True)
    p.add_argument("--params")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except CsloopsError as exc:
        print(f"error: stage={exc.stage}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
