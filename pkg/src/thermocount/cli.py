"""Command-line front end.

Subcommands
-----------
estimate    run a sequence through the counting pipeline, write the CSV,
            per-frame annotated PGMs, and summary metrics
calibrate   search the parameter space against a labeled sequence
synth       render a synthetic scene description into frames + manifest
eval        score an estimates CSV that carries ground truth
serve       expose the pipeline over HTTP

Exit codes: 0 on success, 1 for usage problems (bad flags, missing
files), 2 for malformed data (PGM, JSON, CSV, parameter values).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .annotate import annotate_frame
from .calibration import configure, default_space, load_space
from .errors import FormatError, ParameterError, ThermoCountError
from .frames import load_sequence, sample_frames, write_frame
from .metrics import aggregate, confidence
from .params import load_params, save_params
from .pipeline import EstimateRecord, init_session, step
from .segmentation import BinaryMap
from .synth import load_scene, render

CSV_HEADER = ["frame_index", "raw_count", "final_count", "ground_truth", "confidence"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1 here
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thermocount", description="Occupancy counting from overhead thermal frames.")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    est = sub.add_parser("estimate", help="estimate occupancy over a frame sequence")
    est.add_argument("--manifest", required=True, help="sequence manifest JSON")
    est.add_argument("--params", required=True, help="pipeline parameters JSON")
    est.add_argument("--out-dir", required=True, help="directory for CSV, metrics, annotated frames")
    est.set_defaults(func=cmd_estimate)

    cal = sub.add_parser("calibrate", help="search parameters against a labeled sequence")
    cal.add_argument("--manifest", required=True, help="labeled sequence manifest JSON")
    cal.add_argument("--out", required=True, help="where to write the winning parameters JSON")
    cal.add_argument("--space", help="search-space JSON (defaults to built-in ranges)")
    cal.add_argument("--report", help="optional JSON report of the search trace")
    cal.add_argument("--max-passes", type=int, default=5, help="cap on full axis passes")
    cal.set_defaults(func=cmd_calibrate)

    syn = sub.add_parser("synth", help="render a synthetic scene into frames + manifest")
    syn.add_argument("--scene", required=True, help="scene description JSON")
    syn.add_argument("--out-dir", required=True, help="directory for rendered frames")
    syn.set_defaults(func=cmd_synth)

    ev = sub.add_parser("eval", help="score an estimates CSV against its ground-truth column")
    ev.add_argument("--csv", required=True, help="estimates CSV produced by the estimate command")
    ev.add_argument("--out", help="optional path for the metrics JSON")
    ev.set_defaults(func=cmd_eval)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(func=cmd_serve)

    return parser


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_estimates_csv(path, records: list[EstimateRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow([
                rec.frame_index,
                rec.raw_count,
                rec.final_count,
                "" if rec.ground_truth is None else rec.ground_truth,
                "" if rec.confidence is None else repr(rec.confidence),
            ])


def read_estimates_csv(path) -> list[EstimateRecord]:
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise FormatError(f"{path}: unexpected header {header}")
        for line, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise FormatError(f"{path}:{line}: expected {len(CSV_HEADER)} fields")
            try:
                records.append(EstimateRecord(
                    frame_index=int(row[0]),
                    raw_count=int(row[1]),
                    final_count=int(row[2]),
                    ground_truth=int(row[3]) if row[3] != "" else None,
                    confidence=float(row[4]) if row[4] != "" else None,
                ))
            except ValueError as exc:
                raise FormatError(f"{path}:{line}: {exc}") from exc
    return records


def cmd_estimate(args) -> int:
    manifest = load_sequence(args.manifest)
    params = load_params(args.params)
    os.makedirs(args.out_dir, exist_ok=True)

    frames = sample_frames(manifest)
    indices = manifest.sampled
    truth = manifest.ground_truth or {}

    state = init_session(frames[0], params)
    records = []
    for idx, frame in zip(indices, frames):
        state, record = step(state, frame, params, frame_index=idx)
        if idx in truth:
            record.ground_truth = truth[idx]
            if record.ground_truth >= 1:
                record.confidence = confidence(record.final_count, record.ground_truth)
        records.append(record)

        seg = state.prev_segmentation
        diff = state.last_difference
        if diff is None:
            diff = BinaryMap(np.zeros(seg.bits.shape, dtype=bool))
        annotated = annotate_frame(frame, seg, diff, record)
        write_frame(os.path.join(args.out_dir, f"annotated_{idx:04d}.pgm"), annotated)

    write_estimates_csv(os.path.join(args.out_dir, "estimates.csv"), records)
    scored = [r for r in records if r.ground_truth is not None]
    if scored:
        _write_json(os.path.join(args.out_dir, "metrics.json"), aggregate(scored))
    print(f"wrote {len(records)} estimates to {args.out_dir}")
    return 0


def cmd_calibrate(args) -> int:
    manifest = load_sequence(args.manifest)
    space = load_space(args.space) if args.space else default_space()
    if args.max_passes < 1:
        raise UsageError("--max-passes must be at least 1")
    report = configure(space, manifest, max_passes=args.max_passes)
    save_params(args.out, report.best_params)
    if args.report:
        _write_json(args.report, report.to_dict())
    print(f"best accuracy {report.best_accuracy:.1f} after {report.passes} passes "
          f"({len(report.trace)} evaluations)")
    return 0


def cmd_synth(args) -> int:
    scene = load_scene(args.scene)
    manifest_path = render(scene, args.out_dir)
    print(manifest_path)
    return 0


def cmd_eval(args) -> int:
    records = read_estimates_csv(args.csv)
    scored = [r for r in records if r.ground_truth is not None]
    if not scored:
        raise FormatError(f"{args.csv}: no rows carry ground truth")
    metrics = aggregate(scored)
    print(json.dumps(metrics, indent=2, sort_keys=True))
    if args.out:
        _write_json(args.out, metrics)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"thermocount: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"thermocount: error: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"thermocount: error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, ParameterError) as exc:
        print(f"thermocount: error: {exc}", file=sys.stderr)
        return 2
    except ThermoCountError as exc:
        print(f"thermocount: error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
