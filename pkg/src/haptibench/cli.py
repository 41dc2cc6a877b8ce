"""Command-line entry point: simulate -> physical/fitts -> compare -> report.

Exit codes: 0 success, 1 input/usage error, 2 analysis failure. Output files
are written atomically (temp file + rename); progress goes to stderr and
stdout is reserved for --stdout JSON emission.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import synth
from .analysis import (
    PipelineConfig,
    analyze_physical_paths,
    physical_metrics_dict,
    pointing_metrics_dict,
)
from .errors import (
    EmptyRecording,
    HaptibenchError,
    InconsistentSuccessFlag,
    MalformedLine,
    MalformedRow,
    NonMonotonicTime,
)
from .io import discover_recordings, read_pointing_log
from .report import (
    ComparisonReport,
    LatencyRow,
    LevelRow,
    PointingRow,
    RangeRow,
    RawComparisonSamples,
    TabletProfile,
    compare_tablets,
    render_report,
    report_from_json,
)

SCHEMA_VERSION = 1

CONFIG_ENV_VAR = "HAPTIBENCH_CONFIG"

_TUNABLE_FLAGS = (
    ("contact_threshold", float),
    ("min_speed_fraction", float),
    ("cv_threshold", float),
    ("slip_drop_fraction", float),
    ("min_samples", int),
    ("max_out_of_window_fraction", float),
    ("max_slip_events", int),
    ("trend_pivot", float),
    ("latency_smoothing_s", float),
    ("latency_search_window_s", float),
    ("noise_floor_factor", float),
    ("max_reject_fraction", float),
)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _atomic_write(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(obj: dict) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


def _load_config_overrides(args: argparse.Namespace) -> dict:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    overrides = _load_config_overrides(args)
    values = {}
    for name, cast in _TUNABLE_FLAGS:
        if name in overrides:
            values[name] = cast(overrides[name])
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    if getattr(args, "ridge_polarity", None):
        values["ridge_polarity"] = args.ridge_polarity
    elif "ridge_polarity" in overrides:
        values["ridge_polarity"] = overrides["ridge_polarity"]
    return PipelineConfig(**values)


def _add_tunable_flags(p: argparse.ArgumentParser) -> None:
    for name, cast in _TUNABLE_FLAGS:
        p.add_argument(f"--{name.replace('_', '-')}", type=cast, default=None)
    p.add_argument("--ridge-polarity", choices=("friction_up", "friction_down"), default=None)
    p.add_argument("--config", type=str, default=None,
                   help=f"JSON file of overrides (fallback: ${CONFIG_ENV_VAR})")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haptibench",
        description="Benchmark and compare friction-modulation haptic touchscreens.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_sim = sub.add_parser("simulate", help="generate a synthetic dataset with ground truth")
    p_sim.add_argument("--spec", required=True, help="tablet/protocol spec JSON")
    p_sim.add_argument("--out", required=True, help="output dataset directory")
    p_sim.add_argument("--seed", type=int, default=None, help="overrides the seed in the spec file")

    p_phys = sub.add_parser("physical", help="physical metrics from a recordings directory")
    p_phys.add_argument("--in", dest="in_dir", required=True)
    p_phys.add_argument("--out", required=True)
    p_phys.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_phys.add_argument("--stdout", action="store_true", help="also emit JSON on stdout")
    _add_tunable_flags(p_phys)

    p_fitts = sub.add_parser("fitts", help="behavioral metrics from pointing logs")
    p_fitts.add_argument("--in", dest="in_files", nargs="+", required=True)
    p_fitts.add_argument("--out", required=True)
    p_fitts.add_argument("--stdout", action="store_true")

    p_cmp = sub.add_parser("compare", help="statistical comparison of two tablets")
    p_cmp.add_argument("metrics_a")
    p_cmp.add_argument("metrics_b")
    p_cmp.add_argument("--raw-a", default=None, help="dataset dir of tablet A (pointing logs)")
    p_cmp.add_argument("--raw-b", default=None, help="dataset dir of tablet B (pointing logs)")
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--format", choices=("json", "markdown"), default=None,
                       help="default: inferred from --out extension")
    p_cmp.add_argument("--stdout", action="store_true")

    p_rep = sub.add_parser("report", help="re-render a comparison report")
    p_rep.add_argument("report_json")
    p_rep.add_argument("--format", choices=("json", "markdown"), default="markdown")
    p_rep.add_argument("--out", required=True)

    return parser


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec_doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    seed = args.seed if args.seed is not None else int(spec_doc.get("seed", 0))
    tablet_id = spec_doc.get("tablet_id", "sim")
    out = Path(args.out)
    wrote = []
    if "tablet" in spec_doc and "physical" in spec_doc:
        spec = synth.tablet_spec_from_dict(spec_doc["tablet"])
        protocol = synth.physical_protocol_from_dict(spec_doc["physical"])
        data = synth.simulate_physical_session(
            spec, protocol, seed=seed, tablet_id=tablet_id, out_dir=out
        )
        wrote.append(f"{len(data.recordings)} recordings + ground_truth.json")
    if "pointing" in spec_doc:
        gt = synth.pointing_ground_truth_from_dict(spec_doc["pointing"]["ground_truth"])
        trials = []
        for proto_doc in spec_doc["pointing"]["protocols"]:
            proto_doc = dict(proto_doc)
            proto_doc.setdefault("tablet_id", tablet_id)
            proto = synth.pointing_protocol_from_dict(proto_doc)
            trials.extend(
                synth.simulate_pointing_logs(gt, proto, seed=seed + (1 if proto.haptic else 0))
            )
        log_path = out / "pointing" / f"{tablet_id}.trials.jsonl"
        synth.write_pointing_session(trials, log_path)
        wrote.append(f"{len(trials)} pointing trials")
    if not wrote:
        _log("spec contains neither a physical protocol nor a pointing section")
        return 1
    _log(f"simulated {tablet_id}: " + ", ".join(wrote))
    return 0


def _cmd_physical(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    paths = discover_recordings(Path(args.in_dir))
    if not paths:
        _log(f"no recordings with sidecars under {args.in_dir}")
        return 1
    _log(f"analyzing {len(paths)} recordings (jobs={args.jobs})")
    analysis = analyze_physical_paths(paths, config, jobs=args.jobs)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tablet_id": analysis.tablet_id,
        "physical": physical_metrics_dict(analysis),
    }
    payload = _dump_json(doc)
    _atomic_write(Path(args.out), payload)
    if args.stdout:
        sys.stdout.write(payload.decode("utf-8"))
    _log(f"wrote {args.out}")
    return 0


def _cmd_fitts(args: argparse.Namespace) -> int:
    trials = []
    for f in args.in_files:
        trials.extend(read_pointing_log(Path(f)))
    if not trials:
        _log("no trials in input files")
        return 1
    doc = {"schema_version": SCHEMA_VERSION, "pointing": pointing_metrics_dict(trials)}
    payload = _dump_json(doc)
    _atomic_write(Path(args.out), payload)
    if args.stdout:
        sys.stdout.write(payload.decode("utf-8"))
    _log(f"wrote {args.out}")
    return 0


def _profile_from_doc(doc: dict, raw_dir: Optional[str]) -> tuple[TabletProfile, dict]:
    """Build a TabletProfile from a metrics JSON document, pulling the
    pointing section from the metrics file or recomputing it from the raw
    dataset directory's pointing logs."""
    tablet_id = doc.get("tablet_id")
    phys = doc.get("physical")
    if not tablet_id or not phys:
        raise HaptibenchError("metrics file lacks tablet_id/physical section")
    pointing = (doc.get("pointing") or {}).get(tablet_id)
    if pointing is None and raw_dir:
        logs = sorted(Path(raw_dir).rglob("*.trials.jsonl"))
        trials = []
        for lg in logs:
            trials.extend(read_pointing_log(lg))
        trials = [t for t in trials if t.tablet_id == tablet_id]
        if trials:
            pointing = pointing_metrics_dict(trials).get(tablet_id)
    if pointing is None or "haptic" not in pointing or "no_haptic" not in pointing:
        raise HaptibenchError(
            f"no pointing metrics for {tablet_id!r}; pass a raw dataset dir with "
            "*.trials.jsonl logs or a metrics file with a pointing section"
        )
    if phys.get("latency") is None:
        raise HaptibenchError(f"metrics for {tablet_id!r} lack a latency estimate")

    def level(key: str) -> LevelRow:
        p = phys[key]
        return LevelRow(
            mean=p["mean"],
            inter_participant_std=p["inter_participant_std"],
            intra_trial_std=p["intra_trial_std"],
            n_swipes=p["n_swipes"],
            n_participants=p["n_participants"],
        )

    def pointing_row(key: str) -> PointingRow:
        p = pointing[key]
        return PointingRow(
            slope_mean=p["slope_mean"],
            slope_std=p["slope_std"],
            mt_hardest_mean=p["mt_hardest_mean"],
            mt_hardest_std=p["mt_hardest_std"],
            hardest_id=p["hardest_id"],
            error_rate=p["error_rate"],
            n_trials=p["n_trials"],
            n_hardest=len(p["mt_hardest_samples"]),
            n_participants=p["n_participants"],
        )

    fr = phys["friction_range"]
    lat = phys["latency"]
    profile = TabletProfile(
        tablet_id=tablet_id,
        mu_high=level("mu_high"),
        mu_low=level("mu_low"),
        friction_range=RangeRow(
            mean=fr["mean"],
            inter_participant_std=fr["inter_participant_std"],
            relative_range=fr["relative_range"],
            friction_contrast=fr["friction_contrast"],
            n_pairs=fr["n_pairs"],
            n_participants=fr["n_participants"],
        ),
        latency=LatencyRow(mean_s=lat["mean_s"], std_s=lat["std_s"], n=lat["n"]),
        pointing_no_haptic=pointing_row("no_haptic"),
        pointing_haptic=pointing_row("haptic"),
    )
    raw = {
        "delta_mu": [float(v) for v in fr["per_trial_samples"]],
        "mt_no_haptic": [float(v) for v in pointing["no_haptic"]["mt_hardest_samples"]],
        "mt_haptic": [float(v) for v in pointing["haptic"]["mt_hardest_samples"]],
    }
    return profile, raw


def _cmd_compare(args: argparse.Namespace) -> int:
    doc_a = json.loads(Path(args.metrics_a).read_text(encoding="utf-8"))
    doc_b = json.loads(Path(args.metrics_b).read_text(encoding="utf-8"))
    profile_a, raw_a = _profile_from_doc(doc_a, args.raw_a)
    profile_b, raw_b = _profile_from_doc(doc_b, args.raw_b)
    raw = RawComparisonSamples(
        delta_mu_a=raw_a["delta_mu"],
        delta_mu_b=raw_b["delta_mu"],
        mt_a_no_haptic=raw_a["mt_no_haptic"],
        mt_a_haptic=raw_a["mt_haptic"],
        mt_b_no_haptic=raw_b["mt_no_haptic"],
        mt_b_haptic=raw_b["mt_haptic"],
    )
    report = compare_tablets(profile_a, profile_b, raw)
    fmt = args.format or ("markdown" if args.out.endswith(".md") else "json")
    payload = render_report(report, fmt)
    _atomic_write(Path(args.out), payload)
    if args.stdout:
        sys.stdout.write(render_report(report, "json").decode("utf-8"))
    for w in report.warnings:
        _log(f"warning: {w}")
    _log(f"wrote {args.out}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    report: ComparisonReport = report_from_json(Path(args.report_json).read_bytes())
    _atomic_write(Path(args.out), render_report(report, args.format))
    _log(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "physical": _cmd_physical,
    "fitts": _cmd_fitts,
    "compare": _cmd_compare,
    "report": _cmd_report,
}


def run(argv: Sequence[str]) -> int:
    """Parse argv and run the subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    input_errors = (
        OSError, json.JSONDecodeError, ValueError, KeyError,
        MalformedRow, NonMonotonicTime, EmptyRecording,
        MalformedLine, InconsistentSuccessFlag,
    )
    try:
        return _COMMANDS[args.subcommand](args)
    except input_errors as e:
        _log(f"input error: {e}")
        return 1
    except HaptibenchError as e:
        _log(f"analysis failed: {e}")
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
