"""Reading, validation, and serialization of force/position recordings,
pointing-task logs, and their metadata sidecars.

File conventions
----------------
* Recordings: CSV with fixed header ``t,fn,ft,x`` (seconds, newtons, newtons,
  millimetres) plus a JSON metadata sidecar named ``<stem>.meta.json``.
* Pointing logs: JSON Lines, one trial object per line, append-friendly.
* All files UTF-8, decimal point ``.``, locale-independent.
"""

from __future__ import annotations

import io as _io
import json
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    EmptyRecording,
    InconsistentSuccessFlag,
    MalformedLine,
    MalformedRow,
    NonMonotonicTime,
)

CSV_HEADER = "t,fn,ft,x"

#: Normal force below which the finger is considered off the screen (N).
#: Well below the 0.5 N protocol floor.
CONTACT_THRESHOLD_N = 0.1

ACTUATIONS = ("off", "constant_max", "ridge")
DIRECTIONS = ("ltr", "rtl")

_TRIAL_FIELDS = (
    "participant_id",
    "tablet_id",
    "haptic",
    "distance_d",
    "width_w",
    "t_touch",
    "t_release",
    "release_x",
    "target_center",
    "success",
    "trial_index",
    "direction",
)


class ForceSample(NamedTuple):
    """One force/position sample: time (s), normal and tangential force (N),
    finger position along the screen length (mm)."""

    t: float
    f_n: float
    f_t: float
    x: float


@dataclass(frozen=True)
class RecordingMeta:
    participant_id: str
    tablet_id: str
    actuation: str  # off | constant_max | ridge
    nominal_speed: float  # mm/s
    nominal_force_window: tuple[float, float]  # N
    screen_length: float = 100.0  # mm
    sample_rate: float = 10_000.0  # Hz
    session_index: int = 0
    trial_index: int = 0
    ridge_span: Optional[tuple[float, float]] = None  # mm, present iff actuation == ridge

    def __post_init__(self):
        if self.actuation not in ACTUATIONS:
            raise ValueError(f"unknown actuation {self.actuation!r}")
        if (self.ridge_span is not None) != (self.actuation == "ridge"):
            raise ValueError("ridge_span must be present exactly when actuation == 'ridge'")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        lo, hi = self.nominal_force_window
        if not lo < hi:
            raise ValueError("nominal_force_window must satisfy lo < hi")

    def to_json(self) -> str:
        d = asdict(self)
        d["nominal_force_window"] = list(self.nominal_force_window)
        d["ridge_span"] = list(self.ridge_span) if self.ridge_span is not None else None
        return json.dumps(d, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RecordingMeta":
        d = json.loads(text)
        d["nominal_force_window"] = tuple(d["nominal_force_window"])
        if d.get("ridge_span") is not None:
            d["ridge_span"] = tuple(d["ridge_span"])
        return cls(**d)


@dataclass(frozen=True)
class Recording:
    """Columnar force/position recording with its metadata.

    Arrays are read-only and share one length; t is strictly increasing.
    """

    meta: RecordingMeta
    t: np.ndarray
    fn: np.ndarray
    ft: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        for arr in (self.t, self.fn, self.ft, self.x):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.t.size

    def __getitem__(self, i: int) -> ForceSample:
        return ForceSample(float(self.t[i]), float(self.fn[i]), float(self.ft[i]), float(self.x[i]))

    @property
    def samples(self) -> Iterable[ForceSample]:
        return (self[i] for i in range(len(self)))

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


@dataclass(frozen=True)
class PointingTrial:
    participant_id: str
    tablet_id: str
    haptic: bool
    distance_d: float  # mm
    width_w: float  # mm
    t_touch: float  # ms since session start
    t_release: float  # ms
    release_x: float  # mm
    target_center: float  # mm
    success: bool
    trial_index: int
    direction: str  # ltr | rtl

    @property
    def movement_time(self) -> float:
        """Drag duration in ms."""
        return self.t_release - self.t_touch

    def geometric_success(self) -> bool:
        return abs(self.release_x - self.target_center) <= self.width_w / 2.0


@dataclass(frozen=True)
class ValidationReport:
    """Diagnostics on a recording; flags only, never rejects."""

    n_samples: int
    out_of_window_fraction: float
    below_contact_fraction: float
    motion_duty_cycle: float
    duration_ok: bool  # duration within [1 s, 60 s]
    sample_interval_ok: bool  # median interval within 10% of 1/sample_rate


def _build_recording(meta: RecordingMeta, data: np.ndarray) -> Recording:
    t = np.ascontiguousarray(data[:, 0])
    fn = np.ascontiguousarray(data[:, 1])
    ft = np.ascontiguousarray(data[:, 2])
    x = np.ascontiguousarray(data[:, 3])

    bad = ~np.isfinite(data).all(axis=1)
    if bad.any():
        row = int(np.argmax(bad)) + 1
        raise MalformedRow(row, "non-finite value")
    tol = 1e-9 * max(meta.screen_length, 1.0)
    out = (x < -tol) | (x > meta.screen_length + tol)
    if out.any():
        row = int(np.argmax(out)) + 1
        raise MalformedRow(row, f"x outside [0, {meta.screen_length}] mm")
    if t.size > 1:
        nonmono = np.diff(t) <= 0
        if nonmono.any():
            row = int(np.argmax(nonmono)) + 2  # row of the offending (later) sample
            raise NonMonotonicTime(row)
    return Recording(meta=meta, t=t, fn=fn, ft=ft, x=x)


def parse_recording(csv_bytes: bytes, meta: RecordingMeta) -> Recording:
    """Parse a ``t,fn,ft,x`` CSV byte stream into a Recording.

    Row numbers in errors are 1-based over data rows (header excluded).
    """
    text = csv_bytes.decode("utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise MalformedRow(0, f"missing or wrong header, expected {CSV_HEADER!r}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if not body:
        raise EmptyRecording("no data rows")
    try:
        data = np.loadtxt(_io.StringIO("\n".join(body)), delimiter=",", ndmin=2)
    except ValueError:
        data = None
    if data is None or data.shape[1] != 4:
        # slow pass to locate the offending row
        for i, ln in enumerate(body, start=1):
            parts = ln.split(",")
            if len(parts) != 4:
                raise MalformedRow(i, f"expected 4 fields, got {len(parts)}")
            try:
                [float(p) for p in parts]
            except ValueError:
                raise MalformedRow(i, "non-numeric field") from None
        raise MalformedRow(0, "unparseable CSV body")
    return _build_recording(meta, data)


def serialize_recording(rec: Recording) -> bytes:
    """Serialize to CSV bytes; values keep 9 significant digits."""
    rows = "\n".join(
        f"{a:.9g},{b:.9g},{c:.9g},{d:.9g}"
        for a, b, c, d in zip(rec.t, rec.fn, rec.ft, rec.x)
    )
    return (CSV_HEADER + "\n" + rows + "\n").encode("utf-8")


def write_recording(rec: Recording, csv_path: Path) -> None:
    """Write the CSV plus its ``<stem>.meta.json`` sidecar."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_bytes(serialize_recording(rec))
    sidecar_path(csv_path).write_text(rec.meta.to_json() + "\n", encoding="utf-8")


def sidecar_path(csv_path: Path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".meta.json")


def read_recording(csv_path: Path) -> Recording:
    """Load a recording CSV together with its metadata sidecar."""
    csv_path = Path(csv_path)
    meta = RecordingMeta.from_json(sidecar_path(csv_path).read_text(encoding="utf-8"))
    return parse_recording(csv_path.read_bytes(), meta)


def discover_recordings(root: Path) -> list[Path]:
    """All recording CSVs under ``root`` that have a metadata sidecar."""
    root = Path(root)
    return sorted(p for p in root.rglob("*.csv") if sidecar_path(p).exists())


def validate_recording(
    rec: Recording,
    contact_threshold: float = CONTACT_THRESHOLD_N,
    motion_speed_threshold: float = 5.0,
) -> ValidationReport:
    """Diagnostic fractions for a recording; deterministic and side-effect free.

    motion_speed_threshold (mm/s) separates dwell from motion for the
    duty-cycle figure.
    """
    lo, hi = rec.meta.nominal_force_window
    n = len(rec)
    out_frac = float(np.mean((rec.fn < lo) | (rec.fn > hi)))
    below_contact = float(np.mean(rec.fn < contact_threshold))
    if n > 1:
        v = np.gradient(rec.x, rec.t)
        duty = float(np.mean(np.abs(v) >= motion_speed_threshold))
        median_dt = float(np.median(np.diff(rec.t)))
        nominal_dt = 1.0 / rec.meta.sample_rate
        interval_ok = abs(median_dt - nominal_dt) <= 0.1 * nominal_dt
    else:
        duty = 0.0
        interval_ok = False
    duration_ok = 1.0 <= rec.duration <= 60.0
    return ValidationReport(
        n_samples=n,
        out_of_window_fraction=out_frac,
        below_contact_fraction=below_contact,
        motion_duty_cycle=duty,
        duration_ok=duration_ok,
        sample_interval_ok=interval_ok,
    )


# ---- pointing logs ----


def _trial_from_obj(obj: dict, line_no: int) -> PointingTrial:
    missing = [k for k in _TRIAL_FIELDS if k not in obj]
    if missing:
        raise MalformedLine(line_no, f"missing fields: {', '.join(missing)}")
    try:
        trial = PointingTrial(
            participant_id=str(obj["participant_id"]),
            tablet_id=str(obj["tablet_id"]),
            haptic=bool(obj["haptic"]),
            distance_d=float(obj["distance_d"]),
            width_w=float(obj["width_w"]),
            t_touch=float(obj["t_touch"]),
            t_release=float(obj["t_release"]),
            release_x=float(obj["release_x"]),
            target_center=float(obj["target_center"]),
            success=bool(obj["success"]),
            trial_index=int(obj["trial_index"]),
            direction=str(obj["direction"]),
        )
    except (TypeError, ValueError):
        raise MalformedLine(line_no, "field of wrong type") from None
    if trial.direction not in DIRECTIONS:
        raise MalformedLine(line_no, f"direction must be one of {DIRECTIONS}")
    if not (trial.width_w > 0 and trial.distance_d > 0):
        raise MalformedLine(line_no, "distance_d and width_w must be positive")
    if not trial.t_release > trial.t_touch:
        raise MalformedLine(line_no, "t_release must exceed t_touch")
    if trial.success != trial.geometric_success():
        raise InconsistentSuccessFlag(line_no)
    return trial


def parse_pointing_log(jsonl_bytes: bytes) -> list[PointingTrial]:
    """Parse a JSON Lines pointing log, re-checking every trial's geometry."""
    trials = []
    for line_no, raw in enumerate(jsonl_bytes.decode("utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError:
            raise MalformedLine(line_no, "invalid JSON") from None
        if not isinstance(obj, dict):
            raise MalformedLine(line_no, "expected a JSON object")
        trials.append(_trial_from_obj(obj, line_no))
    return trials


def serialize_pointing_log(trials: Sequence[PointingTrial]) -> bytes:
    """One compact JSON object per line; round-trips exactly through
    parse_pointing_log."""
    lines = []
    for tr in trials:
        d = asdict(tr)
        lines.append(json.dumps(d, sort_keys=True, separators=(",", ":")))
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def read_pointing_log(path: Path) -> list[PointingTrial]:
    return parse_pointing_log(Path(path).read_bytes())


def write_pointing_log(trials: Sequence[PointingTrial], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(serialize_pointing_log(trials))
