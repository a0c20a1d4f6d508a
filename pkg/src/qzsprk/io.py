"""Run configuration, CSV outputs and the ``QZS1`` binary snapshot format."""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import DiagnosticsRecord
from .errors import (
    BadMagicError,
    ConfigError,
    SnapshotError,
    SnapshotSizeError,
    TruncatedSnapshotError,
)
from .grid import make_grid
from .state import COLLISION_CASES, FieldState

__all__ = [
    "RunConfig",
    "parse_config",
    "load_config",
    "write_diagnostics_csv",
    "read_diagnostics_csv",
    "write_report_csv",
    "read_report_csv",
    "write_snapshot",
    "read_snapshot",
    "read_snapshot_meta",
    "SnapshotWriter",
    "DIAGNOSTICS_COLUMNS",
    "REPORT_COLUMNS",
    "SNAPSHOT_MAGIC",
    "CSV_FORMAT_VERSION",
]

SNAPSHOT_MAGIC = b"QZS1"
CSV_FORMAT_VERSION = 1
DIAGNOSTICS_COLUMNS = ("t", "mass", "energy", "rm", "rh", "q_defect", "fp_iters")
REPORT_COLUMNS = ("axis", "scheme", "level", "e", "n", "rate_e", "rate_n")
SCENARIO_NAMES = ("zs_soliton", "soliton_data", "cosine_2d", "two_solitons", "pump_wave", "snapshot")


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------

def _float(s):
    return float(s)


def _int(s):
    v = float(s)
    if v != int(v):
        raise ValueError(f"{s!r} is not an integer")
    return int(v)


def _bool(s):
    low = s.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{s!r} is not a boolean")


def _float_list(s):
    return tuple(float(x) for x in s.replace(",", " ").split())


def _int_list(s):
    return tuple(_int(x) for x in s.replace(",", " ").split())


def _str(s):
    return s


# key -> (converter, check or None, message)
_SCHEMA = {
    "scheme": (_int, lambda v: v in (1, 2, 3), "scheme must be 1, 2 or 3"),
    "scenario": (_str, lambda v: v in SCENARIO_NAMES, f"scenario must be one of {SCENARIO_NAMES}"),
    "tau": (_float, lambda v: v > 0, "tau must be positive"),
    "T": (_float, lambda v: v >= 0, "T must be non-negative"),
    "eps": (_float, lambda v: v >= 0, "eps must be non-negative"),
    "points": (_int_list, lambda v: len(v) in (1, 2), "points takes one or two integers"),
    "bounds": (_float_list, lambda v: len(v) in (2, 4), "bounds takes two or four numbers"),
    "diag_stride": (_int, lambda v: v >= 1, "diag_stride must be >= 1"),
    "snap_stride": (_int, lambda v: v >= 1, "snap_stride must be >= 1"),
    "fp_tol": (_float, lambda v: v > 0, "fp_tol must be positive"),
    "fp_max_iters": (_int, lambda v: v >= 1, "fp_max_iters must be >= 1"),
    "policy": (_str, lambda v: v in ("abort", "warn"), "policy must be 'abort' or 'warn'"),
    "track_q": (_bool, None, ""),
    "output": (_str, None, ""),
    "threads": (_int, lambda v: v >= 1, "threads must be >= 1"),
    # scenario parameters
    "B": (_float, None, ""),
    "V": (_float, lambda v: abs(v) < 1, "V must satisfy |V| < 1"),
    "x0": (_float, None, ""),
    "case": (_str, lambda v: v in COLLISION_CASES, f"case must be one of {sorted(COLLISION_CASES)}"),
    "k": (_float, lambda v: v > 0, "k must be positive"),
    "beta": (_float, None, ""),
    "snapshot": (_str, None, ""),
    # studies
    "levels": (_int, lambda v: v >= 1, "levels must be >= 1"),
    "h0": (_float, lambda v: v > 0, "h0 must be positive"),
    "ref_scheme": (_int, lambda v: v in (1, 2, 3), "ref_scheme must be 1, 2 or 3"),
    "ref_tau": (_float, lambda v: v > 0, "ref_tau must be positive"),
    "eps_list": (_float_list, lambda v: len(v) >= 1 and min(v) >= 0, "eps_list needs non-negative values"),
}

MANDATORY = ("scheme", "scenario", "tau", "T")


@dataclass
class RunConfig:
    """Validated run configuration; unset optional keys keep their defaults."""

    scheme: int
    scenario: str
    tau: float
    T: float
    eps: float = 0.0
    points: tuple | None = None
    bounds: tuple | None = None
    diag_stride: int = 1
    snap_stride: int | None = None
    fp_tol: float = 1e-14
    fp_max_iters: int = 30
    policy: str = "abort"
    track_q: bool = False
    output: str = "qzs_out"
    threads: int | None = None
    B: float = 1.0
    V: float = 0.5
    x0: float = 0.0
    case: str = "I"
    k: float = 0.7
    beta: float = 0.001
    snapshot: str | None = None
    levels: int = 5
    h0: float = 1.0
    ref_scheme: int = 3
    ref_tau: float = 1e-3
    eps_list: tuple = tuple(2.0 ** -(2 * j + 1) for j in range(2, 7))
    source: dict = field(default_factory=dict, repr=False)

    def solver_kwargs(self) -> dict:
        return dict(fp_tol=self.fp_tol, fp_max_iters=self.fp_max_iters,
                    policy=self.policy, track_q=self.track_q)


def parse_config(text: str) -> RunConfig:
    """Parse flat ``key = value`` text (``#`` starts a comment)."""
    seen = {}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        conv, check, msg = _SCHEMA[key]
        try:
            parsed = conv(val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
        if check is not None and not check(parsed):
            raise ConfigError(f"line {lineno}: {msg}")
        seen[key] = lineno
        values[key] = parsed
    missing = [k for k in MANDATORY if k not in values]
    if missing:
        raise ConfigError(f"missing mandatory key(s): {', '.join(missing)}")
    if values["scenario"] == "snapshot" and "snapshot" not in values:
        raise ConfigError("scenario 'snapshot' requires a 'snapshot' path")
    return RunConfig(**values, source=dict(seen))


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


# ----------------------------------------------------------------------------
# CSV
# ----------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_rows(path, header, rows):
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_diagnostics_csv(records, path) -> None:
    """Write ``t,mass,energy,rm,rh,q_defect,fp_iters`` rows with 17 significant digits."""
    rows = (
        [_fmt(r.t), _fmt(r.mass), _fmt(r.energy), _fmt(r.rm), _fmt(r.rh),
         _fmt(r.q_defect), str(int(r.fp_iters))]
        for r in records
    )
    _write_rows(path, DIAGNOSTICS_COLUMNS, rows)


def read_diagnostics_csv(path) -> list:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            DiagnosticsRecord(
                t=float(r["t"]), mass=float(r["mass"]), energy=float(r["energy"]),
                rm=float(r["rm"]), rh=float(r["rh"]), q_defect=float(r["q_defect"]),
                fp_iters=int(r["fp_iters"]),
            )
            for r in reader
        ]


def write_report_csv(report, path) -> None:
    """One row per refinement level; rates are ``nan`` on the first row."""
    rows = (
        [report.axis, str(report.scheme), _fmt(lev), _fmt(e), _fmt(n), _fmt(re), _fmt(rn)]
        for lev, e, n, re, rn in report.rows()
    )
    _write_rows(path, REPORT_COLUMNS, rows)


def read_report_csv(path) -> list:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        out = []
        for r in csv.DictReader(fh):
            out.append({k: (r[k] if k == "axis" else int(r[k]) if k == "scheme" else float(r[k]))
                        for k in REPORT_COLUMNS})
        return out


# ----------------------------------------------------------------------------
# binary snapshots
# ----------------------------------------------------------------------------
#
# magic "QZS1" | u32 dims, Nx, Ny | f64 bounds (2*dims) | f64 t | f64 eps |
# E as interleaved (re, im) f64 | N f64 | v f64 | u8 has_q | [q f64]
# All little-endian, arrays row-major over (y, x).

_HEAD = struct.Struct("<4sIII")


def _header_size(dims):
    return _HEAD.size + 8 * 2 * dims + 16


def snapshot_size(dims, size, has_q) -> int:
    """Exact byte length of a snapshot file."""
    return _header_size(dims) + (2 + 1 + 1 + (1 if has_q else 0)) * 8 * size + 1


def write_snapshot(state: FieldState, path, eps: float = 0.0) -> None:
    g = state.grid
    nx = g.points[0]
    ny = g.points[1] if g.dims == 2 else 1
    parts = [
        _HEAD.pack(SNAPSHOT_MAGIC, g.dims, nx, ny),
        np.asarray(g.bounds, dtype="<f8").ravel().tobytes(),
        struct.pack("<dd", state.t, eps),
        np.ascontiguousarray(state.E, dtype="<c16").tobytes(),
        np.ascontiguousarray(state.N, dtype="<f8").tobytes(),
        np.ascontiguousarray(state.v, dtype="<f8").tobytes(),
        struct.pack("<B", 1 if state.q is not None else 0),
    ]
    if state.q is not None:
        parts.append(np.ascontiguousarray(state.q, dtype="<f8").tobytes())
    Path(path).write_bytes(b"".join(parts))


def _decode(buf: bytes):
    if len(buf) < _HEAD.size:
        raise TruncatedSnapshotError(f"snapshot truncated: {len(buf)} bytes, header needs {_HEAD.size}")
    magic, dims, nx, ny = _HEAD.unpack_from(buf, 0)
    if magic != SNAPSHOT_MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {SNAPSHOT_MAGIC!r}")
    if dims not in (1, 2) or (dims == 1 and ny != 1):
        raise SnapshotError(f"invalid header: dims={dims}, Ny={ny}")
    size = nx * ny
    hsize = _header_size(dims)
    min_size = snapshot_size(dims, size, False)
    if len(buf) < min_size:
        raise TruncatedSnapshotError(f"snapshot truncated: {len(buf)} bytes, expected at least {min_size}")
    has_q = buf[min_size - 1]
    expected = snapshot_size(dims, size, bool(has_q))
    if has_q not in (0, 1):
        raise SnapshotSizeError(f"invalid q presence byte {has_q}")
    if len(buf) < expected:
        raise TruncatedSnapshotError(f"snapshot truncated: {len(buf)} bytes, expected {expected}")
    if len(buf) != expected:
        raise SnapshotSizeError(f"snapshot has {len(buf)} bytes, expected {expected}")
    bounds = np.frombuffer(buf, "<f8", 2 * dims, _HEAD.size)
    t, eps = struct.unpack_from("<dd", buf, _HEAD.size + 16 * dims)
    meta = dict(dims=dims, points=(nx, ny)[:dims], bounds=tuple(bounds.tolist()),
                t=t, eps=eps, has_q=bool(has_q))
    return meta, hsize, size


def read_snapshot_meta(path) -> dict:
    """Header fields of a snapshot: dims, points, bounds, t, eps, has_q."""
    meta, _, _ = _decode(Path(path).read_bytes())
    return meta


def read_snapshot(path) -> FieldState:
    buf = Path(path).read_bytes()
    meta, off, size = _decode(buf)
    grid = make_grid(meta["bounds"], meta["points"])
    shape = grid.shape
    E = np.frombuffer(buf, "<c16", size, off).reshape(shape)
    off += 16 * size
    N = np.frombuffer(buf, "<f8", size, off).reshape(shape)
    off += 8 * size
    v = np.frombuffer(buf, "<f8", size, off).reshape(shape)
    off += 8 * size + 1
    q = np.frombuffer(buf, "<f8", size, off).reshape(shape) if meta["has_q"] else None
    return FieldState(grid, E.copy(), N.copy(), v.copy(),
                      q=None if q is None else q.copy(), t=meta["t"])


@dataclass
class SnapshotWriter:
    """Observer writing ``snap_<step>.qzs`` files into *directory* every *stride* steps."""

    directory: str
    stride: int = 1
    eps: float = 0.0
    paths: list = field(default_factory=list)

    def __call__(self, n, state, iters):
        path = Path(self.directory) / f"snap_{n:07d}.qzs"
        write_snapshot(state, path, self.eps)
        self.paths.append(path)
