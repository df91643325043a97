"""Parameter sweeps and fixed-WNG matching over the trade-off families.

Reproduces two experiments on a ULA: broadband WNG/DF as each family's
parameter runs from the superdirective end (normalized 0) to the
delay-and-sum end (normalized 1), and the per-frequency DF of each family
once its broadband WNG is pinned to a common target.
"""
import configparser
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, noise
from ._backend import NAME as BACKEND
from .beamformer import LOADING_LADDER, BeamformerSpec
from .errors import ConfigError, Unachievable
from .geometry import ArrayGeometry, FrequencyGrid
from .metrics import evaluate

FAMILIES = ("RSD", "TUN", "KP", "CKP")
CONTINUOUS = ("RSD", "TUN")
MATCH_TOL_DB = 0.01
SCAN_SAMPLES = 1001


@dataclass(frozen=True)
class Family:
    kind: str
    samples: int = 101

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        if kind not in FAMILIES:
            raise ConfigError(f"unknown family {self.kind!r}; expected one of {', '.join(FAMILIES)}")
        if kind in CONTINUOUS and self.samples < 2:
            raise ConfigError(f"{kind}: samples must be >= 2, got {self.samples}")


def _default_families():
    return tuple(Family(k) for k in FAMILIES)


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: ArrayGeometry = ArrayGeometry(30, 0.02)
    grid: FrequencyGrid = FrequencyGrid()
    families: tuple = field(default_factory=_default_families)
    target_wng_db: float = 1.2
    output_dir: Path = Path("out")
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if not self.families:
            raise ConfigError("at least one family is required")
        kinds = [f.kind for f in self.families]
        if len(set(kinds)) != len(kinds):
            raise ConfigError(f"duplicate families in {kinds}")
        if self.target_wng_db > 10 * math.log10(self.geometry.sensors):
            raise ConfigError(
                f"target_wng_db {self.target_wng_db} exceeds the WNG ceiling "
                f"10*log10(M) = {10 * math.log10(self.geometry.sensors):.4f} dB"
            )
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def family(self, kind):
        for fam in self.families:
            if fam.kind == kind.upper():
                return fam
        return Family(kind)


@dataclass(frozen=True)
class SweepRow:
    normalized: float
    raw: float
    wng_db: float
    df_db: float


@dataclass(frozen=True)
class MatchResult:
    family: str
    raw: float
    achieved_wng_db: float
    df_curve: object
    target_db: float

    @property
    def deviation_db(self):
        return self.achieved_wng_db - self.target_db


def _as_family(family):
    return family if isinstance(family, Family) else Family(family)


def parameter_points(family, sensors):
    """``(raw, normalized)`` parameter pairs of a family, SD end first."""
    family = _as_family(family)
    if family.kind == "RSD":
        a = np.linspace(0.0, 1.0, family.samples)
        return [(float(x), float(x)) for x in a]
    if family.kind == "TUN":
        psi = np.linspace(0.0, np.pi, family.samples)
        return [(float(p), float(p / np.pi)) for p in psi]
    if family.kind == "KP":
        m1s = [m for m in range(1, sensors + 1) if sensors % m == 0]
    else:
        m1s = list(range(1, sensors + 1))
    span = max(sensors - 1, 1)
    return [(m, (m - 1) / span) for m in m1s]


def _spec(kind, raw):
    return BeamformerSpec(kind, raw)


def _score(kind, raw, config):
    _, _, score = evaluate(_spec(kind, raw), config.geometry, config.grid)
    return score


def _map(fn, items, workers):
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep(family, config):
    """Broadband scores at every sampled parameter of ``family``."""
    family = _as_family(family)
    points = parameter_points(family, config.geometry.sensors)
    scores = _map(lambda p: _score(family.kind, p[0], config), points, config.workers)
    return [SweepRow(norm, raw, s.wng_db, s.df_db) for (raw, norm), s in zip(points, scores)]


def match_wng(family, config, target_db=None, rows=None):
    """Find the family member whose broadband WNG is closest to ``target_db``.

    Continuous families are bisected inside the bracketing pair of sweep
    samples once the sampled WNG is confirmed non-decreasing; otherwise a
    fine scan picks the nearest point. Discrete families return the nearest
    achievable member. ``rows`` may pass in an existing sweep of the family.
    """
    family = _as_family(family)
    target = config.target_wng_db if target_db is None else target_db
    kind = family.kind
    if rows is None:
        rows = sweep(family, config)
    wng = np.array([r.wng_db for r in rows])
    lo_db, hi_db = wng[0], wng[-1]
    slack = 1e-9
    if not lo_db - slack <= target <= hi_db + slack:
        raise Unachievable(kind, target, lo_db, hi_db)

    best = int(np.argmin(np.abs(wng - target)))
    raw = rows[best].raw
    if kind in CONTINUOUS and abs(wng[best] - target) > 1e-9:
        if np.all(np.diff(wng) >= 0):
            i = int(np.searchsorted(wng, target)) - 1
            raw = _bisect(kind, config, target, rows[i].raw, rows[i + 1].raw)
        else:
            raw = _scan(kind, config, target, rows[0].raw, rows[-1].raw)

    wng_curve, df_curve, score = evaluate(_spec(kind, raw), config.geometry, config.grid)
    return MatchResult(kind, raw, score.wng_db, df_curve, target)


def _bisect(kind, config, target, lo, hi, max_iter=60):
    best_raw, best_err = None, math.inf
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        w = _score(kind, mid, config).wng_db
        if abs(w - target) < best_err:
            best_raw, best_err = mid, abs(w - target)
        if best_err <= 1e-6 or hi - lo <= 1e-12:
            break
        if w < target:
            lo = mid
        else:
            hi = mid
    return best_raw


def _scan(kind, config, target, lo, hi):
    grid = np.linspace(lo, hi, SCAN_SAMPLES)
    w = np.array(_map(lambda p: _score(kind, float(p), config).wng_db, grid, config.workers))
    return float(grid[int(np.argmin(np.abs(w - target)))])


# ---------------------------------------------------------------- output

def _fmt(x):
    return f"{x:.6g}"


def emit_csv(path, header, rows):
    """Write ``rows`` (pairs) under a two-column ``header``, sorted by the first column."""
    path = Path(path)
    lines = [",".join(header)]
    lines += [f"{_fmt(a)},{_fmt(b)}" for a, b in sorted(rows, key=lambda r: r[0])]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_sweep(rows, kind, out_dir):
    tag = kind.lower()
    out_dir = Path(out_dir)
    return [
        emit_csv(out_dir / f"wng_{tag}.csv", ("param", "val"), [(r.normalized, r.wng_db) for r in rows]),
        emit_csv(out_dir / f"df_{tag}.csv", ("param", "val"), [(r.normalized, r.df_db) for r in rows]),
        emit_csv(out_dir / f"wxd_{tag}.csv", ("wng", "df"), [(r.wng_db, r.df_db) for r in rows]),
    ]


def emit_spectrum(curve, kind, out_dir):
    rows = zip(curve.grid.values, curve.db)
    return emit_csv(Path(out_dir) / f"freq_df_{kind.lower()}.csv", ("freq", "val"), rows)


def manifest(config):
    """Fully resolved configuration as ``key = value`` lines."""
    g, grid = config.geometry, config.grid
    lines = [
        f"version = {__version__}",
        f"sensors = {g.sensors}",
        f"spacing_m = {g.spacing!r}",
        f"source_angle_rad = {g.source_angle!r}",
        f"sound_speed = {g.sound_speed!r}",
        f"f_lo = {grid.f_lo!r}",
        f"f_hi = {grid.f_hi!r}",
        f"bins = {grid.bins}",
        f"families = {', '.join(f.kind for f in config.families)}",
    ]
    lines += [f"samples.{f.kind} = {f.samples}" for f in config.families if f.kind in CONTINUOUS]
    lines += [
        f"target_wng_db = {config.target_wng_db!r}",
        "normalization.RSD = alpha",
        "normalization.TUN = psi / pi",
        "normalization.KP = (M1 - 1) / (M - 1)",
        "normalization.CKP = (M1 - 1) / (M - 1)",
        "broadband = bandwidth-normalized harmonic mean, trapezoid rule",
        f"quadrature_nodes = {noise.QUAD_NODES}",
        f"loading_ladder = {', '.join(f'{x:g}' for x in LOADING_LADDER)} x trace/M",
        f"match_tolerance_db = {MATCH_TOL_DB}",
        f"backend = {BACKEND}",
    ]
    return "\n".join(lines) + "\n"


def _summary(sweeps, matches):
    out = []
    if sweeps:
        out.append(f"{'family':<7}{'points':>7}{'param range':>22}{'WNG dB (min..max)':>24}{'DF dB (min..max)':>22}")
        for kind, rows in sweeps.items():
            raws = [r.raw for r in rows]
            w = [r.wng_db for r in rows]
            d = [r.df_db for r in rows]
            out.append(
                f"{kind:<7}{len(rows):>7}{f'{min(raws):.4g}..{max(raws):.4g}':>22}"
                f"{f'{min(w):.3f}..{max(w):.3f}':>24}{f'{min(d):.3f}..{max(d):.3f}':>22}"
            )
    if matches:
        out.append(f"{'family':<7}{'param':>12}{'WNG dB':>10}{'dev dB':>10}{'DF dB (min..max)':>22}")
        for kind, m in matches.items():
            d = m.df_curve.db
            out.append(
                f"{kind:<7}{m.raw:>12.6g}{m.achieved_wng_db:>10.3f}{m.deviation_db:>10.3f}"
                f"{f'{d.min():.3f}..{d.max():.3f}':>22}"
            )
    return "\n".join(out)


def run(config, mode="all", echo=print):
    """Run sweeps and/or matching, write CSVs and the manifest. Returns written paths."""
    if mode not in ("all", "sweep", "match"):
        raise ConfigError(f"unknown mode {mode!r}")
    out = config.output_dir
    written = []
    sweeps, matches = {}, {}
    for fam in config.families:
        if mode in ("all", "sweep"):
            sweeps[fam.kind] = rows = sweep(fam, config)
            written += emit_sweep(rows, fam.kind, out)
        if mode in ("all", "match"):
            matches[fam.kind] = m = match_wng(fam, config, rows=sweeps.get(fam.kind))
            written.append(emit_spectrum(m.df_curve, fam.kind, out))
    path = out / "run_manifest.txt"
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(path, config)
    echo(_summary(sweeps, matches))
    return written


def _write_manifest(path, config):
    with open(path, "w", newline="\n") as fh:
        fh.write(manifest(config))


# ---------------------------------------------------------------- config file

_FIELDS = {
    ("geometry", "sensors"): int,
    ("geometry", "spacing_m"): float,
    ("geometry", "source_angle_rad"): float,
    ("geometry", "sound_speed"): float,
    ("grid", "f_lo"): float,
    ("grid", "f_hi"): float,
    ("grid", "bins"): int,
    ("experiment", "families"): str,
    ("experiment", "target_wng_db"): float,
    ("experiment", "workers"): int,
    ("output", "dir"): str,
}


def load_config(path=None, overrides=None):
    """Read an INI-style config file and apply ``overrides`` ``{(section, key): value}``.

    Families are listed in ``[experiment] families``; a ``[family.RSD]``
    style section may set ``samples`` for that family.
    """
    parser = configparser.ConfigParser()
    if path is not None:
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc

    values = {}
    for section in parser.sections():
        if section.startswith("family."):
            continue
        for key, raw in parser.items(section):
            conv = _FIELDS.get((section, key))
            if conv is None:
                raise ConfigError(f"{path}: unknown field [{section}] {key}")
            try:
                values[(section, key)] = conv(raw)
            except ValueError:
                raise ConfigError(f"{path}: [{section}] {key}: cannot parse {raw!r} as {conv.__name__}") from None
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val

    samples = {}
    for section in parser.sections():
        if not section.startswith("family."):
            continue
        kind = section.split(".", 1)[1].upper()
        for key, raw in parser.items(section):
            if key != "samples":
                raise ConfigError(f"{path}: unknown field [{section}] {key}")
            try:
                samples[kind] = int(raw)
            except ValueError:
                raise ConfigError(f"{path}: [{section}] samples: cannot parse {raw!r} as int") from None

    base = ExperimentConfig.__dataclass_fields__
    geom = base["geometry"].default
    grid = base["grid"].default
    try:
        geom = ArrayGeometry(
            values.get(("geometry", "sensors"), geom.sensors),
            values.get(("geometry", "spacing_m"), geom.spacing),
            values.get(("geometry", "source_angle_rad"), geom.source_angle),
            values.get(("geometry", "sound_speed"), geom.sound_speed),
        )
        grid = FrequencyGrid(
            values.get(("grid", "f_lo"), grid.f_lo),
            values.get(("grid", "f_hi"), grid.f_hi),
            values.get(("grid", "bins"), grid.bins),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    names = values.get(("experiment", "families"), ", ".join(FAMILIES))
    kinds = [k.strip() for k in names.split(",") if k.strip()]
    families = tuple(Family(k, samples.get(k.upper(), 101)) for k in kinds)
    return ExperimentConfig(
        geometry=geom,
        grid=grid,
        families=families,
        target_wng_db=values.get(("experiment", "target_wng_db"), 1.2),
        output_dir=Path(values.get(("output", "dir"), "out")),
        workers=values.get(("experiment", "workers"), 1),
    )
