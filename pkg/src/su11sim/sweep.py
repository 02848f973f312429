"""Parameter sweeps, figure-data presets, the three-way validation harness
and deterministic CSV/JSON emission."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, closed_form, fock, gaussian, metrics
from .config import InterferometerConfig
from .errors import (
    DomainError,
    StationaryPointError,
    TruncationError,
    UndefinedVisibilityError,
)
from .metrics import ShotNoiseConvention

AXES = ("t_s2", "t_i2", "t_both2", "theta", "n_i", "G1", "G2")
METRICS = ("mean", "visibility", "dtheta2", "db_vs_shotnoise")
MAX_STEPS = 10**6

_POINT_ERRORS = (
    DomainError,
    UndefinedVisibilityError,
    StationaryPointError,
    TruncationError,
)


@dataclass(frozen=True)
class SweepSpec:
    """One swept axis over a fixed configuration, plus the requested metrics.

    The *2 axes sweep power transmission t^2.  If base transmissions are set,
    the swept transmission axis is an extra filter multiplied onto the base;
    with axis_total=True the axis value is reinterpreted as the total power
    transmission of the swept mode instead.
    """

    axis: str
    lo: float
    hi: float
    steps: int
    fixed: InterferometerConfig
    metrics: tuple[str, ...] = ("mean",)
    base_ts2: float | None = None
    base_ti2: float | None = None
    snl_convention: ShotNoiseConvention = ShotNoiseConvention.AFTER_OPA1
    axis_total: bool = False

    def __post_init__(self):
        if self.axis not in AXES:
            raise DomainError(f"unknown axis {self.axis!r}; expected one of {AXES}")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise DomainError(f"unknown metrics {unknown}; expected subset of {METRICS}")
        if not self.metrics:
            raise DomainError("at least one metric must be requested")
        if not 2 <= self.steps <= MAX_STEPS:
            raise DomainError(f"steps must lie in [2, {MAX_STEPS}], got {self.steps}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("sweep range must be finite")
        lo, hi = min(self.lo, self.hi), max(self.lo, self.hi)
        if self.axis in ("t_s2", "t_i2", "t_both2") and not (0.0 <= lo and hi <= 1.0):
            raise DomainError(f"{self.axis} range must lie in [0, 1]")
        if self.axis in ("n_i", "G1", "G2") and lo < 0.0:
            raise DomainError(f"{self.axis} range must be >= 0")
        for name, v in (("base_ts2", self.base_ts2), ("base_ti2", self.base_ti2)):
            if v is not None and not 0.0 < v <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {v}")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    values: dict[str, float | None] = field(default_factory=dict)
    error: str | None = None


def grid(spec: SweepSpec) -> np.ndarray:
    return np.linspace(spec.lo, spec.hi, spec.steps)


def config_at(spec: SweepSpec, x: float) -> InterferometerConfig:
    """Resolve the configuration at one axis value, composing base transmissions."""
    cfg = spec.fixed
    ts2 = cfg.t_s**2 if spec.base_ts2 is None else spec.base_ts2
    ti2 = cfg.t_i**2 if spec.base_ti2 is None else spec.base_ti2
    if spec.axis in ("t_s2", "t_both2"):
        ts2 = x if spec.axis_total or spec.base_ts2 is None else spec.base_ts2 * x
    if spec.axis in ("t_i2", "t_both2"):
        ti2 = x if spec.axis_total or spec.base_ti2 is None else spec.base_ti2 * x
    kwargs = dict(
        g1=cfg.g1, g2=cfg.g2, theta=cfg.theta,
        t_s=math.sqrt(ts2), t_i=math.sqrt(ti2), n_i=cfg.n_i,
    )
    if spec.axis == "theta":
        kwargs["theta"] = x
    elif spec.axis == "n_i":
        kwargs["n_i"] = x
    elif spec.axis == "G1":
        kwargs["g1"] = x
    elif spec.axis == "G2":
        kwargs["g2"] = x
    return InterferometerConfig(**kwargs)


def _evaluate_point(spec: SweepSpec, x: float) -> SweepRow:
    values: dict[str, float | None] = {m: None for m in spec.metrics}
    try:
        cfg = config_at(spec, x)
        if "mean" in spec.metrics:
            values["mean"] = gaussian.mean_photons(gaussian.run_interferometer(cfg))
        if "visibility" in spec.metrics:
            values["visibility"] = metrics.visibility_numeric(cfg)
        if "dtheta2" in spec.metrics or "db_vs_shotnoise" in spec.metrics:
            report = metrics.optimal_sensitivity(cfg, spec.snl_convention)
            if "dtheta2" in spec.metrics:
                values["dtheta2"] = report.dtheta2
            if "db_vs_shotnoise" in spec.metrics:
                values["db_vs_shotnoise"] = report.db_vs_shotnoise
    except _POINT_ERRORS as exc:
        return SweepRow(axis_value=float(x), values=values, error=str(exc))
    return SweepRow(axis_value=float(x), values=values, error=None)


def _max_workers() -> int:
    raw = os.environ.get("SU11_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(32, os.cpu_count() or 1)
    return n


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the requested metrics at every grid point, in axis order.

    Points are independent; evaluation may fan out over SU11_THREADS workers
    but the returned order (and any serialized bytes) never depends on it.
    """
    xs = grid(spec)
    workers = _max_workers()
    if workers == 1 or len(xs) < 4:
        return [_evaluate_point(spec, x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: _evaluate_point(spec, x), xs))


# --- config-file format: flat "key = value" lines ---------------------------

_CONVENTIONS = {c.value: c for c in ShotNoiseConvention}


def spec_to_config_text(spec: SweepSpec) -> str:
    """Serialize a sweep spec to the flat key/value config format."""
    lines = [
        f"g1 = {spec.fixed.g1!r}",
        f"g2 = {spec.fixed.g2!r}",
        f"theta = {spec.fixed.theta!r}",
        f"ts2 = {spec.fixed.t_s ** 2!r}",
        f"ti2 = {spec.fixed.t_i ** 2!r}",
        f"n_i = {spec.fixed.n_i!r}",
        f"snl_convention = {spec.snl_convention.value}",
        f"axis = {spec.axis}",
        f"lo = {spec.lo!r}",
        f"hi = {spec.hi!r}",
        f"steps = {spec.steps}",
        f"metrics = {','.join(spec.metrics)}",
    ]
    if spec.base_ts2 is not None:
        lines.append(f"base_ts2 = {spec.base_ts2!r}")
    if spec.base_ti2 is not None:
        lines.append(f"base_ti2 = {spec.base_ti2!r}")
    if spec.axis_total:
        lines.append("axis_total = true")
    return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat "key = value" lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def spec_from_config(entries: dict[str, str]) -> SweepSpec:
    """Build a sweep spec from parsed config entries (plus CLI overrides)."""
    def fget(key, default=None):
        if key in entries:
            return float(entries[key])
        return default

    fixed = InterferometerConfig(
        g1=fget("g1", 0.0),
        g2=fget("g2", 0.0),
        theta=fget("theta", 0.0),
        t_s=math.sqrt(fget("ts2", 1.0)),
        t_i=math.sqrt(fget("ti2", 1.0)),
        n_i=fget("n_i", 0.0),
    )
    conv = entries.get("snl_convention", ShotNoiseConvention.AFTER_OPA1.value)
    if conv not in _CONVENTIONS:
        raise DomainError(
            f"unknown snl_convention {conv!r}; expected one of {sorted(_CONVENTIONS)}"
        )
    metrics_str = entries.get("metrics", "mean")
    if "axis" not in entries:
        raise DomainError("config must define an axis")
    return SweepSpec(
        axis=entries["axis"],
        lo=fget("lo", 0.0),
        hi=fget("hi", 1.0),
        steps=int(entries.get("steps", "2")),
        fixed=fixed,
        metrics=tuple(m.strip() for m in metrics_str.split(",") if m.strip()),
        base_ts2=fget("base_ts2"),
        base_ti2=fget("base_ti2"),
        snl_convention=_CONVENTIONS[conv],
        axis_total=entries.get("axis_total", "false").lower() in ("1", "true", "yes"),
    )


# --- output ------------------------------------------------------------------


def _fmt(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def _csv_quote(s: str) -> str:
    if any(ch in s for ch in ',"\n\r'):
        return '"' + s.replace('"', '""') + '"'
    return s


def sweep_to_csv(spec: SweepSpec, rows: list[SweepRow]) -> str:
    """Render a sweep as CSV with a '#'-prefixed header block for provenance."""
    header = [f"# su11sim {__version__}"]
    for line in spec_to_config_text(spec).splitlines():
        header.append(f"# {line}")
    cols = [spec.axis, *spec.metrics, "error"]
    out = header + [",".join(cols)]
    for row in rows:
        cells = [_fmt(row.axis_value)]
        cells += [_fmt(row.values.get(m)) for m in spec.metrics]
        cells.append(_csv_quote(row.error or ""))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def sweep_to_json(spec: SweepSpec, rows: list[SweepRow]) -> str:
    """JSON mirror of the CSV output, identical field names."""
    payload = {
        "version": __version__,
        "spec": {
            "g1": spec.fixed.g1,
            "g2": spec.fixed.g2,
            "theta": spec.fixed.theta,
            "ts2": spec.fixed.t_s**2,
            "ti2": spec.fixed.t_i**2,
            "n_i": spec.fixed.n_i,
            "snl_convention": spec.snl_convention.value,
            "axis": spec.axis,
            "lo": spec.lo,
            "hi": spec.hi,
            "steps": spec.steps,
            "metrics": list(spec.metrics),
            "base_ts2": spec.base_ts2,
            "base_ti2": spec.base_ti2,
            "axis_total": spec.axis_total,
        },
        "rows": [
            {
                spec.axis: row.axis_value,
                **{m: row.values.get(m) for m in spec.metrics},
                "error": row.error,
            }
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# --- figure presets -----------------------------------------------------------

FIGURES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b")

_LOW_GAIN = 0.1
_UNBALANCED = dict(g1=0.45, g2=0.2, base_ts2=0.52, base_ti2=0.42)


def _figure_series(
    name: str,
    convention: ShotNoiseConvention,
    axis_total: bool,
) -> tuple[np.ndarray, dict[str, SweepSpec], dict]:
    """Grid, per-curve sweep specs and extra metadata for one figure preset."""
    if name in ("fig2a", "fig2b"):
        n_i = 0.0 if name == "fig2a" else 50.0
        xs = np.linspace(0.01, 1.0, 100)
        mk = lambda axis: SweepSpec(
            axis=axis, lo=0.01, hi=1.0, steps=100,
            fixed=InterferometerConfig(g1=_LOW_GAIN, g2=_LOW_GAIN, n_i=n_i),
            metrics=("visibility",), snl_convention=convention,
        )
        series = {
            "v_signal_loss": mk("t_s2"),
            "v_idler_loss": mk("t_i2"),
            "v_symmetric_loss": mk("t_both2"),
        }
        return xs, series, {}
    if name in ("fig3a", "fig3b"):
        n_i = 0.0 if name == "fig3a" else 50.0
        xs = np.linspace(0.25, 1.0, 40)
        mk = lambda axis: SweepSpec(
            axis=axis, lo=0.25, hi=1.0, steps=40,
            fixed=InterferometerConfig(g1=_LOW_GAIN, g2=_LOW_GAIN, n_i=n_i),
            metrics=("db_vs_shotnoise",), snl_convention=convention,
        )
        series = {
            "db_signal_loss": mk("t_s2"),
            "db_idler_loss": mk("t_i2"),
            "db_symmetric_loss": mk("t_both2"),
        }
        cfg = InterferometerConfig(g1=_LOW_GAIN, g2=_LOW_GAIN, n_i=n_i)
        ideal = closed_form.ideal_sensitivity(_LOW_GAIN, n_i)
        snl = metrics.shot_noise_level(cfg, convention)
        extra = {"db_ideal_limit": 10.0 * math.log10(snl / ideal)}
        return xs, series, extra
    if name in ("fig4a", "fig4b"):
        axis = "t_s2" if name == "fig4a" else "t_i2"
        xs = np.linspace(0.01, 1.0, 100)
        mk = lambda n_i: SweepSpec(
            axis=axis, lo=0.01, hi=1.0, steps=100,
            fixed=InterferometerConfig(g1=_UNBALANCED["g1"], g2=_UNBALANCED["g2"], n_i=n_i),
            metrics=("visibility",),
            base_ts2=_UNBALANCED["base_ts2"], base_ti2=_UNBALANCED["base_ti2"],
            snl_convention=convention, axis_total=axis_total,
        )
        series = {"v_spontaneous": mk(0.0), "v_stimulated": mk(1.0e4)}
        return xs, series, {}
    raise DomainError(f"unknown figure {name!r}; expected one of {FIGURES}")


def figure_table(
    name: str,
    convention: ShotNoiseConvention = ShotNoiseConvention.PAIR_AFTER_OPA1,
    axis_total: bool = False,
) -> tuple[list[str], list[list[float | None]], list[str], dict]:
    """Evaluate one figure preset; returns (columns, rows, errors, extra)."""
    xs, series, extra = _figure_series(name, convention, axis_total)
    results = {label: run_sweep(spec) for label, spec in series.items()}
    metric = {label: spec.metrics[0] for label, spec in series.items()}
    cols = ["transmission", *results.keys()]
    table: list[list[float | None]] = []
    errors: list[str] = []
    for i, x in enumerate(xs):
        row: list[float | None] = [float(x)]
        for label in results:
            r = results[label][i]
            row.append(r.values.get(metric[label]))
            if r.error:
                errors.append(f"{label}@{x:g}: {r.error}")
        table.append(row)
    return cols, table, errors, extra


def _gnuplot_sidecar(name: str, cols: list[str]) -> str:
    lines = [
        "set datafile separator ','",
        f"set title '{name}'",
        "set xlabel 'transmission'",
        "set key outside",
        "plot \\",
    ]
    plots = [
        f"  '{name}.csv' using 1:{i + 2} with lines title '{col}'"
        for i, col in enumerate(cols[1:])
    ]
    lines.append(", \\\n".join(plots))
    return "\n".join(lines) + "\n"


def write_figure(
    name: str,
    outdir: str | Path,
    convention: ShotNoiseConvention = ShotNoiseConvention.PAIR_AFTER_OPA1,
    axis_total: bool = False,
    json_mirror: bool = False,
) -> list[Path]:
    """Emit one figure preset as CSV plus a gnuplot sidecar; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cols, table, errors, extra = figure_table(name, convention, axis_total)
    lines = [f"# su11sim {__version__}", f"# figure = {name}"]
    lines.append(f"# snl_convention = {convention.value}")
    lines.append(f"# axis_total = {str(axis_total).lower()}")
    for k, v in extra.items():
        lines.append(f"# {k} = {v!r}")
    for err in errors:
        lines.append(f"# error: {err}")
    lines.append(",".join(cols))
    for row in table:
        lines.append(",".join(_fmt(v) for v in row))
    csv_path = outdir / f"{name}.csv"
    csv_path.write_text("\n".join(lines) + "\n")
    gp_path = outdir / f"{name}.gp"
    gp_path.write_text(_gnuplot_sidecar(name, cols))
    paths = [csv_path, gp_path]
    if json_mirror:
        payload = {
            "version": __version__,
            "figure": name,
            "snl_convention": convention.value,
            "axis_total": axis_total,
            **extra,
            "columns": cols,
            "rows": table,
            "errors": errors,
        }
        json_path = outdir / f"{name}.json"
        json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        paths.append(json_path)
    return paths


# --- three-way validation harness ---------------------------------------------

MEAN_RTOL = 1e-7
MEAN_ATOL = 1e-9
VAR_RTOL = 1e-6
VAR_ATOL = 1e-9
VIS_RTOL = 1e-10


@dataclass(frozen=True)
class ValidationReport:
    points: int
    worst: dict[str, float]
    flagged: list[str]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def _rel_dev(a: float, b: float, atol: float) -> float:
    scale = max(abs(a), abs(b))
    if scale <= atol:
        return 0.0
    return abs(a - b) / scale


def random_oracle_configs(seed: int, points: int) -> list[InterferometerConfig]:
    """Seeded random grid inside the Fock-oracle regime."""
    rng = np.random.default_rng(seed)
    cfgs = []
    for _ in range(points):
        cfgs.append(
            InterferometerConfig(
                g1=float(rng.uniform(0.0, 0.3)),
                g2=float(rng.uniform(0.0, 0.3)),
                theta=float(rng.uniform(0.0, 2.0 * math.pi)),
                t_s=float(rng.uniform(0.1, 1.0)),
                t_i=float(rng.uniform(0.1, 1.0)),
                n_i=float(rng.uniform(0.0, 4.0)),
            )
        )
    return cfgs


def _validate_point(cfg: InterferometerConfig) -> tuple[dict[str, float], list[str]]:
    worst: dict[str, float] = {}
    flagged: list[str] = []
    cf_mean = closed_form.mean_signal(cfg)
    g_stats = gaussian.photon_stats(gaussian.run_interferometer(cfg))
    f_stats = fock.pipeline(cfg, cutoff=fock.suggested_cutoff(cfg))
    worst["mean_closed_form_vs_gaussian"] = _rel_dev(cf_mean, g_stats.mean, MEAN_ATOL)
    worst["mean_gaussian_vs_fock"] = _rel_dev(g_stats.mean, f_stats.mean, MEAN_ATOL)
    worst["mean_closed_form_vs_fock"] = _rel_dev(cf_mean, f_stats.mean, MEAN_ATOL)
    worst["variance_gaussian_vs_fock"] = _rel_dev(
        g_stats.variance, f_stats.variance, VAR_ATOL
    )
    try:
        v_cf = closed_form.visibility(cfg)
        v_num = metrics.visibility_numeric(cfg)
        worst["visibility_closed_form_vs_numeric"] = _rel_dev(v_cf, v_num, 1e-12)
    except UndefinedVisibilityError:
        flagged.append(
            f"undefined-visibility: g1={cfg.g1:.4f} g2={cfg.g2:.4f} (skipped)"
        )
    return worst, flagged


def validate(seed: int, points: int) -> ValidationReport:
    """Run the closed-form / Gaussian / Fock agreement suite on a seeded grid."""
    if points > 10**4:
        raise DomainError(f"points must be <= 1e4, got {points}")
    cfgs = random_oracle_configs(seed, points)
    worst: dict[str, float] = {}
    flagged: list[str] = []
    failures: list[str] = []

    workers = _max_workers()
    if workers == 1 or len(cfgs) < 4:
        results = [_validate_point(c) for c in cfgs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_validate_point, cfgs))

    tol = {
        "mean_closed_form_vs_gaussian": MEAN_RTOL,
        "mean_gaussian_vs_fock": MEAN_RTOL,
        "mean_closed_form_vs_fock": MEAN_RTOL,
        "variance_gaussian_vs_fock": VAR_RTOL,
        "visibility_closed_form_vs_numeric": VIS_RTOL,
    }
    for cfg, (devs, flags) in zip(cfgs, results):
        flagged.extend(flags)
        for check, dev in devs.items():
            if dev > worst.get(check, 0.0):
                worst[check] = dev
            if dev > tol[check]:
                failures.append(
                    f"{check}: deviation {dev:.3e} > {tol[check]:.0e} at "
                    f"g1={cfg.g1:.6f} g2={cfg.g2:.6f} theta={cfg.theta:.6f} "
                    f"t_s={cfg.t_s:.6f} t_i={cfg.t_i:.6f} n_i={cfg.n_i:.6f}"
                )
    return ValidationReport(
        points=points, worst=worst, flagged=flagged, failures=failures
    )
