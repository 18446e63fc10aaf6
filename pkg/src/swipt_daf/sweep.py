"""Parameter sweep harness: grids of ABER points with CSV output.

The CSV contract (stable column order):

    axis,series,method,value,error,seed

preceded by one '#'-prefixed metadata block (code version, base seed,
tolerances, spec echo). Values print with the '.' decimal separator and
scientific notation below 1e-3. Failed points keep their row with an empty
value and a reason code in the error column. No timestamps are written, so
identical configs produce byte-identical files.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from . import __version__
from .model import (Scheme, SystemParams, ValidationError, db_to_linear,
                    derive_constants)
from .mcsim import EhMode, McConfig, run_monte_carlo
from . import analytic

__all__ = [
    "Axis",
    "D2Rule",
    "SeriesSpec",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "run_sweep",
    "write_csv",
    "point_params",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("axis", "series", "method", "value", "error", "seed")


class Axis(str, Enum):
    P0_DB = "p0_db"
    D1 = "d1"
    THETA = "theta"


class D2Rule(str, Enum):
    FIXED = "fixed"
    THREE_MINUS_D1 = "3-d1"


class SweepMethod(str, Enum):
    EXACT_QUAD = "EXACT_QUAD"
    ASYMPTOTIC_CLOSED = "ASYMPTOTIC_CLOSED"
    ASYMPTOTIC_QUAD = "ASYMPTOTIC_QUAD"
    MC = "MC"


@dataclass(frozen=True)
class SeriesSpec:
    scheme: Scheme
    eh_mode: EhMode
    method: SweepMethod

    @property
    def label(self) -> str:
        return f"{self.eh_mode.value}-{self.scheme.value}"

    @classmethod
    def parse(cls, token: str) -> "SeriesSpec":
        """Parse 'IEH-TH:exact' style tokens (mode-scheme:method)."""
        try:
            series, method = token.strip().split(":")
            mode_s, scheme_s = series.split("-", 1)
        except ValueError:
            raise ValidationError(
                f"series: expected MODE-SCHEME:METHOD, got {token!r}") from None
        methods = {"exact": SweepMethod.EXACT_QUAD,
                   "asym": SweepMethod.ASYMPTOTIC_CLOSED,
                   "asym-quad": SweepMethod.ASYMPTOTIC_QUAD,
                   "mc": SweepMethod.MC}
        schemes = {"TH": Scheme.TH, "LC": Scheme.LC,
                   "DIRECT": Scheme.DIRECT_ONLY, "DIRECT_ONLY": Scheme.DIRECT_ONLY}
        if method.lower() not in methods:
            raise ValidationError(f"series: unknown method {method!r} in {token!r}")
        if scheme_s.upper() not in schemes:
            raise ValidationError(f"series: unknown scheme {scheme_s!r} in {token!r}")
        try:
            mode = EhMode(mode_s.upper())
        except ValueError:
            raise ValidationError(f"series: unknown mode {mode_s!r} in {token!r}") from None
        return cls(scheme=schemes[scheme_s.upper()], eh_mode=mode,
                   method=methods[method.lower()])


@dataclass(frozen=True)
class McSettings:
    frames: int = 200_000
    symbols_per_frame: int = 64
    seed: int = 1
    min_errors: int = 0
    relay_power_factor: float = 1.0


@dataclass(frozen=True)
class SweepSpec:
    axis: Axis
    grid: tuple
    fixed: SystemParams
    series: tuple
    mc: McSettings = McSettings()
    d2_rule: D2Rule = D2Rule.FIXED
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        object.__setattr__(self, "series", tuple(self.series))
        if len(self.grid) == 0:
            raise ValidationError("grid: must not be empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValidationError("grid: values must be strictly increasing")
        if len(self.series) == 0:
            raise ValidationError("series: must not be empty")
        if self.workers < 1:
            raise ValidationError(f"workers: must be >= 1, got {self.workers}")
        if self.axis is Axis.D1 and self.d2_rule is D2Rule.THREE_MINUS_D1:
            if any(v >= 3.0 for v in self.grid):
                raise ValidationError("grid: d2 = 3 - d1 must stay > 0")
        if self.axis is Axis.THETA and any(not 0.0 < v < 1.0 for v in self.grid):
            raise ValidationError("grid: theta sweep values must lie in (0, 1)")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    series: str
    method: str
    value: float | None
    error: float | None
    seed: int
    wall_time_s: float = 0.0
    reason: str = ""


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple
    metadata: dict

    @property
    def failed(self) -> tuple:
        return tuple(r for r in self.rows if r.value is None)


def point_params(spec: SweepSpec, axis_value: float) -> SystemParams:
    """Parameters at one grid point; dB conversion happens here, at the
    boundary, and d2 follows the distance rule on d1 sweeps."""
    p = spec.fixed
    if spec.axis is Axis.P0_DB:
        return p.replace(p0=db_to_linear(axis_value))
    if spec.axis is Axis.D1:
        d2 = 3.0 - axis_value if spec.d2_rule is D2Rule.THREE_MINUS_D1 else p.d2
        return p.replace(d1=axis_value, d2=d2)
    return p.replace(theta=axis_value)


def _point_seed(base: int, index: int) -> int:
    return (base + index) % (2 ** 64)


def _evaluate_point(spec: SweepSpec, index: int, axis_value: float,
                    series: SeriesSpec) -> SweepRow:
    import time
    t0 = time.perf_counter()
    seed = _point_seed(spec.mc.seed, index)
    try:
        params = point_params(spec, axis_value)
        if series.method is SweepMethod.MC:
            cfg = McConfig(params=params, scheme=series.scheme,
                           eh_mode=series.eh_mode, frames=spec.mc.frames,
                           symbols_per_frame=spec.mc.symbols_per_frame,
                           seed=seed, min_errors=spec.mc.min_errors,
                           relay_power_factor=spec.mc.relay_power_factor)
            res = run_monte_carlo(cfg)
            value, error = res.ber, res.ci95_halfwidth
        else:
            c = derive_constants(params)
            if series.scheme is Scheme.DIRECT_ONLY:
                pt = analytic.aber_direct_only(c)
            else:
                fn = {
                    (Scheme.TH, SweepMethod.EXACT_QUAD): analytic.aber_th_exact,
                    (Scheme.LC, SweepMethod.EXACT_QUAD): analytic.aber_lc_exact,
                    (Scheme.TH, SweepMethod.ASYMPTOTIC_CLOSED): analytic.aber_th_asymptotic,
                    (Scheme.LC, SweepMethod.ASYMPTOTIC_CLOSED): analytic.aber_lc_asymptotic,
                    (Scheme.TH, SweepMethod.ASYMPTOTIC_QUAD): analytic.aber_th_asymptotic_quad,
                    (Scheme.LC, SweepMethod.ASYMPTOTIC_QUAD): analytic.aber_lc_asymptotic_quad,
                }[(series.scheme, series.method)]
            pt = fn(c)
            value, error = pt.value, pt.err_estimate
        return SweepRow(axis_value=axis_value, series=series.label,
                        method=series.method.value, value=value, error=error,
                        seed=seed, wall_time_s=time.perf_counter() - t0)
    except ValidationError as e:
        reason = f"VALIDATION:{e}"
    except Exception as e:  # numeric failures must not abort the sweep
        reason = f"NUMERIC:{type(e).__name__}"
    return SweepRow(axis_value=axis_value, series=series.label,
                    method=series.method.value, value=None, error=None,
                    seed=seed, wall_time_s=time.perf_counter() - t0,
                    reason=reason)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every (grid point x series) cell; rows come back ordered by
    (axis value, series label, method) regardless of worker completion."""
    cells = []
    index = 0
    for v in spec.grid:
        for s in spec.series:
            cells.append((index, v, s))
            index += 1
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            futures = [pool.submit(_evaluate_point, spec, i, v, s)
                       for i, v, s in cells]
            rows = [f.result() for f in futures]
    else:
        rows = [_evaluate_point(spec, i, v, s) for i, v, s in cells]
    rows.sort(key=lambda r: (r.axis_value, r.series, r.method))
    metadata = {
        "version": __version__,
        "axis": spec.axis.value,
        "d2_rule": spec.d2_rule.value,
        "seed": spec.mc.seed,
        "mc_frames": spec.mc.frames,
        "mc_symbols_per_frame": spec.mc.symbols_per_frame,
        "mc_min_errors": spec.mc.min_errors,
        "fixed_params": " ".join(f"{k}={v:g}" for k, v in
                                 spec.fixed.to_mapping().items()),
    }
    return SweepResult(spec=spec, rows=tuple(rows), metadata=metadata)


def format_value(v: float | None) -> str:
    if v is None:
        return ""
    if v == 0.0:
        return "0"
    if abs(v) < 1e-3:
        return f"{v:.12e}"
    return f"{v:.12g}"


def write_csv(result: SweepResult, path: str) -> None:
    lines = [f"# swipt-daf sweep v{result.metadata['version']}"]
    for k, v in result.metadata.items():
        if k != "version":
            lines.append(f"# {k}: {v}")
    lines.append(",".join(CSV_COLUMNS))
    for r in result.rows:
        err = format_value(r.error) if r.value is not None else r.reason
        lines.append(",".join([
            format_value(r.axis_value), r.series, r.method,
            format_value(r.value), err, str(r.seed)]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
