"""Command-line interface.

Subcommands: aber (single-point report), pdf (density curves), sweep
(parameter grids with CSV + figure), mc (one Monte Carlo run), reconcile
(printed-form audit table), selftest (identity/oracle corpus).

Exit codes: 0 success, 1 validation error, 2 numeric non-convergence,
3 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__, analytic
from .analytic import (J2_SIGN_NOTE, NumericRangeError, aber_direct_only,
                       aber_lc_asymptotic, aber_lc_asymptotic_quad,
                       aber_lc_exact, aber_th_asymptotic,
                       aber_th_asymptotic_quad, aber_th_exact,
                       pdf_two_hop_asymptotic, pdf_two_hop_asymptotic_quad,
                       pdf_two_hop_exact, pdf_two_hop_exact_de,
                       reconcile_printed_forms)
from .mcsim import EhMode, McConfig, run_monte_carlo
from .model import (PARAM_KEYS, Scheme, SystemParams, ValidationError,
                    db_to_linear, derive_constants, reference_params,
                    two_hop_snr)
from .numquad import QuadratureError, integrate_semi_infinite, integrate_semi_infinite_de
from .specfun import (ContourError, MeijerGSpec, PoleSeparationError,
                      UnsupportedClassError, meijer_g)
from .sweep import (Axis, D2Rule, McSettings, SeriesSpec, SweepSpec,
                    format_value, run_sweep, write_csv)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

_NUMERIC_ERRORS = (QuadratureError, ContourError, PoleSeparationError,
                   UnsupportedClassError, NumericRangeError)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML file with the 13 system-parameter keys")
    p.add_argument("--p0", type=float, help="transmit power, linear watts")
    p.add_argument("--p0-db", type=float, help="transmit power in dB (overrides --p0)")
    for key in PARAM_KEYS:
        if key == "p0":
            continue
        p.add_argument(f"--{key}", type=float)


def _load_params(args) -> SystemParams:
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                mapping = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise ValidationError(f"config: {e}") from None
        params = SystemParams.from_mapping(mapping)
    else:
        params = reference_params()
    overrides = {}
    for key in PARAM_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            overrides[key] = v
    if getattr(args, "p0_db", None) is not None:
        overrides["p0"] = db_to_linear(args.p0_db)
    return params.replace(**overrides) if overrides else params


def _parse_grid(text: str) -> tuple:
    """'start:stop:step' (inclusive, fuzzy end) or comma-separated values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid: expected start:stop:step, got {text!r}")
        start, stop, step = (float(v) for v in parts)
        if step <= 0:
            raise ValidationError(f"grid: step must be > 0, got {step}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(n))
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ValidationError(f"grid: could not parse {text!r}") from None


def cmd_aber(args) -> int:
    params = _load_params(args)
    c = derive_constants(params)
    rows = []
    failures = 0
    tasks = [
        (Scheme.TH, "EXACT_QUAD", lambda: aber_th_exact(c)),
        (Scheme.TH, "ASYMPTOTIC_CLOSED", lambda: aber_th_asymptotic(c)),
        (Scheme.TH, "ASYMPTOTIC_QUAD", lambda: aber_th_asymptotic_quad(c)),
        (Scheme.LC, "EXACT_QUAD", lambda: aber_lc_exact(c)),
        (Scheme.LC, "ASYMPTOTIC_CLOSED", lambda: aber_lc_asymptotic(c)),
        (Scheme.LC, "ASYMPTOTIC_QUAD", lambda: aber_lc_asymptotic_quad(c)),
        (Scheme.DIRECT_ONLY, "CLOSED_FORM", lambda: aber_direct_only(c)),
    ]
    for scheme, method, fn in tasks:
        try:
            pt = fn()
            rows.append((scheme.value, method, format_value(pt.value),
                         format_value(pt.err_estimate)))
        except _NUMERIC_ERRORS as e:
            rows.append((scheme.value, method, "", f"NUMERIC:{type(e).__name__}"))
            failures += 1
    if args.mc:
        for scheme in (Scheme.TH, Scheme.LC, Scheme.DIRECT_ONLY):
            cfg = McConfig(params=params, scheme=scheme, eh_mode=EhMode(args.eh_mode),
                           frames=args.frames, symbols_per_frame=args.symbols_per_frame,
                           seed=args.seed, min_errors=args.min_errors)
            r = run_monte_carlo(cfg)
            rows.append((scheme.value, "MC", format_value(r.ber),
                         format_value(r.ci95_halfwidth)))
    print(f"# p0={params.p0:g} W ({10*math.log10(params.p0):.2f} dB), "
          f"theta={params.theta:g}, gbar0={c.gbar0:g}")
    print(f"{'scheme':<12} {'method':<18} {'ABER':<20} {'error':<18}")
    for r in rows:
        print(f"{r[0]:<12} {r[1]:<18} {r[2]:<20} {r[3]:<18}")
    if args.out:
        lines = [f"# swipt-daf aber v{__version__}", "scheme,method,value,error"]
        lines += [",".join(r) for r in rows]
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_NUMERIC if failures else EXIT_OK


def cmd_pdf(args) -> int:
    params = _load_params(args)
    c = derive_constants(params)
    z = np.geomspace(args.z_min, args.z_max, args.z_points)
    curves = {"exact": [], "asymptotic": []}
    for zi in z:
        curves["exact"].append(pdf_two_hop_exact(c, float(zi)))
        curves["asymptotic"].append(pdf_two_hop_asymptotic(c, float(zi)))
    lines = [f"# swipt-daf pdf v{__version__}",
             f"# params: " + " ".join(f"{k}={v:g}" for k, v in params.to_mapping().items()),
             "z,method,value"]
    for name, vals in curves.items():
        for zi, vi in zip(z, vals):
            lines.append(f"{format_value(float(zi))},{name},{format_value(float(vi))}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    if args.figure:
        from .figures import render_pdf
        render_pdf(z, {k: np.asarray(v) for k, v in curves.items()}, args.figure)
    return EXIT_OK


def cmd_sweep(args) -> int:
    params = _load_params(args)
    series = tuple(SeriesSpec.parse(tok) for tok in args.series.split(","))
    spec = SweepSpec(
        axis=Axis(args.axis), grid=_parse_grid(args.grid), fixed=params,
        series=series,
        mc=McSettings(frames=args.frames, symbols_per_frame=args.symbols_per_frame,
                      seed=args.seed, min_errors=args.min_errors),
        d2_rule=D2Rule(args.d2_rule), workers=args.workers)
    result = run_sweep(spec)
    write_csv(result, args.out)
    if args.figure:
        from .figures import render_sweep
        render_sweep(result, args.figure)
    n_fail = len(result.failed)
    print(f"wrote {args.out}: {len(result.rows)} rows, {n_fail} failed")
    for r in result.failed:
        print(f"  FAILED {r.series}:{r.method} at {r.axis_value:g}: {r.reason}")
    return EXIT_NUMERIC if n_fail else EXIT_OK


def cmd_mc(args) -> int:
    params = _load_params(args)
    cfg = McConfig(params=params, scheme=Scheme(args.scheme.upper()),
                   eh_mode=EhMode(args.eh_mode), frames=args.frames,
                   symbols_per_frame=args.symbols_per_frame, seed=args.seed,
                   min_errors=args.min_errors,
                   relay_power_factor=args.relay_power_factor)
    r = run_monte_carlo(cfg)
    print(f"scheme={cfg.scheme.value} eh_mode={cfg.eh_mode.value} "
          f"seed={r.seed}")
    print(f"ber={format_value(r.ber)} errors={r.errors} bits={r.bits} "
          f"ci95={format_value(r.ci95_halfwidth)}")
    if args.out:
        lines = [f"# swipt-daf mc v{__version__}",
                 "scheme,eh_mode,ber,errors,bits,ci95,seed",
                 f"{cfg.scheme.value},{cfg.eh_mode.value},{format_value(r.ber)},"
                 f"{r.errors},{r.bits},{format_value(r.ci95_halfwidth)},{r.seed}"]
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_reconcile(args) -> int:
    params = _load_params(args)
    grid = _parse_grid(args.p0_db_grid)
    header = ("p0_db,scheme,quadrature,normative,printed_re,printed_im,"
              "norm_over_quad,printed_over_norm_re,printed_over_norm_im")
    lines = [f"# swipt-daf reconcile v{__version__}"]
    lines += [f"# note: {J2_SIGN_NOTE}"]
    lines.append(header)
    for db in grid:
        c = derive_constants(params.replace(p0=db_to_linear(db)))
        rep = reconcile_printed_forms(c)
        for row in rep.rows:
            lines.append(",".join([
                format_value(db), row.scheme.value,
                format_value(row.quadrature), format_value(row.normative),
                format_value(row.printed.real), format_value(row.printed.imag),
                format_value(row.norm_over_quad),
                format_value(row.printed_over_norm.real),
                format_value(row.printed_over_norm.imag)]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_selftest(args) -> int:
    import scipy.special as sp
    checks = []

    def check(name, ok, detail=""):
        checks.append(ok)
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail and not ok else ""))

    r = integrate_semi_infinite(lambda t: np.exp(-t))
    check("quad exp decay", abs(r.value - 1.0) < 1e-9 and r.converged)
    r = integrate_semi_infinite(lambda t: t * np.exp(-t * t))
    check("quad gaussian moment", abs(r.value - 0.5) < 1e-9 and r.converged)
    r = integrate_semi_infinite_de(lambda t: np.exp(-t))
    check("quad exp decay (exp-sinh)", abs(r.value - 1.0) < 1e-9 and r.converged)

    g1 = MeijerGSpec(1, 0, 0, 1, (), (0.0,))
    g2 = MeijerGSpec(2, 0, 0, 2, (), (0.0, 0.0))
    ok = all(abs(meijer_g(g1, x) - math.exp(-x)) <= 1e-9 * math.exp(-x)
             for x in (0.1, 1.0, 10.0))
    check("meijer exp identity", ok)
    ok = all(abs(meijer_g(g2, x) - 2 * sp.k0(2 * math.sqrt(x)))
             <= 1e-9 * 2 * sp.k0(2 * math.sqrt(x)) for x in (0.1, 1.0, 10.0))
    check("meijer bessel identity", ok)

    c = derive_constants(reference_params(10.0))
    check("derived constants example",
          abs(c.k1 - 17.5) < 1e-12 and abs(c.k3 - 5.75) < 1e-12
          and abs(c.j2 + 1.15) < 1e-12)
    ok = True
    for z in (0.3, 1.0, 3.0):
        a = pdf_two_hop_asymptotic(c, z)
        b = pdf_two_hop_asymptotic_quad(c, z)
        ok = ok and abs(a - b) <= 1e-8 * abs(b)
    check("density closed form vs integral form", ok)
    th_c = aber_th_asymptotic(c).value
    th_q = aber_th_asymptotic_quad(c).value
    check("closed-form ABER vs kernel quadrature",
          abs(th_c - th_q) <= 1e-6 * th_q, f"{th_c} vs {th_q}")
    g0 = 10.0
    check("combining coefficient identity",
          abs(0.125 * (4 / (1 + g0) + g0 / (1 + g0) ** 2) - 54 / 968) < 1e-15)
    r1 = run_monte_carlo(McConfig(params=reference_params(10.0), frames=2000, seed=5))
    r2 = run_monte_carlo(McConfig(params=reference_params(10.0), frames=2000, seed=5))
    check("mc determinism", r1 == r2)
    print(f"{sum(checks)}/{len(checks)} passed")
    return EXIT_OK if all(checks) else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="swipt-daf",
        description="SWIPT differential amplify-and-forward relay performance tool")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aber", help="single-point ABER report, all methods")
    _add_param_flags(p)
    p.add_argument("--mc", action="store_true", help="append Monte Carlo rows")
    p.add_argument("--eh-mode", default="IEH", choices=[m.value for m in EhMode])
    p.add_argument("--frames", type=int, default=200_000)
    p.add_argument("--symbols-per-frame", type=int, default=64)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--min-errors", type=int, default=0)
    p.add_argument("--out", help="write the report as CSV")
    p.set_defaults(func=cmd_aber)

    p = sub.add_parser("pdf", help="two-hop SNR density curves")
    _add_param_flags(p)
    p.add_argument("--z-min", type=float, default=1e-3)
    p.add_argument("--z-max", type=float, default=50.0)
    p.add_argument("--z-points", type=int, default=120)
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.add_argument("--figure", help="figure path (.svg or .png)")
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("sweep", help="ABER over a parameter grid")
    _add_param_flags(p)
    p.add_argument("--axis", default="p0_db", choices=[a.value for a in Axis])
    p.add_argument("--grid", default="0:30:2.5",
                   help="start:stop:step or comma-separated values")
    p.add_argument("--series", default="IEH-TH:exact,IEH-TH:asym,IEH-LC:exact,IEH-LC:asym",
                   help="comma list of MODE-SCHEME:METHOD "
                        "(methods: exact, asym, asym-quad, mc)")
    p.add_argument("--d2-rule", default="fixed", choices=[r.value for r in D2Rule],
                   help="'3-d1' recomputes d2 = 3 - d1 on d1 sweeps")
    p.add_argument("--frames", type=int, default=200_000)
    p.add_argument("--symbols-per-frame", type=int, default=64)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--min-errors", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--figure", help="figure path (.svg or .png)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mc", help="one Monte Carlo run")
    _add_param_flags(p)
    p.add_argument("--scheme", default="TH",
                   choices=["TH", "LC", "DIRECT_ONLY", "th", "lc", "direct_only"])
    p.add_argument("--eh-mode", default="IEH", choices=[m.value for m in EhMode])
    p.add_argument("--frames", type=int, default=200_000)
    p.add_argument("--symbols-per-frame", type=int, default=64)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--min-errors", type=int, default=0)
    p.add_argument("--relay-power-factor", type=float, default=1.0)
    p.add_argument("--out", help="write the result as CSV")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("reconcile", help="printed vs normative closed forms")
    _add_param_flags(p)
    p.add_argument("--p0-db-grid", default="0:30:2.5")
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_reconcile)

    p = sub.add_parser("selftest", help="run the identity/oracle corpus")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERIC_ERRORS as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
