"""Command-line front end.

Subcommands map one-to-one onto the figure families and checks:

    point       one grid point with its full entanglement spectrum
    sweep       gamma-h plane sweep to CSV
    scan-h      field scans at fixed L/N for several N, to CSV
    scan-l      block-size scan at fixed (N, gamma, h), to CSV
    scan-gamma  anisotropy scan at fixed (N, L, h), to CSV
    fit         scaling-law fits (iso | a | b | f)
    verify      oracle equivalence grid for small N

Exit codes: 0 success, 1 numerical failure, 2 usage error.  CSV floats use
shortest round-trip decimal formatting, so parsing a file back reproduces
the in-memory values bit for bit.  Flags override an optional key=value
--config file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import oracle, sweeps
from .linalg import ConvergenceError
from .sweeps import CoefficientReport, SweepRecord

__all__ = ["main"]

CSV_HEADER = "n,l,gamma,h,entropy_bits,largest_prob,ground_energy"


class UsageError(Exception):
    """Invalid flag or config combination; all problems joined in one message."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved, validated parameter bundle for the invoked subcommand.

    Built only after every flag and config entry has been checked, so a
    handler holding a RunConfig can start computing immediately.
    """

    command: str
    values: dict

    def __getattr__(self, name):
        try:
            return self.values[name]
        except KeyError as exc:
            raise AttributeError(name) from exc


def _fmt(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def write_records_csv(path: str, records: list[SweepRecord]) -> None:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.spin_count},{r.block_size},{_fmt(r.gamma)},{_fmt(r.h)},"
            f"{_fmt(r.entropy_bits)},{_fmt(r.largest_prob)},{_fmt(r.ground_energy)}"
        )
    try:
        with open(path, "w", newline="") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write output file {path!r}: {exc}") from exc


def parse_grid(text: str, kind=float, flag: str = "grid") -> list:
    """Parse 'a,b,c' lists or 'lo:hi:count' linspace specs."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            values = np.linspace(float(lo), float(hi), int(count))
        else:
            values = [float(tok) for tok in text.split(",") if tok.strip()]
        if kind is int:
            return [int(round(v)) for v in values]
        return [float(v) for v in values]
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{flag}: cannot parse {text!r} (use 'a,b,c' or 'lo:hi:count')") from exc


def load_config(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    try:
        with open(path) as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
                key, value = line.split("=", 1)
                entries[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    return entries


_CONFIG_CASTS = {
    "n": int,  # scan-h overrides this with str: its --n is a comma list
    "l": int,
    "gamma": float,
    "h": float,
    "ratio": float,
    "workers": int,
    "h_min": float,
    "h_max": float,
    "h_points": int,
    "method": str,
    "out": str,
    "json": str,
    "spectrum_csv": str,
    "gamma_grid": str,
    "h_grid": str,
    "l_grid": str,
    "max_n": int,
}


def _apply_config(args: argparse.Namespace, errors: list[str],
                  casts_override: dict | None = None) -> None:
    """Fill unset flags from the config file; flags always win."""
    if not getattr(args, "config", None):
        return
    casts = dict(_CONFIG_CASTS, **(casts_override or {}))
    for key, raw in load_config(args.config).items():
        if key not in casts:
            errors.append(f"config: unknown key {key!r}")
            continue
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        try:
            setattr(args, key, casts[key](raw))
        except ValueError:
            errors.append(f"config: cannot parse {key}={raw!r}")


def _require(value, flag: str, errors: list[str]):
    if value is None:
        errors.append(f"{flag} is required")
    return value


def _check_spin_count(n, errors: list[str]):
    if n is not None and n < 1:
        errors.append(f"--n must be >= 1, got {n}")
    return n


def _check_block(block, n, errors: list[str], flag: str = "--l"):
    if block is None or n is None:
        return block
    if not 1 <= block <= n - 1:
        errors.append(f"{flag} must be in [1, n-1] = [1, {n - 1}], got {block}")
    return block


def _raise_usage(errors: list[str]) -> None:
    if errors:
        raise UsageError("; ".join(errors))


def _resolve_workers(args) -> int | None:
    return args.workers  # None lets the sweep engine consult LMG_WORKERS / cpu count


def _print_record(record: SweepRecord) -> None:
    print(
        f"n={record.spin_count} l={record.block_size} "
        f"gamma={_fmt(record.gamma)} h={_fmt(record.h)}"
    )
    print(f"ground_energy = {_fmt(record.ground_energy)}")
    print(f"entropy_bits  = {_fmt(record.entropy_bits)}")
    print(f"largest_prob  = {_fmt(record.largest_prob)}")


def cmd_point(args) -> int:
    errors: list[str] = []
    _apply_config(args, errors)
    n = _check_spin_count(_require(args.n, "--n", errors), errors)
    gamma = _require(args.gamma, "--gamma", errors)
    h = _require(args.h, "--h", errors)
    block = _check_block(_require(args.l, "--l", errors), n, errors)
    _raise_usage(errors)
    config = RunConfig("point", dict(n=n, gamma=gamma, h=h, l=block,
                                     spectrum_csv=args.spectrum_csv))

    record, spectrum = sweeps.point_spectrum(config.n, config.gamma, config.h, config.l)
    _print_record(record)
    print(f"spectrum ({spectrum.probs.size} probabilities, descending):")
    for prob in spectrum.probs:
        print(f"  {_fmt(prob)}")
    if config.spectrum_csv:
        lines = ["k,prob"] + [f"{k},{_fmt(p)}" for k, p in enumerate(spectrum.probs)]
        try:
            with open(config.spectrum_csv, "w", newline="") as handle:
                handle.write("\n".join(lines) + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {config.spectrum_csv!r}: {exc}") from exc
    return 0


def cmd_sweep(args) -> int:
    errors: list[str] = []
    _apply_config(args, errors)
    n = _check_spin_count(_require(args.n, "--n", errors), errors)
    block = _check_block(_require(args.l, "--l", errors), n, errors)
    gamma_text = _require(args.gamma_grid, "--gamma-grid", errors)
    h_text = _require(args.h_grid, "--h-grid", errors)
    out = _require(args.out, "--out", errors)
    _raise_usage(errors)
    config = RunConfig("sweep", dict(
        n=n, l=block, out=out, workers=_resolve_workers(args),
        gamma_grid=parse_grid(gamma_text, float, "--gamma-grid"),
        h_grid=parse_grid(h_text, float, "--h-grid"),
    ))

    records = sweeps.sweep_plane(config.n, config.l, config.gamma_grid, config.h_grid,
                                 workers=config.workers)
    write_records_csv(config.out, records)
    print(f"wrote {len(records)} records to {config.out}")
    return 0


def cmd_scan_h(args) -> int:
    errors: list[str] = []
    _apply_config(args, errors, {"n": str})
    n_text = _require(args.n, "--n", errors)
    ratio = _require(args.ratio, "--ratio", errors)
    gamma = _require(args.gamma, "--gamma", errors)
    h_text = _require(args.h_grid, "--h-grid", errors)
    out = _require(args.out, "--out", errors)
    if ratio is not None and not 0.0 < ratio < 1.0:
        errors.append(f"--ratio must be in (0, 1), got {ratio}")
    _raise_usage(errors)
    config = RunConfig("scan-h", dict(
        spin_counts=parse_grid(n_text, int, "--n"), ratio=ratio, gamma=gamma,
        h_grid=parse_grid(h_text, float, "--h-grid"), out=out,
        workers=_resolve_workers(args),
    ))

    records = sweeps.scan_h_fixed_ratio(config.spin_counts, config.ratio, config.gamma,
                                        config.h_grid, workers=config.workers)
    write_records_csv(config.out, records)
    print(f"wrote {len(records)} records to {config.out}")
    return 0


def cmd_scan_l(args) -> int:
    errors: list[str] = []
    _apply_config(args, errors)
    n = _check_spin_count(_require(args.n, "--n", errors), errors)
    gamma = _require(args.gamma, "--gamma", errors)
    h = _require(args.h, "--h", errors)
    l_text = _require(args.l_grid, "--l-grid", errors)
    out = _require(args.out, "--out", errors)
    _raise_usage(errors)
    config = RunConfig("scan-l", dict(
        n=n, gamma=gamma, h=h, out=out, workers=_resolve_workers(args),
        l_grid=parse_grid(l_text, int, "--l-grid"),
    ))

    records = sweeps.scan_block_sizes(config.n, config.gamma, config.h, config.l_grid,
                                      workers=config.workers)
    write_records_csv(config.out, records)
    print(f"wrote {len(records)} records to {config.out}")
    return 0


def cmd_scan_gamma(args) -> int:
    errors: list[str] = []
    _apply_config(args, errors)
    n = _check_spin_count(_require(args.n, "--n", errors), errors)
    block = _check_block(_require(args.l, "--l", errors), n, errors)
    h = _require(args.h, "--h", errors)
    gamma_text = _require(args.gamma_grid, "--gamma-grid", errors)
    out = _require(args.out, "--out", errors)
    _raise_usage(errors)
    config = RunConfig("scan-gamma", dict(
        n=n, l=block, h=h, out=out, workers=_resolve_workers(args),
        gamma_grid=parse_grid(gamma_text, float, "--gamma-grid"),
    ))

    records = sweeps.scan_gammas(config.n, config.l, config.h, config.gamma_grid,
                                 workers=config.workers)
    write_records_csv(config.out, records)
    print(f"wrote {len(records)} records to {config.out}")
    return 0


def _report_json(report: CoefficientReport) -> dict:
    payload = asdict(report)
    payload["fit"] = asdict(report.fit)
    return payload


def _resolve_fit(args) -> RunConfig:
    errors: list[str] = []
    _apply_config(args, errors)
    n = _check_spin_count(_require(args.n, "--n", errors), errors)
    _raise_usage(errors)
    values = dict(kind=args.kind, n=n, workers=_resolve_workers(args), json=args.json)
    if args.kind == "iso":
        values["h"] = 0.0 if args.h is None else args.h
        values["l_grid"] = parse_grid(args.l_grid, int, "--l-grid") if args.l_grid else None
        values["method"] = args.method or "exact"
    elif args.kind == "a":
        values["l"] = _check_block(args.l if args.l is not None else n // 2, n, errors)
        values["gamma"] = 0.0 if args.gamma is None else args.gamma
        h_min = sweeps.DEFAULT_A_WINDOW[0] if args.h_min is None else args.h_min
        h_max = sweeps.DEFAULT_A_WINDOW[1] if args.h_max is None else args.h_max
        points = sweeps.DEFAULT_A_WINDOW[2] if args.h_points is None else args.h_points
        if points < 2:
            errors.append(f"--h-points must be >= 2, got {points}")
        elif not h_min < h_max:
            errors.append(f"--h-min must be below --h-max, got [{h_min}, {h_max}]")
        else:
            values["h_grid"] = np.linspace(h_min, h_max, points)
    elif args.kind == "b":
        values["gamma"] = 0.0 if args.gamma is None else args.gamma
        values["l_grid"] = parse_grid(args.l_grid, int, "--l-grid") if args.l_grid else None
    else:  # f
        values["l"] = _check_block(args.l if args.l is not None else n // 4, n, errors)
        values["gamma_grid"] = (
            parse_grid(args.gamma_grid, float, "--gamma-grid") if args.gamma_grid else None
        )
    _raise_usage(errors)
    return RunConfig("fit", values)


def cmd_fit(args) -> int:
    config = _resolve_fit(args)
    try:
        if config.kind == "iso":
            report = sweeps.fit_iso_prefactor(config.n, config.l_grid, config.h, config.method)
        elif config.kind == "a":
            report = sweeps.fit_a(config.n, config.l, config.gamma, config.h_grid,
                                  config.workers)
        elif config.kind == "b":
            report = sweeps.fit_b(config.n, config.l_grid, config.gamma, config.workers)
        else:
            report = sweeps.fit_f(config.n, config.l, config.gamma_grid, config.workers)
    except ValueError as exc:
        # window and grid violations are usage errors for the CLI contract
        raise UsageError(str(exc)) from exc

    print(f"fit {report.name}: fitted_value = {_fmt(report.fitted_value)}")
    print(f"window: {report.window}")
    print(f"residual_rms = {_fmt(report.fit.residual_rms)} over {report.fit.point_count} points")
    if report.note:
        print(f"note: {report.note}")
    if config.json:
        try:
            with open(config.json, "w") as handle:
                json.dump(_report_json(report), handle, indent=2)
                handle.write("\n")
        except OSError as exc:
            raise UsageError(f"cannot write {config.json!r}: {exc}") from exc
        print(f"wrote JSON report to {config.json}")
    return 0


def cmd_verify(args) -> int:
    errors: list[str] = []
    _apply_config(args, errors)
    max_n = args.max_n if args.max_n is not None else 10
    if not 4 <= max_n <= oracle.MAX_ORACLE_SPINS:
        errors.append(f"--max-n must be in [4, {oracle.MAX_ORACLE_SPINS}], got {max_n}")
    _raise_usage(errors)
    config = RunConfig("verify", dict(max_n=max_n))

    report = oracle.run_verification(config.max_n)
    print(
        f"verify: N in [4, {config.max_n}], gammas {oracle.DEFAULT_VERIFY_GAMMAS}, "
        f"fields {oracle.DEFAULT_VERIFY_FIELDS}, L in {{1, N//2}}"
    )
    print(f"compared {len(report.points)} points, skipped {len(report.skipped)} degenerate")
    for n, gamma, h, gap in report.skipped:
        print(f"  skipped n={n} gamma={_fmt(gamma)} h={_fmt(h)} (gap {gap:.3e})")
    print(f"max entropy deviation = {report.max_deviation:.3e} (tolerance {report.tolerance:g})")
    if report.passed:
        print("PASS")
        return 0
    print("FAIL")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmgent",
        description="Ground states and block entanglement of the LMG model in the Dicke basis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--workers", type=int, default=None,
                       help="worker processes (default: LMG_WORKERS or logical cores)")
        p.add_argument("--config", default=None,
                       help="key=value config file; flags override its entries")

    p = sub.add_parser("point", help="one grid point plus its entanglement spectrum")
    p.add_argument("--n", type=int, default=None, help="number of spins N")
    p.add_argument("--gamma", type=float, default=None, help="anisotropy")
    p.add_argument("--h", type=float, default=None, help="transverse field")
    p.add_argument("--l", type=int, default=None, help="block size L")
    p.add_argument("--spectrum-csv", default=None, help="also write the spectrum as CSV")
    common(p)
    p.set_defaults(handler=cmd_point)

    p = sub.add_parser("sweep", help="gamma-h plane sweep to CSV")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--gamma-grid", default=None, help="'a,b,c' or 'lo:hi:count'")
    p.add_argument("--h-grid", default=None, help="'a,b,c' or 'lo:hi:count'")
    p.add_argument("--out", default=None, help="output CSV path")
    common(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("scan-h", help="field scans at fixed L/N for several N")
    p.add_argument("--n", default=None, help="comma list of spin counts, e.g. 200,400")
    p.add_argument("--ratio", type=float, default=None, help="block fraction L/N in (0,1)")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--h-grid", default=None)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(handler=cmd_scan_h)

    p = sub.add_parser("scan-l", help="block-size scan at fixed (N, gamma, h)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--l-grid", default=None)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(handler=cmd_scan_l)

    p = sub.add_parser("scan-gamma", help="anisotropy scan at fixed (N, L, h)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--gamma-grid", default=None)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(handler=cmd_scan_gamma)

    p = sub.add_parser("fit", help="scaling-law fits")
    p.add_argument("kind", choices=("iso", "a", "b", "f"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--l", type=int, default=None, help="block size (fits a and f)")
    p.add_argument("--l-grid", default=None, help="block grid (fits iso and b)")
    p.add_argument("--gamma", type=float, default=None, help="anisotropy (fits a and b)")
    p.add_argument("--gamma-grid", default=None, help="anisotropy grid (fit f)")
    p.add_argument("--h", type=float, default=None, help="field (fit iso)")
    p.add_argument("--h-min", type=float, default=None, help="window start (fit a)")
    p.add_argument("--h-max", type=float, default=None, help="window end (fit a)")
    p.add_argument("--h-points", type=int, default=None, help="window points (fit a)")
    p.add_argument("--method", choices=("exact", "gaussian"), default=None,
                   help="entropy evaluation for fit iso")
    p.add_argument("--json", default=None, help="also write the report as JSON")
    common(p)
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("verify", help="oracle equivalence grid for small N")
    p.add_argument("--max-n", type=int, default=None,
                   help=f"largest N (4..{oracle.MAX_ORACLE_SPINS}, default 10)")
    common(p)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (sweeps.SweepError, ConvergenceError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
