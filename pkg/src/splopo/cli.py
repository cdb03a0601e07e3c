"""Command-line interface.

Four subcommands cover the package's workflows:

* ``spectrum``      -- noise of one mode versus quadrature angle,
* ``scan-coupling`` -- ellipse tilt, squeezing and negativity versus coupling,
* ``covariance``    -- the full two-mode covariance at one operating point,
* ``analyze``       -- entanglement diagnostics of a measured record, or a
  detection-budget prediction with ``--budget``.

Angles are degrees on the command line and radians everywhere inside.
Outputs are deterministic byte-for-byte for fixed inputs; CSV files start
with a ``# schema: 1`` line, JSON documents carry ``"schema": "1"``.

Exit codes: 0 success, 2 usage or missing file, 3 domain or parse errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from splopo.detection import MeasurementRecord, linear_to_db
from splopo.gaussian import InvalidStateError, log_negativity
from splopo.opo import (
    OpoParams,
    NoiseEllipse,
    diff_mode_spectra,
    output_covariance,
    single_mode_spectrum,
    sum_mode_spectra,
    tilt_angle,
)
from splopo.optimize import standardize

_DEFAULTS = {
    "sigma": 0.9,
    "coupling": 0.0,
    "omega": 0.1,
    "kappa": 0.025,
    "kappa_prime": 0.03,
}

_SCHEMA = "1"


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _read_config(path: str) -> dict[str, float]:
    """Parse a ``key=value`` config file; unknown keys are an error."""
    values: dict[str, float] = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _DEFAULTS:
            raise ValueError(
                f"{path}:{lineno}: unknown key {key!r} "
                f"(expected one of {sorted(_DEFAULTS)})"
            )
        try:
            values[key] = float(value.strip())
        except ValueError:
            raise ValueError(f"{path}:{lineno}: {value.strip()!r} is not a number")
    return values


def _resolve_params(args: argparse.Namespace) -> OpoParams:
    """Merge flags > config file > defaults into an operating point."""
    merged = dict(_DEFAULTS)
    if args.config is not None:
        merged.update(_read_config(args.config))
    for key in _DEFAULTS:
        flag = getattr(args, key)
        if flag is not None:
            merged[key] = flag
    return OpoParams(
        sigma=merged["sigma"],
        coupling=merged["coupling"],
        omega=merged["omega"],
        kappa=merged["kappa"],
        kappa_prime=merged["kappa_prime"],
    )


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def _sig9(value: float) -> float:
    return float(f"{value:.9g}")


def _emit_table(
    columns: Sequence[str],
    rows: Sequence[Sequence[float]],
    fmt: str,
    out: str | None,
) -> None:
    if fmt == "csv":
        lines = [f"# schema: {_SCHEMA}", ",".join(columns)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "schema": _SCHEMA,
            "columns": list(columns),
            "rows": [[_sig9(v) for v in row] for row in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    _write(text, out)


def _emit_mapping(doc: dict, fmt: str, out: str | None) -> None:
    if fmt == "csv":
        keys = [k for k in doc if k != "schema"]
        lines = [
            f"# schema: {_SCHEMA}",
            ",".join(keys),
            ",".join("" if doc[k] is None else _fmt(doc[k]) for k in keys),
        ]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(doc, indent=2) + "\n"
    _write(text, out)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_record(path: str) -> MeasurementRecord:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: record must be a JSON object")
    return MeasurementRecord.from_dict(payload)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_spectrum(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    if args.mode == "minus":
        s_p, s_q, cross = diff_mode_spectra(params)
        ellipse = NoiseEllipse(s_p, s_q, cross)
    elif args.mode == "plus":
        s_q, s_p = sum_mode_spectra(params)
        ellipse = NoiseEllipse(s_p, s_q)
    else:
        ellipse = single_mode_spectrum(params)
    if args.points < 2:
        raise ValueError("need at least two sample points")
    phis_deg = np.linspace(args.phi_min, args.phi_max, args.points)
    rows = []
    for phi_deg in phis_deg:
        phi = math.radians(float(phi_deg))
        v = ellipse.variance(phi)
        rows.append((phi, v, linear_to_db(v)))
    _emit_table(("phi_rad", "variance", "variance_db"), rows, args.format, args.out)
    return 0


def _cmd_scan_coupling(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    if args.steps < 2:
        raise ValueError("need at least two scan steps")
    if args.c_min < 0.0 or args.c_max < args.c_min:
        raise ValueError("need 0 <= c-min <= c-max")
    rows = []
    for c in np.linspace(args.c_min, args.c_max, args.steps):
        p = OpoParams(params.sigma, float(c), params.omega, params.kappa, params.kappa_prime)
        theta = tilt_angle(p)
        minus = NoiseEllipse(*diff_mode_spectra(p))
        signal = single_mode_spectrum(p)
        gamma = output_covariance(p)
        raw = log_negativity(gamma)
        std = log_negativity(standardize(gamma, p)[0])
        s_min = minus.min_variance()
        rows.append(
            (
                float(c),
                theta,
                math.degrees(theta),
                s_min,
                linear_to_db(s_min),
                signal.min_variance(),
                raw,
                std,
            )
        )
    _emit_table(
        (
            "c",
            "theta_rad",
            "theta_deg",
            "s_min_minus",
            "s_min_minus_db",
            "s_min_signal",
            "E_N_raw",
            "E_N_std",
        ),
        rows,
        args.format,
        args.out,
    )
    return 0


def _cmd_covariance(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    gamma = output_covariance(params)
    if args.standardize:
        gamma, _ = standardize(gamma, params)
    doc = {"schema": _SCHEMA, **gamma.to_json_dict()}
    if args.format == "csv":
        lines = [f"# schema: {_SCHEMA}", ",".join(f"{q}" for q in doc["ordering"])]
        lines.extend(",".join(_fmt(v) for v in row) for row in doc["matrix"])
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    record = _load_record(args.record)
    if args.budget:
        params = _resolve_params(args)
        s_q_plus = sum_mode_spectra(params).s_q_sum
        theory_db = linear_to_db(s_q_plus)
        doc = {
            "schema": _SCHEMA,
            "theory_db": _sig9(theory_db),
            "overall_efficiency": _sig9(record.chain.overall),
            "predicted_db": _sig9(record.chain.expected_level_db(theory_db)),
        }
        _emit_mapping(doc, args.format, args.out)
        return 0
    from splopo.detection import analyze as run_analysis

    report = run_analysis(record)
    doc = {
        "schema": _SCHEMA,
        **report.to_json_dict(),
        "overall_efficiency": _sig9(record.chain.overall),
    }
    _emit_mapping(doc, args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--sigma", type=float, default=None, help="pump/threshold ratio")
    sub.add_argument("--coupling", type=float, default=None, help="normalised coupling")
    sub.add_argument("--omega", type=float, default=None, help="analysis frequency")
    sub.add_argument("--kappa", type=float, default=None, help="output-coupler rate")
    sub.add_argument("--kappa-prime", type=float, default=None, help="total decay rate")
    sub.add_argument("--config", default=None, help="key=value parameter file")


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", default=None, help="output file (default: stdout)")
    sub.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splopo",
        description="Two-mode noise and entanglement model of a "
        "self-phase-locked OPO below threshold.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser(
        "spectrum", help="noise of one mode versus quadrature angle"
    )
    _add_model_flags(spectrum)
    _add_output_flags(spectrum)
    spectrum.add_argument(
        "--mode",
        choices=("minus", "plus", "single"),
        default="minus",
        help="which mode's ellipse to sample",
    )
    spectrum.add_argument("--phi-min", type=float, default=0.0, help="start angle (deg)")
    spectrum.add_argument("--phi-max", type=float, default=180.0, help="stop angle (deg)")
    spectrum.add_argument("--points", type=int, default=181, help="number of samples")
    spectrum.set_defaults(func=_cmd_spectrum)

    scan = sub.add_parser(
        "scan-coupling", help="tilt, squeezing and negativity versus coupling"
    )
    _add_model_flags(scan)
    _add_output_flags(scan)
    scan.add_argument("--c-min", type=float, default=0.0, help="first coupling value")
    scan.add_argument("--c-max", type=float, default=2.0, help="last coupling value")
    scan.add_argument("--steps", type=int, default=21, help="number of scan points")
    scan.set_defaults(func=_cmd_scan_coupling)

    covariance = sub.add_parser(
        "covariance", help="two-mode covariance at one operating point"
    )
    _add_model_flags(covariance)
    _add_output_flags(covariance)
    covariance.add_argument(
        "--standardize",
        action="store_true",
        help="apply the tilt-cancelling phase shift first",
    )
    covariance.set_defaults(func=_cmd_covariance)

    analyze = sub.add_parser(
        "analyze", help="entanglement diagnostics of a measured record"
    )
    _add_model_flags(analyze)
    _add_output_flags(analyze)
    analyze.add_argument("--record", required=True, help="record JSON file")
    analyze.add_argument(
        "--budget",
        action="store_true",
        help="predict the detected squeezing from the model and the "
        "record's detection chain instead of analysing the record",
    )
    analyze.set_defaults(func=_cmd_analyze)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except (ValueError, InvalidStateError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
