"""Command-line front end: ``solve``, ``sweep`` and ``wigner``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import ConfigurationError, TrapEntError
from .measures import EntanglementReport
from .pipeline import DEFAULT_GRID_POINTS, AnalysisConfig, analyze, config_echo
from .radial_solver import DEFAULT_BASIS_SCALE, DEFAULT_BASIS_SIZE
from .wigner_limit import DEFAULT_G_LIST, asymptotic_spectrum

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_PARTIAL = 3

CSV_ETA = 6
CSV_OMEGA = 4
CSV_COLUMNS = (
    ["g", "ln_g", "eps_rel"]
    + [f"eta_{l}" for l in range(CSV_ETA)]
    + ["eta_tail"]
    + [f"omega_{l}" for l in range(CSV_OMEGA)]
    + [
        "purity",
        "participation_R",
        "slater_rank",
        "linear_entropy",
        "n_partial",
        "slater_estimate",
        "l_max_used",
        "error",
    ]
)

DEFAULTS_HELP = f"""\
numerical defaults:
  basis size K               {DEFAULT_BASIS_SIZE}
  basis scale alpha          {DEFAULT_BASIS_SCALE}
  radial grid points n       {DEFAULT_GRID_POINTS}
  r_max                      2 (g/2)^(1/3) + 10
  l_max                      first l with 2 eta_l < 1e-8 (cap 64)
  angular points M           max(64, 4 (l_max + 1), ceil(16 (g/2)^(1/3)))
  wigner couplings           {",".join(f"{g:g}" for g in DEFAULT_G_LIST)}
"""


@dataclass(frozen=True)
class RunConfig:
    mode: str
    g: float | None = None
    g_min: float | None = None
    g_max: float | None = None
    num_points: int = 2
    log_scale: bool = False
    g_list: tuple[float, ...] = DEFAULT_G_LIST
    wigner_parameter: bool = False
    analysis: AnalysisConfig = AnalysisConfig()
    jobs: int = 1
    output: str | None = None
    format: str = "json"

    def __post_init__(self) -> None:
        if self.mode == "sweep":
            if self.g_min is None or self.g_max is None or not self.g_min < self.g_max:
                raise ConfigurationError("need g_min < g_max", g_min=self.g_min, g_max=self.g_max)
            if self.num_points < 2:
                raise ConfigurationError("need at least two points", points=self.num_points)
            if self.log_scale and self.g_min <= 0:
                raise ConfigurationError("log sweep needs g_min > 0", g_min=self.g_min)
        if self.jobs < 1:
            raise ConfigurationError("jobs must be positive", jobs=self.jobs)
        if self.format not in ("csv", "json"):
            raise ConfigurationError("unknown format", format=self.format)

    def couplings(self) -> list[float]:
        """Couplings ``g`` for the selected mode (converted from R_w when asked)."""
        if self.mode == "solve":
            values = [self.g]
        elif self.mode == "sweep":
            space = np.geomspace if self.log_scale else np.linspace
            values = space(self.g_min, self.g_max, self.num_points).tolist()
        else:
            values = list(self.g_list)
        scale = math.sqrt(2.0) if self.wigner_parameter else 1.0
        out = [float(v) * scale for v in values]
        if any(g < 0 for g in out):
            raise ConfigurationError("coupling must be non-negative", g=out)
        return out


def _clean(value: Any) -> Any:
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, (np.floating, np.integer)):
        return _clean(value.item())
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def dumps(doc: dict) -> str:
    # Python float repr is the shortest string that round-trips exactly.
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return str(value)


def report_row(g: float, report: EntanglementReport | None, error: str = "") -> dict[str, Any]:
    row: dict[str, Any] = {c: None for c in CSV_COLUMNS}
    row["g"] = g
    row["ln_g"] = math.log(g) if g > 0 else None
    row["error"] = error
    if report is None:
        return row
    eta = list(report.eta) + [0.0] * CSV_ETA
    omega = list(report.omega) + [float("nan")] * CSV_OMEGA
    row.update(
        eps_rel=report.energy,
        eta_tail=report.eta_tail(CSV_ETA),
        purity=report.purity_spatial,
        participation_R=report.participation,
        slater_rank=report.slater_rank,
        linear_entropy=report.linear_entropy,
        n_partial=report.n_partial,
        slater_estimate=report.slater_estimate,
        l_max_used=report.l_max_used,
    )
    for l in range(CSV_ETA):
        row[f"eta_{l}"] = eta[l]
    for l in range(CSV_OMEGA):
        row[f"omega_{l}"] = omega[l]
    return row


def render_csv(rows: Sequence[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _point(args: tuple[float, AnalysisConfig]) -> tuple[float, dict | None, dict | None]:
    g, config = args
    try:
        report = analyze(g, config).report
    except TrapEntError as exc:
        return g, None, exc.to_dict()
    doc = report.to_dict()
    doc["config"] = config_echo(config, report)
    return g, doc, None


def _report_from_doc(doc: dict) -> EntanglementReport:
    fields = {k: doc[k] for k in EntanglementReport.__dataclass_fields__}
    for key in ("eta", "omega", "channel_purities"):
        fields[key] = tuple(fields[key])
    return EntanglementReport(**fields)


def run_point(config: RunConfig) -> tuple[str, int]:
    (g,) = config.couplings()
    _, doc, err = _point((g, config.analysis))
    if err is not None:
        raise _Failure(err)
    if config.format == "csv":
        return render_csv([report_row(g, _report_from_doc(doc))]), EXIT_OK
    return dumps(doc), EXIT_OK


def run_sweep(config: RunConfig) -> tuple[str, int]:
    tasks = [(g, config.analysis) for g in config.couplings()]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_point, tasks))
    else:
        results = [_point(t) for t in tasks]
    results.sort(key=lambda item: item[0])
    failed = any(err is not None for _, _, err in results)
    code = EXIT_PARTIAL if failed else EXIT_OK
    if config.format == "json":
        docs = [
            doc if err is None else {"g": g, "error": err} for g, doc, err in results
        ]
        return dumps({"points": docs}), code
    rows = []
    for g, doc, err in results:
        if err is None:
            rows.append(report_row(g, _report_from_doc(doc)))
        else:
            rows.append(report_row(g, None, f"{err['code']}: {err['message']}"))
    return render_csv(rows), code


def run_wigner(config: RunConfig) -> tuple[str, int]:
    result = asymptotic_spectrum(config.couplings(), jobs=config.jobs)
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["g", "classical_radius", "omega_0", "ratio_1", "ratio_2", "ratio_3"])
        for p in result.points:
            writer.writerow([_fmt(p.g), _fmt(p.classical_radius), _fmt(p.omega[0])] + [_fmt(x) for x in p.lambda_ratios])
        writer.writerow(["inf", "", _fmt(result.omega_inf)] + [_fmt(x) for x in result.lambda_ratios])
        return buf.getvalue(), EXIT_OK
    return dumps(result.to_dict()), EXIT_OK


class _Failure(Exception):
    def __init__(self, doc: dict) -> None:
        super().__init__(doc.get("message"))
        self.doc = doc


def _auto_float(text: str) -> float | None:
    return None if text == "auto" else float(text)


def _auto_int(text: str) -> int | None:
    return None if text == "auto" else int(text)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--basis-size", type=int, default=DEFAULT_BASIS_SIZE)
    common.add_argument("--basis-scale", type=float, default=DEFAULT_BASIS_SCALE)
    common.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS)
    common.add_argument("--r-max", type=_auto_float, default=None, metavar="F|auto")
    common.add_argument("--l-max", type=_auto_int, default=None, metavar="N|auto")
    common.add_argument("--angular-points", type=_auto_int, default=None, metavar="N|auto")
    common.add_argument(
        "--wigner-parameter", action="store_true", help="inputs are R_w; g = sqrt(2) R_w"
    )
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--output", default=None, help="file path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(
        prog="trapent",
        description="Entanglement of two trapped Coulomb particles by angular channel.",
        epilog=DEFAULTS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    solve = sub.add_parser("solve", parents=[common], epilog=DEFAULTS_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
    solve.add_argument("--g", type=float, required=True)
    sweep = sub.add_parser("sweep", parents=[common], epilog=DEFAULTS_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
    sweep.add_argument("--g-min", type=float, required=True)
    sweep.add_argument("--g-max", type=float, required=True)
    sweep.add_argument("--points", type=int, required=True)
    sweep.add_argument("--log", action="store_true")
    wigner = sub.add_parser("wigner", parents=[common], epilog=DEFAULTS_HELP,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
    wigner.add_argument("--g-list", type=_float_list, default=DEFAULT_G_LIST)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    analysis = AnalysisConfig(
        basis_size=ns.basis_size,
        basis_scale=ns.basis_scale,
        grid_points=ns.grid_points,
        r_max=ns.r_max,
        l_max=ns.l_max,
        angular_points=ns.angular_points,
    )
    fmt = ns.format or ("csv" if ns.mode == "sweep" else "json")
    common = dict(analysis=analysis, jobs=ns.jobs, output=ns.output, format=fmt,
                  wigner_parameter=ns.wigner_parameter)
    if ns.mode == "solve":
        return RunConfig(mode="solve", g=ns.g, **common)
    if ns.mode == "sweep":
        return RunConfig(mode="sweep", g_min=ns.g_min, g_max=ns.g_max,
                         num_points=ns.points, log_scale=ns.log, **common)
    return RunConfig(mode="wigner", g_list=tuple(ns.g_list), **common)


RUNNERS = {"solve": run_point, "sweep": run_sweep, "wigner": run_wigner}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        text, code = RUNNERS[config.mode](config)
    except TrapEntError as exc:
        sys.stderr.write(dumps(exc.to_dict()))
        return exc.exit_code
    except _Failure as exc:
        sys.stderr.write(dumps(exc.doc))
        return EXIT_CONFIG if exc.doc.get("code") in ("invalid_config", "invalid_input", "aliasing") else EXIT_NUMERICAL
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
