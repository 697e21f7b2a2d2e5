"""Experiment runner CLI: `arealab run <config.json>`, `arealab list`, ...

Config files are flat JSON: {"kind": ..., "params": {...}, "seed": ...,
"output_dir": ...}. Each run writes `<outdir>/<kind>-<hash>.csv` (UTF-8,
header row, comma separator, 12-significant-digit numerics) and a
`report.json` with verdicts, fits and a provenance block. Numbers are
formatted deterministically, so identical configs give byte-identical
CSV numerics. Exit codes: 0 all verdicts pass, 2 some verdict failed,
1 error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

from .errors import ArealabError, ConfigError
from .experiments import EXPERIMENTS, describe, run_experiment

__all__ = ["main", "run_config", "load_config", "format_number"]

_SCHEMA_KEYS = {"kind", "params", "seed", "output_dir"}


def load_config(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _SCHEMA_KEYS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}",
                          field=sorted(unknown)[0])
    if "kind" not in raw:
        raise ConfigError("missing required field 'kind'", field="kind")
    if raw["kind"] not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment kind {raw['kind']!r}", field="kind")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("'params' must be an object", field="params")
    if "seed" in raw and not isinstance(raw["seed"], int):
        raise ConfigError("'seed' must be an integer", field="seed")
    return {"kind": raw["kind"], "params": params, "seed": raw.get("seed"),
            "output_dir": raw.get("output_dir", ".")}


def config_hash(config: dict) -> str:
    canon = json.dumps({"kind": config["kind"], "params": config["params"],
                        "seed": config["seed"]}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def format_number(value) -> str:
    """Shortest 12-significant-digit decimal; deterministic across runs."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_number(row.get(c, "")) for c in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_config(config: dict) -> tuple[dict, Path]:
    """Execute a validated config; returns (report dict, csv path)."""
    kind = config["kind"]
    params = dict(config["params"])
    if config.get("seed") is not None and "seed" in EXPERIMENTS[kind].defaults:
        params.setdefault("seed", config["seed"])
    outdir = Path(config.get("output_dir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    digest = config_hash(config)
    csv_path = outdir / f"{kind}-{digest}.csv"
    report_path = outdir / "report.json"

    report = {
        "kind": kind,
        "provenance": {
            "config_hash": digest,
            "seed": config.get("seed"),
            "version": _package_version(),
        },
        "verdicts": [],
        "fits": {},
    }
    try:
        outcome = run_experiment(kind, params)
    except ArealabError:
        raise
    except Exception as exc:  # runtime failure -> partial report
        report["error"] = f"{type(exc).__name__}: {exc}"
        report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return report, csv_path

    _write_csv(csv_path, outcome.columns, outcome.rows)
    for v in outcome.verdicts:
        report["verdicts"].append({
            "name": v.name,
            "criterion": v.criterion,
            "passed": v.passed,
            "detail": v.detail,
        })
    for label, fit in outcome.fits.items():
        report["fits"][label] = {
            "slope": format_number(fit.slope),
            "intercept": format_number(fit.intercept),
            "residual": format_number(fit.residual),
            "window": list(fit.window),
            "c_eff": format_number(fit.c_eff),
        }
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report, csv_path


def _package_version() -> str:
    try:
        from importlib.metadata import version
        return version("arealab")
    except Exception:
        return "unknown"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="arealab",
        description="Entanglement scaling experiments on quantum lattice models.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a JSON experiment config")
    p_run.add_argument("config", help="path to the config file")
    sub.add_parser("list", help="list experiment kinds")
    p_desc = sub.add_parser("describe", help="show a kind's claim and parameters")
    p_desc.add_argument("kind")
    args = parser.parse_args(argv)

    try:
        if args.command == "list":
            for name in sorted(EXPERIMENTS):
                print(f"{name:22s} {EXPERIMENTS[name].claim.splitlines()[0]}")
            return 0
        if args.command == "describe":
            print(describe(args.kind))
            return 0
        config = load_config(args.config)
        report, csv_path = run_config(config)
        if "error" in report:
            print(f"error: {report['error']}", file=sys.stderr)
            return 1
        for v in report["verdicts"]:
            status = "PASS" if v["passed"] else "FAIL"
            print(f"[{status}] criterion {v['criterion']:>2} {v['name']}: {v['detail']}")
        print(f"rows: {csv_path}")
        return 0 if all(v["passed"] for v in report["verdicts"]) else 2
    except ArealabError as exc:
        field = f" (field: {exc.field})" if getattr(exc, "field", None) else ""
        print(f"error: {exc}{field}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
