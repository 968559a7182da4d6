"""Command-line entry point.

Usage::

    kidnapgame solve --config run.yaml [--strict]
    kidnapgame figure2 --config run.yaml --out fig2.csv
    kidnapgame sweep --config run.yaml --format jsonl
    kidnapgame oracle-check --config run.yaml
    kidnapgame validate -p a=0.5 -p q0=0.2 ...

A config file is YAML with a ``params`` mapping, an optional ``strict`` flag and
optional ``figure2``, ``sweep``, ``oracle_check`` and ``output`` blocks. ``--param``
and ``--set`` flags override file values.

Exit codes: 0 success, 2 invalid input, 3 closed form inapplicable under
``--strict``, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Iterable, Sequence

import numpy as np
import yaml

from .analysis import SWEEP_COLUMNS, figure2_data, sweep
from .errors import ConstraintViolation, IncomparableRegime
from .model import ModelParams, validate_params
from .oracle import GridSpec, compare, solve_discretized
from .solver import critical_demands, execution_threshold, solve



def _diag(level: str, message: str) -> None:
    print(f"{level}: {message}", file=sys.stderr)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INAPPLICABLE = 3
EXIT_MISMATCH = 4

SOLVE_COLUMNS = ("b", "d_star", "offer_at_d_star", "e", "alpha_star", "v0_bar", "v1",
                 "v_bar", "family_value", "applicable")
FIGURE2_COLUMNS = ("d", "offer_asym", "offer_selten")
FORMATS = ("csv", "jsonl", "json")


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# config
# --------------------------------------------------------------------------

def _parse_assignment(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"expected key=value, got {text!r}")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value in {text!r}: {exc}") from exc
    return key.strip(), value


def load_config(path: str | None, params: Sequence[str] = (), sets: Sequence[str] = ()) -> dict:
    """Read the YAML config (if any) and apply flag overrides."""
    cfg: dict = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                loaded = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed config {path!r}: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config must be a mapping at top level")
        cfg = loaded
    cfg.setdefault("params", {})
    if not isinstance(cfg["params"], dict):
        raise ConfigError("'params' must be a mapping")
    for text in params:
        key, value = _parse_assignment(text)
        cfg["params"][key] = value
    for text in sets:
        dotted, value = _parse_assignment(text)
        *blocks, leaf = dotted.split(".")
        node = cfg
        for block in blocks:
            node = node.setdefault(block, {})
            if not isinstance(node, dict):
                raise ConfigError(f"cannot set {dotted!r}: {block!r} is not a block")
        node[leaf] = value
    return cfg


def _block(cfg: dict, name: str) -> dict:
    block = cfg.get(name) or {}
    if not isinstance(block, dict):
        raise ConfigError(f"'{name}' must be a mapping")
    return block


def _grid_values(spec: Any, name: str) -> list[float]:
    """A list of numbers, or ``{start, stop, num}`` for an inclusive linspace."""
    if isinstance(spec, dict):
        try:
            values = np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["num"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"'{name}' needs start, stop and num") from exc
        return [float(v) for v in values]
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return [float(spec)]
    if isinstance(spec, list) and spec and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in spec):
        return [float(v) for v in spec]
    raise ConfigError(f"'{name}' must be a number, a list of numbers or {{start, stop, num}}")


# --------------------------------------------------------------------------
# emission
# --------------------------------------------------------------------------

def _plain(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _csv_cell(value: Any) -> str:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    # repr gives the shortest round-trip form
    return repr(value) if isinstance(value, float) else str(value)


def render(rows: list[dict], columns: Iterable[str], fmt: str, single: bool = False) -> str:
    columns = list(columns)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    cleaned = [{c: _plain(row.get(c)) for c in columns} for row in rows]
    if fmt == "jsonl":
        return "".join(json.dumps(r, allow_nan=False) + "\n" for r in cleaned)
    payload = cleaned[0] if single else cleaned
    return json.dumps(payload, allow_nan=False, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _params(cfg: dict) -> ModelParams:
    return validate_params(cfg["params"])


def run_solve(cfg: dict, fmt: str, strict: bool) -> tuple[str, int]:
    p = _params(cfg)
    sol = solve(p)
    text = render([sol.as_record()], SOLVE_COLUMNS, fmt, single=True)
    if strict and not sol.closed_form_applicable:
        _diag("error", "closed form inapplicable: execution beats release below offer "
              f"{execution_threshold(p)!r}")
        return text, EXIT_INAPPLICABLE
    return text, EXIT_OK


def run_figure2(cfg: dict, fmt: str, strict: bool) -> tuple[str, int]:
    p = _params(cfg)
    block = _block(cfg, "figure2")
    try:
        ref_q = float(block["reference_q"])
        ref_w = float(block["reference_w"])
    except KeyError as exc:
        raise ConfigError(f"figure2 block needs {exc.args[0]!r}") from exc
    if "demands" not in block:
        raise ConfigError("figure2 block needs 'demands'")
    demands = _grid_values(block["demands"], "figure2.demands")
    try:
        curve = figure2_data(p, ref_q, ref_w, demands)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [{"d": d, "offer_asym": c, "offer_selten": s}
            for d, c, s in zip(curve.demands, curve.offers, curve.selten_offers)]
    return render(rows, FIGURE2_COLUMNS, fmt), EXIT_OK


def run_sweep(cfg: dict, fmt: str, strict: bool) -> tuple[str, int]:
    p = _params(cfg)
    block = _block(cfg, "sweep")
    q0s = _grid_values(block.get("q0", p.q0), "sweep.q0")
    q1s = _grid_values(block.get("q1", p.q1), "sweep.q1")
    rows = [vars(r) for r in sweep(p, q0s, q1s)]
    return render(rows, SWEEP_COLUMNS, fmt), EXIT_OK


def run_oracle_check(cfg: dict, fmt: str, strict: bool) -> tuple[str, int]:
    p = _params(cfg)
    block = _block(cfg, "oracle_check")
    try:
        d_max = float(block["d_max"]) if "d_max" in block else 1.5 * critical_demands(p).d2
        grid = GridSpec(d_max, int(block.get("d_steps", 601)), int(block.get("c_steps", 601)),
                        block.get("alpha_model", "standard"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad oracle_check block: {exc}") from exc
    closed = solve(p)
    disc = solve_discretized(p, grid)
    record: dict[str, Any] = {
        "oracle_b": disc.b, "oracle_d": disc.d_value, "oracle_c": disc.c_value,
        "oracle_e": disc.e, "oracle_k": disc.k_value, "oracle_f": disc.f_value,
        "d_star": closed.d_star, "offer_at_d_star": closed.offer_at_d_star,
        "v_bar": closed.v_bar,
    }
    try:
        report = compare(closed, disc, grid, p)
    except IncomparableRegime as exc:
        _diag("warning", f"{exc}; report is informational")
        record["comparable"] = False
        text = render([record], list(record), fmt, single=True)
        return text, EXIT_INAPPLICABLE if strict else EXIT_OK
    record["comparable"] = True
    record.update(report.as_record())
    text = render([record], list(record), fmt, single=True)
    return text, EXIT_OK if report.passed else EXIT_MISMATCH


def run_validate(cfg: dict, fmt: str, strict: bool) -> tuple[str, int]:
    p = _params(cfg)
    record = {"valid": True, "closed_form_applicable": execution_threshold(p) is None,
              "execution_threshold": execution_threshold(p)}
    return render([record], list(record), fmt, single=True), EXIT_OK


COMMANDS = {
    "solve": (run_solve, "json"),
    "figure2": (run_figure2, "csv"),
    "sweep": (run_sweep, "csv"),
    "oracle-check": (run_oracle_check, "json"),
    "validate": (run_validate, "json"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kidnapgame", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--config", help="YAML config file")
    parser.add_argument("-p", "--param", action="append", default=[], metavar="KEY=VALUE",
                        help="override a model parameter (repeatable)")
    parser.add_argument("--set", action="append", default=[], metavar="BLOCK.KEY=VALUE",
                        help="override any config entry (repeatable)")
    parser.add_argument("--strict", action="store_true",
                        help="exit 3 when the closed form does not apply")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=FORMATS)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler, default_fmt = COMMANDS[args.command]
    try:
        cfg = load_config(args.config, args.param, args.set)
        output = _block(cfg, "output")
        fmt = args.format or output.get("format") or default_fmt
        if fmt not in FORMATS:
            raise ConfigError(f"unknown format {fmt!r}")
        out = args.out or output.get("path")
        strict = args.strict or bool(cfg.get("strict", False))
        text, status = handler(cfg, fmt, strict)
    except ConstraintViolation as exc:
        for violation in exc.violations:
            _diag("error", f"constraint violated: {violation}")
        return EXIT_INVALID
    except ConfigError as exc:
        _diag("error", str(exc))
        return EXIT_INVALID
    _emit(text, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
