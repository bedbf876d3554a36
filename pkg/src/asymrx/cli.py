"""Command-line interface.

The CLI is a thin client over the HTTP service: by default it talks to the
FastAPI application in-process (no socket), and ``--server URL`` points it at
a remote instance instead.

Exit codes: 0 success, 1 configuration error, 2 numerical/domain failure
(including a failed validation battery and sweeps where every row failed).
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Any, Dict, List, Optional

import click
import httpx

from .errors import ConfigError
from .presets import PRESETS, get_preset, preset_names

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():  # the sync test client backend is fine for us
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient  # imported lazily: keeps `--help` fast

    from .service.app import app

    return TestClient(app, raise_server_exceptions=False)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _post(server: Optional[str], path: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    with _client(server) as client:
        try:
            resp = client.post(path, json=payload)
        except httpx.HTTPError as exc:
            _fail(f"service request failed: {exc}", EXIT_NUMERICAL)
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json().get("detail")
    except ValueError:
        detail = resp.text
    if isinstance(detail, dict):
        message = detail.get("message", str(detail))
        kind = detail.get("kind", "config")
    elif isinstance(detail, list):  # FastAPI body-validation error entries
        parts = []
        for entry in detail:
            loc = ".".join(str(p) for p in entry.get("loc", []) if p != "body")
            parts.append(f"{loc}: {entry.get('msg', entry)}" if loc else str(entry.get("msg", entry)))
        message, kind = "; ".join(parts), "config"
    else:
        message, kind = str(detail), "config"
    _fail(message, EXIT_CONFIG if resp.status_code in (400, 422) and kind == "config" else EXIT_NUMERICAL)
    raise AssertionError("unreachable")


def _load_config(command: str, config_path: Optional[str], preset: Optional[str]) -> Dict[str, Any]:
    if config_path and preset:
        raise ConfigError("--config and --preset are mutually exclusive")
    if preset:
        entry = get_preset(preset)
        if entry["command"] != command:
            raise ConfigError(
                f"preset {preset!r} belongs to the {entry['command']!r} subcommand"
            )
        return entry["config"]
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {config_path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("configuration document must be a JSON object")
        return doc
    raise ConfigError("one of --config or --preset is required")


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def _render_csv(columns: List[str], rows: List[List[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(c) for c in row])
    return buf.getvalue()


def _emit_table(doc: Dict[str, Any], fmt: str, out: Optional[str]) -> None:
    columns, rows = doc["columns"], doc["rows"]
    if fmt == "csv":
        text = _render_csv(columns, rows)
    else:
        text = json.dumps({"columns": columns, "rows": rows}, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _sweep_exit_code(doc: Dict[str, Any]) -> int:
    """Exit 2 when a sweep produced no usable row at all."""
    columns, rows = doc["columns"], doc["rows"]
    if "status" not in columns or not rows:
        return EXIT_OK
    idx = columns.index("status")
    if all(row[idx] for row in rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def _table_options(f):
    for opt in reversed(
        [
            click.option("--config", "config_path", type=click.Path(), default=None,
                         help="JSON configuration file"),
            click.option("--preset", default=None,
                         help=f"named preset ({', '.join(preset_names())})"),
            click.option("--out", default=None, help="write output to this file"),
            click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                         default="csv", show_default=True),
            click.option("--threads", type=click.IntRange(1, 64), default=1,
                         show_default=True, help="worker threads for sweep points"),
            click.option("--seed", type=int, default=12345, show_default=True,
                         help="seed for any stochastic component"),
            click.option("--server", default=None,
                         help="service base URL (default: run in-process)"),
        ]
    ):
        f = opt(f)
    return f


@click.group()
def main() -> None:
    """Asymmetric homodyne/double-homodyne receiver modeling and security analysis."""


@main.command()
@_table_options
def dist(config_path, preset, out, fmt, threads, seed, server) -> None:
    """Photocount distribution of a configured receiver."""
    del threads, seed  # deterministic single-point computation
    try:
        cfg = _load_config("dist", config_path, preset)
    except (ConfigError, OSError) as exc:
        _fail(str(exc), EXIT_CONFIG)
    payload = {k: v for k, v in cfg.items() if k in ("receiver", "signal")}
    doc = _post(server, "/v1/dist", payload)
    _emit_table(doc, fmt, out)


@main.command()
@_table_options
def tvd(config_path, preset, out, fmt, threads, seed, server) -> None:
    """Total-variation distance sweep between exact and approximate laws."""
    del seed
    try:
        cfg = _load_config("tvd", config_path, preset)
    except (ConfigError, OSError) as exc:
        _fail(str(exc), EXIT_CONFIG)
    payload = {k: v for k, v in cfg.items() if k in ("receiver", "signal", "sweep")}
    payload["threads"] = threads
    doc = _post(server, "/v1/tvd", payload)
    _emit_table(doc, fmt, out)
    sys.exit(_sweep_exit_code(doc))


@main.command()
@_table_options
def security(config_path, preset, out, fmt, threads, seed, server) -> None:
    """Asymptotic security sweep: mutual information, Holevo bound, key fraction."""
    del seed
    try:
        cfg = _load_config("security", config_path, preset)
    except (ConfigError, OSError) as exc:
        _fail(str(exc), EXIT_CONFIG)
    payload = {k: v for k, v in cfg.items() if k in ("receiver", "channel", "protocol", "sweep")}
    payload["threads"] = threads
    doc = _post(server, "/v1/security", payload)
    _emit_table(doc, fmt, out)
    sys.exit(_sweep_exit_code(doc))


@main.command()
@click.option("--seed", type=int, default=12345, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.option("--out", default=None, help="write output to this file")
@click.option("--server", default=None, help="service base URL (default: run in-process)")
def validate(seed, fmt, out, server) -> None:
    """Run the internal consistency battery; exit 2 if any check fails."""
    doc = _post(server, "/v1/validate", {"seed": seed})
    if fmt == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = []
        for check in doc["checks"]:
            mark = "ok  " if check["passed"] else "FAIL"
            lines.append(f"{mark} {check['name']:<24} {check['detail']}")
        lines.append("all checks passed" if doc["passed"] else "validation FAILED")
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_OK if doc["passed"] else EXIT_NUMERICAL)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def presets(fmt) -> None:
    """List the available configuration presets."""
    if fmt == "json":
        click.echo(json.dumps(PRESETS, indent=2, sort_keys=True))
        return
    for name in preset_names():
        entry = PRESETS[name]
        click.echo(f"{name:<20} [{entry['command']}] {entry['description']}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
