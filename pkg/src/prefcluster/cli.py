"""Command-line front door: cluster a tree file, fetch one from a
provider, or serve the HTTP API.

Thin orchestration only; all computation lives in the core modules. Every
error path prints a single `error: ...` line to stderr and exits non-zero
(2 validation, 1 I/O or bind failure, 3 provider trouble).
"""

from __future__ import annotations

import logging
import socket
import sys
from pathlib import Path
from typing import NoReturn, Optional

import click

from .config import load_config
from .dataio import (
    TreeParseError,
    parse_tree_csv,
    parse_tree_json,
    serialize_result_json,
    serialize_tree_csv,
)
from .engine import EmptyTreeError, Node, jjcluster
from .geo import haversine_km
from .provider import (
    FixtureBackend,
    LiveBackend,
    ProviderError,
    QuerySpec,
    SpecValidationError,
    fetch_tree,
    load_credentials,
)
from .render import render_html, to_geojson
from .service import ServiceSettings, create_app

EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_PROVIDER = 3

STYLE_NAMES = {"osm": "openstreetmap", "terrain": "terrain"}


def _fail(code: int, message: str) -> NoReturn:
    first_line = str(message).splitlines()[0] if str(message) else "unknown failure"
    click.echo(f"error: {first_line}", err=True)
    sys.exit(code)


def _geo_metric(a: Node, b: Node) -> float:
    return haversine_km(a.point, b.point)


def _make_backend(backend: str, fixtures_dir: Optional[str], cfg: dict):
    if backend == "fixture":
        return FixtureBackend(fixtures_dir or cfg["fixtures.dir"])
    client_id, client_secret = load_credentials()
    return LiveBackend(cfg["provider.base_url"], client_id, client_secret)


def _matrix_table(result) -> str:
    headers = ("step", "name", "class", "D", "T", "k")
    rows = []
    for row in result.matrix:
        rows.append(
            (
                str(row.step),
                row.node.name,
                row.class_name,
                f"{row.distance_km:.6f}",
                f"{row.total_km:.6f}",
                f"{row.factor:.6f}" if row.factor is not None else "-",
            )
        )
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    lines = []
    header_cells = [
        headers[i].ljust(widths[i]) if i < 3 else headers[i].rjust(widths[i])
        for i in range(len(headers))
    ]
    lines.append("  ".join(header_cells).rstrip())
    for r in rows:
        cells = [
            r[i].ljust(widths[i]) if i < 3 else r[i].rjust(widths[i])
            for i in range(len(headers))
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


@click.group()
def main():
    """Select the best venue of each preference class and map the result."""


@main.command("cluster")
@click.option("--input", "input_path", required=True, type=click.Path(), help="Tree file (CSV or JSON).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
              help="Input format; inferred from the file extension when omitted.")
@click.option("--out", "out_path", type=click.Path(), default=None, help="Write the result JSON here.")
@click.option("--geojson", "geojson_path", type=click.Path(), default=None, help="Write the GeoJSON here.")
@click.option("--html", "html_path", type=click.Path(), default=None, help="Write the interactive map here.")
@click.option("--style", type=click.Choice(["osm", "terrain"]), default="osm", help="Map tile style.")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file (key = value).")
def cluster_command(input_path, fmt, out_path, geojson_path, html_path, style, config_path):
    """Run the selection on a tree file and print the optimization matrix."""
    try:
        cfg = load_config(config_path)
    except (OSError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    try:
        text = Path(input_path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))

    if fmt is None:
        fmt = "json" if input_path.lower().endswith(".json") else "csv"
    try:
        tree = parse_tree_json(text) if fmt == "json" else parse_tree_csv(text)
    except TreeParseError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    try:
        result = jjcluster(tree, _geo_metric)
    except EmptyTreeError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    tiles = {"openstreetmap": cfg["tiles.osm"], "terrain": cfg["tiles.terrain"]}
    try:
        if out_path:
            Path(out_path).write_text(serialize_result_json(result), encoding="utf-8")
        if geojson_path:
            Path(geojson_path).write_text(to_geojson(result, tree) + "\n", encoding="utf-8")
        if html_path:
            Path(html_path).write_text(
                render_html(result, tree, STYLE_NAMES[style], tiles), encoding="utf-8"
            )
    except OSError as exc:
        _fail(EXIT_IO, str(exc))

    click.echo(_matrix_table(result))
    if result.skipped_classes:
        click.echo(f"skipped empty classes: {', '.join(result.skipped_classes)}")


@main.command("fetch")
@click.option("--place", required=True, help="Place name to geocode.")
@click.option("--radius-km", "radius_km", required=True, type=float, help="Search radius in km.")
@click.option("--prefs", required=True, help="Comma-separated preference classes, in order.")
@click.option("--limit", type=int, default=50, show_default=True, help="Max venues per class.")
@click.option("--backend", type=click.Choice(["live", "fixture"]), default="fixture", show_default=True)
@click.option("--fixtures", "fixtures_dir", type=click.Path(), default=None,
              help="Fixture directory (fixture backend).")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Write the tree CSV here.")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file (key = value).")
def fetch_command(place, radius_km, prefs, limit, backend, fixtures_dir, out_path, config_path):
    """Fetch venues for each preference around a place and save the tree."""
    try:
        cfg = load_config(config_path)
    except (OSError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))

    preferences = tuple(p.strip() for p in prefs.split(",") if p.strip())
    try:
        spec = QuerySpec(
            radius_km=radius_km, preferences=preferences, place=place, limit_per_class=limit
        )
    except SpecValidationError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    try:
        tree = fetch_tree(spec, _make_backend(backend, fixtures_dir, cfg))
    except ProviderError as exc:
        _fail(EXIT_PROVIDER, str(exc))
    except SpecValidationError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    try:
        Path(out_path).write_text(serialize_tree_csv(tree), encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))

    for cls in tree.classes:
        click.echo(f"{cls.name}: {len(cls.nodes)} venue(s)")


@main.command("serve")
@click.option("--listen", default=None, help="addr:port to bind (default from config).")
@click.option("--backend", type=click.Choice(["live", "fixture"]), default="fixture", show_default=True)
@click.option("--fixtures", "fixtures_dir", type=click.Path(), default=None,
              help="Fixture directory (fixture backend).")
@click.option("--ui-dist", "ui_dist", type=click.Path(), default=None,
              help="Directory with built webui assets.")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file (key = value).")
def serve_command(listen, backend, fixtures_dir, ui_dist, config_path):
    """Serve the HTTP API (and the webui when built) until interrupted."""
    import uvicorn

    try:
        cfg = load_config(config_path)
    except (OSError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))

    listen = listen or cfg["server.listen"]
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        _fail(EXIT_VALIDATION, f"listen must be addr:port, got {listen!r}")
    port = int(port_text)

    try:
        backend_obj = _make_backend(backend, fixtures_dir, cfg)
    except ProviderError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    settings = ServiceSettings(
        backend=backend_obj,
        tiles={"openstreetmap": cfg["tiles.osm"], "terrain": cfg["tiles.terrain"]},
        ui_dist=Path(ui_dist or cfg["ui.dist"]),
    )

    # Probe the port up front so an occupied port is a clean, immediate failure.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        _fail(EXIT_IO, f"cannot bind {listen}: {exc}")
    finally:
        probe.close()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    app = create_app(settings)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
