"""Flat key=value configuration with environment overrides.

Config files are TOML-style ``section.key = value`` lines (comments with
``#``). Every key can be overridden by an environment variable named
``PREFCLUST_<KEY>`` with dots replaced by underscores; command-line flags
take precedence over both.
"""

from __future__ import annotations

import os
from pathlib import Path

__all__ = ["DEFAULTS", "env_var_for", "load_config"]

DEFAULTS: dict[str, str] = {
    "server.listen": "127.0.0.1:8080",
    "provider.base_url": "",
    "tiles.osm": "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
    "tiles.terrain": "https://tiles.stadiamaps.com/tiles/stamen_terrain/{z}/{x}/{y}.png",
    "fixtures.dir": "fixtures/poi",
    "ui.dist": "frontend/dist",
}


def env_var_for(key: str) -> str:
    return "PREFCLUST_" + key.replace(".", "_").upper()


def load_config(path: str | Path | None = None, env: dict | None = None) -> dict[str, str]:
    """Resolved configuration: defaults, then file values, then env values."""
    env = os.environ if env is None else env
    values = dict(DEFAULTS)
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            value = value.strip()
            if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
                value = value[1:-1]
            values[key.strip()] = value
    for key in values:
        override = env.get(env_var_for(key))
        if override is not None:
            values[key] = override
    return values
