"""Run configuration: defaults, config-file overrides, environment fallback.

Precedence, highest first: explicit CLI flag, ``--config`` file entry,
``SDL_PRECISION`` environment variable (precision only), built-in default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_PRECISION = 50
DEFAULT_DEPTH = 40
DEFAULT_CAP = 5
DEFAULT_SAMPLES = 200
DEFAULT_THRESHOLD = 2.0
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_PRECISION
    depth: int = DEFAULT_DEPTH
    cap: int = DEFAULT_CAP
    samples: int = DEFAULT_SAMPLES
    threshold: float = DEFAULT_THRESHOLD
    format: str = "json"

    def __post_init__(self):
        for name in ("precision", "depth", "cap", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "depth": self.depth,
            "cap": self.cap,
            "samples": self.samples,
            "threshold": repr(self.threshold),  # decimal string, not a JSON float
            "format": self.format,
        }


_INT_KEYS = {"precision", "depth", "cap", "samples"}


def load_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    overrides: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = key.strip(), value.strip()
            if key in _INT_KEYS:
                overrides[key] = int(value)
            elif key == "threshold":
                overrides[key] = float(value)
            elif key == "format":
                overrides[key] = value
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return overrides


def resolve_config(
    config_path: str | None = None,
    cli_overrides: dict | None = None,
    env: dict | None = None,
) -> RunConfig:
    env = os.environ if env is None else env
    cfg = RunConfig()
    if "SDL_PRECISION" in env:
        cfg = replace(cfg, precision=int(env["SDL_PRECISION"]))
    if config_path:
        cfg = replace(cfg, **load_config_file(config_path))
    for key, value in (cli_overrides or {}).items():
        if value is not None:
            cfg = replace(cfg, **{key: value})
    return cfg
