"""Example files shipped with the package."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .kripke import Model, load_model
from .tiling import TileSet, load_tileset


def data_path(name: str) -> Path:
    return Path(str(resources.files("announce") / "data" / name))


def figure1() -> tuple[Model, str]:
    """Four-state model where Anne knows whether p and Bill whether q."""
    return load_model(data_path("figure1.json"))


def tileset(name: str) -> TileSet:
    """``uniform``, ``mismatch`` or ``dominos``."""
    return load_tileset(data_path(f"{name}.json"))
