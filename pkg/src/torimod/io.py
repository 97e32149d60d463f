"""Reading fans and degree functions, writing results."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from torimod.geometry.fan import DegreeFunction, Fan

BUNDLED_FANS = ("p1", "p2", "p1xp1", "f1", "p3")


def read_json_arg(arg: str):
    """Parse an argument that is inline JSON or a path to a JSON file."""
    text = arg.strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    return json.loads(Path(arg).read_text())


def bundled_fan(name: str) -> Fan:
    text = resources.files("torimod").joinpath("data", f"{name}.json").read_text()
    return Fan.from_json(json.loads(text))


def load_fan(arg: str) -> Fan:
    """A bundled fan name (p1, p2, p1xp1, f1, p3), a JSON path, or inline JSON."""
    name = Path(arg).stem if arg.endswith(".json") and not Path(arg).exists() else arg
    if name in BUNDLED_FANS:
        return bundled_fan(name)
    return Fan.from_json(read_json_arg(arg))


def load_deg(arg: str, fan: Fan) -> DegreeFunction:
    return DegreeFunction.from_json(fan, read_json_arg(arg))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
