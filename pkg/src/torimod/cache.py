"""On-disk cache of generator expansions.

Disabled unless a directory is configured, either through
:func:`set_cache_dir` (the CLI flag) or the ``TORIMOD_CACHE`` environment
variable.  Each entry is one QSeries JSON file, written to a temporary name
in the same directory and moved into place, so concurrent readers never see a
partial file.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from torimod.arith.qseries import QSeries

_explicit_dir: Path | None = None
_disabled = False


def set_cache_dir(path: str | os.PathLike | None) -> None:
    global _explicit_dir
    _explicit_dir = Path(path) if path is not None else None


def disable(flag: bool = True) -> None:
    global _disabled
    _disabled = flag


def cache_dir() -> Path | None:
    if _disabled:
        return None
    if _explicit_dir is not None:
        return _explicit_dir
    env = os.environ.get("TORIMOD_CACHE")
    return Path(env) if env else None


def _path(key: str) -> Path | None:
    base = cache_dir()
    if base is None:
        return None
    return base / f"{key}.json"


def load(key: str) -> QSeries | None:
    path = _path(key)
    if path is None or not path.exists():
        return None
    try:
        with open(path) as fh:
            return QSeries.from_json(json.load(fh))
    except (OSError, ValueError, KeyError):
        return None


def store(key: str, series: QSeries) -> None:
    path = _path(key)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(series.to_json(), fh, separators=(",", ":"))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
