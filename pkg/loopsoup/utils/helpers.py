"""
Helper Utilities
"""

import hashlib
import platform
import uuid
from pathlib import Path
from typing import Any


def generate_run_id() -> str:
    """Short random identifier for one CLI invocation."""
    return uuid.uuid4().hex[:12]


def file_digest(path: Path, chunk_size: int = 1 << 16) -> str:
    """SHA-256 of a file, hex encoded."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        while chunk := fh.read(chunk_size):
            digest.update(chunk)
    return digest.hexdigest()


def build_identifier() -> str:
    """Package, interpreter and numerical stack versions of the running build."""
    import numpy
    import scipy

    from loopsoup import __version__

    return (
        f"loopsoup-{__version__}"
        f"+py{platform.python_version()}"
        f"+numpy{numpy.__version__}"
        f"+scipy{scipy.__version__}"
    )


def deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Deep merge two dictionaries; ``None`` values in ``override`` are skipped."""
    result = base.copy()
    for key, value in override.items():
        if value is None:
            continue
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value
    return result
