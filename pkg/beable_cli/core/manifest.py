"""
Atomic writers for run artifacts: CSV tables, schema.json and manifest.json.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List

from beable_sdk.models.manifest import FileRecord, RunManifest

MANIFEST_NAME = "manifest.json"
SCHEMA_NAME = "schema.json"


def atomic_write_text(path: Path, text: str) -> Path:
    """Write ``text`` to a sibling temporary file, then rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def file_record(path: Path, root: Path) -> FileRecord:
    path = Path(path)
    return FileRecord(path=path.relative_to(root).as_posix(), sha256=sha256_file(path), size=path.stat().st_size)


def write_schema(entries: List[Dict[str, Any]], run_dir: Path) -> Path:
    """schema.json: one entry per CSV column (file, column, description, unit)."""
    return atomic_write_text(Path(run_dir) / SCHEMA_NAME, json.dumps({"columns": entries}, indent=2) + "\n")


def write_manifest(manifest: RunManifest, run_dir: Path) -> Path:
    return atomic_write_text(Path(run_dir) / MANIFEST_NAME, manifest.model_dump_json(indent=2) + "\n")


def read_manifest(run_dir: Path) -> RunManifest:
    return RunManifest.model_validate_json((Path(run_dir) / MANIFEST_NAME).read_text())
