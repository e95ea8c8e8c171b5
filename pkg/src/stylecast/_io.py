"""Shared helpers: errors, versioned JSON artifacts, atomic writes, data paths."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from importlib import resources
from pathlib import Path

FORMAT_VERSION = 1


class StylecastError(Exception):
    """Base class for data errors (bad inputs, mismatched artifacts)."""


class FormatError(StylecastError):
    pass


class VocabularyMismatch(StylecastError):
    pass


def fingerprint(tokens) -> str:
    """Stable hash of an ordered token list."""
    blob = json.dumps(list(tokens), ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def dumps(obj) -> str:
    # floats use repr, which round-trips exactly; key order is insertion order
    return json.dumps(obj, ensure_ascii=False, indent=1) + "\n"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_artifact(path, kind: str, payload: dict) -> None:
    doc = {"format_version": FORMAT_VERSION, "kind": kind}
    doc.update(payload)
    atomic_write_text(path, dumps(doc))


def load_artifact(path, kind: str) -> dict:
    path = Path(path)
    if not path.exists():
        raise StylecastError(f"no such file: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"{path}: missing or unsupported format_version")
    if doc.get("kind") != kind:
        raise FormatError(f"{path}: expected a {kind} artifact, found {doc.get('kind')!r}")
    return doc


def data_path(name: str) -> Path:
    """Locate a bundled data file; STYLECAST_DATA_DIR takes precedence."""
    override = os.environ.get("STYLECAST_DATA_DIR")
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return Path(str(resources.files("stylecast") / "data" / name))


def read_data_lines(name: str) -> list[str]:
    lines = []
    with open(data_path(name), encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            lines.append(line)
    return lines
