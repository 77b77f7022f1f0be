"""Plain-text key=value configuration, shared by the CLI and file schemas.

Blank lines and ``#`` comments are ignored; values keep everything after
the first ``=``. The same format serves as run manifest: effective
parameters as key=value entries, provenance as comment lines, so a
manifest can be fed straight back in as a config file.
"""

from __future__ import annotations

from pathlib import Path

from .errors import SchemaError


def parse_kv_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SchemaError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise SchemaError(f"config line {lineno}: empty key")
        out[key] = value.strip()
    return out


def load_config(path: str | Path) -> dict[str, str]:
    return parse_kv_text(Path(path).read_text(encoding="utf-8"))


def format_kv(entries: dict[str, str], comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in (comments or [])]
    lines += [f"{key} = {value}" for key, value in entries.items()]
    return "\n".join(lines) + "\n"
