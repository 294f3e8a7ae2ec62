"""Run manifests: enough metadata to reproduce any artifact byte for byte.

A manifest records the subcommand, the fully resolved configuration (and its
hash), the seed, and the content hashes of all inputs.  It deliberately
contains nothing volatile (no timestamps, no hostnames), so re-running a
command over the same inputs rewrites an identical manifest.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__


def config_digest(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(
    target: str | Path,
    subcommand: str,
    config: dict,
    seed: int | None,
    inputs: dict[str, str | Path],
    outputs: list[str],
    extra: dict | None = None,
) -> Path:
    """Write a deterministic JSON manifest and return its path."""
    manifest = {
        "tool": {"name": "mixling", "version": __version__},
        "subcommand": subcommand,
        "seed": seed,
        "config": config,
        "config_sha256": config_digest(config),
        "inputs": {
            name: {"path": str(path), "sha256": file_digest(path)}
            for name, path in sorted(inputs.items())
        },
        "outputs": sorted(outputs),
    }
    if extra:
        manifest["extra"] = extra
    target = Path(target)
    with open(target, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(manifest, handle, sort_keys=True, indent=2, ensure_ascii=False)
        handle.write("\n")
    return target
