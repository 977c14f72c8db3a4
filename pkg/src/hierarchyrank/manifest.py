"""Run manifests: parameter echoes that make every CLI run replayable.

A manifest records the subcommand argv (minus the output directory), the
inputs, and the effective filter/sampler parameters. Re-running the stored
argv with any output directory reproduces the run's files byte for byte, so
manifests contain no timestamps, hostnames, or absolute output paths.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class RunManifest:
    command: str
    argv: list[str]
    inputs: list[str]
    filter: dict
    sampler: dict | None
    seed: int | None
    tool_version: str
    outputs: list[str] = field(default_factory=list)  # basenames next to the manifest

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(asdict(self), indent=2, sort_keys=True))
            fh.write("\n")

    @classmethod
    def read(cls, path: str) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(**data)
