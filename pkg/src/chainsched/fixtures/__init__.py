"""Bundled DVB-S2 receiver latency profiles (µs per task, one file per platform).

``CHAINSCHED_FIXTURES`` overrides the directory that is searched.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from ..model import TaskChain, load_json

ENV_VAR = "CHAINSCHED_FIXTURES"
PREFIX = "dvbs2_"


def fixture_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path(__file__).resolve().parent


@dataclass(frozen=True)
class Fixture:
    key: str
    chain: TaskChain
    frames_per_stream: int
    bits_per_frame: int

    @property
    def bits_per_stream(self) -> int:
        return self.frames_per_stream * self.bits_per_frame

    def throughput_mbps(self, period) -> float:
        """Information throughput for a period in µs (bits per µs is Mb/s)."""
        return self.bits_per_stream / float(period)


def list_fixtures() -> list[str]:
    return sorted(p.stem[len(PREFIX):] for p in fixture_dir().glob(f"{PREFIX}*.json"))


def fixture_path(key: str) -> Path:
    return fixture_dir() / f"{PREFIX}{key}.json"


def load_fixture(key: str) -> Fixture:
    path = fixture_path(key)
    if not path.exists():
        raise FileNotFoundError(f"no fixture {key!r}; available: {', '.join(list_fixtures())}")
    data = load_json(path)
    return Fixture(key, TaskChain.from_dict(data), int(data["frames_per_stream"]), int(data["bits_per_frame"]))


__all__ = ["ENV_VAR", "Fixture", "fixture_dir", "fixture_path", "list_fixtures", "load_fixture"]
