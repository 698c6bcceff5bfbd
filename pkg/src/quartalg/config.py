from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import InputError

TOL_ZERO = 1e-8
TOL_MERGE = 1e-6
TOL_PAIR = 1e-5
CHART_RETRIES = 5


@dataclass(frozen=True)
class RunConfig:
    tol_zero: float = TOL_ZERO
    tol_merge: float = TOL_MERGE
    tol_pair: float = TOL_PAIR
    chart_retries: int = CHART_RETRIES
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        for name in ("tol_zero", "tol_merge", "tol_pair"):
            value = getattr(self, name)
            if not value > 0:
                raise InputError(f"{name} must be positive, got {value!r}")
        if self.chart_retries < 1:
            raise InputError("chart_retries must be at least 1")
        if self.format not in ("json", "text"):
            raise InputError(f"unknown output format {self.format!r}")

    def updated(self, **changes) -> RunConfig:
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_file(cls, path: str | Path) -> RunConfig:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


DEFAULT = RunConfig()
