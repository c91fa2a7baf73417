"""Shared result type for the three IST builders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

STAGE_Q_SELECTION = "Q-selection"
STAGE_PATH_GROWTH = "path-growth"
STAGE_NICENESS = "niceness"
STAGE_PARTITION = "partition"
STAGE_CONNECTION = "connection"
STAGE_OTHER = "other"


@dataclass
class BuildFailure:
    """A staged construction failure carrying a machine-checkable
    certificate (Hall violator, partition diagnostics, ...) plus free-form
    diagnostics for the harness."""

    stage: str
    certificate: Any = None
    diagnostics: dict = field(default_factory=dict)

    def __str__(self) -> str:  # pragma: no cover
        return f"BuildFailure(stage={self.stage}, diagnostics={self.diagnostics})"
