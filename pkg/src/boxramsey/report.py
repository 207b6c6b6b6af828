"""Stage-tagged records that searches leave behind for callers and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class StageRecord:
    stage: str
    ok: bool
    guarantee_void: bool = False
    detail: dict[str, Any] = field(default_factory=dict)


@dataclass
class SearchLog:
    records: list[StageRecord] = field(default_factory=list)

    def note(self, stage: str, ok: bool, guarantee_void: bool = False, **detail) -> StageRecord:
        rec = StageRecord(stage, ok, guarantee_void, detail)
        self.records.append(rec)
        return rec

    @property
    def failure(self) -> StageRecord | None:
        """The last failed stage, if the search ended without a result."""
        if self.records and not self.records[-1].ok:
            return self.records[-1]
        return None

    @property
    def guarantee_void(self) -> bool:
        return any(r.guarantee_void for r in self.records)

    def to_dict(self) -> dict:
        return {"records": [asdict(r) for r in self.records]}
