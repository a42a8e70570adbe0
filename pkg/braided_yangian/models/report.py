"""
Report models for verification runs
"""
import json
import time
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .. import __version__


class CheckStatus(str, Enum):
    """Outcome of a single check"""
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"  # not derivable at the configured truncation
    SKIPPED = "skipped"


class CheckRecord(BaseModel):
    """One verified (or refuted) identity instance"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    check_id: str
    parameters: Dict[str, str] = Field(default_factory=dict)
    status: CheckStatus
    witness: Optional[str] = None
    witness_ref: Optional[str] = None
    detail: Optional[str] = None
    elapsed_ms: float = 0.0

    # In-memory only; written to separate files by the CLI
    certificates: List[Any] = Field(default_factory=list, exclude=True)

    @classmethod
    def build(cls, check_id: str, parameters: Optional[Dict[str, Any]] = None,
              passed: Optional[bool] = True, witness: Optional[str] = None,
              detail: Optional[str] = None, started: Optional[float] = None,
              status: Optional[CheckStatus] = None,
              certificates: Iterable[Any] = ()) -> "CheckRecord":
        """Create a record; `passed` maps to pass/fail unless an explicit status is given"""
        if status is None:
            status = CheckStatus.PASS if passed else CheckStatus.FAIL
        if status == CheckStatus.FAIL and not witness:
            witness = detail or "identity does not hold"
        elapsed = (time.perf_counter() - started) * 1000.0 if started is not None else 0.0
        return cls(
            check_id=check_id,
            parameters={key: str(value) for key, value in (parameters or {}).items()},
            status=status,
            witness=witness,
            detail=detail,
            elapsed_ms=round(elapsed, 3),
            certificates=list(certificates),
        )

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAIL


class ReportSummary(BaseModel):
    """Counts per status"""
    total: int = 0
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0
    skipped: int = 0


class Report(BaseModel):
    """Machine-readable run report"""
    version: str = __version__
    suite: str
    braiding: str
    config: Dict[str, Any] = Field(default_factory=dict)
    records: List[CheckRecord] = Field(default_factory=list)
    summary: ReportSummary = Field(default_factory=ReportSummary)
    notes: List[str] = Field(default_factory=list)
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def add(self, records: Iterable[CheckRecord]) -> "Report":
        self.records.extend(records)
        self.summary = self._summarize()
        return self

    def _summarize(self) -> ReportSummary:
        counts = {status: 0 for status in CheckStatus}
        for record in self.records:
            counts[record.status] += 1
        return ReportSummary(
            total=len(self.records),
            passed=counts[CheckStatus.PASS],
            failed=counts[CheckStatus.FAIL],
            inconclusive=counts[CheckStatus.INCONCLUSIVE],
            skipped=counts[CheckStatus.SKIPPED],
        )

    def exit_code(self, strict: bool = False) -> int:
        """0 when nothing failed; inconclusive counts as failure under strict"""
        if self.summary.failed:
            return 1
        if strict and self.summary.inconclusive:
            return 1
        return 0

    def canonical_json(self) -> str:
        """JSON without the nondeterministic fields (timings, creation time)"""
        data = self.model_dump(mode="json")
        data.pop("created_at", None)
        for record in data["records"]:
            record.pop("elapsed_ms", None)
        return json.dumps(data, indent=2, sort_keys=True)
