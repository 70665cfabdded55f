from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

from .source import Span

# synthetic location for run-level findings that belong to no source line
RUN_LEVEL_SPAN = Span(0, 0, 1, 1, 1, 1)
CONFIG_FILE = "<config>"


@dataclass(frozen=True)
class Diagnostic:
    rule_id: str
    check_id: str
    severity: str
    span: Span
    message: str
    context: str  # "safe" | "unsafe"
    file: str
    suppressed: bool = False
    suppression_justification: str | None = None

    @property
    def line(self) -> int:
        return self.span.line_start

    @property
    def col(self) -> int:
        return self.span.col_start

    def sort_key(self) -> tuple[str, int, str, int, str]:
        return (self.file, self.span.byte_start, self.rule_id, self.span.byte_end, self.check_id)

    def suppress(self, justification: str) -> Diagnostic:
        return replace(self, suppressed=True, suppression_justification=justification)

    def to_json(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "line": self.span.line_start,
            "col": self.span.col_start,
            "end_line": self.span.line_end,
            "end_col": self.span.col_end,
            "rule_id": self.rule_id,
            "check_id": self.check_id,
            "severity": self.severity,
            "context": self.context,
            "message": self.message,
        }


@dataclass(frozen=True)
class Deviation:
    rule_id: str
    justification: str
    span: Span
    applies_to: str  # "next-line" | "enclosing-item"
    target_lines: tuple[int, ...]

    def covers(self, diag: Diagnostic) -> bool:
        return diag.rule_id == self.rule_id and diag.span.line_start in self.target_lines


# rule ids that belong to the tool rather than to the guideline registry
TOOL_RULE_IDS = frozenset({"SAFETY-COMMENT", "DEV-EMPTY", "DEV-BADID", "CHK-INTERNAL", "PARSE-ERROR"})
# findings that mean the analysis itself is incomplete
TOOL_ERROR_IDS = frozenset({"CHK-INTERNAL", "PARSE-ERROR"})
