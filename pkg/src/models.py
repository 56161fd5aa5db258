"""Pydantic models for check verdicts and run reports."""

import json
from enum import Enum
from typing import Any, Iterable, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from . import __version__

SCHEMA_VERSION = 1


class CheckStatus(str, Enum):
    """Verdict of a single check."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive_at_bound"

    @property
    def severity(self) -> int:
        return {"pass": 0, "inconclusive_at_bound": 1, "fail": 2}[self.value]


def worst_status(statuses: Iterable[CheckStatus]) -> CheckStatus:
    """Aggregate statuses: fail beats inconclusive beats pass."""
    return max(statuses, key=lambda s: s.severity, default=CheckStatus.PASS)


class CheckReport(BaseModel):
    """Machine-readable verdict of one check, with witness data."""

    model_config = ConfigDict(extra="forbid")

    check_name: str
    parameters: dict[str, Any] = Field(default_factory=dict)
    status: CheckStatus
    witness: dict[str, Any] | None = None
    elapsed_ms: float | None = None

    @model_validator(mode="after")
    def _witness_rules(self) -> "CheckReport":
        if self.status is CheckStatus.FAIL and not self.witness:
            raise ValueError(f"failed check {self.check_name!r} must carry a witness")
        if self.status is CheckStatus.INCONCLUSIVE:
            in_witness = self.witness is not None and "bound" in self.witness
            if "bound" not in self.parameters and not in_witness:
                raise ValueError(f"inconclusive check {self.check_name!r} must record its bound")
        return self

    @classmethod
    def passed(cls, name: str, parameters: dict | None = None, witness: dict | None = None) -> "CheckReport":
        return cls(check_name=name, parameters=parameters or {}, status=CheckStatus.PASS, witness=witness)

    @classmethod
    def failed(cls, name: str, parameters: dict | None, witness: dict) -> "CheckReport":
        return cls(check_name=name, parameters=parameters or {}, status=CheckStatus.FAIL, witness=witness)

    @classmethod
    def inconclusive(
        cls, name: str, parameters: dict | None, reason: str, bound: Any = None, **extra: Any
    ) -> "CheckReport":
        witness = {"reason": reason, "bound": bound, **extra}
        return cls(
            check_name=name, parameters=parameters or {}, status=CheckStatus.INCONCLUSIVE, witness=witness
        )

    @property
    def ok(self) -> bool:
        return self.status is CheckStatus.PASS


class RunConfig(BaseModel):
    """Everything a run depends on, echoed into the report."""

    quiver_path: str
    command: str
    suites: list[str] = Field(default_factory=list)
    max_degree: int | None = None
    output_format: Literal["json", "text"] = "text"
    seed: int = 20240229
    max_words: int = 160_000
    max_generators: int = 20
    deterministic: bool = False


class QuiverEcho(BaseModel):
    """Vertex and edge order as read from the input file."""

    name: str | None = None
    vertices: list[dict[str, Any]]
    edges: list[dict[str, Any]]


class RunReport(BaseModel):
    """Top-level output of every command."""

    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")
    tool: str = "qmqv"
    version: str = __version__
    command: str
    config: RunConfig
    quiver: QuiverEcho | None = None
    checks: list[CheckReport] = Field(default_factory=list)
    payload: dict[str, Any] | None = None

    @computed_field
    @property
    def aggregate(self) -> CheckStatus:
        return worst_status(c.status for c in self.checks)

    def exit_code(self) -> int:
        """0 all pass, 1 any fail, 2 worst is inconclusive."""
        return {CheckStatus.PASS: 0, CheckStatus.FAIL: 1, CheckStatus.INCONCLUSIVE: 2}[self.aggregate]

    def to_json(self) -> str:
        data = self.model_dump(mode="json", by_alias=True)
        if self.config.deterministic:
            for check in data["checks"]:
                check["elapsed_ms"] = None
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
