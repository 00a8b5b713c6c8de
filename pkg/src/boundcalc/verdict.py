"""Verdict and certificate records shared by every decision procedure."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Outcome(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Mode(str, Enum):
    SYMBOLIC = "symbolic"  # definite: backed by a closed-form argument
    NUMERIC = "numeric"  # evidence from sampled evaluation only


@dataclass(frozen=True)
class Verdict:
    relation: str
    lhs: str
    rhs: str
    outcome: Outcome
    mode: Mode
    witness: dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return {Outcome.HOLDS: 0, Outcome.FAILS: 1, Outcome.UNKNOWN: 2}[self.outcome]

    def to_dict(self) -> dict[str, Any]:
        return {
            "relation": self.relation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "outcome": self.outcome.value,
            "mode": self.mode.value,
            "witness": self.witness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def line(self) -> str:
        tag = {Outcome.HOLDS: "HOLDS", Outcome.FAILS: "FAILS", Outcome.UNKNOWN: "UNKNOWN"}[
            self.outcome
        ]
        extra = ""
        if self.witness:
            parts = ", ".join(f"{k}={v}" for k, v in sorted(self.witness.items()))
            extra = f" ({parts})"
        return f"{self.lhs} {self.relation} {self.rhs}: {tag} [{self.mode.value}]{extra}"


def holds(relation: str, lhs: str, rhs: str, mode: Mode, **witness: Any) -> Verdict:
    return Verdict(relation, lhs, rhs, Outcome.HOLDS, mode, dict(witness))


def fails(relation: str, lhs: str, rhs: str, mode: Mode, **witness: Any) -> Verdict:
    return Verdict(relation, lhs, rhs, Outcome.FAILS, mode, dict(witness))


def unknown(relation: str, lhs: str, rhs: str, **witness: Any) -> Verdict:
    return Verdict(relation, lhs, rhs, Outcome.UNKNOWN, Mode.NUMERIC, dict(witness))


class Status(str, Enum):
    CERTIFIED = "certified"  # established by a closed-form argument
    CHECKED = "checked"  # verified on the full sample grid only
    DECLARED = "declared"  # holds by construction of the family, not re-proved
    REFUTED = "refuted"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Certificate:
    prop: str
    subject: str
    status: Status
    argument: str = ""
    parameters: dict[str, Any] = field(default_factory=dict)
    witnesses: list[dict[str, Any]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {
            Status.CERTIFIED: 0,
            Status.CHECKED: 0,
            Status.DECLARED: 0,
            Status.REFUTED: 1,
            Status.UNDECIDED: 2,
        }[self.status]

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.prop,
            "subject": self.subject,
            "status": self.status.value,
            "argument": self.argument,
            "parameters": self.parameters,
            "witnesses": self.witnesses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def line(self) -> str:
        arg = f" via {self.argument}" if self.argument else ""
        return f"{self.prop}({self.subject}): {self.status.value}{arg}"
