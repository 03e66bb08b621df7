"""Report objects emitted by the command-line entry points.

A report is one top-level object with ``task``, ``cases``, ``verdict``
and ``timing_ms``, plus a canonical echo of the parsed inputs. Group
values are serialized as ``{"rank": r, "divisors": [d1, ...]}``. The
JSON form is canonical (sorted keys), so identical computations give
byte-identical output once timing is suppressed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from depthzero.abelian import FinAbGroup


def group_payload(group: FinAbGroup) -> dict:
    """Serialize a finitely generated abelian group as rank plus divisors."""
    return {"rank": group.free_rank, "divisors": list(group.torsion)}


def jsonable(value):
    """Recursively coerce report content to plain JSON types.

    Groups become rank/divisor payloads, tuples become lists, complex
    numbers become [real, imaginary] pairs.
    """
    if isinstance(value, FinAbGroup):
        return group_payload(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


@dataclass(frozen=True)
class Report:
    task: str
    cases: tuple  # of dicts, each with at least "case" and "verdict"
    verdict: str  # "pass" | "fail"
    timing_ms: int
    inputs: dict = field(default_factory=dict)
    vacuous: bool = False

    def to_payload(self) -> dict:
        payload = {
            "task": self.task,
            "inputs": jsonable(self.inputs),
            "cases": [jsonable(c) for c in self.cases],
            "verdict": self.verdict,
            "timing_ms": self.timing_ms,
        }
        if self.vacuous:
            payload["vacuous"] = True
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"task: {self.task}"]
        tag = " (vacuous: zero cases)" if self.vacuous else ""
        lines.append(
            f"verdict: {self.verdict}{tag} "
            f"[{len(self.cases)} cases, {self.timing_ms} ms]"
        )
        for case in self.cases:
            extra = {
                k: jsonable(v)
                for k, v in case.items()
                if k not in ("case", "verdict")
            }
            blob = json.dumps(extra, sort_keys=True) if extra else ""
            lines.append(f"  [{case['verdict']}] {case['case']} {blob}".rstrip())
        return "\n".join(lines)


def build_report(task, cases, timing_ms, inputs=None) -> Report:
    """Aggregate per-case verdicts into a report.

    A case that is "not-computed" neither passes nor fails the run;
    only an explicit "fail" fails it. An empty case list passes but is
    flagged vacuous so it can never masquerade as real coverage.
    """
    cases = tuple(cases)
    verdict = "fail" if any(c.get("verdict") == "fail" for c in cases) else "pass"
    return Report(
        task=task,
        cases=cases,
        verdict=verdict,
        timing_ms=int(timing_ms),
        inputs=dict(inputs or {}),
        vacuous=not cases,
    )
