"""Structured reports: a machine form (canonical JSON) and a human form."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .classes import Verdict


def digest(text):
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return repr(x)


def entry(v: Verdict):
    status = "untestable" if v.ok is None and v.untestable else v.status
    out = {
        "name": v.name,
        "verdict": status,
        "witness": _jsonable(v.witness),
        "instances": v.instances,
        "untestable": v.untestable,
    }
    if v.note:
        out["note"] = v.note
    return out


@dataclass
class Report:
    command: str
    inputs: dict
    checks: list = field(default_factory=list)
    duration_ms: float | None = None
    extra: dict = field(default_factory=dict)

    def add(self, v):
        self.checks.append(entry(v))

    def extend(self, vs):
        for v in vs:
            self.add(v)

    @property
    def passed(self):
        return all(c["verdict"] != "fail" for c in self.checks)

    def to_dict(self):
        d = {
            "command": self.command,
            "inputs": _jsonable(self.inputs),
            "checks": self.checks,
            "duration_ms": self.duration_ms,
        }
        if self.extra:
            d["extra"] = _jsonable(self.extra)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def human(self):
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            tag = {"pass": "ok  ", "fail": "FAIL", "info": "info", "untestable": "n/a "}[c["verdict"]]
            line = f"  [{tag}] {c['name']} ({c['instances']} instances)"
            if c.get("note"):
                line += f" - {c['note']}"
            lines.append(line)
            if c["witness"] is not None and c["verdict"] == "fail":
                lines.append(f"         witness: {json.dumps(c['witness'], sort_keys=True, ensure_ascii=False)}")
        for k, v in sorted(self.extra.items()):
            lines.append(f"  {k}: {json.dumps(_jsonable(v), sort_keys=True, ensure_ascii=False)}")
        if self.duration_ms is not None:
            lines.append(f"  duration: {self.duration_ms:.1f} ms")
        return "\n".join(lines) + "\n"


def load_report(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
