"""Verification reports: records, serialization and the shipped JSON schemas."""
from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import resources
from typing import Any

REPORT_SCHEMA = "spreadlab-report"
REPORT_SCHEMA_VERSION = 1
PROVENANCE = ("PAPER", "TRIVIAL", "DERIVED")
STATUSES = ("pass", "fail", "indeterminate")


@dataclass
class Record:
    """One checked claim.

    ``status`` is ``indeterminate`` when the computation could not finish
    (bound exceeded, time budget, unavailable construction); ``error`` is set
    when it stopped because of an unexpected exception.
    """

    claim: str
    anchor: str
    computed: Any
    expected: Any
    provenance: str
    status: str
    runtime: float
    detail: dict = field(default_factory=dict)
    error: str | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance tag {self.provenance!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["runtime"] = round(self.runtime, 3)
        if d["error"] is None:
            del d["error"]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Record":
        return cls(d["claim"], d["anchor"], d["computed"], d["expected"], d["provenance"], d["status"],
                   d["runtime"], d.get("detail", {}), d.get("error"))


def toolchain() -> dict:
    import numba
    import numpy
    import scipy

    from . import __version__

    return {
        "spreadlab": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
    }


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class VerificationReport:
    suite: str
    command: str
    records: list[Record]
    config: dict
    tools: dict = field(default_factory=toolchain)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def passed(self) -> bool:
        """A suite passes when no record fails; indeterminate records do not fail it."""
        return all(r.status != "fail" for r in self.records)

    @property
    def errored(self) -> bool:
        return any(r.error for r in self.records)

    def exit_code(self) -> int:
        if not self.passed:
            return 2
        return 1 if self.errored else 0

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "schema_version": REPORT_SCHEMA_VERSION,
            "suite": self.suite,
            "command": self.command,
            "passed": self.passed,
            "records": [r.to_json() for r in self.records],
            "fingerprint": {"toolchain": self.tools, "config": self.config,
                            "config_hash": config_hash(self.config)},
            "timestamp": self.timestamp,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, d: dict) -> "VerificationReport":
        if d.get("schema") != REPORT_SCHEMA:
            raise ValueError("not a spreadlab report")
        fp = d["fingerprint"]
        return cls(d["suite"], d["command"], [Record.from_json(r) for r in d["records"]],
                   fp["config"], fp["toolchain"], d["timestamp"])

    @classmethod
    def loads(cls, text: str) -> "VerificationReport":
        return cls.from_json(json.loads(text))

    def table(self) -> str:
        """Human-readable summary, one line per record."""
        rows = [("status", "claim", "computed", "expected", "tag", "secs")]
        for r in self.records:
            rows.append((r.status.upper(), r.claim, _short(r.computed), _short(r.expected), r.provenance,
                         f"{r.runtime:.2f}"))
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        verdict = "PASSED" if self.passed else "FAILED"
        lines.append(f"suite {self.suite}: {verdict} ({len(self.records)} checks)")
        for r in self.records:
            full = _short(r.computed, width=10**6)
            if full != _short(r.computed):
                lines.append(f"  {r.claim}: {full}")
            if r.error:
                lines.append(f"  error in {r.claim}: {r.error}")
        return "\n".join(lines)


def _short(v: Any, width: int = 40) -> str:
    if v is None:
        return "-"
    text = v if isinstance(v, str) else json.dumps(v, sort_keys=True, ensure_ascii=False)
    return text if len(text) <= width else text[: width - 3] + "..."


def load_schema(name: str = "report") -> dict:
    """A shipped JSON schema: ``report`` or ``generating-graph``."""
    text = resources.files("spreadlab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def strip_volatile(d: dict) -> dict:
    """Copy of a report body without the timestamp and wall-clock runtimes."""
    out = json.loads(json.dumps(d))
    out.pop("timestamp", None)
    for r in out.get("records", []):
        r.pop("runtime", None)
    return out
