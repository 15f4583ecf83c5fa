"""Experiment report records with CSV / JSON-lines emission.

Every record carries the config hash so any row can be traced back to the
exact inputs that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .util import atomic_write_text, canonical_hash


@dataclass
class ExperimentReport:
    """Ordered per-tuple records plus summary statistics."""

    columns: list
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    config_hash: str = ""

    @classmethod
    def for_config(cls, columns, config: dict) -> "ExperimentReport":
        return cls(columns=list(columns), config_hash=canonical_hash(config))

    def add(self, **fields) -> None:
        row = {c: fields[c] for c in self.columns}
        self.records.append(row)

    def ratios(self, key="ratio"):
        return [r[key] for r in self.records if key in r]

    def finalize(self, **extra) -> "ExperimentReport":
        rs = self.ratios()
        if rs:
            srt = sorted(rs)
            self.summary["max_ratio"] = max(rs)
            self.summary["median_ratio"] = srt[len(srt) // 2]
        self.summary["n_records"] = len(self.records)
        self.summary.update(extra)
        return self

    def to_csv(self) -> str:
        lines = [",".join(self.columns + ["config_hash"])]
        for r in self.records:
            vals = [_fmt(r[c]) for c in self.columns] + [self.config_hash]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"

    def to_jsonl(self) -> str:
        lines = []
        for r in self.records:
            row = dict(r)
            row["config_hash"] = self.config_hash
            lines.append(json.dumps(row, sort_keys=True, default=_json_default))
        lines.append(
            json.dumps(
                {"summary": self.summary, "config_hash": self.config_hash},
                sort_keys=True,
                default=_json_default,
            )
        )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        atomic_write_text(path, self.to_csv())

    def write_jsonl(self, path) -> None:
        atomic_write_text(path, self.to_jsonl())


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        sign = "+" if v.imag >= 0 else "-"
        return f"{v.real!r}{sign}{abs(v.imag)!r}j"
    return str(v)


def _json_default(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return str(v)
