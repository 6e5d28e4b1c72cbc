"""Check results and deterministic reports shared by verifiers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class CheckResult:
    name: str
    status: str  # PASS | FAIL | SKIP
    detail: str = ""

    def line(self) -> str:
        out = f"check={self.name} status={self.status}"
        if self.detail:
            out += f" detail={self.detail}"
        return out


@dataclass
class Report:
    title: str
    results: List[CheckResult] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "") -> CheckResult:
        r = CheckResult(name, "PASS" if ok else "FAIL", detail)
        self.results.append(r)
        return r

    def skip(self, name: str, detail: str = "") -> CheckResult:
        r = CheckResult(name, "SKIP", detail)
        self.results.append(r)
        return r

    def merge(self, other: "Report"):
        self.results.extend(other.results)
        for k, v in other.stats.items():
            self.stats[k] = self.stats.get(k, 0) + v

    @property
    def ok(self) -> bool:
        return all(r.status != "FAIL" for r in self.results)

    def first_failure(self) -> Optional[CheckResult]:
        for r in self.results:
            if r.status == "FAIL":
                return r
        return None

    def counts(self):
        c = {"PASS": 0, "FAIL": 0, "SKIP": 0}
        for r in self.results:
            c[r.status] += 1
        return c

    def render(self, fmt: str = "text") -> str:
        lines = []
        if fmt == "structured":
            lines.append(f"report={self.title}")
            for k in sorted(self.stats):
                lines.append(f"stat.{k}={self.stats[k]}")
            for r in self.results:
                lines.append(r.line())
            c = self.counts()
            lines.append(f"summary pass={c['PASS']} fail={c['FAIL']} skip={c['SKIP']}")
            lines.append(f"verdict={'PASS' if self.ok else 'FAIL'}")
        else:
            lines.append(f"== {self.title} ==")
            for r in self.results:
                mark = {"PASS": "ok  ", "FAIL": "FAIL", "SKIP": "skip"}[r.status]
                lines.append(f"  [{mark}] {r.name}" + (f"  ({r.detail})" if r.detail else ""))
            c = self.counts()
            for k in sorted(self.stats):
                lines.append(f"  {k}: {self.stats[k]}")
            lines.append(f"  {c['PASS']} passed, {c['FAIL']} failed, {c['SKIP']} skipped")
            fail = self.first_failure()
            if fail:
                lines.append(f"  first failure: {fail.name} {fail.detail}")
        return "\n".join(lines) + "\n"
