"""Experiment reports with canonical serialization and fingerprints.

Reports are JSON-compatible documents; every exact value is rendered as a
fraction or polynomial string, never a float.  The fingerprint is a SHA-256
over the canonical serialization of everything except the engine version,
so two runs with identical inputs produce byte-identical bodies and reports
from different engine versions still compare equal when the results agree.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

ENGINE_VERSION = "0.1.0"

_FINGERPRINT_FIELDS = ("experiment", "config", "checks")


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class ReportMismatchError(ValueError):
    """diff_reports was handed reports of different experiments."""


class ExperimentReport:
    def __init__(self, experiment: str, config: dict, checks: list):
        self.experiment = experiment
        self.config = config
        self.checks = checks
        self.engine_version = ENGINE_VERSION

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def fingerprint(self) -> str:
        core = {
            "experiment": self.experiment,
            "config": self.config,
            "checks": self.checks,
        }
        return hashlib.sha256(canonical_json(core).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "checks": self.checks,
            "engine_version": self.engine_version,
            "fingerprint": self.fingerprint(),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        for key in sorted(self.config):
            lines.append(f"  config {key} = {self.config[key]}")
        for c in self.checks:
            status = "PASS" if c["status"] == "pass" else "FAIL"
            extras = {k: v for k, v in c.items() if k not in ("name", "status")}
            tail = "" if not extras else "  " + canonical_json(extras)
            lines.append(f"[{status}] {c['name']}{tail}")
        lines.append(f"fingerprint: {self.fingerprint()}")
        lines.append(f"engine: {self.engine_version}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        report = cls(data["experiment"], data["config"], data["checks"])
        report.engine_version = data.get("engine_version", ENGINE_VERSION)
        return report


def diff_reports(a: ExperimentReport, b: ExperimentReport) -> list:
    """Structural differences between two reports of the same experiment.

    Empty iff the fingerprints match; the engine version is excluded."""
    if a.experiment != b.experiment:
        raise ReportMismatchError(
            f"cannot diff {a.experiment!r} against {b.experiment!r}"
        )
    diffs = []
    if a.config != b.config:
        diffs.append({"field": "config", "left": a.config, "right": b.config})
    names_a = {c["name"]: c for c in a.checks}
    names_b = {c["name"]: c for c in b.checks}
    for name in sorted(set(names_a) | set(names_b)):
        ca, cb = names_a.get(name), names_b.get(name)
        if ca is None or cb is None:
            diffs.append({"check": name, "left": ca, "right": cb})
        elif ca != cb:
            fields = sorted(set(ca) | set(cb))
            changed = {f: (ca.get(f), cb.get(f)) for f in fields if ca.get(f) != cb.get(f)}
            diffs.append({"check": name, "changed": changed})
    return diffs


# ---------------------------------------------------------------------------
# golden fixtures: first verified run freezes derived values


def fixture_dir() -> Path:
    override = os.environ.get("CLOSURELAB_FIXTURES")
    if override:
        return Path(override)
    return Path(__file__).parent / "fixtures"


def load_fixture(name: str):
    path = fixture_dir() / f"{name}.json"
    if not path.exists():
        return None
    return json.loads(path.read_text())


def save_fixture(name: str, payload) -> Path:
    path = fixture_dir() / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(payload) + "\n")
    return path


def check_against_fixture(name: str, payload) -> dict:
    """Compare a freshly computed payload against its frozen golden value.

    Missing fixture: record it if CLOSURELAB_RECORD is set, otherwise report
    the absence so a run can never silently bless itself."""
    frozen = load_fixture(name)
    if frozen is None:
        if os.environ.get("CLOSURELAB_RECORD"):
            save_fixture(name, payload)
            return {"status": "pass", "golden": "recorded"}
        return {"status": "fail", "golden": "missing fixture"}
    if frozen == payload:
        return {"status": "pass", "golden": "match"}
    return {"status": "fail", "golden": "mismatch", "expected": frozen, "actual": payload}
