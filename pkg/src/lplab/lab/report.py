"""Experiment reports: a small versioned JSON schema.

Reports are deterministic: keys are sorted, floats use ``repr`` and runtime
is only recorded when timing is requested, so equal seeds and parameters
give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class ExperimentReport:
    experiment: str
    grid: dict
    params: dict
    ratios: list[tuple[str, float]] = field(default_factory=list)
    envelope: float = math.nan
    passed: bool = False
    seed: int = 0
    runtime_ms: float | None = None
    notes: list[str] = field(default_factory=list)

    def add(self, label: str, value: float) -> None:
        self.ratios.append((label, float(value)))

    def finalize(self) -> "ExperimentReport":
        vals = [v for _, v in self.ratios if math.isfinite(v)]
        self.envelope = max(vals) if vals else math.nan
        self.passed = recompute_pass(self)
        return self

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "grid": dict(self.grid),
            "params": _plain(self.params),
            "ratios": [{"label": k, "value": _num(v)} for k, v in self.ratios],
            "envelope": _num(self.envelope),
            "pass": bool(self.passed),
            "seed": int(self.seed),
            "runtime_ms": self.runtime_ms,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["label", "value"])
        for k, v in self.ratios:
            wr.writerow([k, repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(
            experiment=d["experiment"],
            grid=d["grid"],
            params=d["params"],
            ratios=[(r["label"], _unnum(r["value"])) for r in d["ratios"]],
            envelope=_unnum(d["envelope"]),
            passed=d["pass"],
            seed=d["seed"],
            runtime_ms=d.get("runtime_ms"),
            notes=d.get("notes", []),
        )

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))


def _num(v):
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _unnum(v):
    return float(v)


def _plain(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    if isinstance(obj, float):
        return _num(obj)
    return obj


def parse_label(label: str) -> dict[str, str]:
    """``"n=1024|w=pow0.3"`` -> ``{"n": "1024", "w": "pow0.3"}``."""
    out = {}
    for part in label.split("|"):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k] = v
    return out


def envelopes_by(report: ExperimentReport, key: str, where: dict[str, str] | None = None) -> dict[str, float]:
    """Max ratio grouped by one label field, optionally filtered on others."""
    out: dict[str, float] = {}
    for label, v in report.ratios:
        fields = parse_label(label)
        if key not in fields:
            continue
        if where and any(fields.get(a) != b for a, b in where.items()):
            continue
        out[fields[key]] = max(out.get(fields[key], -math.inf), v)
    return out


def doubling_drift(report: ExperimentReport, where: dict[str, str] | None = None) -> float:
    """Relative change of the envelope between the coarse and the doubled grid."""
    env = envelopes_by(report, "n", where)
    if len(env) < 2:
        return math.nan
    ns = sorted(env, key=int)
    lo, hi = env[ns[0]], env[ns[-1]]
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo <= 0:
        return math.inf
    return abs(hi / lo - 1.0)


def recompute_pass(report: ExperimentReport) -> bool:
    """Pass/fail from the ratio table and params alone."""
    name = report.experiment
    prm = report.params
    if name in ("theorem-a", "theorem-b", "theorem-b-weak", "fefferman-stein", "pointwise-g"):
        vals = [v for lbl, v in report.ratios if parse_label(lbl).get("set", "main") == "main"]
        if not vals or not all(math.isfinite(v) for v in vals):
            return False
        drift = doubling_drift(report, {"set": "main"})
        ok = drift < prm.get("drift_budget", 0.10)
        if name == "theorem-b" and prm.get("q_ladder"):
            ladder = envelopes_by(report, "q", {"set": "ladder"})
            qs = sorted(ladder, key=float)
            ok = ok and all(ladder[a] <= ladder[b] * (1 + 1e-12) for a, b in zip(qs, qs[1:]))
        return bool(ok)
    if name == "carleson":
        vals = [v for _, v in report.ratios]
        if len(vals) < 2:
            return False
        growth = vals[-1] / vals[0]
        if prm["p"] < 2:
            increasing = all(b > a for a, b in zip(vals, vals[1:]))
            return bool(increasing and growth >= prm.get("growth_budget", 1.2))
        return bool(growth < prm.get("growth_budget", 1.2))
    if name == "equ2":
        rho = {int(parse_label(lbl)["k"]): v for lbl, v in report.ratios}
        kmax = prm["k_max"]
        growth = rho[kmax] / rho[max(1, kmax // 8)]
        if prm.get("expect", "growth") == "bounded":
            return bool(growth < prm.get("growth_budget", 1.3))
        return bool(growth >= prm.get("growth_budget", 2.0))
    raise ValueError(f"no pass rule for experiment {name!r}")


def render(report: ExperimentReport, limit: int = 40) -> str:
    lines = [
        f"experiment : {report.experiment}",
        f"grid       : n={report.grid.get('n')} period={report.grid.get('period')}",
        f"seed       : {report.seed}",
        f"params     : {json.dumps(_plain(report.params), sort_keys=True)}",
        f"envelope   : {report.envelope:.6g}",
        f"pass       : {'PASS' if report.passed else 'FAIL'}",
    ]
    for note in report.notes:
        lines.append(f"note       : {note}")
    lines.append(f"ratios ({len(report.ratios)}):")
    width = max((len(k) for k, _ in report.ratios[:limit]), default=5)
    for k, v in report.ratios[:limit]:
        lines.append(f"  {k:<{width}}  {v:.6g}")
    if len(report.ratios) > limit:
        lines.append(f"  ... {len(report.ratios) - limit} more")
    return "\n".join(lines) + "\n"
