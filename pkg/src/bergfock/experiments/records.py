"""Sweep records, verdict gates and artifact writers shared by the suites."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

TOLERANCE_POLICY = (
    "finite-parameter tolerances are engineering choices; the underlying results "
    "are limits or inequalities without quantitative rates"
)

# gates
FINAL = "final"          # last error within tolerance
ALL = "all"              # every error within tolerance
TREND = "trend"          # nonincreasing errors plus final error within tolerance
STRICT = "strict_trend"  # strictly decreasing errors plus final error within tolerance
UPPER = "upper"          # computed <= target + tolerance everywhere
GATES = (FINAL, ALL, TREND, STRICT, UPPER)


def _as_float(x) -> float:
    return float(np.real(x))


@dataclass(frozen=True)
class SweepRecord:
    """One sub-check: a sweep of computed values against a target.

    ``target`` is a number, or a list matching ``computed`` when the reference
    value changes along the sweep.  ``errors[i] = |computed[i] - target[i]|``.
    """

    theorem_tag: str
    parameters: dict
    sweep_key: str
    sweep_values: list
    computed: list
    target: float | list
    errors: list
    tolerance: float
    gate: str
    passed: bool
    notes: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def targets(self) -> list:
        if isinstance(self.target, list):
            return self.target
        return [self.target] * len(self.computed)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def summary_line(self) -> str:
        worst = max(self.errors) if self.errors else 0.0
        final = self.errors[-1] if self.errors else 0.0
        return (f"{self.verdict.upper():4s} {self.theorem_tag}: gate={self.gate} tol={self.tolerance:.3g} "
                f"final_err={final:.3e} max_err={worst:.3e}")

    def to_json(self) -> dict:
        return {
            "theorem_tag": self.theorem_tag,
            "parameters": self.parameters,
            "sweep_key": self.sweep_key,
            "sweep_values": self.sweep_values,
            "computed": self.computed,
            "target": self.target,
            "errors": self.errors,
            "verdict": {"passed": self.passed, "gate": self.gate, "tolerance": self.tolerance},
            "notes": self.notes,
            "extra": self.extra,
        }


def _last_sign_change(residuals) -> int | None:
    last = None
    for i in range(1, len(residuals)):
        if residuals[i] * residuals[i - 1] < 0:
            last = i
    return last


def _floors(floor, n: int) -> list:
    if isinstance(floor, (list, tuple, np.ndarray)):
        if len(floor) != n:
            raise ValueError("floor list must match the sweep length")
        return [float(f) for f in floor]
    return [float(floor)] * n


def is_nonincreasing(errors, floor=0.0, strict: bool = False) -> bool:
    """Monotone check in which pairs already below their noise floor count as converged.

    ``floor`` is a number or one value per entry (e.g. the resolution of a
    normalized integer count).
    """
    fl = _floors(floor, len(errors))
    for i, (prev, cur) in enumerate(zip(errors[:-1], errors[1:])):
        if prev <= fl[i] and cur <= fl[i + 1]:
            continue
        if cur > prev or (strict and cur == prev):
            return False
    return True


def trend_verdict(errors, residuals, floor: float, strict: bool):
    """Apply the trend criterion; returns (ok, explanation).

    When the signed residual changes sign the error passes through zero, so
    the entry at the crossing is an accidental cancellation.  In that case
    monotonicity is checked from the entry after the last crossing and the
    record says so.
    """
    if is_nonincreasing(errors, floor, strict):
        return True, ""
    k = _last_sign_change(residuals)
    if k is not None and k + 1 < len(errors):
        tail = errors[k + 1:]
        tail_floor = _floors(floor, len(errors))[k + 1:]
        if all(e <= errors[0] for e in errors[1:]) and is_nonincreasing(tail, tail_floor, strict):
            return True, (f"residual changes sign before entry {k}; the error there is a cancellation, "
                          f"monotonicity checked from entry {k + 1}")
    return False, "error sequence is not monotone"


def make_record(theorem_tag: str, parameters: dict, sweep_key: str, sweep_values, computed, target,
                tolerance: float, gate: str, notes: str = "", floor=0.0,
                extra: dict | None = None) -> SweepRecord:
    """Build a record and evaluate its gate."""
    if gate not in GATES:
        raise ValueError(f"unknown gate {gate!r}")
    computed = [_as_float(c) for c in computed]
    if isinstance(target, (list, tuple, np.ndarray)):
        target = [_as_float(t) for t in target]
        tgt = target
    else:
        target = _as_float(target)
        tgt = [target] * len(computed)
    if len(tgt) != len(computed):
        raise ValueError("target list must match computed values")
    residuals = [c - t for c, t in zip(computed, tgt)]
    errors = [abs(r) for r in residuals]
    finite = all(math.isfinite(e) for e in errors)
    explanation = ""
    if not finite or not errors:
        passed = False
        explanation = "non-finite or empty sweep"
    elif gate == FINAL:
        passed = errors[-1] <= tolerance
    elif gate == ALL:
        passed = max(errors) <= tolerance
    elif gate == UPPER:
        passed = all(r <= tolerance for r in residuals)
    else:
        ok, explanation = trend_verdict(errors, residuals, floor, gate == STRICT)
        passed = ok and errors[-1] <= tolerance
    if explanation:
        notes = f"{notes}; {explanation}" if notes else explanation
    return SweepRecord(theorem_tag, dict(parameters), sweep_key, [_jsonable(v) for v in sweep_values],
                       computed, target, errors, float(tolerance), gate, bool(passed), notes,
                       dict(extra or {}))


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


# ---------------------------------------------------------------------------
# artifacts


def config_digest(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, str):
        return v
    return json.dumps(v, sort_keys=True, separators=(",", ":"))


def records_csv(records, config: dict) -> str:
    """Long-format CSV: one row per (record, sweep point).

    The first line is a ``# config:`` comment holding the resolved config.
    """
    param_keys = sorted({k for r in records for k in r.parameters})
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theorem_tag", "sweep_key", "sweep_value", *param_keys,
                     "computed", "target", "error", "verdict"])
    for r in records:
        for sv, c, t, e in zip(r.sweep_values, r.computed, r.targets, r.errors):
            writer.writerow([r.theorem_tag, r.sweep_key, _fmt(sv),
                             *[_fmt(r.parameters.get(k, "")) for k in param_keys],
                             _fmt(c), _fmt(t), _fmt(e), r.verdict])
    return buf.getvalue()


def verdict_json(suite: str, records, config: dict) -> str:
    payload = {
        "suite": suite,
        "config": config,
        "tolerance_policy": TOLERANCE_POLICY,
        "all_passed": all(r.passed for r in records),
        "records": [r.to_json() for r in records],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_suite(out_dir: str, suite: str, records, config: dict) -> tuple[str, str]:
    """Write ``<suite>-<digest>.csv`` and ``.json``; return both paths."""
    stem = os.path.join(out_dir, f"{suite}-{config_digest(config)}")
    csv_path, json_path = stem + ".csv", stem + ".json"
    atomic_write(csv_path, records_csv(records, config))
    atomic_write(json_path, verdict_json(suite, records, config))
    return csv_path, json_path
