"""JSON problem files.

A file looks like::

    {
      "schema_version": 1,
      "action_labels": ["a_R", "a_S"],
      "state_labels": ["w_H", "w_L"],
      "utilities": [[4, 0], [1, 1]],
      "prior": [0, 1],
      "delta": 1,
      "divergence": "burg",
      "tol": 1e-10,
      "sweep": {"state": 0, "grid_points": 100, "divergences": ["kl", "mod_chi2", "burg"],
                "csv": "prior_sweep.csv", "action": 0},
      "verify": {"resolution": 2000, "refine_iterations": 50}
    }

``delta``, ``divergence``, ``tol`` and the ``sweep``/``verify`` sections are
optional.  Floats are written with ``repr`` so a load/dump cycle is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .decision import DecisionProblem
from .divergence import BUILTIN_NAMES
from .dual import DEFAULT_TOL
from .errors import InputError

__all__ = ["SCHEMA_VERSION", "ProblemFile", "load_problem_file", "parse_problem", "dump_problem_file"]

SCHEMA_VERSION = 1

_REQUIRED = ("schema_version", "action_labels", "state_labels", "utilities", "prior")
_KNOWN = set(_REQUIRED) | {"delta", "divergence", "tol", "sweep", "verify", "output"}


@dataclass
class ProblemFile:
    schema_version: int
    action_labels: list[str]
    state_labels: list[str]
    utilities: list[list[float]]
    prior: list[float]
    delta: float = 1.0
    divergence: str = "kl"
    tol: float = DEFAULT_TOL
    sweep: dict[str, Any] = field(default_factory=dict)
    verify: dict[str, Any] = field(default_factory=dict)
    output: dict[str, Any] = field(default_factory=dict)

    def to_problem(self, divergence: str | None = None, delta: float | None = None) -> DecisionProblem:
        return DecisionProblem(
            action_labels=tuple(self.action_labels),
            state_labels=tuple(self.state_labels),
            utilities=self.utilities,
            prior=self.prior,
            delta=self.delta if delta is None else delta,
            divergence=self.divergence if divergence is None else divergence,
        )

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema_version": self.schema_version,
            "action_labels": list(self.action_labels),
            "state_labels": list(self.state_labels),
            "utilities": [list(row) for row in self.utilities],
            "prior": list(self.prior),
            "delta": self.delta,
            "divergence": self.divergence,
            "tol": self.tol,
        }
        for key in ("sweep", "verify", "output"):
            if getattr(self, key):
                out[key] = getattr(self, key)
        return out


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"field {where}: expected a number, got {value!r}")
    return float(value)


def _labels(value, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InputError(f"field {where}: expected a list of strings")
    if len(set(value)) != len(value):
        raise InputError(f"field {where}: labels must be unique")
    return list(value)


def parse_problem(data: Any) -> ProblemFile:
    """Validate a decoded JSON document and build a :class:`ProblemFile`."""
    if not isinstance(data, dict):
        raise InputError("problem file must contain a JSON object at the top level")
    missing = [k for k in _REQUIRED if k not in data]
    if missing:
        raise InputError(f"missing required field(s): {', '.join(missing)}")
    unknown = sorted(set(data) - _KNOWN)
    if unknown:
        raise InputError(f"unknown field(s): {', '.join(unknown)}")

    version = data["schema_version"]
    if version != SCHEMA_VERSION or isinstance(version, bool):
        raise InputError(
            f"field schema_version: unsupported version {version!r} (this build reads version {SCHEMA_VERSION})"
        )

    actions = _labels(data["action_labels"], "action_labels")
    states = _labels(data["state_labels"], "state_labels")

    rows = data["utilities"]
    if not isinstance(rows, list) or len(rows) != len(actions):
        raise InputError(f"field utilities: expected {len(actions)} rows, one per action")
    utilities = []
    for a, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(states):
            raise InputError(f"field utilities[{a}]: expected {len(states)} entries, one per state")
        utilities.append([_number(v, f"utilities[{a}][{j}]") for j, v in enumerate(row)])

    prior = data["prior"]
    if not isinstance(prior, list) or len(prior) != len(states):
        raise InputError(f"field prior: expected {len(states)} entries, one per state")
    prior = [_number(v, f"prior[{j}]") for j, v in enumerate(prior)]
    total = sum(prior)
    if any(p < 0 for p in prior) or abs(total - 1.0) > 1e-9:
        raise InputError(f"field prior: entries must be nonnegative and sum to 1 (sum is {total:.12g})")

    pf = ProblemFile(
        schema_version=SCHEMA_VERSION,
        action_labels=actions,
        state_labels=states,
        utilities=utilities,
        prior=prior,
    )
    if "delta" in data:
        pf.delta = _number(data["delta"], "delta")
        if pf.delta <= 0:
            raise InputError(f"field delta: must be positive, got {pf.delta!r}")
    if "divergence" in data:
        if data["divergence"] not in BUILTIN_NAMES:
            raise InputError(
                f"field divergence: {data['divergence']!r} is not one of {', '.join(BUILTIN_NAMES)}"
            )
        pf.divergence = data["divergence"]
    if "tol" in data:
        pf.tol = _number(data["tol"], "tol")
        if pf.tol <= 0:
            raise InputError("field tol: must be positive")
    for section in ("sweep", "verify", "output"):
        if section in data:
            if not isinstance(data[section], dict):
                raise InputError(f"field {section}: expected an object")
            setattr(pf, section, dict(data[section]))
    return pf


def load_problem_file(path: str | Path) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return parse_problem(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def dump_problem_file(pf: ProblemFile, path: str | Path | None = None) -> str:
    text = json.dumps(pf.to_dict(), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
