"""Run configuration: a JSON document naming a map, a command and its parameters.

Example::

    {
      "map": {"A": [[1, 2, 0, 1]], "B": [[1, 3, 0, 1]], "C": [[1, 5, 0, 1]],
              "D": [[0, 1, 1, 4], [1, 7, 0, 1]],
              "rotation_seeds": [[1, 1, 0, 1], [1, 1, 0, 1]]},
      "command": "topdeg",
      "params": {"strategy": "numeric", "seed": 7}
    }

Each zero is ``[re_num, re_den, im_num, im_den]``.  Instead of ``"map"``,
``"monomial": [[m, n], [p, q]]`` selects the monomial map.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .maps import Blaschke2D, DegreeMatrix, map_from_dict, map_to_dict, monomial_map

COMMANDS = ("classify", "lift", "degrees", "indeterminacy", "topdeg", "preimage-measure",
            "torus-entropy", "winding", "reproduce-paper")

TOP_KEYS = {"map", "monomial", "command", "params", "output"}
OUTPUT_KEYS = {"path", "format"}

U64 = (1 << 64) - 1

# name -> (type, default, lo, hi); None bounds are open
PARAMS: dict[str, tuple] = {
    "seed": (int, 0, 0, U64),
    "n_max": (int, 3, 1, 8),
    "depth": (int, 3, 0, 12),
    "samples": (int, 32, 1, 100_000),
    "strategy": (str, "auto", None, None),
    "point": (list, [0.25, 0.5], None, None),
    "entropy_n_max": (int, 12, 3, 30),
    "arc": (list, [0.0, 0.001], None, None),
    "separation": (float, 0.01, 1e-6, 0.5),
    "max_terms": (int, 2_000_000, 1, None),
    "residual_tol": (float, 1e-8, 1e-15, 1e-2),
    "dedup_tol": (float, 1e-8, 1e-15, 1e-2),
    "zero_modulus_cap": (float, 0.05, 1e-6, 1.0),
}
STRATEGIES = ("auto", "exact-generic", "numeric", "monomial")


@dataclass(frozen=True)
class RunConfig:
    command: str
    map: Blaschke2D | None
    params: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "json"
    monomial: tuple | None = None

    def to_dict(self) -> dict:
        out: dict = {"command": self.command}
        if self.monomial is not None:
            out["monomial"] = [list(r) for r in self.monomial]
        elif self.map is not None:
            out["map"] = map_to_dict(self.map)
        out["params"] = dict(sorted(self.params.items()))
        out["output"] = {"format": self.output_format}
        if self.output_path is not None:
            out["output"]["path"] = self.output_path
        return out

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _locate(text: str, key: str) -> tuple[int, int]:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    if not m:
        return 1, 1
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _reject_unknown(text: str, obj: dict, allowed: set, where: str):
    for key in obj:
        if key not in allowed:
            raise ParseError(f"unknown key {key!r} in {where}", *_locate(text, key))


def check_param(name: str, value):
    kind, _, lo, hi = PARAMS[name]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ValidationError(f"parameter {name} must be {kind.__name__}, got {value!r}", "ParamType")
    if kind in (int, float):
        if (lo is not None and value < lo) or (hi is not None and value > hi):
            raise ValidationError(f"parameter {name}={value} outside [{lo}, {hi}]", "ParamRange")
    if name == "strategy" and value not in STRATEGIES:
        raise ValidationError(f"strategy must be one of {STRATEGIES}", "ParamRange")
    if name in ("point", "arc"):
        if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ValidationError(f"parameter {name} must be two numbers", "ParamType")
        value = [float(v) for v in value]
        if name == "arc" and not 0 <= value[0] < value[1] <= 1:
            raise ValidationError("arc must satisfy 0 <= start < end <= 1", "ParamRange")
    return value


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and validate a JSON run configuration.

    ``command`` (from the command line) overrides the document's own.

    Raises
    ------
    ParseError
        Malformed JSON (with its line and column) or an unknown key.
    ValidationError
        A value breaks an invariant; ``invariant`` names it (for example
        ``"ZeroOutsideDisc"``).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("configuration must be a JSON object", 1, 1)
    _reject_unknown(text, data, TOP_KEYS, "configuration")
    params_in = data.get("params", {})
    if not isinstance(params_in, dict):
        raise ValidationError("params must be an object", "ConfigShape")
    _reject_unknown(text, params_in, set(PARAMS), "params")
    output = data.get("output", {})
    if not isinstance(output, dict):
        raise ValidationError("output must be an object", "ConfigShape")
    _reject_unknown(text, output, OUTPUT_KEYS, "output")
    if isinstance(data.get("map"), dict):
        _reject_unknown(text, data["map"], {"A", "B", "C", "D", "rotation_seeds"}, "map")

    cmd = command or data.get("command")
    if cmd is None:
        raise ValidationError("no command given", "Command")
    if cmd not in COMMANDS:
        raise ValidationError(f"unknown command {cmd!r}", "Command")

    fmap, mono = None, None
    if "map" in data and "monomial" in data:
        raise ValidationError("give either map or monomial, not both", "MapFormat")
    if "map" in data:
        fmap = map_from_dict(data["map"])
    elif "monomial" in data:
        rows = data["monomial"]
        ok = (isinstance(rows, list) and len(rows) == 2
              and all(isinstance(r, list) and len(r) == 2 for r in rows))
        if not ok:
            raise ValidationError("monomial must be [[m, n], [p, q]]", "MapFormat")
        N = DegreeMatrix.from_rows(rows)
        fmap, mono = monomial_map(N), (tuple(rows[0]), tuple(rows[1]))
    elif cmd != "reproduce-paper":
        raise ValidationError(f"command {cmd} needs a map", "MapFormat")

    params = {}
    for name, (_, default, _, _) in PARAMS.items():
        params[name] = check_param(name, params_in[name]) if name in params_in else \
            (list(default) if isinstance(default, list) else default)
    fmt = output.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ValidationError("output format must be json or csv", "OutputFormat")
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        raise ValidationError("output path must be a string", "OutputFormat")
    return RunConfig(cmd, fmap, params, path, fmt, mono)


def with_overrides(cfg: RunConfig, out: str | None = None, fmt: str | None = None,
                   **overrides) -> RunConfig:
    """Copy of ``cfg`` with command-line values (``None`` means keep) applied."""
    params = dict(cfg.params)
    for name, value in overrides.items():
        if value is not None:
            params[name] = check_param(name, value)
    if fmt is not None and fmt not in ("json", "csv"):
        raise ValidationError("output format must be json or csv", "OutputFormat")
    return RunConfig(cfg.command, cfg.map, params, out if out is not None else cfg.output_path,
                     fmt or cfg.output_format, cfg.monomial)
