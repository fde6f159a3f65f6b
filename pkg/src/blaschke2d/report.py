"""Command implementations and report formatting.

A report is a plain dict that serializes deterministically: exact values are
strings, floats are rounded to 15 significant digits, complex numbers become
``[re, im]`` pairs and keys are sorted on output.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from typing import Callable

import numpy as np

from . import __version__
from .config import RunConfig
from .degrees import c_plus, degree_sequence, estimate_lambda1, monomial_degrees, predicted_degrees
from .errors import BlaschkeError
from .geometry import expected_indeterminacy_count, indeterminacy_points
from .maps import Blaschke2D, gaussian_str, lift
from .numeric import Tolerances
from .topology import classify_case, is_generic, topological_degree
from .torus import TorusPoint, backward_measure_sample, curve_growth_entropy, homology_action, matrix_power


def num(x) -> float | str:
    x = float(x)
    if not np.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return float(f"{x:.15g}") + 0.0


def cnum(z) -> list:
    z = complex(z)
    return [num(z.real), num(z.imag)]


def tolerances(cfg: RunConfig) -> Tolerances:
    return Tolerances(residual=cfg.params["residual_tol"], dedup=cfg.params["dedup_tol"])


def _rows(N) -> list[list[int]]:
    return [list(r) for r in N]


# ---------------------------------------------------------------------------
# commands


def cmd_classify(f: Blaschke2D, cfg: RunConfig) -> dict:
    p = cfg.params
    dt = topological_degree(f, p["strategy"], p["seed"], tolerances(cfg))
    label = classify_case(f.N, dt.value)
    cp = label.c_plus
    return {
        "N": f.N.rows,
        "case": label.case,
        "d_top": dt.value,
        "d_top_strategy": dt.strategy,
        "c_plus": str(cp),
        "c_plus_float": num(cp.value),
        "trace": label.trace,
        "det_N": label.det,
        "p_of_d_top": label.p_value,
        "generic": bool(is_generic(f)),
    }


def cmd_lift(f: Blaschke2D, cfg: RunConfig) -> dict:
    H = lift(f)
    return {
        "raw_degree": H.raw_degree,
        "degree": H.degree,
        "common_factor": str(H.common_factor),
        "components": [str(F) for F in H.components],
    }


def cmd_degrees(f: Blaschke2D, cfg: RunConfig) -> dict:
    n = cfg.params["n_max"]
    seq = degree_sequence(f, n, cfg.params["max_terms"])
    pred = predicted_degrees(f.N, n)
    out = {
        "measured": list(seq.degrees),
        "predicted": list(pred.degrees),
        "truncated": seq.truncated,
        "c_plus": str(c_plus(f.N)),
        "c_plus_float": num(c_plus(f.N).value),
        "generic": bool(is_generic(f)),
    }
    if f.is_monomial():
        out["monomial_formula"] = list(monomial_degrees(f.N, n).degrees)
    if len(seq) >= 2:
        est = estimate_lambda1(seq)
        out["ratio"] = num(est.ratio)
        out["ratio_relative_error"] = num(abs(est.ratio - c_plus(f.N).value) / c_plus(f.N).value)
    if seq.truncated:
        out["truncation_reason"] = seq.reason
    return out


def cmd_indeterminacy(f: Blaschke2D, cfg: RunConfig) -> dict:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        S = indeterminacy_points(f)
    return {
        "count": len(S),
        "expected_count_distinct_zeros": expected_indeterminacy_count(f),
        "points": [{"z": gaussian_str(z), "w": gaussian_str(w), "source": src}
                   for (z, w), src in zip(S.finite_points, S.sources)],
        "infinite_points": [list(p) for p in S.infinite_points],
        "degenerate": S.degenerate,
        "warnings": [str(w.message) for w in caught],
    }


def cmd_topdeg(f: Blaschke2D, cfg: RunConfig) -> dict:
    p = cfg.params
    dt = topological_degree(f, p["strategy"], p["seed"], tolerances(cfg))
    out = {"d_top": dt.value, "strategy": dt.strategy, "mq_plus_np": f.N.m * f.N.q + f.N.n * f.N.p,
           "det_N": f.N.det}
    if dt.solutions:
        out["targets"] = [[cnum(t[0]), cnum(t[1])] for t in dt.targets]
        out["solutions"] = [[[cnum(z), cnum(w)] for z, w in s.points] for s in dt.solutions]
        out["max_residual"] = num(max(s.max_residual for s in dt.solutions))
    return out


def _small_zeros(f: Blaschke2D, cfg: RunConfig) -> dict:
    top = max((abs(complex(z)) for z in f.sigma), default=0.0)
    return {"max_zero_modulus": num(top), "zero_modulus_cap": num(cfg.params["zero_modulus_cap"]),
            "zeros_within_cap": top <= cfg.params["zero_modulus_cap"]}


def cmd_preimage_measure(f: Blaschke2D, cfg: RunConfig) -> dict:
    p = cfg.params
    x = TorusPoint(*p["point"])
    d_top = topological_degree(f, "auto", p["seed"], tolerances(cfg)).value
    sample = backward_measure_sample(f, x, p["depth"], p["samples"], p["seed"], d_top, tolerances(cfg))
    out = sample.summary()
    out["d_top"] = d_top
    out["point"] = [num(v) for v in cfg.params["point"]]
    out.update(_small_zeros(f, cfg))
    out["cloud"] = [[num(z.real), num(z.imag), num(w.real), num(w.imag), num(d)]
                    for (z, w), d in zip(sample.cloud.points, sample.dist)]
    return out


def cmd_torus_entropy(f: Blaschke2D, cfg: RunConfig) -> dict:
    p = cfg.params
    est = curve_growth_entropy(f, p["entropy_n_max"], p["samples"], tuple(p["arc"]), p["separation"])
    target = float(np.log(c_plus(f.N).value))
    return {
        "entropy": num(est.value),
        "log_c_plus": num(target),
        "relative_error": num(abs(est.value - target) / target),
        "log_lengths": [num(v) for v in est.log_lengths],
        "points": list(est.points),
        "fit_range": list(est.fit_range),
        **_small_zeros(f, cfg),
    }


def cmd_winding(f: Blaschke2D, cfg: RunConfig) -> dict:
    rows = []
    for n in range(1, cfg.params["n_max"] + 1):
        H = homology_action(f, n)
        P = matrix_power(f.N.rows, n)
        rows.append({"n": n, "homology": _rows(H), "N_power": _rows(P), "match": H == P})
    return {"iterates": rows, "all_match": all(r["match"] for r in rows)}


COMMAND_TABLE: dict[str, Callable[[Blaschke2D, RunConfig], dict]] = {
    "classify": cmd_classify,
    "lift": cmd_lift,
    "degrees": cmd_degrees,
    "indeterminacy": cmd_indeterminacy,
    "topdeg": cmd_topdeg,
    "preimage-measure": cmd_preimage_measure,
    "torus-entropy": cmd_torus_entropy,
    "winding": cmd_winding,
}


# ---------------------------------------------------------------------------
# reports


def error_payload(exc: BlaschkeError) -> dict:
    out = {"code": exc.code, "exit_code": exc.exit_code, "message": str(exc)}
    for attr in ("invariant", "line", "column"):
        v = getattr(exc, attr, None)
        if v is not None:
            out[attr] = v
    return out


def provenance(cfg: RunConfig) -> dict:
    tol = tolerances(cfg)
    return {
        "seed": cfg.params["seed"],
        "tolerances": {k: num(v) if isinstance(v, float) else v for k, v in vars(tol).items()},
        "version": __version__,
    }


def run_command(cfg: RunConfig) -> dict:
    """Run one configured command; module errors are captured in the report."""
    report = {"command": cfg.command, "config": cfg.to_dict(), "provenance": provenance(cfg)}
    try:
        if cfg.command == "reproduce-paper":
            from .reproduce import reproduce
            result = reproduce(cfg.params["seed"], cfg.output_path)
        else:
            result = COMMAND_TABLE[cfg.command](cfg.map, cfg)
    except BlaschkeError as exc:
        report["status"] = "error"
        report["error"] = error_payload(exc)
        return report
    report["status"] = "ok"
    report["result"] = result
    return report


def exit_code(report: dict) -> int:
    return 0 if report.get("status") == "ok" else report["error"]["exit_code"]


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, value))


def to_csv(report: dict) -> str:
    """CSV rendering: the point cloud for ``preimage-measure``, key/value rows otherwise."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.get("command") == "preimage-measure" and report.get("status") == "ok":
        w.writerow(["re_z", "im_z", "re_w", "im_w", "dist"])
        w.writerows(report["result"]["cloud"])
        return buf.getvalue()
    w.writerow(["key", "value"])
    rows: list = []
    _flatten("", {k: v for k, v in report.items() if k != "config"}, rows)
    for k, v in rows:
        w.writerow([k, json.dumps(v) if not isinstance(v, str) else v])
    return buf.getvalue()
