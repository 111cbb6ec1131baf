"""Rerun a published figure and compare against the expectation table."""

from __future__ import annotations

import csv
import json
import os
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig
from .optimize import OptimizationResult, SweepPoint, evolve, objective, sweep_m
from .presets import expectation, variants

SWEEP_HEADER = ("m", "n1_opt", "n2_opt", "eulb", "baseline")


def run_record(command: str, cfg: ScenarioConfig, seed: int) -> dict:
    """Provenance fields; ``SOURCE_DATE_EPOCH`` pins the timestamp."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    stamp = time.gmtime(int(epoch)) if epoch is not None else time.gmtime()
    return {
        "command": command,
        "scenario_digest": cfg.digest(),
        "seed": seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", stamp),
        "tool_version": __version__,
    }


def dump_json(doc: dict, path: Path | None = None) -> str:
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def write_sweep_csv(path, points: list[SweepPoint], baseline: float) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for pt in points:
            row = (pt.m, pt.n1_opt, pt.n2_opt, pt.eulb, baseline)
            writer.writerow([f"{v:.9g}" for v in row])


def compare(figure: str, label: str, cfg: ScenarioConfig, result: OptimizationResult) -> dict:
    """Flat comparison record for one reading of one figure."""
    exp = expectation(figure)
    rp = exp.reported_params
    at_reported = objective(cfg.scenario(), rp["m"], rp["n1"], rp["n2"])
    summary = {
        "figure": figure,
        "variant": label,
        "scenario_digest": cfg.digest(),
        "tolerance": exp.tolerance,
        "expected_eulb_min": exp.eulb_min,
        "eulb_min": result.eulb_min,
        "eulb_min_pass": bool(abs(result.eulb_min - exp.eulb_min) <= exp.tolerance),
        "expected_baseline": exp.baseline,
        "baseline": result.baseline,
        "baseline_pass": bool(abs(result.baseline - exp.baseline) <= exp.tolerance),
        "m": result.m,
        "n1": result.n1,
        "n2": result.n2,
        "reported_m": rp["m"],
        "reported_n1": rp["n1"],
        "reported_n2": rp["n2"],
        "eulb_at_reported_params": at_reported,
        "eulb_at_reported_params_pass": bool(abs(at_reported - exp.eulb_min) <= exp.tolerance),
    }
    if exp.advisory_tolerance is not None:
        summary["advisory_tolerance"] = exp.advisory_tolerance
        summary["eulb_min_advisory_pass"] = bool(
            abs(result.eulb_min - exp.eulb_min) <= exp.advisory_tolerance
        )
    return summary


def reproduce_figure(
    figure: str,
    out_dir: str | Path | None = None,
    m_steps: int = 31,
    seed: int | None = None,
    sweep: bool = True,
) -> list[dict]:
    """Optimize (and optionally sweep) every reading of ``figure``.

    Returns one comparison record per reading. With ``out_dir`` set, writes
    ``<fig>_<label>_sweep.csv``, ``<fig>_<label>_optimize.json`` and
    ``<fig>_summary.json`` there.
    """
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    summaries = []
    for label, cfg in variants(figure).items():
        scenario = cfg.scenario()
        space = cfg.search_space()
        opt = cfg.optimizer(seed)
        result = evolve(scenario, space, opt)
        summaries.append(compare(figure, label, cfg, result))
        if out is None:
            continue
        record = run_record(f"reproduce {figure}", cfg, opt.seed)
        dump_json({**result.as_dict(), **record}, out / f"{figure}_{label}_optimize.json")
        if sweep:
            grid = np.linspace(*space.m_range, m_steps)
            points, base = sweep_m(scenario, space, grid, opt)
            write_sweep_csv(out / f"{figure}_{label}_sweep.csv", points, base)
    if out is not None:
        dump_json({"figure": figure, "readings": summaries}, out / f"{figure}_summary.json")
    return summaries


def format_summary(s: dict) -> str:
    flag = lambda ok: "PASS" if ok else "FAIL"  # noqa: E731
    line = (
        f"{s['figure']}[{s['variant']}] "
        f"min {s['eulb_min']:.4f} vs {s['expected_eulb_min']} {flag(s['eulb_min_pass'])}; "
        f"baseline {s['baseline']:.4f} vs {s['expected_baseline']} {flag(s['baseline_pass'])}; "
        f"at reported params {s['eulb_at_reported_params']:.4f}"
    )
    if "eulb_min_advisory_pass" in s:
        line += f"; advisory(+-{s['advisory_tolerance']}) {flag(s['eulb_min_advisory_pass'])}"
    return line
