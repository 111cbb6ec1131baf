"""Built-in figure scenarios and the table of published values they are compared to."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .config import ScenarioConfig, parse_config


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath("data", name).read_text())


def figure_ids() -> list[str]:
    return list(_load("presets.json"))


def variants(figure: str) -> dict[str, ScenarioConfig]:
    """Scenario readings for ``figure`` keyed by label (``default``, ``caption``, ``text``).

    The first entry is the primary reading.
    """
    table = _load("presets.json")
    if figure not in table:
        raise KeyError(figure)
    return {
        label: parse_config({"name": f"{figure}:{label}", **doc})
        for label, doc in table[figure].items()
    }


@dataclass(frozen=True)
class Expectation:
    eulb_min: float
    baseline: float
    reported_params: dict
    tolerance: float
    advisory_tolerance: float | None = None


def expectation(figure: str) -> Expectation:
    table = _load("expectations.json")
    entry = table["figures"][figure]
    return Expectation(
        entry["eulb_min"],
        entry["baseline"],
        dict(entry["reported_params"]),
        entry.get("tolerance", table["tolerance"]),
        entry.get("advisory_tolerance"),
    )
