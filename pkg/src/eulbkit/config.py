"""Scenario configuration files.

A scenario is a JSON object::

    {
      "name": "fig2",
      "initial_state": {"type": "bell_diagonal_p", "p": 0.0},
      "channel": {"type": "gad", "pA": 0.9, "rA": 0.1, "pB": 0.9, "rB": 0.4},
      "observables": {"q": "x", "r": "z"},
      "search": {"m_range": [0, 3], "n1_range": [1e-9, 1e5], "n2_range": [1e-9, 1e5]},
      "optimizer": {"population": 64, "generations": 200, "seed": 0,
                    "elite_fraction": 0.1, "mutation_scale": 0.1}
    }

``initial_state`` types: ``bell_diagonal_p`` (p), ``bell_diagonal_c``
(c1, c2, c3), ``x_state`` (p). ``channel`` types: ``gad`` (pA, rA, pB, rB),
``depolarizing`` (rA, rB), ``ad`` (pA, pB), ``identity``. An observable is a
Pauli axis name or ``{"theta": .., "phi": ..}``. Only ``initial_state`` and
``channel`` are required; unknown keys anywhere are rejected.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from . import channels, states
from .optimize import OptimizerConfig, Scenario, SearchSpace
from .protocol import ObservablePair, bloch_basis, pauli_basis


class ConfigError(ValueError):
    """Malformed scenario configuration; the message names the offending key."""


_STATE_FIELDS = {
    "bell_diagonal_p": ("p",),
    "bell_diagonal_c": ("c1", "c2", "c3"),
    "x_state": ("p",),
}
_CHANNEL_FIELDS = {
    "gad": ("pA", "rA", "pB", "rB"),
    "depolarizing": ("rA", "rB"),
    "ad": ("pA", "pB"),
    "identity": (),
}
_TOP_KEYS = ("name", "initial_state", "channel", "observables", "search", "optimizer")
_SEARCH_KEYS = ("m_range", "n1_range", "n2_range")
_OPT_KEYS = ("population", "generations", "seed", "elite_fraction", "mutation_scale")


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{key}: expected a finite number, got {value!r}")
    return float(value)


def _integer(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return value


def _object(value: Any, key: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(obj: dict, allowed, where: str) -> None:
    for k in obj:
        if k not in allowed:
            raise ConfigError(f"{where}.{k}: unknown key (allowed: {', '.join(allowed)})")


def _tagged(obj: Any, key: str, table: dict) -> dict:
    obj = _object(obj, key)
    kind = obj.get("type")
    if kind not in table:
        raise ConfigError(f"{key}.type: expected one of {sorted(table)}, got {kind!r}")
    fields = table[kind]
    _reject_unknown(obj, ("type",) + fields, key)
    out = {"type": kind}
    for f in fields:
        if f not in obj:
            raise ConfigError(f"{key}.{f}: missing")
        out[f] = _number(obj[f], f"{key}.{f}")
    return out


def _unit(x: float, key: str) -> None:
    if not 0.0 <= x <= 1.0:
        raise ConfigError(f"{key}: must lie in [0, 1], got {x}")


def _basis_spec(value: Any, key: str):
    if isinstance(value, str):
        if value not in ("x", "y", "z"):
            raise ConfigError(f"{key}: expected 'x', 'y', 'z' or {{theta, phi}}, got {value!r}")
        return value
    obj = _object(value, key)
    _reject_unknown(obj, ("theta", "phi"), key)
    if "theta" not in obj:
        raise ConfigError(f"{key}.theta: missing")
    return {"theta": _number(obj["theta"], f"{key}.theta"), "phi": _number(obj.get("phi", 0.0), f"{key}.phi")}


def _basis(spec) -> Any:
    if isinstance(spec, str):
        return pauli_basis(spec)
    return bloch_basis(spec["theta"], spec["phi"])


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated, normalized scenario document."""

    doc: dict

    @property
    def name(self) -> str:
        return self.doc.get("name", "")

    def digest(self) -> str:
        canonical = json.dumps(self.doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def scenario(self) -> Scenario:
        st = self.doc["initial_state"]
        if st["type"] == "bell_diagonal_p":
            rho = states.bell_diagonal_p(st["p"])
        elif st["type"] == "bell_diagonal_c":
            rho = states.bell_diagonal(states.BellDiagonalParams(st["c1"], st["c2"], st["c3"]))
        else:
            rho = states.x_state(st["p"])
        ch = self.doc["channel"]
        if ch["type"] == "gad":
            ch_a = channels.generalized_amplitude_damping(ch["pA"], ch["rA"])
            ch_b = channels.generalized_amplitude_damping(ch["pB"], ch["rB"])
        elif ch["type"] == "depolarizing":
            ch_a, ch_b = channels.depolarizing(ch["rA"]), channels.depolarizing(ch["rB"])
        elif ch["type"] == "ad":
            ch_a, ch_b = channels.amplitude_damping(ch["pA"]), channels.amplitude_damping(ch["pB"])
        else:
            ch_a = ch_b = channels.identity_channel()
        obs = self.doc["observables"]
        return Scenario(rho, ch_a, ch_b, ObservablePair(_basis(obs["q"]), _basis(obs["r"])), self.name)

    def search_space(self) -> SearchSpace:
        s = self.doc["search"]
        return SearchSpace(tuple(s["m_range"]), tuple(s["n1_range"]), tuple(s["n2_range"]))

    def optimizer(self, seed: int | None = None) -> OptimizerConfig:
        opts = dict(self.doc["optimizer"])
        if seed is not None:
            opts["seed"] = seed
        return OptimizerConfig(**opts)


def parse_config(raw: Any) -> ScenarioConfig:
    """Validate a decoded JSON document and fill in defaults."""
    raw = _object(raw, "<root>")
    _reject_unknown(raw, _TOP_KEYS, "<root>")
    for key in ("initial_state", "channel"):
        if key not in raw:
            raise ConfigError(f"{key}: missing")
    doc: dict[str, Any] = {}
    if "name" in raw:
        if not isinstance(raw["name"], str):
            raise ConfigError("name: expected a string")
        doc["name"] = raw["name"]

    st = _tagged(raw["initial_state"], "initial_state", _STATE_FIELDS)
    if st["type"] in ("bell_diagonal_p", "x_state"):
        _unit(st["p"], "initial_state.p")
    else:
        try:
            states.bell_diagonal(states.BellDiagonalParams(st["c1"], st["c2"], st["c3"]))
        except states.NotAStateError as exc:
            raise ConfigError(f"initial_state: {exc}") from None
    doc["initial_state"] = st

    ch = _tagged(raw["channel"], "channel", _CHANNEL_FIELDS)
    for f in _CHANNEL_FIELDS[ch["type"]]:
        _unit(ch[f], f"channel.{f}")
    doc["channel"] = ch

    obs = _object(raw.get("observables", {}), "observables")
    _reject_unknown(obs, ("q", "r"), "observables")
    doc["observables"] = {
        "q": _basis_spec(obs.get("q", "x"), "observables.q"),
        "r": _basis_spec(obs.get("r", "z"), "observables.r"),
    }

    defaults = SearchSpace()
    search = _object(raw.get("search", {}), "search")
    _reject_unknown(search, _SEARCH_KEYS, "search")
    doc["search"] = {}
    for key in _SEARCH_KEYS:
        pair = search.get(key, list(getattr(defaults, key)))
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ConfigError(f"search.{key}: expected [lo, hi]")
        doc["search"][key] = [_number(v, f"search.{key}") for v in pair]
    try:
        SearchSpace(**{k: tuple(v) for k, v in doc["search"].items()})
    except ValueError as exc:
        raise ConfigError(f"search: {exc}") from None

    opt_defaults = OptimizerConfig()
    opt = _object(raw.get("optimizer", {}), "optimizer")
    _reject_unknown(opt, _OPT_KEYS, "optimizer")
    doc["optimizer"] = {
        "population": _integer(opt.get("population", opt_defaults.population), "optimizer.population"),
        "generations": _integer(opt.get("generations", opt_defaults.generations), "optimizer.generations"),
        "seed": _integer(opt.get("seed", opt_defaults.seed), "optimizer.seed"),
        "elite_fraction": _number(opt.get("elite_fraction", opt_defaults.elite_fraction), "optimizer.elite_fraction"),
        "mutation_scale": _number(opt.get("mutation_scale", opt_defaults.mutation_scale), "optimizer.mutation_scale"),
    }
    try:
        OptimizerConfig(**doc["optimizer"])
    except ValueError as exc:
        raise ConfigError(f"optimizer: {exc}") from None
    return ScenarioConfig(doc)


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(raw)
