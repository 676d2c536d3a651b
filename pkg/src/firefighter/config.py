"""Scenario configs: JSON text in, validated ``ScenarioConfig`` out."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .grid import TOPOLOGIES, get_topology
from .protocol import CP2_METRICS, DEFAULT_MAX_STEPS

MODES = ("tree", "kpq", "gap-scan", "grid")
ALGOS = ("greedy", "unburn", "optimal")
TIE_POLICIES = ("branch-all", "random")

# keys allowed per mode, besides "mode" and "out"
_KEYS = {
    "tree": ("tree_path", "algo"),
    "kpq": ("k", "p", "q"),
    "gap-scan": ("n", "jobs", "with_c6"),
    "grid": ("topology", "initial", "budget", "tie", "seed", "max_steps", "cp2_metric", "distance_rule"),
}


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str
    out: str | None = None
    tree_path: str | None = None
    algo: str = "greedy"
    k: int | None = None
    p: int | None = None
    q: int | None = None
    n: int | None = None
    jobs: int = 1
    with_c6: bool = True
    topology: str | None = None
    initial: tuple[tuple[int, int], ...] = field(default=())
    budget: int | None = None
    tie: str = "branch-all"
    seed: int = 0
    max_steps: int = DEFAULT_MAX_STEPS
    cp2_metric: str = "pairs"
    distance_rule: bool = True


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _coord(v) -> tuple[int, int] | None:
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(_is_int(x) for x in v):
        return (v[0], v[1])
    return None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate; raises ``ConfigError`` listing every problem found."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([f"not valid JSON: {e}"]) from None
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a JSON object"])
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> ScenarioConfig:
    errors: list[str] = []
    mode = raw.get("mode")
    if mode not in MODES:
        raise ConfigError([f"mode must be one of {', '.join(MODES)}, got {mode!r}"])
    allowed = set(_KEYS[mode]) | {"mode", "out"}
    for key in sorted(set(raw) - allowed):
        errors.append(f"unknown key {key!r} for mode {mode}")
    vals = {k: raw[k] for k in raw if k in allowed}

    def need_int(key: str, lo: int, msg: str | None = None) -> None:
        if key not in vals:
            errors.append(f"missing {key}")
        elif not _is_int(vals[key]) or vals[key] < lo:
            errors.append(msg or f"{key} must be an integer ≥ {lo}")

    def opt_int(key: str, lo: int) -> None:
        if key in vals and (not _is_int(vals[key]) or vals[key] < lo):
            errors.append(f"{key} must be an integer ≥ {lo}")

    def opt_choice(key: str, choices) -> None:
        if key in vals and vals[key] not in choices:
            errors.append(f"{key} must be one of {', '.join(choices)}, got {vals[key]!r}")

    def opt_bool(key: str) -> None:
        if key in vals and not isinstance(vals[key], bool):
            errors.append(f"{key} must be true or false")

    if "out" in vals and not isinstance(vals["out"], str):
        errors.append("out must be a path string")
    if mode == "tree":
        if not isinstance(vals.get("tree_path"), str):
            errors.append("tree_path must be a path string")
        opt_choice("algo", ALGOS)
    elif mode == "kpq":
        for key in ("k", "p", "q"):
            need_int(key, 1)
    elif mode == "gap-scan":
        need_int("n", 1)
        opt_int("jobs", 1)
        opt_bool("with_c6")
    else:
        topo = vals.get("topology")
        if topo not in TOPOLOGIES:
            errors.append(f"unknown topology {topo!r}; known: {', '.join(TOPOLOGIES)}")
        need_int("budget", 1, "budget must be ≥ 1")
        opt_choice("tie", TIE_POLICIES)
        opt_int("seed", 0)
        opt_int("max_steps", 1)
        opt_choice("cp2_metric", CP2_METRICS)
        opt_bool("distance_rule")
        cells = vals.get("initial")
        if not isinstance(cells, list) or not cells:
            errors.append("initial must be a nonempty list of [x, y] pairs")
        else:
            coords = []
            for i, c in enumerate(cells):
                xy = _coord(c)
                if xy is None:
                    errors.append(f"initial[{i}] = {c!r} is not an [x, y] integer pair")
                else:
                    coords.append(xy)
            if topo in TOPOLOGIES:
                g = get_topology(topo)
                for xy in coords:
                    if not g.is_vertex(xy):
                        errors.append(f"initial cell {list(xy)} is not a vertex of the {topo} grid")
            vals["initial"] = tuple(coords)
    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(**vals)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    out: dict = {"mode": cfg.mode}
    for key in _KEYS[cfg.mode]:
        v = getattr(cfg, key)
        out[key] = [list(c) for c in v] if key == "initial" else v
    if cfg.out is not None:
        out["out"] = cfg.out
    return out


def serialize_config(cfg: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"
