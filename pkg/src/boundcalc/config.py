"""Shared configuration: precision budget, search caps, grid shape.

Every knob has a library default; the CLI can override single values from
flags or load a JSON config file. The environment variable
BOUNDCALC_BUDGET_BITS overrides the bit budget everywhere.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

ENV_BUDGET = "BOUNDCALC_BUDGET_BITS"


@dataclass(frozen=True)
class Config:
    # Largest exact integer the evaluator will materialize, in bits.
    budget_bits: int = 1 << 20
    # Power-exponent search cap K for pow-relations and quotient escalation.
    power_cap: int = 8
    # Iterate search depth for the generic le_it fallback.
    it_depth_cap: int = 6
    # Universe generation: max midpoint depth and log-iterate cutoff M.
    max_depth: int = 6
    iterate_cap: int = 4
    # Oscillation detector: residue moduli up to this value, quotient gap
    # factor, and how many scales the gap must persist.
    osc_modulus_cap: int = 8
    osc_gap_num: int = 2
    osc_scales: int = 3
    # Partition oracle: sample points n <= n_max, block-sum sweep <= s_max.
    n_max: int = 10
    s_max: int = 512
    # Sample grid: consecutive naturals 0..grid_consecutive, powers 2^k for
    # k <= grid_pow_max, towers 2^^k for k <= grid_tower_max.
    grid_consecutive: int = 256
    grid_pow_max: int = 64
    grid_tower_max: int = 6

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _apply_env(cfg: Config) -> Config:
    raw = os.environ.get(ENV_BUDGET)
    if raw is None:
        return cfg
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_BUDGET} must be an integer, got {raw!r}") from exc
    if bits < 64:
        raise ValueError(f"{ENV_BUDGET} too small: {bits} < 64")
    return dataclasses.replace(cfg, budget_bits=bits)


def load_config(path: str | None = None, **overrides) -> Config:
    """Build a Config from defaults, an optional JSON file, and overrides.

    Precedence, lowest first: defaults, file values, keyword overrides,
    BOUNDCALC_BUDGET_BITS.
    """
    values: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must hold a JSON object")
        known = {f.name for f in dataclasses.fields(Config)}
        bad = sorted(set(data) - known)
        if bad:
            raise ValueError(f"unknown config keys in {path}: {', '.join(bad)}")
        values.update(data)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return _apply_env(Config(**values))


DEFAULT = _apply_env(Config())
