"""Search boxes and brute-force caps, with an optional JSON override file.

Set ``OCCULT_LATTICE_CONFIG`` to a JSON object whose keys are a subset of
the :class:`Config` fields.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from pathlib import Path

ENV_VAR = "OCCULT_LATTICE_CONFIG"


@dataclass(frozen=True)
class Config:
    search_box: int = 6
    stabilization_window: int = 2
    disc_form_bound: int = 10_000
    isometry_rank_cap: int = 8
    order_cutoff: int = 1000
    brute_force_max_p: int = 5
    brute_force_max_k: int = 4


def load_config(path: str | os.PathLike | None = None) -> Config:
    if path is None:
        return Config()
    data = json.loads(Path(path).read_text())
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return replace(Config(), **{k: int(v) for k, v in data.items()})


@lru_cache(maxsize=None)
def _config_for(path: str | None) -> Config:
    return load_config(path)


def get_config() -> Config:
    return _config_for(os.environ.get(ENV_VAR) or None)
