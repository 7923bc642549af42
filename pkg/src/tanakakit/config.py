"""Resolved run configuration shared by reports and the command line."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

from .errors import InputError
from .flag import DEFAULT_KAPPA_CAP, DEFAULT_PROBE_SAMPLES
from .groebner import DEFAULT_BUDGET
from .prolong import DEFAULT_MAX_DEGREE, DEFAULT_UNKNOWN_CAP

SEED_ENV = "TANAKA_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Config:
    max_degree: int = DEFAULT_MAX_DEGREE
    probe_samples: int = DEFAULT_PROBE_SAMPLES
    seed: int = 0
    groebner_budget: int = DEFAULT_BUDGET
    kappa_cap: int = DEFAULT_KAPPA_CAP
    unknown_cap: int = DEFAULT_UNKNOWN_CAP
    filtration_cap: int = 8
    output: str = "text"

    def __post_init__(self):
        for name in ("max_degree", "probe_samples", "groebner_budget", "kappa_cap",
                     "unknown_cap", "filtration_cap"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < (0 if name in ("max_degree", "probe_samples") else 1):
                raise InputError(f"config value {name} must be a positive integer, got {v!r}")
        if not -2 ** 63 <= self.seed < 2 ** 64:
            raise InputError("seed must fit in 64 bits")
        if self.output not in ("text", "json"):
            raise InputError("output must be 'text' or 'json'")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        overrides.setdefault("seed", default_seed())
        return cls(**overrides)

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)
