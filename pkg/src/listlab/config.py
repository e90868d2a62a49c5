"""Run configuration: tuning constants, enumeration budgets, defaults.

The config file is JSON with up to three keys: "constants" (see
ConstantsConfig), "budgets" (enumeration caps for the exhaustive routines),
and "defaults" (currently only the eta rule for the net hierarchy, recorded
for provenance; the rule itself is fixed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bounds import ConstantsConfig, constants_from_dict

DEFAULT_MAX_CODEWORDS = 1 << 22
DEFAULT_MAX_RECEIVED_WORDS = 1 << 28
DEFAULT_MAX_SUBSETS = 1 << 22
DEFAULT_ETA_RULE = "1/log2(L)"


@dataclass(frozen=True)
class Budgets:
    """Caps on exhaustive enumeration sizes."""

    max_codewords: int = DEFAULT_MAX_CODEWORDS
    max_received_words: int = DEFAULT_MAX_RECEIVED_WORDS
    max_subsets: int = DEFAULT_MAX_SUBSETS

    def __post_init__(self):
        for name in ("max_codewords", "max_received_words", "max_subsets"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    def as_dict(self) -> dict:
        return {
            "max_codewords": self.max_codewords,
            "max_received_words": self.max_received_words,
            "max_subsets": self.max_subsets,
        }


def budgets_from_dict(data: dict) -> Budgets:
    unknown = set(data) - {"max_codewords", "max_received_words", "max_subsets"}
    if unknown:
        raise ValueError(f"unknown budget keys: {sorted(unknown)}")
    return Budgets(**data)


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs beyond its own arguments."""

    constants: ConstantsConfig = field(default_factory=ConstantsConfig)
    budgets: Budgets = field(default_factory=Budgets)
    eta_rule: str = DEFAULT_ETA_RULE

    def as_dict(self) -> dict:
        return {
            "constants": self.constants.as_dict(),
            "budgets": self.budgets.as_dict(),
            "defaults": {"eta_rule": self.eta_rule},
        }


def config_from_dict(data: dict) -> RunConfig:
    unknown = set(data) - {"constants", "budgets", "defaults"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    constants = constants_from_dict(data.get("constants", {}))
    budgets = budgets_from_dict(data.get("budgets", {}))
    defaults = data.get("defaults", {})
    bad = set(defaults) - {"eta_rule"}
    if bad:
        raise ValueError(f"unknown default keys: {sorted(bad)}")
    eta_rule = defaults.get("eta_rule", DEFAULT_ETA_RULE)
    if eta_rule != DEFAULT_ETA_RULE:
        raise ValueError(f"unsupported eta rule {eta_rule!r}")
    return RunConfig(constants=constants, budgets=budgets, eta_rule=eta_rule)


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object")
    return config_from_dict(data)
