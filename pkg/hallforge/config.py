"""Configuration for hall-forge.

Converts the optional YAML settings file and environment variables into
Python variables and dataclasses.
Contains information about the configurable parameters.
Sets default values for parameters that are expected to be the same for
most runs (tests, desk-scale certificates, the CLI).
"""

import dataclasses
import os
from typing import Optional, Tuple

import dotenv
import yaml


dotenv.load_dotenv()


# Path to a YAML settings file. The file may contain a `limits:` mapping
# whose keys are the attributes of `Limits` below.
SETTINGS_PATH = os.environ.get("HALLFORGE_SETTINGS")


def _load_settings(path: Optional[str]) -> dict:
    if not path or not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as handle:
        return yaml.safe_load(handle) or {}


_settings = _load_settings(SETTINGS_PATH)


# Version of the certificate wire format. Bump on any schema change.
CERTIFICATE_VERSION = 1


@dataclasses.dataclass
class Limits:
    """Size limits for constructions.

    Every bounded operation reads `limits` at call time, so assigning to
    these attributes (the CLI does this for `--degree-cap`) takes effect
    for all later calls.

    Attributes:
        enum_bound: Largest group that is ever enumerated element by element.
        degree_cap: Largest regular representation built by the Hrushovski
            extension (and therefore by amalgamation).
        iso_bound: Largest group handed to isomorphism search and subgroup
            enumeration.
        assoc_exhaustive_bound: Table groups up to this order have their
            associativity checked on every triple; larger ones are sampled.
        tower_depth_cap: Deepest Hall tower; the next stage would have
            degree 720!.
        power_schedule: Catalog groups joined at each power tower stage.
    """
    enum_bound: Optional[int] = 20000
    degree_cap: Optional[int] = 5000
    iso_bound: Optional[int] = 64
    assoc_exhaustive_bound: Optional[int] = 200
    tower_depth_cap: Optional[int] = 3
    power_schedule: Optional[Tuple[str, ...]] = ("C2", "C3", "V4", "S3")

    def __post_init__(self):
        self.power_schedule = tuple(self.power_schedule)


limits = Limits(**_settings.get("limits", {}))

# NOTE: the environment wins over the settings file.
if os.environ.get("HALLFORGE_ENUM_BOUND"):
    limits.enum_bound = int(os.environ["HALLFORGE_ENUM_BOUND"])


def enum_bound(override: Optional[int] = None) -> int:
    return limits.enum_bound if override is None else override


def degree_cap(override: Optional[int] = None) -> int:
    return limits.degree_cap if override is None else override
