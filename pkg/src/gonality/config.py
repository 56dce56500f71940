"""
Centralize configuration for the graph gonality toolkit.

This module defines the project's constants in one place (search budgets,
size caps, spectral tolerance and logging formats) so that every module
(spectral.py, search.py, rebuild.py, cli.py, etc.) can import them without
hard-coding values. An optional YAML file can override the tunable ones.

Constants provided:
  • SPECTRAL_TOLERANCE        – Default width of eigenvalue enclosures (Fraction)
  • SNAP_MAX_DENOMINATOR      – Largest denominator tried when snapping eigenvalues (int)
  • TREEWIDTH_MAX_VERTICES    – Size cap for exact treewidth (int)
  • ISOMORPHISM_MAX_VERTICES  – Size cap for isomorphism assertions (int)
  • DEFAULT_MAX_SUBDIVISIONS  – Default subdivisions per original edge (int)
  • DEFAULT_LEAF_PATH_LENGTH  – Default maximal length of an attached leaf-path (int)
  • SEARCH_NODE_LIMIT         – Partition search nodes before giving up (int)
  • GON_SEED_MAX_VERTICES     – Largest graph whose gon witness seeds sgon (int)
  • CLASS_BOUND_MAX_REFINEMENTS – Refinements evaluated by bound_over_class (int)
  • DGON_MAX_VERTICES         – Largest graph whose divisorial gonality is computed (int)
  • SPLIT_EXHAUSTIVE_MAX      – Components for the exhaustive rebuild split (int)
  • TABLE_SGON_BUDGET         – Search budget used by the `table` command (dict)
  • LOG_FORMAT, LOG_FORMAT_SIMPLE, LOG_LEVEL
  • setup_logging()           – Helper to configure the root logger
  • load_config()             – Read a YAML override file into GonalitySettings

Usage:
    from gonality import config

    config.setup_logging()
    settings = config.load_config(Path("gonality.yaml"))
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, ValidationError

from gonality.errors import InvalidInputError

# Spectral settings
SPECTRAL_TOLERANCE = Fraction(1, 10**9)
SNAP_MAX_DENOMINATOR = 1000
SEED_MARGIN = Fraction(1, 10**6)

# Size caps
TREEWIDTH_MAX_VERTICES = 16
ISOMORPHISM_MAX_VERTICES = 10

# Search settings
DEFAULT_MAX_SUBDIVISIONS = 2
DEFAULT_LEAF_PATH_LENGTH = 2
SEARCH_NODE_LIMIT = 2_000_000
GON_SEED_MAX_VERTICES = 12
CLASS_BOUND_MAX_REFINEMENTS = 500
DGON_MAX_VERTICES = 10
PROGRESS_EVERY = 100_000  # search nodes between progress messages

# Rebuild settings
SPLIT_EXHAUSTIVE_MAX = 20

# The appendix table needs many short leaf-paths on complete graphs.
TABLE_SGON_BUDGET: dict[str, int | None] = {
    "max_subdivisions": 1,
    "max_leaf_paths": None,
    "max_leaf_length": 2,
}

# Logging configuration
LOG_LEVEL = logging.INFO
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
LOG_FORMAT_SIMPLE = "[%(levelname)s] %(message)s"  # For CLI output


def setup_logging(level: int | None = None, simple_format: bool = False) -> None:
    """
    Configure logging with consistent settings across all modules.

    Args:
    ----
        level: Logging level (default: LOG_LEVEL from config)
        simple_format: Use simple format without timestamp (default: False)

    """
    log_level = level or LOG_LEVEL
    log_format = LOG_FORMAT_SIMPLE if simple_format else LOG_FORMAT
    logging.basicConfig(level=log_level, format=log_format)


class GonalitySettings(BaseModel):
    """Tunable values that a YAML file may override."""

    spectral_tolerance: Fraction = SPECTRAL_TOLERANCE
    max_subdivisions: int = Field(default=DEFAULT_MAX_SUBDIVISIONS, ge=0)
    max_leaf_paths: int | None = Field(default=None, ge=0)
    max_leaf_length: int = Field(default=DEFAULT_LEAF_PATH_LENGTH, ge=0)
    max_degree: int | None = Field(default=None, ge=1)
    node_limit: int = Field(default=SEARCH_NODE_LIMIT, ge=1)
    treewidth_max_vertices: int = Field(default=TREEWIDTH_MAX_VERTICES, ge=1)

    model_config = {"arbitrary_types_allowed": True}


def load_config(config_path: Path | None) -> GonalitySettings:
    """
    Load settings from a YAML file, falling back to the module defaults.

    The file is a flat mapping whose keys are the fields of GonalitySettings;
    `spectral_tolerance` may be written as a string such as "1/1000000".
    """
    if config_path is None:
        return GonalitySettings()
    try:
        with open(config_path, encoding="utf-8") as f:
            raw: dict[str, Any] = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise InvalidInputError(f"Cannot read config {config_path}: {e}") from e

    if "spectral_tolerance" in raw:
        raw["spectral_tolerance"] = Fraction(str(raw["spectral_tolerance"]))
    try:
        settings = GonalitySettings(**raw)
    except (ValidationError, ValueError) as e:
        raise InvalidInputError(f"Invalid config {config_path}: {e}") from e
    logging.debug("Loaded settings from %s: %s", config_path, settings)
    return settings
