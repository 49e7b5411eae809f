"""
Manage configurations of the toolkit.
"""

import logging
from pathlib import Path

import yaml

from tscycles.exceptions import ConfigError


# Paths
main_path = Path(__file__).parent.absolute()
paths = {
    "conf": main_path.parent / "etc",
    "data": main_path.parent / "etc" / "data",
}

# Load main configuration
with open(paths["conf"] / "main.yaml", "r") as f:
    MAIN_CONF = yaml.safe_load(f)


def load_parameters(fpath):
    """
    Read an analysis parameter file. Each parameter of each group declares at least
    a display `name` and a default `value`. Returns `(declarations, defaults)`.
    """
    with open(fpath, "r") as f:
        declarations = yaml.safe_load(f)

    defaults = {}
    for group, params in declarations.items():
        incomplete = sorted(
            f"{group}.{k}" for k, p in params.items() if not {"name", "value"} <= set(p)
        )
        if incomplete:
            raise ConfigError(
                f"Analysis parameters {incomplete} need a `name` and a `value`."
            )
        defaults[group] = {k: p["value"] for k, p in params.items()}

    return declarations, defaults


def load_cycle_bands(fpath):
    """
    Load the economic cycle band table, sorted by lower bound.
    """
    with open(fpath, "r") as f:
        bands = yaml.safe_load(f)["bands"]
    for b in bands:
        if b["lower"] >= b["upper"]:
            raise ConfigError(f"Cycle band `{b['name']}` has an empty range.")
    return sorted(bands, key=lambda b: b["lower"])



def setup_logging(level=None):
    """
    Configure the root logger from the main configuration.
    """
    logging.basicConfig(
        level=level or MAIN_CONF["logging"]["level"],
        format=MAIN_CONF["logging"]["format"],
        force=True,
    )


# Analysis parameters
yml = load_parameters(paths["conf"] / "analysis" / "user.yaml")
ANALYSIS = {
    "full": yml[0],
    "values": yml[1],
}

# Economic cycle bands
CYCLE_BANDS = load_cycle_bands(paths["conf"] / "cycles.yaml")

# Bundled fixture
FIXTURE = {
    "path": paths["data"] / MAIN_CONF["fixture"]["file"],
    **{k: v for k, v in MAIN_CONF["fixture"].items() if k != "file"},
}
