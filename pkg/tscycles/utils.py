"""
Miscellaneous utils
"""

from copy import deepcopy
from functools import wraps
import math

from fastapi import HTTPException

import tscycles.conf as tsconf
from tscycles.exceptions import ConfigError, TscyclesError


def merge_overrides(overrides, defaults):
    """
    Write user overrides into a copy of the default analysis parameters. Only
    declared groups and parameters may be overridden.
    """
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise ConfigError(
            f"Unknown analysis parameter groups {unknown}, "
            f"expected some of {sorted(defaults)}."
        )
    flat = sorted(g for g, params in overrides.items() if not isinstance(params, dict))
    if flat:
        raise ConfigError(f"Analysis parameter groups {flat} should be mappings.")
    unknown = sorted(
        f"{group}.{k}"
        for group, params in overrides.items()
        for k in params
        if k not in defaults[group]
    )
    if unknown:
        raise ConfigError(f"Unknown analysis parameters {unknown}.")

    merged = deepcopy(defaults)
    for group, params in overrides.items():
        merged[group].update(params)
    return merged


def validate_conf(conf, full=None):
    """
    Validate user configuration against the `range` and `options` declared in the
    parameters file.
    """
    full = full or tsconf.ANALYSIS["full"]
    for group, params in conf.items():
        for k, v in params.items():
            spec = full[group][k]
            if "options" in spec and v not in spec["options"]:
                raise ConfigError(
                    f"`{group}.{k}` should be one of {spec['options']}, got {v!r}."
                )
            if "range" in spec:
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise ConfigError(f"`{group}.{k}` should be a number, got {v!r}.")
                lo, hi = spec["range"]
                if not lo <= v <= hi:
                    raise ConfigError(
                        f"`{group}.{k}` should be in range [{lo}, {hi}], got {v}."
                    )
                if isinstance(spec["value"], int) and not float(v).is_integer():
                    raise ConfigError(f"`{group}.{k}` should be an integer.")

    return conf


def analysis_conf(overrides=None):
    """
    Default analysis parameters updated (and validated) with user overrides.
    """
    defaults = tsconf.ANALYSIS["values"]
    if not overrides:
        return deepcopy(defaults)
    return validate_conf(merge_overrides(overrides, defaults))


def format_pvalue(p, floor=None):
    """
    Display a p-value with R-like clamping of tiny values.
    """
    floor = floor or tsconf.MAIN_CONF["report"]["pvalue_floor"]
    if p is None or (isinstance(p, float) and math.isnan(p)):
        return "NA"
    if p < floor:
        return f"< {floor:g}"
    return f"{p:.4g}"


def raise_for_status(func):
    """
    Raise HTML error if the analysis functions raise one of our errors.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TscyclesError as e:
            raise HTTPException(
                status_code=e.status_code,
                detail=str(e),
            )

    return wrapper
