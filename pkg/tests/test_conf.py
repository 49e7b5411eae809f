"""
Configuration files and parameter overrides.
"""

from pathlib import Path
import tempfile

import pytest

import tscycles.conf as tsconf
from tscycles import utils
from tscycles.exceptions import ConfigError


def test_defaults():
    values = tsconf.ANALYSIS["values"]
    assert values["general"] == {"seed": 2021, "alpha": 0.01, "frequency": 12}
    assert values["decomposition"]["rmaf_half_width"] == 38
    assert values["ceemdan"]["ensemble_size"] == 250
    assert values["spectral"]["min_peak_height"] == 440

    for group in tsconf.ANALYSIS["full"].values():
        for param in group.values():
            assert {"name", "value"} <= set(param)

    assert tsconf.FIXTURE["path"].exists()
    assert [b["name"] for b in tsconf.CYCLE_BANDS][0] == "seasonal/yearly"


def test_overrides():
    conf = utils.analysis_conf({"unitroot": {"max_lag": 8}})
    assert conf["unitroot"]["max_lag"] == 8
    assert tsconf.ANALYSIS["values"]["unitroot"]["max_lag"] == 5


def test_override_errors():
    bad = [
        {"unknown": {"x": 1}},
        {"unitroot": {"lags": 3}},
        {"unitroot": {"max_lag": 100}},
        {"unitroot": {"max_lag": 2.5}},
        {"general": {"alpha": "small"}},
    ]
    for overrides in bad:
        with pytest.raises(ConfigError):
            utils.analysis_conf(overrides)


def test_format_pvalue():
    assert utils.format_pvalue(1e-20) == "< 2.2e-16"
    assert utils.format_pvalue(0.0287) == "0.0287"
    assert utils.format_pvalue(float("nan")) == "NA"


def test_merge_overrides_messages():
    defaults = {"unitroot": {"max_lag": 5}, "general": {"seed": 2021}}
    merged = utils.merge_overrides({"unitroot": {"max_lag": 8}}, defaults)
    assert merged["unitroot"]["max_lag"] == 8
    assert defaults["unitroot"]["max_lag"] == 5

    with pytest.raises(ConfigError, match=r"groups \['spectra'\]"):
        utils.merge_overrides({"spectra": {"x": 1}}, defaults)
    with pytest.raises(ConfigError, match=r"parameters \['unitroot.lags'\]"):
        utils.merge_overrides({"unitroot": {"lags": 3}}, defaults)
    with pytest.raises(ConfigError, match="should be mappings"):
        utils.merge_overrides({"unitroot": 3}, defaults)


def test_load_parameters():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "user.yaml"
        path.write_text(
            "unitroot:\n"
            "  max_lag:\n"
            "    name: Maximum ADF lag\n"
            "    value: 5\n"
        )
        declarations, defaults = tsconf.load_parameters(path)
        assert defaults == {"unitroot": {"max_lag": 5}}
        assert declarations["unitroot"]["max_lag"]["name"] == "Maximum ADF lag"

        path.write_text("unitroot:\n  max_lag:\n    value: 5\n")
        with pytest.raises(ConfigError, match=r"\['unitroot.max_lag'\]"):
            tsconf.load_parameters(path)
