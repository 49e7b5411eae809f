"""
Run every test module without pytest.

Notes
=====
* Install the package first (`pip install -e .`) and run from the `tests` folder.
* The full report and CEEMDAN tests take a couple of minutes.
"""

import inspect

import routes  # noqa: F401
import test_api
import test_cli
import test_conf
import test_cycles
import test_decomposition
import test_descriptive
import test_distribution
import test_emd
import test_memory
import test_report
import test_series
import test_spectral
import test_structural
import test_unitroot


modules = [
    test_conf,
    test_series,
    test_descriptive,
    test_distribution,
    test_unitroot,
    test_memory,
    test_structural,
    test_decomposition,
    test_emd,
    test_spectral,
    test_cycles,
    test_report,
    test_cli,
    test_api,
]

for module in modules:
    for name, func in inspect.getmembers(module, inspect.isfunction):
        if name.startswith("test_") and func.__module__ == module.__name__:
            func()
    print(f"{module.__name__} tests passed!")
