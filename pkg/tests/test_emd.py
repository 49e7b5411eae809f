"""
EMD sifting and CEEMDAN.
"""

import math

import numpy as np
import pytest

from tscycles.analysis import emd, series as tsseries
from tscycles.exceptions import DegenerateError, InsufficientDataError, ParameterError


bundle = tsseries.load_fixture()


def test_find_extrema():
    maxima, minima = emd.find_extrema([0, 1, 0, -1, 0, 2, 2, 1])
    assert maxima.tolist() == [1, 5]
    assert minima.tolist() == [3]

    maxima, minima = emd.find_extrema(np.arange(10))
    assert len(maxima) == len(minima) == 0


def test_zero_crossings_and_period():
    t = np.arange(240)
    wave = np.sin(2 * np.pi * (t + 0.5) / 24)
    assert emd.count_zero_crossings(wave) == 19
    assert emd.mean_period(wave) == pytest.approx(24, rel=0.1)
    assert emd.mean_period(np.ones(10)) == math.inf


def test_emd_separates_tones():
    t = np.arange(512)
    fast = np.sin(2 * np.pi * t / 8)
    slow = 2 * np.sin(2 * np.pi * t / 64)
    imfs, residual = emd.EMD().decompose(fast + slow)
    assert len(imfs) >= 2
    np.testing.assert_allclose(sum(imfs) + residual, fast + slow, atol=1e-9)
    assert emd.mean_period(imfs[0]) == pytest.approx(8, rel=0.15)
    np.testing.assert_allclose(imfs[0][64:-64], fast[64:-64], atol=0.2)


def test_emd_imf_extrema():
    t = np.arange(600)
    x = np.sin(2 * np.pi * t / 12) + np.sin(2 * np.pi * t / 90)
    imfs, _ = emd.EMD().decompose(x, max_imfs=2)
    for imf in imfs:
        assert abs(emd.count_extrema(imf) - emd.count_zero_crossings(imf)) <= 1

    s = bundle.pmn
    imfset = emd.emd_decompose(s)
    np.testing.assert_allclose(imfset.reconstruction(), s.values, atol=1e-8)
    assert imfset.ensemble_size == 1


def test_emd_errors():
    with pytest.raises(ParameterError):
        emd.EMD(s_number=0)
    assert emd.EMD().sift(np.arange(20.0)) is None


def test_ceemdan_fixture():
    s = bundle.total
    imfs = emd.ceemdan(s, ensemble_size=20, seed=2021)
    assert imfs.n_columns == 9
    np.testing.assert_allclose(imfs.reconstruction(), s.values, atol=1e-8)

    periods = imfs.mean_periods()
    assert len(periods) == 8
    assert periods[0] < periods[1]
    assert 0 <= imfs.trend_column() < 8

    df = imfs.to_frame(s)
    assert list(df.columns) == ["month"] + [f"imf{j}" for j in range(1, 9)] + [
        "residual"
    ]
    np.testing.assert_allclose(
        imfs.low_frequency(3), imfs.imfs[:, 3:].sum(axis=1)
    )


def test_ceemdan_recovers_tone():
    rng = np.random.default_rng(2021)
    t = np.arange(600)
    x = np.sin(2 * np.pi * t / 60) + rng.normal(0, 0.3, 600)
    imfs = emd.ceemdan(bundle.pmn.with_values(x), ensemble_size=50, seed=2021)
    assert any(50 <= p <= 70 for p in imfs.mean_periods())


def test_ceemdan_deterministic():
    s = bundle.pmn
    a = emd.ceemdan(s, ensemble_size=8, seed=7, workers=1)
    b = emd.ceemdan(s, ensemble_size=8, seed=7, workers=3)
    np.testing.assert_array_equal(a.imfs, b.imfs)

    c = emd.ceemdan(s, ensemble_size=8, seed=8)
    assert not np.array_equal(a.imfs, c.imfs)


def test_ceemdan_errors():
    with pytest.raises(InsufficientDataError):
        emd.ceemdan(bundle.pmn.with_values(np.arange(50.0)))
    with pytest.raises(ParameterError):
        emd.ceemdan(bundle.pmn, ensemble_size=0)
    with pytest.raises(DegenerateError):
        emd.ceemdan(bundle.pmn.with_values(np.ones(100)))


def test_trend_column_without_oscillation():
    imfs = emd.ImfSet(
        imfs=np.column_stack([np.ones(100), np.zeros(100)]),
        ensemble_size=1,
        noise_strength=0.0,
        s_number=4,
        max_siftings=50,
        seed=0,
    )
    with pytest.raises(DegenerateError):
        imfs.trend_column()
