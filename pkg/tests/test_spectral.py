"""
Wavelet power, AR spectrum dominant frequency and peak finding.
"""

import math

import numpy as np
import pytest

from tscycles.analysis import series as tsseries, spectral
from tscycles.analysis.decomposition import rmaf_decompose
from tscycles.exceptions import DegenerateError, ParameterError


bundle = tsseries.load_fixture()


def test_wavelet_grid():
    spec = spectral.morlet_power(bundle.pmn, dt=1 / 12, dj=0.01)
    n = len(bundle.pmn)
    assert spec.periods[0] == pytest.approx(2 / 12)
    assert spec.periods[-1] <= n / 12
    assert spec.power.shape == (len(spec.periods), n)
    assert spec.avg_power.shape == spec.periods.shape
    assert np.all(spec.power >= 0)
    np.testing.assert_allclose(spec.scales * spectral.FOURIER_FACTOR, spec.periods)
    assert spec.coi[0] < spec.coi[n // 2] > spec.coi[-1]


def test_wavelet_tone():
    t = np.arange(480)
    s = bundle.pmn.with_values(100 + np.sin(2 * np.pi * t / 24))
    spec = spectral.morlet_power(s, dt=1 / 12, dj=0.01)
    assert spec.dominant_period() == pytest.approx(2.0, rel=0.015)


def test_wavelet_pmn_annual():
    spec = spectral.morlet_power(bundle.pmn, dj=0.01, detrend=0.75)
    assert 0.8 <= spec.dominant_period(0.5, 2) <= 1.2


def test_wavelet_options():
    plain = spectral.morlet_power(bundle.pma, dj=0.05)
    rect = spectral.morlet_power(bundle.pma, dj=0.05, rectify=True)
    np.testing.assert_allclose(rect.power, plain.power / plain.scales[:, None])

    masked = spectral.morlet_power(bundle.pma, dj=0.05, mask_coi=True)
    assert masked.cone_mask().any()
    assert not np.allclose(masked.avg_power, plain.avg_power)


def test_wavelet_frames():
    spec = spectral.morlet_power(bundle.pmn, dj=0.1)
    df = spec.to_frame()
    assert df.columns[0] == "period"
    assert df.columns[1] == "May 1976"
    assert df.shape == (len(spec.periods), 537)
    assert list(spec.avg_frame().columns) == ["period", "avg_power"]


def test_wavelet_errors():
    with pytest.raises(ParameterError):
        spectral.morlet_power(bundle.pmn, dj=0)
    with pytest.raises(ParameterError):
        spectral.morlet_power(bundle.pmn, detrend=1.5)
    with pytest.raises(DegenerateError):
        spectral.morlet_power(bundle.pmn.with_values(np.ones(64)))

    spec = spectral.morlet_power(bundle.pmn, dj=0.1)
    with pytest.raises(ParameterError):
        spec.dominant_period(100, 200)


def test_find_frequency():
    assert spectral.find_frequency(bundle.pmn) == 12
    assert spectral.find_frequency(bundle.pma) == 4
    assert spectral.find_frequency(bundle.total) == 3


def test_find_frequency_white_noise():
    rng = np.random.default_rng(0)
    s = bundle.pmn.with_values(rng.normal(size=200))
    assert spectral.find_frequency(s) == 1


def test_find_peaks():
    x = [0, 2, 1, 5, 5, 3, 4, 1]
    peaks = spectral.find_peaks(x)
    assert [p.index for p in peaks] == [1, 6]
    assert (peaks[0].left, peaks[0].right) == (0, 2)

    x = [0, 3, 1, 6, 2, 4, 0]
    assert [p.index for p in spectral.find_peaks(x)] == [1, 3, 5]
    assert [p.index for p in spectral.find_peaks(x, npeaks=2)] == [3, 5]
    assert [p.index for p in spectral.find_peaks(x, min_height=3.5)] == [3, 5]
    assert [p.index for p in spectral.find_peaks(x, threshold=3)] == [3]
    assert spectral.find_peaks([1, 2]) == []


def test_total_trend_peaks():
    s = bundle.total
    trend = rmaf_decompose(s, 12, 38).trend
    labels = [s.month_label(i) for i in range(len(s))]
    peaks = spectral.find_peaks(trend, min_height=440, labels=labels)
    found = {p.index: p for p in peaks}
    assert {191, 482} <= set(found)
    assert found[191].label == "Apr 1992"
    assert found[191].value == pytest.approx(443.6383, abs=1e-3)
    assert found[482].value == pytest.approx(467.7883, abs=1e-3)
    # 472 and 482 are the two highest, on the same crest
    assert found[472].value > found[191].value

    first, second, months = spectral.peak_separation(peaks, trend)
    assert (first.index, second.index, months) == (191, 482, 291)
    assert months / 12 == 24.25
    assert (first.label, second.label) == ("Apr 1992", "Jul 2016")

    with pytest.raises(DegenerateError):
        spectral.peak_separation(peaks[:1], trend)

    df = spectral.peaks_frame(peaks)
    assert len(df) == len(peaks)
    assert "Apr 1992" in df["month"].tolist()
    assert not math.isnan(df["value"].iloc[0])


def test_peak_separation_crosses_trough():
    x = np.array([0, 5, 4, 6, 1, 0, 2, 3, 2, 9, 8, 9.5, 7])
    peaks = spectral.find_peaks(x)
    assert [p.index for p in peaks] == [1, 3, 7, 9, 11]
    first, second, months = spectral.peak_separation(peaks, x)
    assert (first.index, second.index, months) == (3, 11, 8)

    # not a pair of maxima around a trough
    fake = [p.model_copy(update={"index": i}) for p, i in zip(peaks[:2], (1, 2))]
    with pytest.raises(DegenerateError):
        spectral.peak_separation(fake, np.arange(4.0))
