import numpy as np
import pytest

from frednorm.data import CsvError, SynthSpec, load_csv, make_windows, synthesize, write_csv
from frednorm.spectral import amplitudes, dft


def test_load_csv_with_header(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("a,b\n1,2\n3,4.5\n-1e3,0\n")
    np.testing.assert_array_equal(load_csv(p), [[1, 2], [3, 4.5], [-1000, 0]])


def test_load_csv_drops_date_column(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("date,HUFL,OT\n2016-07-01 00:00:00,5.8,30.5\n2016-07-01 01:00:00,5.6,27.8\n")
    np.testing.assert_array_equal(load_csv(p), [[5.8, 30.5], [5.6, 27.8]])
    assert load_csv(p, date_column=True).shape == (2, 2)


def test_load_csv_bad_cell(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("a,b\n1,2\n3,oops\n")
    with pytest.raises(CsvError, match=r"row 3, column 2"):
        load_csv(p)


def test_load_csv_ragged(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("a,b\n1,2\n3\n")
    with pytest.raises(CsvError, match="row 3"):
        load_csv(p)


def test_write_read_round_trip(tmp_path, rng):
    x = rng.normal(size=(20, 3))
    write_csv(tmp_path / "x.csv", x)
    np.testing.assert_array_equal(load_csv(tmp_path / "x.csv"), x)


def test_exact_fit_gives_one_pair(rng):
    tr, va, te = make_windows(rng.normal(size=(15, 2)), 10, 5, (1, 0, 0))
    assert (len(tr), len(va), len(te)) == (1, 0, 0)


def test_pair_count():
    tr, _, _ = make_windows(np.zeros((100, 1)), 10, 5, (1, 0, 0), 1)
    assert len(tr) == 86


def enumerate_pairs(n, lookback, horizon, fractions, stride):
    # independent index enumeration
    n_train = int(n * fractions[0])
    n_val = int(n * fractions[1])
    bounds = [(0, n_train), (n_train, n_train + n_val), (n_train + n_val, n)]
    counts = []
    for lo, hi in bounds:
        c, s = 0, lo
        while s + lookback + horizon <= hi:
            c += 1
            s += stride
        counts.append(c)
    return counts


@pytest.mark.parametrize("n,stride", [(17420, 1), (17420, 7), (1000, 3)])
def test_ett_split_counts(n, stride):
    series = np.arange(n, dtype=float)[:, None]
    parts = make_windows(series, 96, 96, (0.6, 0.2, 0.2), stride)
    assert [len(p) for p in parts] == enumerate_pairs(n, 96, 96, (0.6, 0.2, 0.2), stride)


def test_windows_content_and_hygiene():
    series = np.arange(300, dtype=float)[:, None]
    tr, va, te = make_windows(series, 10, 5, (0.6, 0.2, 0.2), 2)
    np.testing.assert_array_equal(tr.inputs[3, :, 0], np.arange(6, 16))
    np.testing.assert_array_equal(tr.targets[3, :, 0], np.arange(16, 21))
    assert tr.targets.max() < va.inputs.min()
    assert va.targets.max() < te.inputs.min()
    assert tr.targets.max() < 180


def test_too_short():
    with pytest.raises(ValueError, match="shorter"):
        make_windows(np.zeros((10, 1)), 8, 4)
    with pytest.raises(ValueError):
        make_windows(np.zeros((100, 1)), 8, 4, (0.5, 0.5, 0.5))


def test_synth_ramp():
    x = synthesize(SynthSpec(50, 1, 16, [], [], trend_slope=1.0, noise_std=0.0))
    np.testing.assert_array_equal(x[:, 0], np.arange(50))


def test_synth_deterministic():
    a = synthesize(SynthSpec(seed=3, length=500))
    b = synthesize(SynthSpec(seed=3, length=500))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, synthesize(SynthSpec(seed=4, length=500)))


def test_synth_tone_variability():
    spec = SynthSpec(length=100 * 64, channels=1, window=64, stable_tones=[(4, 1.0)],
                     unstable_tones=[(11, 0.0, 2.0)], noise_std=0.1, seed=0)
    x = synthesize(spec)
    wins = x[: 100 * 64].reshape(100, 64, 1)
    a = amplitudes(dft(wins))[:, :, 0]
    cv = a.std(axis=0) / a.mean(axis=0)
    assert cv[4] < 0.05
    assert cv[11] > 0.3


def test_synth_validation():
    with pytest.raises(ValueError):
        synthesize(SynthSpec(window=16, stable_tones=[(9, 1.0)]))
    with pytest.raises(ValueError):
        synthesize(SynthSpec(unstable_tones=[(3, 2.0, 1.0)]))
