import os

import numpy as np
import pytest

import data.files as fls
from cli import config as cfg
from common.errors import ConfigurationError
from jsa.envelope import TABULATED
from phasematch.waveguide import PIECEWISE_CONSTANT, POLYNOMIAL


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in (fls.DATASET_ENV, cfg.OUT_ENV, cfg.SEED_ENV):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def write_config(tmp_path):
    def write(text, name='run.ini'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_defaults():
    config = cfg.load_run_config()
    assert config.dataset == fls.DEFAULT_DATASET
    assert config.out_dir == cfg.DEFAULT_OUT
    assert config.seed == cfg.DEFAULT_SEED
    assert config.temperature == cfg.DEFAULT_TEMPERATURE
    assert config.waveguide.poling_period == 8.81
    assert config.waveguide.profile.is_uniform
    assert config.shg_range is None
    assert config.pump.center == 779.5
    assert not config.has_filters
    assert config.hom.delays.size == 201
    assert config.fit.profile_kind == PIECEWISE_CONSTANT


def test_file_values(write_config):
    path = write_config(
        '[run]\ntemperature_K = 6.4\nseed = 12\n'
        '[waveguide]\npoling_period_um = 8.7\neffective_length_mm = 18.8\n'
        'profile = piecewise_constant\nprofile_values = 1e-4, -1e-4\n'
        '[shg]\nlambda_min_nm = 1555\nlambda_max_nm = 1563\nn_points = 301\n'
        '[filters]\nsignal_center_nm = 1559\nsignal_fwhm_nm = 0.96\n'
        'idler_center_nm = 1559\nidler_fwhm_nm = 1.12\n'
        '[hom]\nsimulate = yes\nn_delays = 11\n')
    config = cfg.load_run_config(path)
    assert config.temperature == 6.4
    assert config.seed == 12
    assert config.waveguide.interaction_length == 18.8
    assert config.waveguide.profile.kind == PIECEWISE_CONSTANT
    assert config.waveguide.profile.local_index(0.75) == pytest.approx(-1e-4)
    assert config.shg_range == (1555.0, 1563.0)
    assert config.shg_points == 301
    assert config.signal_filter.fwhm == 0.96
    assert config.idler_filter.fwhm == 1.12
    assert config.hom.simulate
    assert np.allclose(config.hom.delays, np.linspace(-40.0, 40.0, 11))


def test_polynomial_profile(write_config):
    path = write_config('[waveguide]\nprofile = polynomial\n'
                        'profile_values = 0, 2e-4\n')
    profile = cfg.load_run_config(path).waveguide.profile
    assert profile.kind == POLYNOMIAL
    assert profile.local_index(0.5) == pytest.approx(1e-4)


def test_precedence(write_config, monkeypatch, tmp_path):
    path = write_config('[run]\nout = from_file\nseed = 1\n'
                        'dataset = custom.ini\n')
    config = cfg.load_run_config(path)
    assert config.out_dir == 'from_file'
    assert config.seed == 1
    assert config.dataset == os.path.join(str(tmp_path), 'custom.ini')

    monkeypatch.setenv(cfg.OUT_ENV, 'from_env')
    monkeypatch.setenv(cfg.SEED_ENV, '2')
    monkeypatch.setenv(fls.DATASET_ENV, '/data/env.ini')
    config = cfg.load_run_config(path)
    assert (config.out_dir, config.seed, config.dataset) == \
        ('from_env', 2, '/data/env.ini')

    config = cfg.load_run_config(path, dataset='/data/flag.ini',
                                 out='from_flag', seed=3)
    assert (config.out_dir, config.seed, config.dataset) == \
        ('from_flag', 3, '/data/flag.ini')


def test_seed_zero_flag_wins(monkeypatch):
    monkeypatch.setenv(cfg.SEED_ENV, '9')
    assert cfg.load_run_config(seed=0).seed == 0


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match='not found'):
        cfg.load_run_config(str(tmp_path / 'absent.ini'))


@pytest.mark.parametrize('text, message', [
    ('[laser]\npower = 1\n', 'unknown section'),
    ('[run]\ncolour = red\n', 'unknown key'),
    ('[run]\ntemperature_K = cold\n', 'cannot read'),
    ('[run]\ntemperature_K = -1\n', 'below 0 K'),
    ('[waveguide]\nlength_mm = 0\n', 'must be positive'),
    ('[waveguide]\neffective_length_mm = 30\n', 'effective_length'),
    ('[waveguide]\nprofile = polynomial\n', 'needs profile_values'),
    ('[waveguide]\nprofile = wavy\n', 'must be one of'),
    ('[shg]\nlambda_min_nm = 1550\n', 'or neither'),
    ('[shg]\nlambda_min_nm = 1560\nlambda_max_nm = 1550\n', 'below'),
    ('[filters]\nsignal_center_nm = 1559\n', 'or none'),
    ('[hom]\ndelay_min_ps = 5\ndelay_max_ps = -5\n', 'delay_min_ps'),
    ('[hom]\nsimulate = maybe\n', 'yes or no'),
    ('[pump]\nshape = tabulated\n', 'needs a table'),
    ('[fit]\ndetuning = quadratic\n', 'must be one of'),
])
def test_bad_values(write_config, text, message):
    with pytest.raises(ConfigurationError, match=message):
        cfg.load_run_config(write_config(text))


def test_tabulated_pump_relative_to_config(write_config, tmp_path):
    x = np.linspace(778.0, 781.0, 61)
    intensity = np.exp(-(x - 779.5) ** 2 / 0.2)
    fls.write_csv_table(str(tmp_path / 'pump.csv'),
                        {'lambda_nm': x, 'intensity': intensity})
    path = write_config('[pump]\nshape = tabulated\ntable = pump.csv\n')
    pump = cfg.load_run_config(path).pump
    assert pump.shape == TABULATED
    assert pump.center == pytest.approx(779.5)


def test_output_paths():
    config = cfg.load_run_config(out='results')
    assert config.output('shg.csv') == os.path.join('results', 'shg.csv')
