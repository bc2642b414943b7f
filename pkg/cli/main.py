"""
Command line for the toolkit: poling-period design, SHG spectra, fits,
joint-spectrum analysis, HOM dips and source figures of merit.

Every command writes its results under the output directory: CSV data, an
INI report and, with --plot, a gnuplot script next to each CSV.

Exit codes: 0 success, 1 fit failure, 2 I/O or configuration error,
3 domain error.
"""
import dataclasses
import functools
import logging
import os

import click
import numpy as np

import data.files as fls
from cli.config import DEFAULT_SHG_HALF_SPAN_NM, RunConfig, load_run_config
from common.errors import ConfigurationError, DataFormatError, FitFailure
from dispersion.model import correction_section, load_model, CORRECTION
from dispersion.thermal import thermal_scale
from jsa.joint import apply_filter, auto_grid, build_jsa, write_jsi
from jsa.marginals import gaussian_fit, marginals
from jsa.schmidt import schmidt
from metrics.counts import load_count_summary, summarize
from metrics.hom import (hom_dip, hom_visibility_from_scan, load_hom_scan,
                         simulate_scan, write_hom_scan)
from phasematch.calibration import (calibrate_correction,
                                    load_calibration_points, residual_table)
from phasematch.mismatch import shg_index_difference
from phasematch.shg_fit import fit_shg_spectrum
from phasematch.solve import (design_poling_period,
                              solve_phasematched_wavelength)
from phasematch.spectrum import model_detuning, shg_power_spectrum

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FIT = 1
EXIT_IO = 2
EXIT_DOMAIN = 3

FIT_MODES = ('shg', 'calibration', 'gaussian', 'hom')
SCHMIDT_REPORTED = 5

DESIGN_REPORT = 'design.ini'
SHG_CURVE = 'shg.csv'
SHG_REPORT = 'shg.ini'
FIT_REPORT = 'fit_{mode}.ini'
FIT_RESIDUALS = 'fit_{mode}_residuals.csv'
CALIBRATED_DATASET = 'calibrated_dataset.ini'
JSI = 'jsi.csv'
JSI_FILTERED = 'jsi_filtered.csv'
MARGINAL = '{arm}_marginal.csv'
SCHMIDT_REPORT = 'schmidt.ini'
HOM_DIP = 'hom_dip.csv'
HOM_SCAN = 'hom_scan.csv'
HOM_REPORT = 'hom.ini'
METRICS_REPORT = 'metrics.ini'


def handle_errors(func):
    """Map library exceptions to exit codes with a one-line diagnostic."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FitFailure as err:
            code = EXIT_FIT
            message = str(err)
            if err.residual is not None:
                message += f' (best residual {err.residual:.4g})'
        except (ConfigurationError, DataFormatError, OSError) as err:
            code, message = EXIT_IO, str(err)
        except ValueError as err:
            code, message = EXIT_DOMAIN, str(err)
        click.secho(f'error: {message}', err=True, fg='red')
        click.get_current_context().exit(code)
    return wrapper


def _config(ctx) -> RunConfig:
    opts = ctx.obj
    return load_run_config(opts['config'], opts['dataset'], opts['out'],
                           opts['seed'])


def _plot(ctx, config: RunConfig, csv_name: str, x_label: str,
          y_label: str, title: str, matrix: bool = False):
    if not ctx.obj['plot']:
        return
    script = os.path.splitext(csv_name)[0] + '.gp'
    fls.write_gnuplot_script(config.output(script), config.output(csv_name),
                             x_label, y_label, title=title, matrix=matrix)


def _joint_spectrum(config: RunConfig, model):
    grid = auto_grid(model, config.waveguide, config.pump,
                     config.temperature, config.grid_points,
                     config.signal_center, config.idler_center)
    return build_jsa(model, config.waveguide, config.pump, grid,
                     config.temperature)


def _detected(config: RunConfig, js):
    """The spectrum behind the band-pass filters, if any are configured."""
    if not config.has_filters:
        return js
    return apply_filter(js, config.signal_filter, config.idler_filter)


@click.group()
@click.option('--dataset', type=click.Path(dir_okay=False),
              help='Dispersion dataset (INI); default $QPM_DATASET or the '
                   'shipped lithium niobate set.')
@click.option('--config', 'config_path',
              type=click.Path(exists=True, dir_okay=False),
              help='Run configuration file (INI).')
@click.option('--out', type=click.Path(file_okay=False),
              help='Output directory; default $QPM_OUT or ./out.')
@click.option('--seed', type=int, help='Random seed for simulated data.')
@click.option('-p', '--plot', is_flag=True,
              help='Write a gnuplot script next to every CSV.')
@click.option('-v', '--verbose', is_flag=True, help='Debug logging.')
@click.pass_context
def qpm(ctx, dataset, config_path, out, seed, plot, verbose):
    """Cryogenic quasi-phase-matching toolkit."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)
    ctx.obj = {'dataset': dataset, 'config': config_path, 'out': out,
               'seed': seed, 'plot': plot}


@qpm.command()
@click.option('--target', type=float,
              help='Target fundamental wavelength (nm); overrides [design].')
@click.option('--temperature', type=float,
              help='Operating temperature (K); overrides [run].')
@click.pass_context
@handle_errors
def design(ctx, target, temperature):
    """Poling period for degenerate SHG of a target wavelength."""
    config = _config(ctx)
    target = target or config.target_nm
    temperature = config.temperature if temperature is None else temperature
    model = load_model(config.dataset)
    period = design_poling_period(model, target, temperature)
    wg = dataclasses.replace(config.waveguide, poling_period=period)
    scale = float(thermal_scale(model.thermal, temperature))
    lambda_pm = solve_phasematched_wavelength(model, wg, temperature, target)
    report = {
        'design': {
            'target_nm': target,
            'temperature_K': temperature,
            'poling_period_295K_um': period,
            'poling_period_um': float(wg.period_at(model.thermal,
                                                   temperature)),
            'thermal_scale': scale,
            'lambda_pm_nm': lambda_pm,
            'round_trip_error_nm': lambda_pm - target,
            'delta_n': float(shg_index_difference(model, target,
                                                  temperature)),
            'extrapolated': model.is_extrapolated(temperature),
        },
        'dataset': {'path': config.dataset},
    }
    fls.write_report(config.output(DESIGN_REPORT), report)
    click.echo(f'poling period {period:.6f} um at 295 K, '
               f'{scale * period:.6f} um at {temperature:g} K')
    click.echo(f'phase matched at {lambda_pm:.4f} nm')


@qpm.command()
@click.pass_context
@handle_errors
def shg(ctx):
    """Normalized SHG power spectrum of the configured waveguide."""
    config = _config(ctx)
    model = load_model(config.dataset)
    wg = config.waveguide
    wavelength_range = config.shg_range
    if wavelength_range is None:
        center = solve_phasematched_wavelength(model, wg, config.temperature,
                                               config.shg_seed_nm)
        wavelength_range = (center - DEFAULT_SHG_HALF_SPAN_NM,
                            center + DEFAULT_SHG_HALF_SPAN_NM)
    curve = shg_power_spectrum(model, wg, wavelength_range,
                               config.temperature, config.shg_points)
    peak_nm, peak_power = curve.peak()
    fwhm = curve.fwhm()
    fls.write_curve(config.output(SHG_CURVE), curve)
    _plot(ctx, config, SHG_CURVE, 'fundamental wavelength (nm)',
          'normalized SHG power', f'SHG at {config.temperature:g} K')
    fls.write_report(config.output(SHG_REPORT), {
        'shg': {
            'temperature_K': config.temperature,
            'length_mm': curve.meta['length_mm'],
            'n_points': len(curve),
            'peak_nm': peak_nm,
            'peak_power': peak_power,
            'fwhm_nm': fwhm,
        },
    })
    click.echo(f'peak {peak_nm:.4f} nm, FWHM {fwhm:.4f} nm')


def _fit_shg(config: RunConfig, path: str) -> tuple:
    measured = fls.read_curve(path)
    detuning = None
    if config.fit.detuning == 'model':
        detuning = model_detuning(load_model(config.dataset),
                                  config.waveguide, config.temperature)
    result = fit_shg_spectrum(measured, config.waveguide,
                              config.fit.profile_kind, None, detuning,
                              config.fit.profile_size)
    section = {
        'effective_length_mm': result.effective_length,
        'effective_fraction': result.effective_fraction,
        'peak_wavelength_nm': result.peak_wavelength,
        'center_wavelength_nm': result.center_wavelength,
        'amplitude': result.amplitude,
        'overlap_with_ideal': result.overlap_with_ideal,
        'residual': result.residual,
        'profile': result.profile.kind,
    }
    if not result.profile.is_uniform:
        section['profile_parameters'] = np.ravel(result.profile.parameters)
    for name, error in result.uncertainties.items():
        section[f'{name}_uncertainty'] = error
    fitted = np.interp(measured.x, result.fitted.x, result.fitted.y)
    residuals = {measured.x_name: measured.x, 'measured': measured.y,
                 'fitted': fitted, 'residual': measured.y - fitted}
    click.echo(f'effective length {result.effective_length:.3f} mm '
               f'({100 * result.effective_fraction:.1f}%), overlap '
               f'{result.overlap_with_ideal:.4f}')
    return {'shg_fit': section}, residuals


def _fit_calibration(config: RunConfig, path: str) -> tuple:
    model = load_model(config.dataset)
    points = load_calibration_points(path)
    result = calibrate_correction(points, model)
    calibrated = model.with_correction(result.correction)
    provenance = f'Calibrated on {os.path.basename(path)}, ' \
                 f'{len(points)} points, rms {result.rms_nm:.4g} nm'
    correction = correction_section(calibrated, provenance)
    fls.replace_ini_section(config.dataset,
                            config.output(CALIBRATED_DATASET), CORRECTION,
                            correction)
    report = {
        'calibration': {
            'n_points': len(points),
            'rms_nm': result.rms_nm,
            'coefficient_uncertainties': result.stderr,
        },
        CORRECTION: correction,
    }
    click.echo(f'calibrated on {len(points)} points, residual rms '
               f'{result.rms_nm:.4f} nm')
    return report, residual_table(points, result)


def _fit_gaussian(config: RunConfig, path: str) -> tuple:
    curve = fls.read_curve(path)
    result = gaussian_fit(curve)
    section = {'center_nm': result.center, 'fwhm_nm': result.fwhm,
               'amplitude': result.amplitude, 'residual': result.residual}
    for name, error in result.uncertainties.items():
        section[f'{name}_uncertainty'] = error
    residuals = {curve.x_name: curve.x, 'measured': curve.y,
                 'fitted': result.fitted.y,
                 'residual': curve.y - result.fitted.y}
    click.echo(f'center {result.center:.4f} nm, FWHM {result.fwhm:.4f} nm')
    return {'gaussian_fit': section}, residuals


def _fit_hom(config: RunConfig, path: str) -> tuple:
    scan = load_hom_scan(path, config.fit.integration_time)
    visibility, error = hom_visibility_from_scan(scan,
                                                 config.hom.baseline_window)
    report = {'hom_fit': {
        'visibility': visibility,
        'visibility_uncertainty': error,
        'baseline_min_ps': config.hom.baseline_window[0],
        'baseline_max_ps': config.hom.baseline_window[1],
        'n_delays': scan.delays.size,
    }}
    curve = scan.curve()
    click.echo(f'visibility {visibility:.4f} +- {error:.4f}')
    return report, {curve.x_name: curve.x, curve.y_name: curve.y}


FITTERS = {
    'shg': _fit_shg,
    'calibration': _fit_calibration,
    'gaussian': _fit_gaussian,
    'hom': _fit_hom,
}


@qpm.command()
@click.argument('measured', type=click.Path(dir_okay=False))
@click.option('--mode', type=click.Choice(FIT_MODES), required=True,
              help='What the input file holds.')
@click.pass_context
@handle_errors
def fit(ctx, measured, mode):
    """
    Fit measured data: an SHG spectrum, calibration wavelengths, a
    marginal spectrum or a HOM scan.
    """
    config = _config(ctx)
    report, residuals = FITTERS[mode](config, measured)
    report.setdefault('input', {})['path'] = measured
    fls.write_report(config.output(FIT_REPORT.format(mode=mode)), report)
    residual_csv = FIT_RESIDUALS.format(mode=mode)
    fls.write_csv_table(config.output(residual_csv), residuals)
    columns = list(residuals)
    _plot(ctx, config, residual_csv, columns[0], columns[1],
          f'{mode} fit')


def _schmidt_section(js) -> dict:
    result = schmidt(js)
    return {
        'schmidt_number': result.schmidt_number,
        'purity': result.purity,
        'leading_coefficients': result.coefficients[:SCHMIDT_REPORTED],
    }


@qpm.command()
@click.pass_context
@handle_errors
def jsa(ctx):
    """Joint spectrum, its marginals and Schmidt decomposition."""
    config = _config(ctx)
    model = load_model(config.dataset)
    js = _joint_spectrum(config, model)
    write_jsi(config.output(JSI), js)
    _plot(ctx, config, JSI, 'idler wavelength (nm)',
          'signal wavelength (nm)', 'joint spectral intensity', matrix=True)
    report = {'schmidt': _schmidt_section(js)}
    for curve in marginals(js):
        arm = curve.meta['arm']
        name = MARGINAL.format(arm=arm)
        fls.write_curve(config.output(name), curve)
        _plot(ctx, config, name, 'wavelength (nm)', 'density',
              f'{arm} marginal')
        try:
            result = gaussian_fit(curve)
        except (FitFailure, ValueError) as err:
            logger.warning('no Gaussian fit to the %s marginal: %s', arm, err)
            continue
        report[f'{arm}_marginal'] = {'center_nm': result.center,
                                     'fwhm_nm': result.fwhm}
    if config.has_filters:
        filtered = _detected(config, js)
        write_jsi(config.output(JSI_FILTERED), filtered)
        report['filtered'] = dict(
            _schmidt_section(filtered),
            signal_filter_fwhm_nm=config.signal_filter.fwhm,
            idler_filter_fwhm_nm=config.idler_filter.fwhm)
    fls.write_report(config.output(SCHMIDT_REPORT), report)
    click.echo(f"K = {report['schmidt']['schmidt_number']:.4f}, purity "
               f"{report['schmidt']['purity']:.4f}")
    if config.has_filters:
        click.echo(f"filtered: K = "
                   f"{report['filtered']['schmidt_number']:.4f}, purity "
                   f"{report['filtered']['purity']:.4f}")


@qpm.command()
@click.option('--simulate/--no-simulate', default=None,
              help='Also draw a Poisson scan and estimate V from it; '
                   'overrides [hom] simulate.')
@click.pass_context
@handle_errors
def hom(ctx, simulate):
    """Model HOM dip of the detected joint spectrum."""
    config = _config(ctx)
    settings = config.hom
    if simulate is None:
        simulate = settings.simulate
    model = load_model(config.dataset)
    js = _detected(config, _joint_spectrum(config, model))
    dip = hom_dip(js, settings.delays, same_port=True)
    fls.write_csv_table(config.output(HOM_DIP), {
        dip.normalized.x_name: dip.normalized.x,
        dip.normalized.y_name: dip.normalized.y,
        'bunching': dip.bunching.y,
    })
    _plot(ctx, config, HOM_DIP, 'delay (ps)', 'normalized coincidences',
          'HOM dip')
    report = {'hom': {'visibility': dip.visibility,
                      'filtered': config.has_filters}}
    click.echo(f'model visibility {dip.visibility:.4f}')
    if simulate:
        rng = np.random.default_rng(config.seed)
        scan = simulate_scan(dip, settings.baseline_rate,
                             settings.integration_time, rng)
        write_hom_scan(config.output(HOM_SCAN), scan)
        visibility, error = hom_visibility_from_scan(
            scan, settings.baseline_window)
        report['simulated'] = {
            'seed': config.seed,
            'baseline_rate': settings.baseline_rate,
            'integration_time_s': settings.integration_time,
            'visibility': visibility,
            'visibility_uncertainty': error,
        }
        click.echo(f'simulated scan visibility {visibility:.4f} +- '
                   f'{error:.4f}')
    fls.write_report(config.output(HOM_REPORT), report)


@qpm.command()
@click.argument('counts', type=click.Path(dir_okay=False))
@click.pass_context
@handle_errors
def metrics(ctx, counts):
    """Klyshko efficiency, brightness and heralded g2 from count rates."""
    config = _config(ctx)
    summary = load_count_summary(counts)
    section = {}
    for name, (value, error) in summarize(summary).items():
        section[name] = value
        section[f'{name}_uncertainty'] = error
        click.echo(f'{name} {value:.6g} +- {error:.2g}')
    fls.write_report(config.output(METRICS_REPORT), {'metrics': section})


def main():
    qpm(prog_name='qpm')


if __name__ == '__main__':
    main()
