"""
Flask API endpoints over the phase-matching toolkit.
Poling-period design, phase-matched wavelengths and source figures of merit,
evaluated against the dataset named by $QPM_DATASET (or the shipped one).
"""
import warnings

from flask import Flask, request
from flask_restx import Resource, Api, Namespace
from flask_cors import CORS

from common.errors import ExtrapolationWarning, FitFailure
from dispersion.model import load_model
from metrics.counts import CountSummary, summarize
from phasematch.mismatch import shg_index_difference
from phasematch.solve import (design_poling_period,
                              solve_phasematched_wavelength)
from phasematch.waveguide import WaveguideSpec
from server.models import register_models

# =============================================================================
# App Setup
# =============================================================================
app = Flask(__name__)
CORS(app)
api = Api(app, title='Quasi-Phase-Matching API', version='1.0',
          description='Cryogenic poling-period design, phase-matched '
                      'wavelengths and photon-pair figures of merit')

# Register Swagger models
models = register_models(api)

phasematch_ns = Namespace('phasematch', description='Phase matching')
api.add_namespace(phasematch_ns, path='/phasematch')

# Constants for tests and response keys
HELLO_EP = '/hello'
HELLO_RESP = 'hello'
ENDPOINT_EP = '/endpoints'
ENDPOINT_RESP = 'Available endpoints'
DESIGN_EP = '/design'
DESIGN_RESP = 'Design'
PHASEMATCH_EP = '/phasematch'
PHASEMATCH_RESP = 'Phase matching'
METRICS_EP = '/metrics'
METRICS_RESP = 'Metrics'

TARGET = 'target_nm'
TEMPERATURE = 'temperature_K'
POLING_PERIOD = 'poling_period_um'
SEED = 'seed_nm'
# only enters the solver's residual check
NOMINAL_LENGTH_MM = 10.0

ERROR = 'Error'


# =============================================================================
# Helper Functions
# =============================================================================
def handle_errors(func):
    """Decorator to handle common exceptions."""
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FitFailure as err:
            return {ERROR: str(err)}, 422
        except ValueError as err:
            return {ERROR: str(err)}, 400
        except OSError as err:
            return {ERROR: f'Dataset unavailable: {err}'}, 503
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def float_arg(name: str, default: float = None) -> float:
    """
    A numeric query parameter.

    Raises:
        ValueError: missing without a default, or not a number
    """
    raw = request.args.get(name)
    if raw is None or raw.strip() == '':
        if default is None:
            raise ValueError(f'Query parameter {name} is required')
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f'Query parameter {name}: cannot read {raw!r}')


def extrapolation_note(model, temperature) -> dict:
    return {'extrapolated': bool(model.is_extrapolated(temperature))}


# =============================================================================
# Design Endpoint
# =============================================================================
@api.route(DESIGN_EP)
class Design(Resource):
    """Poling period for degenerate SHG at a target wavelength."""

    @api.doc(params={TARGET: 'Fundamental wavelength (nm)',
                     TEMPERATURE: 'Operating temperature (K), default 295'})
    @api.response(200, 'Success', models['design'])
    @api.response(400, 'Bad parameters or outside the dataset domain')
    @handle_errors
    def get(self):
        """Design a poling period, specified at 295 K."""
        target = float_arg(TARGET)
        temperature = float_arg(TEMPERATURE, 295.0)
        model = load_model()
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ExtrapolationWarning)
            period = design_poling_period(model, target, temperature)
            wg = WaveguideSpec(period, NOMINAL_LENGTH_MM)
            result = {
                TARGET: target,
                TEMPERATURE: temperature,
                'poling_period_295K_um': period,
                POLING_PERIOD: float(wg.period_at(model.thermal,
                                                  temperature)),
                'lambda_pm_nm': solve_phasematched_wavelength(
                    model, wg, temperature, target),
                'delta_n': float(shg_index_difference(model, target,
                                                      temperature)),
            }
        result.update(extrapolation_note(model, temperature))
        return {DESIGN_RESP: result}


# =============================================================================
# Phase Matching Endpoint
# =============================================================================
@phasematch_ns.route('')
class PhaseMatch(Resource):
    """Phase-matched SHG wavelength of a given poling period."""

    @api.doc(params={POLING_PERIOD: 'Poling period at 295 K (um)',
                     TEMPERATURE: 'Operating temperature (K), default 295',
                     SEED: 'Wavelength to search from (nm), default 1560'})
    @api.response(200, 'Success', models['phasematch'])
    @api.response(400, 'Bad parameters or no phase-matching wavelength')
    @handle_errors
    def get(self):
        """Solve for the phase-matched fundamental wavelength."""
        period = float_arg(POLING_PERIOD)
        temperature = float_arg(TEMPERATURE, 295.0)
        seed = float_arg(SEED, 1560.0)
        model = load_model()
        wg = WaveguideSpec(period, NOMINAL_LENGTH_MM)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ExtrapolationWarning)
            wavelength = solve_phasematched_wavelength(model, wg,
                                                       temperature, seed)
        result = {
            POLING_PERIOD: period,
            TEMPERATURE: temperature,
            'lambda_pm_nm': wavelength,
        }
        result.update(extrapolation_note(model, temperature))
        return {PHASEMATCH_RESP: result}


# =============================================================================
# Metrics Endpoint
# =============================================================================
@api.route(METRICS_EP)
class Metrics(Resource):
    """Figures of merit from pre-binned count rates."""

    @api.expect(models['counts'])
    @api.response(200, 'Success', models['metrics'])
    @api.response(400, 'Invalid or incomplete count rates')
    @handle_errors
    def post(self):
        """Klyshko efficiency, brightness and heralded g2."""
        payload = request.get_json(silent=True)
        if not isinstance(payload, dict):
            raise ValueError('Expected a JSON object of count rates')
        results = summarize(CountSummary.from_dict(payload))
        return {METRICS_RESP: {
            name: {'value': value, 'uncertainty': error}
            for name, (value, error) in results.items()
        }}


# =============================================================================
# Utility Endpoints
# =============================================================================
@api.route(HELLO_EP)
class HelloWorld(Resource):
    """Health check endpoint."""

    def get(self):
        """Check if server is running."""
        return {HELLO_RESP: 'world'}


@api.route(ENDPOINT_EP)
class Endpoints(Resource):
    """List all available endpoints."""

    def get(self):
        """Get list of all public API endpoints with methods."""
        public = []
        for rule in api.app.url_map.iter_rules():
            # Skip internal/swagger/static routes
            if rule.rule.startswith(('/swagger', '/static', '/swaggerui')):
                continue
            valid = {'GET', 'POST'}
            methods = sorted(m for m in rule.methods if m in valid)
            if not methods:
                continue
            public.append({'path': rule.rule, 'methods': methods})

        public.sort(key=lambda x: x['path'])
        return {ENDPOINT_RESP: public}
