"""
Swagger documentation models for the API.
Separated from endpoints.py for better code organization.
"""
from flask_restx import fields


def register_models(api):
    """
    Register all Swagger models with the API instance.

    Args:
        api: Flask-RESTX Api instance

    Returns:
        dict: Dictionary containing all registered models
    """

    design_model = api.model('Design', {
        'target_nm': fields.Float(
            description='Target fundamental wavelength', example=1559.0),
        'temperature_K': fields.Float(
            description='Operating temperature', example=6.4),
        'poling_period_295K_um': fields.Float(
            description='Poling period to write at room temperature',
            example=8.81),
        'poling_period_um': fields.Float(
            description='Poling period after cool-down', example=8.79),
        'lambda_pm_nm': fields.Float(
            description='Phase-matched wavelength of the designed period',
            example=1559.0),
        'delta_n': fields.Float(
            description='Index difference n(SH) - n(F) at the target',
            example=0.177),
        'extrapolated': fields.Boolean(
            description='Dataset used outside its stated ranges'),
    })

    phasematch_model = api.model('PhaseMatch', {
        'poling_period_um': fields.Float(
            description='Poling period at 295 K', example=8.81),
        'temperature_K': fields.Float(
            description='Operating temperature', example=295.0),
        'lambda_pm_nm': fields.Float(
            description='Phase-matched fundamental wavelength',
            example=1560.2),
        'extrapolated': fields.Boolean(
            description='Dataset used outside its stated ranges'),
    })

    counts_model = api.model('CountSummary', {
        'c_s': fields.Float(
            required=True, description='Signal singles (1/s)',
            example=1.0e4),
        'c_i': fields.Float(
            required=True, description='Idler singles (1/s)', example=1.0e4),
        'c_si': fields.Float(
            required=True, description='Coincidences (1/s)', example=1362.0),
        'c_i1s': fields.Float(
            description='Heralded coincidences, idler detector 1 (1/s)'),
        'c_i2s': fields.Float(
            description='Heralded coincidences, idler detector 2 (1/s)'),
        'c_i1i2s': fields.Float(
            description='Heralded triple coincidences (1/s)'),
        'p_trans': fields.Float(
            description='Transmitted pump power (mW)', example=0.05),
        'integration_time': fields.Float(
            description='Integration time (s)', example=60.0),
    })

    measurement_model = api.model('Measurement', {
        'value': fields.Float(description='Value'),
        'uncertainty': fields.Float(description='One standard deviation'),
    })

    metrics_model = api.model('Metrics', {
        'klyshko': fields.Nested(measurement_model),
        'brightness': fields.Nested(measurement_model),
        'g2_heralded': fields.Nested(measurement_model),
    })

    return {
        'design': design_model,
        'phasematch': phasematch_model,
        'counts': counts_model,
        'measurement': measurement_model,
        'metrics': metrics_model,
    }
