import pytest

from common import errors


def test_data_format_error_names_location():
    err = errors.DataFormatError('bad number', path='scan.csv', line=7)
    assert str(err) == 'scan.csv:7: bad number'
    assert err.line == 7


def test_domain_errors_are_value_errors():
    with pytest.raises(ValueError):
        raise errors.NoSolutionError('nothing between 400 and 3400 nm')


def test_fit_failure_keeps_trace():
    err = errors.FitFailure('stuck', best_params=[1.0], trace=(3.0, 2.0),
                            residual=0.5)
    assert err.trace == [3.0, 2.0]
    assert not isinstance(err, ValueError)
