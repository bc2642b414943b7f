"""
All reading and writing of files should go through this file!
Datasets, run configs and reports are INI; tables and curves are CSV.
"""
import configparser
import logging
import os

import numpy as np
import pandas as pd

from common.curves import SpectrumCurve
from common.errors import DataFormatError

logger = logging.getLogger(__name__)

DATASETS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                            'datasets')
DEFAULT_DATASET = os.path.join(DATASETS_DIR, 'congruent_lithium_niobate.ini')

DATASET_ENV = 'QPM_DATASET'

PROVENANCE = 'provenance'
SIGMA = 'sigma'

# enough digits for floats to survive a write/read cycle unchanged
FLOAT_FORMAT = '%.17g'

# header line plus 1-based numbering
FIRST_DATA_LINE = 2


def dataset_path() -> str:
    """Dataset named by $QPM_DATASET, else the shipped default."""
    return os.environ.get(DATASET_ENV) or DEFAULT_DATASET


def _require_file(path: str, what: str):
    if not os.path.isfile(path):
        raise FileNotFoundError(f'{what} not found: {path}')


def read_ini(path: str, what: str = 'File') -> configparser.ConfigParser:
    """
    Parse an INI file.

    Raises:
        FileNotFoundError: path does not exist
        DataFormatError: the file is not valid INI
    """
    _require_file(path, what)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding='utf-8') as handle:
            parser.read_file(handle)
    except configparser.Error as err:
        line = getattr(err, 'lineno', None)
        raise DataFormatError(err.message.splitlines()[0], path, line) \
            from err
    return parser


def parse_floats(text: str, path=None, where: str = '') -> np.ndarray:
    """Comma-separated numbers to a float array."""
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except ValueError as err:
        raise DataFormatError(f'{where}: {err}', path) from err
    if not values:
        raise DataFormatError(f'{where}: no numbers given', path)
    return np.array(values)


def format_floats(values) -> str:
    return ', '.join(repr(float(v)) for v in np.atleast_1d(values))


def read_dataset_section(parser, section: str, path=None) -> dict:
    """
    One dataset section as a dict. The provenance string is mandatory.
    """
    if not parser.has_section(section):
        raise DataFormatError(f'missing section [{section}]', path)
    fields = dict(parser.items(section))
    if not fields.get(PROVENANCE, '').strip():
        raise DataFormatError(
            f'section [{section}] has no {PROVENANCE} entry', path)
    return fields


def write_report(path: str, sections: dict):
    """
    Write a key-value report: {section: {key: value}}. Floats keep full
    precision.
    """
    parser = configparser.ConfigParser(interpolation=None)
    for section, fields in sections.items():
        parser[section] = {key: _report_value(value)
                           for key, value in fields.items()}
    _make_parent(path)
    with open(path, 'w', encoding='utf-8') as handle:
        parser.write(handle)
    logger.info('wrote report %s', path)


def _report_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return format_floats(value)
    return str(value)


def replace_ini_section(source: str, target: str, section: str,
                        fields: dict):
    """
    Copy an INI file to target with one section replaced. Comments of the
    source are not carried over.
    """
    parser = read_ini(source)
    if parser.has_section(section):
        parser.remove_section(section)
    parser[section] = {key: _report_value(value)
                       for key, value in fields.items()}
    _make_parent(target)
    with open(target, 'w', encoding='utf-8') as handle:
        parser.write(handle)
    logger.info('wrote %s', target)


def read_report(path: str) -> dict:
    parser = read_ini(path, 'Report')
    return {section: dict(parser.items(section))
            for section in parser.sections()}


def _make_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def read_csv_table(path: str, required: list, optional: list = ()) \
        -> pd.DataFrame:
    """
    Read a headed CSV with numeric columns.

    Args:
        required: column names that must be present and filled in
        optional: column names that may be absent or have empty cells (NaN)

    Returns:
        DataFrame of floats with exactly the required + present optional
        columns

    Raises:
        FileNotFoundError: no such file
        DataFormatError: missing column, ragged row or non-numeric cell;
            the message carries the file line number
    """
    _require_file(path, 'CSV file')
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False,
                          skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise DataFormatError(str(err).strip(), path) from err
    raw.columns = [str(col).strip() for col in raw.columns]
    missing = [col for col in required if col not in raw.columns]
    if missing:
        raise DataFormatError(f'missing column(s) {", ".join(missing)}',
                              path, 1)
    wanted = list(required) + [col for col in optional if col in raw.columns]
    table = pd.DataFrame(index=raw.index)
    for col in wanted:
        text = raw[col].str.strip()
        values = pd.to_numeric(text, errors='coerce')
        empty = text == ''
        bad = values.isna() & ~empty
        if col in required:
            bad = bad | empty
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raise DataFormatError(
                f'column {col}: cannot read {raw[col].iloc[row]!r} '
                'as a number',
                path, row + FIRST_DATA_LINE)
        table[col] = values.astype(float)
    return table


def write_csv_table(path: str, columns: dict):
    """Write {name: 1-D array} as a headed CSV."""
    _make_parent(path)
    pd.DataFrame(columns).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info('wrote %s', path)


def read_curve(path: str, x_name: str = None, y_name: str = None) \
        -> SpectrumCurve:
    """
    Read a curve CSV. Without names, the first two columns are x and y. A
    column called sigma, when present, becomes the uncertainty.
    """
    if x_name is None or y_name is None:
        _require_file(path, 'CSV file')
        try:
            header = pd.read_csv(path, nrows=0, skipinitialspace=True)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as err:
            raise DataFormatError(str(err).strip(), path) from err
        names = [str(col).strip() for col in header.columns]
        if len(names) < 2:
            raise DataFormatError('a curve needs two columns', path, 1)
        x_name, y_name = names[0], names[1]
    table = read_csv_table(path, [x_name, y_name], [SIGMA])
    table = table.sort_values(x_name)
    sigma = None
    if SIGMA in table:
        sigma = table[SIGMA].to_numpy()
        if np.isnan(sigma).any():
            sigma = None
    try:
        return SpectrumCurve(table[x_name].to_numpy(),
                             table[y_name].to_numpy(), sigma,
                             x_name, y_name, {'path': path})
    except ValueError as err:
        raise DataFormatError(str(err), path) from err


def write_curve(path: str, curve: SpectrumCurve, with_sigma: bool = None):
    columns = {curve.x_name: curve.x, curve.y_name: curve.y}
    if with_sigma is None:
        with_sigma = curve.has_sigma
    if with_sigma:
        columns[SIGMA] = curve.sigma
    write_csv_table(path, columns)


def read_matrix_csv(path: str) -> tuple:
    """
    Read a matrix file: first row holds the column axis, first column the
    row axis, body the values. The corner cell is ignored.

    Returns:
        (row_axis, column_axis, matrix)
    """
    _require_file(path, 'Matrix file')
    try:
        raw = pd.read_csv(path, header=None, dtype=str,
                          keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise DataFormatError(str(err).strip(), path) from err
    values = raw.apply(lambda col: pd.to_numeric(col.str.strip(),
                                                 errors='coerce'))
    values.iloc[0, 0] = 0.0
    if values.isna().to_numpy().any():
        row = int(np.flatnonzero(values.isna().to_numpy().any(axis=1))[0])
        raise DataFormatError('non-numeric matrix entry', path, row + 1)
    array = values.to_numpy(dtype=float)
    if array.shape[0] < 2 or array.shape[1] < 2:
        raise DataFormatError('matrix needs at least one row and column',
                              path)
    return array[1:, 0], array[0, 1:], array[1:, 1:]


def write_matrix_csv(path: str, row_axis, column_axis, matrix):
    row_axis = np.asarray(row_axis, dtype=float)
    column_axis = np.asarray(column_axis, dtype=float)
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (row_axis.size, column_axis.size):
        raise ValueError(f'matrix shape {matrix.shape} does not match axes '
                         f'({row_axis.size}, {column_axis.size})')
    array = np.empty((row_axis.size + 1, column_axis.size + 1))
    array[0, 0] = np.nan
    array[0, 1:] = column_axis
    array[1:, 0] = row_axis
    array[1:, 1:] = matrix
    _make_parent(path)
    pd.DataFrame(array).to_csv(path, header=False, index=False,
                               float_format=FLOAT_FORMAT, na_rep='')
    logger.info('wrote %s', path)


def write_gnuplot_script(path: str, data_file: str, x_label: str,
                         y_label: str, columns: tuple = (1, 2),
                         title: str = '', matrix: bool = False):
    """
    Plain-text gnuplot script that plots a CSV written next to it.
    """
    data_name = os.path.basename(data_file)
    lines = [
        "set datafile separator ','",
        f"set title '{title}'",
        f"set xlabel '{x_label}'",
        f"set ylabel '{y_label}'",
    ]
    if matrix:
        lines += [
            'set view map',
            f"plot '{data_name}' nonuniform matrix with image notitle",
        ]
    else:
        x_col, y_col = columns
        lines.append(f"plot '{data_name}' every ::1 using {x_col}:{y_col} "
                     'with lines notitle')
    _make_parent(path)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write('\n'.join(lines) + '\n')
    logger.info('wrote %s', path)
