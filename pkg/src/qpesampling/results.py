"""Utilities for post-processing run results into dataframes and CSV reports."""
import logging

import numpy as np
import pandas as pd

from . import errors
from . import qpe
from .spectra import SpectrumSeries, histogram_counts


logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'

HISTOGRAM_COLUMNS = ['outcome_bits', 'count', 'probability']

SPECTRUM_COLUMNS = ['omega', 'intensity']

DISCARD_COLUMNS = ['round_index', 'cumulative_n2q', 'x_detections', 'z_detections',
                   'discard_rate']

FIT_COLUMNS = ['p2', 'residual']

EXPERIMENT_COLUMNS = ['n_q', 'variant', 'n_meas', 'mean_l2', 'std_l2']

COMPARISON_COLUMNS = ['p2', 'discard_rate', 'pk_l2', 'spectrum_l2', 'qed']


def histogram_frame(hist, n_bits):
    """
    Tabulate a readout histogram over all 2^n_bits outcomes.

    `hist` may map outcome strings or integers to counts, or be a probability or count
    vector. Outcome strings are written most significant bit first, clbit 0 rightmost.
    """
    counts = histogram_counts(hist, 2 ** n_bits)
    total = counts.sum()
    return pd.DataFrame({
        'outcome_bits': [format(k, '0{}b'.format(n_bits)) for k in range(2 ** n_bits)],
        'count': counts,
        'probability': counts / total if total > 0 else np.zeros_like(counts),
    }, columns=HISTOGRAM_COLUMNS)


def spectrum_frame(series, shift=0.0):
    """Tabulate a spectrum; `shift` offsets the written ω column only."""
    return pd.DataFrame({'omega': series.omega + shift, 'intensity': series.intensity},
                        columns=SPECTRUM_COLUMNS)


def discard_frame(stats):
    """
    Tabulate per-round detections of one DiscardStats or a list of them.

    Each run of a list is tagged by its position in a leading `component` column.
    """
    runs = stats if isinstance(stats, (list, tuple)) else [stats]
    return pd.DataFrame.from_records(
        [dict(row._asdict(), component=index)
         for index, run in enumerate(runs) for row in run.rounds],
        columns=['component'] + DISCARD_COLUMNS)


def fit_frame(fit):
    return pd.DataFrame([fit._asdict()], columns=FIT_COLUMNS)


def experiment_frame(rows):
    """Tabulate (n_q, variant, n_meas, ExperimentResult) tuples."""
    return pd.DataFrame.from_records(
        [(n_q, variant, n_meas, result.mean_l2, result.std_l2)
         for n_q, variant, n_meas, result in rows], columns=EXPERIMENT_COLUMNS)


def comparison_frame(rows):
    """Tabulate dicts with the comparison columns, one per run with or without the code."""
    return pd.DataFrame.from_records(list(rows), columns=COMPARISON_COLUMNS)


def alpha_curves(n_q, xs, a_values=(0.1,)):
    """
    Return |α(x)|² of the uniform, EPE and Slater inputs (one column per decay rate).

    Slater columns are named `slater_a=<a>`.
    """
    xs = np.asarray(xs, dtype=float)
    frame = pd.DataFrame({
        'x': xs,
        'uniform': np.abs(qpe.alpha_uniform(xs, n_q)) ** 2,
        'epe': np.abs(qpe.alpha_epe(xs, n_q)) ** 2,
    })
    for a in a_values:
        frame['slater_a={:g}'.format(a)] = np.abs(qpe.alpha_slater(xs, n_q, a)) ** 2
    return frame


def write_frame(frame, path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info('Wrote %d rows to %s', len(frame), path)
    return path


def read_frame(path, columns, dtype=None):
    """Read a CSV report and check it carries `columns`."""
    try:
        frame = pd.read_csv(path, dtype=dtype)
    except OSError as error:
        raise errors.QpeInputError(path, error.strerror or str(error))
    except (ValueError, pd.errors.ParserError) as error:
        raise errors.QpeInputError(path, 'malformed CSV ({})'.format(error))
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise errors.QpeInputError(path, 'missing columns {}'.format(missing))
    return frame


def read_spectrum(path):
    frame = read_frame(path, SPECTRUM_COLUMNS)
    try:
        return SpectrumSeries(frame['omega'].values, frame['intensity'].values)
    except errors.QpeValidationError as error:
        raise errors.QpeInputError(path, '; '.join(error.errors))


def read_histogram(path):
    """Return {outcome string: count} from a histogram CSV."""
    frame = read_frame(path, HISTOGRAM_COLUMNS, dtype={'outcome_bits': str})
    return dict(zip(frame['outcome_bits'], frame['count']))


def read_discard_points(path):
    """Return (N_2Q, discard rate) points from a discard report or a two-column CSV."""
    frame = read_frame(path, [])
    if {'cumulative_n2q', 'discard_rate'} <= set(frame.columns):
        columns = ['cumulative_n2q', 'discard_rate']
    elif {'n2q', 'discard_rate'} <= set(frame.columns):
        columns = ['n2q', 'discard_rate']
    else:
        raise errors.QpeInputError(
            path, 'expected columns cumulative_n2q (or n2q) and discard_rate')
    return [(int(n2q), float(rate)) for n2q, rate in frame[columns].itertuples(index=False)]
