"""
Spectral post-processing: histograms to peaks, Lorentzian broadening and ℓ² errors.

Spectra are evaluated on a fixed grid ω_ℓ = ω_min + ℓ (ω_max - ω_min) / N_ω so runs with
different ancilla counts compare point by point.
"""
import collections
import collections.abc
import logging

import numpy as np

from . import errors
from . import qpe


logger = logging.getLogger(__name__)

N_OMEGA = 1024

GRID_TOLERANCE = 1e-9


def spectrum_grid(omega_min, omega_max, n_omega=N_OMEGA):
    if not omega_max > omega_min or n_omega < 1:
        raise errors.QpeValidationError(
            'Spectrum grid needs omega_max > omega_min and n_omega >= 1')
    return omega_min + np.arange(n_omega) * (omega_max - omega_min) / n_omega


class SpectrumSeries(object):
    """Intensities on a strictly increasing frequency grid."""

    def __init__(self, omega, intensity):
        """Check the grid and that intensities are non-negative."""
        omega = np.asarray(omega, dtype=float)
        intensity = np.asarray(intensity, dtype=float)
        problems = []
        if omega.shape != intensity.shape or omega.ndim != 1:
            problems.append('Grid and intensities must be 1-d arrays of equal length')
        elif np.any(np.diff(omega) <= 0):
            problems.append('Frequency grid must be strictly increasing')
        if np.any(intensity < 0):
            problems.append('Intensities must be non-negative')
        if problems:
            raise errors.QpeValidationError(problems)
        self.omega = omega
        self.intensity = intensity

    def normalized(self):
        return SpectrumSeries(self.omega, self.intensity / self.intensity.sum())

    def shifted(self, offset):
        """Return the series with a constant added to the grid, for display only."""
        return SpectrumSeries(self.omega + offset, self.intensity)

    def same_grid(self, other):
        return (len(self.omega) == len(other.omega)
                and np.allclose(self.omega, other.omega, atol=GRID_TOLERANCE, rtol=0))

    def __len__(self):
        return len(self.omega)

    def __repr__(self):
        return 'SpectrumSeries(n_omega={}, range=[{:.6g}, {:.6g}])'.format(
            len(self), self.omega[0], self.omega[-1])


class PeakSet(object):
    """Peak energies with non-negative weights."""

    def __init__(self, energies, weights):
        energies = np.asarray(energies, dtype=float).reshape(-1)
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if energies.shape != weights.shape:
            raise errors.QpeValidationError('Peak energies and weights must have equal length')
        if np.any(weights < 0):
            raise errors.QpeValidationError('Peak weights must be non-negative')
        self.energies = energies
        self.weights = weights

    @classmethod
    def from_spectrum(cls, spec, polarization=0):
        return cls(spec.energies, spec.weights[:, polarization])

    def __add__(self, other):
        return PeakSet(np.concatenate([self.energies, other.energies]),
                       np.concatenate([self.weights, other.weights]))

    def scaled(self, factor):
        return PeakSet(self.energies, self.weights * factor)

    def __iter__(self):
        return iter(zip(self.energies, self.weights))

    def __len__(self):
        return len(self.energies)

    def __repr__(self):
        return 'PeakSet(n_peaks={}, total_weight={:.6g})'.format(len(self), self.weights.sum())


def histogram_counts(hist, n_bins):
    """Return counts per readout integer from an outcome-string map, int map or array."""
    if isinstance(hist, collections.abc.Mapping):
        counts = np.zeros(n_bins)
        for key, count in hist.items():
            index = int(key, 2) if isinstance(key, str) else int(key)
            if not 0 <= index < n_bins:
                raise errors.QpeValidationError(
                    'Outcome {!r} outside the {} readout bins'.format(key, n_bins))
            counts[index] += count
        return counts
    counts = np.asarray(hist, dtype=float)
    if counts.shape != (n_bins,):
        raise errors.QpeValidationError(
            'Histogram needs {} bins, found shape {}'.format(n_bins, counts.shape))
    return counts


def mix_histograms(histograms, n_bins):
    """
    Average the readout distributions of several input states with equal weights.

    Each histogram is normalized on its own, so states with more accepted shots do not
    dominate. Empty histograms are skipped; all empty gives a zero vector.
    """
    distributions = []
    for hist in histograms:
        counts = histogram_counts(hist, n_bins)
        if counts.sum() > 0:
            distributions.append(counts / counts.sum())
    if not distributions:
        return np.zeros(n_bins)
    return np.mean(distributions, axis=0)


def histogram_to_peaks(hist, cfg):
    """Return peaks at ω_min + k / t₀ weighted by the empirical probabilities."""
    counts = histogram_counts(hist, cfg.N)
    total = counts.sum()
    if total <= 0:
        raise errors.QpeValidationError('Cannot build peaks from an empty histogram')
    return PeakSet(cfg.bin_energies(), counts / total)


def broaden(peaks, grid, eta):
    """Return Σ_j w_j / ((ω - E_j)² + η²) before normalization."""
    if not eta > 0:
        raise errors.QpeValidationError('Broadening eta must be positive, found {!r}'.format(eta))
    if isinstance(peaks, PeakSet):
        peaks = [peaks]
    grid = np.asarray(grid, dtype=float)
    raw = np.zeros_like(grid)
    for peak_set in peaks:
        raw += (peak_set.weights / (np.subtract.outer(grid, peak_set.energies) ** 2 + eta ** 2)).sum(axis=1)
    return raw


def lorentzian_spectrum(peaks, grid, eta):
    """
    Broaden one or more peak sets on `grid` and normalize the sum to one.

    A list of peak sets (one per polarization) is summed before normalization.
    """
    raw = broaden(peaks, grid, eta)
    if raw.sum() <= 0:
        raise errors.QpeValidationError('Cannot normalize a spectrum without weight')
    return SpectrumSeries(grid, raw / raw.sum())


def processing_width(cfg, eta):
    """Return η, or the half-bin residual width 1 / (2 t₀) for Slater histograms."""
    if cfg.variant == qpe.SLATER:
        return 1 / (2 * cfg.t0)
    return eta


def post_process(hist, cfg, eta, grid=None):
    """Turn a readout histogram (or probability vector) into a normalized spectrum."""
    grid = spectrum_grid(cfg.omega_min, cfg.omega_max) if grid is None else grid
    return lorentzian_spectrum(histogram_to_peaks(hist, cfg), grid, processing_width(cfg, eta))


def l2_error(a, b):
    """Return √(Σ_ℓ |a_ℓ - b_ℓ|²) for two spectra on the same grid."""
    if not a.same_grid(b):
        raise errors.QpeValidationError('Spectra are defined on different grids')
    return float(np.linalg.norm(a.intensity - b.intensity))


def sample_histogram(pk, n_meas, rng):
    """Draw `n_meas` readouts from a probability vector; returns counts per bin."""
    pk = np.clip(np.asarray(pk, dtype=float), 0, None)
    return rng.multinomial(n_meas, pk / pk.sum())


ExperimentResult = collections.namedtuple('ExperimentResult', ['mean_l2', 'std_l2', 'errors'])


def statistical_experiment(cfg, spec, n_meas, trials, seed=0, eta=0.3, grid=None,
                           polarization=None):
    """
    Measure the statistical ℓ² error of finite-shot QPE sampling.

    Each trial samples `n_meas` readouts from the analytic distribution with generator
    seed ^ trial, post-processes them and compares with the infinite-shot spectrum.
    """
    if trials < 2:
        raise errors.QpeValidationError('trials must be at least 2, found {}'.format(trials))
    if n_meas < 1:
        raise errors.QpeValidationError('n_meas must be at least 1, found {}'.format(n_meas))
    grid = spectrum_grid(cfg.omega_min, cfg.omega_max) if grid is None else grid
    pk = qpe.analytic_pk(spec, cfg, polarization)
    reference = post_process(pk, cfg, eta, grid)
    l2 = []
    for trial in range(trials):
        counts = sample_histogram(pk, n_meas, np.random.default_rng(seed ^ trial))
        l2.append(l2_error(post_process(counts, cfg, eta, grid), reference))
    l2 = np.array(l2)
    logger.debug('Statistical experiment n_q=%d variant=%s n_meas=%d: mean l2 %.4g',
                 cfg.n_q, cfg.variant, n_meas, l2.mean())
    return ExperimentResult(float(l2.mean()), float(l2.std(ddof=1)), l2)
