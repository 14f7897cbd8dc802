"""
The figure of merit F(U, W) = |tr(U W^dagger)|^2 / d^2, its Haar average for a
strategy, the f1 operator and the analytic reference values.
"""
import logging
import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.optimize import minimize_scalar

from uniest.errors import UniestInputError, UniestNumericalError
from uniest.haar import RngStream, haar_mean_operator, haar_unitary, project_su, su2_quadrature
from uniest.numerics import adjoint, as_matrix, herm_eig, is_hermitian, kron_power_stack, symmetrize
from uniest.probes import max_entangled, phi2
from uniest.strategies import OPTIMAL_N2_MEASUREMENT, covariant_n2
from uniest.utils.parallel import run_trials

Logger = logging.getLogger('uniest.fidelity')

MIN_TRIALS = 100
MIN_F1_SAMPLES = 10**3
PRODUCT_MAX_STARTS = 20
PRODUCT_MAX_TOL = 1e-10
PRODUCT_MAX_ITERATIONS = 10**3
PRODUCT_MAX_SEED = 8


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    strategy: str = ''
    d: int = None
    copies: int = None

    @classmethod
    def from_values(cls, values, seed, **labels):
        values = np.asarray(values, dtype=float)
        n = len(values)
        return cls(
            mean=float(values.mean()),
            stderr=float(values.std(ddof=1) / math.sqrt(n)),
            samples=n,
            seed=seed,
            **labels,
        )

    def as_dict(self):
        return {
            'mean': self.mean,
            'stderr': self.stderr,
            'samples': self.samples,
            'seed': self.seed,
            'strategy': self.strategy,
            'd': self.d,
            'N': self.copies,
        }

    def agrees_with(self, reference, absolute=0.01, sigmas=5):
        return abs(self.mean - reference) <= max(absolute, sigmas * self.stderr)

    def z_score(self, reference):
        if self.stderr == 0:
            return 0.0 if self.mean == reference else math.inf
        return abs(self.mean - reference) / self.stderr


def merge_estimates(estimates):
    """Count-weighted combination of independent estimates of the same quantity."""
    estimates = list(estimates)
    if not estimates:
        raise UniestInputError('Nothing to merge.')
    total = sum(e.samples for e in estimates)
    mean = sum(e.samples * e.mean for e in estimates) / total
    squares = sum(
        (e.samples - 1) * e.samples * e.stderr ** 2 + e.samples * (e.mean - mean) ** 2
        for e in estimates
    )
    first = estimates[0]
    return Estimate(
        mean=mean,
        stderr=math.sqrt(squares / (total - 1) / total),
        samples=total,
        seed=first.seed,
        strategy=first.strategy,
        d=first.d,
        copies=first.copies,
    )


@dataclass(frozen=True)
class ReferenceValues:
    d: int
    optimal_n1: float
    blind: float
    separable_n1: float
    optimal_n2_d2: float = None

    @classmethod
    def for_dimension(cls, d):
        if d < 2:
            raise UniestInputError(f'Reference values need d >= 2, got {d}.')
        return cls(
            d=d,
            optimal_n1=2 / d ** 2,
            blind=1 / d ** 2,
            separable_n1=separable_bound(d),
            optimal_n2_d2=(3 + math.sqrt(5)) / 8 if d == 2 else None,
        )

    def for_strategy(self, name):
        return {
            'bell': self.optimal_n1,
            'covariant': self.optimal_n1,
            'blind': self.blind,
            'covariant-n2': self.optimal_n2_d2,
        }[name]

    def as_dict(self):
        return {
            'd': self.d,
            'optimal_n1': self.optimal_n1,
            'blind': self.blind,
            'separable_n1': self.separable_n1,
            'optimal_n2_d2': self.optimal_n2_d2,
        }


def fidelity(u, ur):
    u = as_matrix(u)
    ur = as_matrix(ur)
    if u.shape != ur.shape or u.shape[0] != u.shape[1]:
        raise UniestInputError(f'Cannot compare unitaries of shapes {u.shape} and {ur.shape}.')
    d = u.shape[0]
    value = abs(np.trace(u @ adjoint(ur))) ** 2 / d ** 2
    return min(1.0, float(value))


def fidelity_trial(strategy, gen):
    unitary = project_su(haar_unitary(strategy.dimension, gen))
    guess = strategy.measure(strategy.evolve(unitary), gen)
    return fidelity(unitary, guess)


def estimate_avg_fidelity(strategy, n, rng, workers=1):
    if n < MIN_TRIALS:
        raise UniestInputError(f'Average fidelity needs at least {MIN_TRIALS} trials, got {n}.')
    values = run_trials(partial(fidelity_trial, strategy), n, rng, workers)
    estimate = Estimate.from_values(
        values, rng.seed, strategy=strategy.name, d=strategy.dimension, copies=strategy.copies,
    )
    Logger.info('%s (d=%d, N=%d): F = %.6f +/- %.6f over %d trials',
                strategy.name, strategy.dimension, strategy.copies, estimate.mean, estimate.stderr, n)
    return estimate


def f1_closed(d):
    if d < 2:
        raise UniestInputError(f'f1 needs d >= 2, got {d}.')
    phi = max_entangled(d).amplitudes
    return ((d ** 2 - 2) / d ** 2 * np.eye(d ** 2) + np.outer(phi, phi.conj())) / (d ** 2 - 1)


def f1_integrand(v):
    d = v.shape[0]
    image = v.reshape(-1) / math.sqrt(d)
    return np.outer(image, image.conj()) * abs(np.trace(v)) ** 2


def f1_monte_carlo(d, n, rng):
    """Haar average of (V (x) I)|Phi><Phi|(V (x) I)^dagger |tr V|^2 and its largest entry stderr."""
    if n < MIN_F1_SAMPLES:
        raise UniestInputError(f'f1_monte_carlo needs at least {MIN_F1_SAMPLES} samples, got {n}.')
    mean, stderr = haar_mean_operator(f1_integrand, d, n, rng)
    return symmetrize(mean), stderr


def separable_bound(d):
    if d < 2:
        raise UniestInputError(f'separable_bound needs d >= 2, got {d}.')
    return (d + 2) / ((d + 1) * d ** 2)


def unrestricted_max(f1):
    values, _ = herm_eig(f1)
    return float(values[0])


def product_max(f1, d, starts=PRODUCT_MAX_STARTS, tol=PRODUCT_MAX_TOL,
                max_iterations=PRODUCT_MAX_ITERATIONS, seed=PRODUCT_MAX_SEED):
    """
    Largest <psi chi| f1 |psi chi> over product vectors, by alternating maximization.

    With f1 normalized as in the average-fidelity rewrite, this is directly the
    best average fidelity reachable with an unentangled probe.
    """
    f1 = as_matrix(f1)
    if f1.shape != (d * d, d * d) or not is_hermitian(f1):
        raise UniestInputError(f'product_max needs a Hermitian {d * d}x{d * d} operator.')
    tensor = f1.reshape(d, d, d, d)
    gen = RngStream(seed).generator()
    best = -math.inf
    for start in range(starts):
        chi = gen.standard_normal(d) + 1j * gen.standard_normal(d)
        chi /= np.linalg.norm(chi)
        value = -math.inf
        for _ in range(max_iterations):
            on_a = np.einsum('b,abcd,d->ac', chi.conj(), tensor, chi)
            psi = herm_eig(symmetrize(on_a))[1][:, 0]
            on_b = np.einsum('a,abcd,c->bd', psi.conj(), tensor, psi)
            values, vectors = herm_eig(symmetrize(on_b))
            chi = vectors[:, 0]
            converged = abs(values[0] - value) <= tol
            value = values[0]
            if converged:
                break
        else:
            raise UniestNumericalError(f'Alternating maximization did not converge from start {start}.')
        best = max(best, float(value))
    return best


def scan_n2(a_grid, a_meas, n, rng, workers=1):
    """Average fidelity of the two-copy covariant strategy for each preparation weight of ``a_grid``."""
    table = []
    strategy = covariant_n2(a_meas)
    for a in a_grid:
        if not 0 <= a <= 1:
            raise UniestInputError(f'Grid value {a} outside [0, 1].')
        table.append((float(a), estimate_avg_fidelity(strategy.with_preparation(phi2(a)), n, rng, workers)))
    return table


def n2_fidelity_closed(a, a_meas=OPTIMAL_N2_MEASUREMENT):
    """
    Exact average fidelity of the two-copy covariant strategy.

    The overlap <chi|V (x) V (x) I|psi> reduces to (a a'/3)(|tr V|^2 - 1) + b b', and the
    Haar moments E|tr V|^2 = 1, E|tr V|^4 = 2, E|tr V|^6 = 5 of SU(2) do the rest.
    """
    triplet = a * a_meas / 3
    singlet = math.sqrt(max(0.0, 1 - a * a)) * math.sqrt(max(0.0, 1 - a_meas * a_meas))
    norm = triplet ** 2 + singlet ** 2
    if norm == 0:
        raise UniestInputError('Preparation and fiducial have disjoint supports; no guess is ever produced.')
    return (2 * triplet ** 2 + 2 * triplet * singlet + singlet ** 2) / (4 * norm)


def n2_fidelity_quadrature(prepare, fiducial, order=16):
    """Average fidelity of the two-copy covariant strategy by exact quadrature over SU(2)."""
    points, weights = su2_quadrature(order)
    powers = kron_power_stack(points, 2)
    images = (powers @ prepare.amplitudes.reshape(4, -1)).reshape(len(points), -1)
    overlaps = np.abs(images @ fiducial.amplitudes.conj()) ** 2
    traces = np.abs(np.trace(points, axis1=1, axis2=2)) ** 2
    norm = weights @ overlaps
    if norm <= 0:
        raise UniestInputError('Preparation and fiducial have disjoint supports; no guess is ever produced.')
    return float(weights @ (overlaps * traces) / 4 / norm)


def optimize_n2_weight(a_meas=OPTIMAL_N2_MEASUREMENT):
    """Preparation weight a maximizing the exact two-copy fidelity, and the fidelity it reaches."""
    result = minimize_scalar(
        lambda a: -n2_fidelity_closed(a, a_meas),
        bounds=(0.0, 1.0),
        method='bounded',
        options={'xatol': 1e-12},
    )
    if not result.success:
        raise UniestNumericalError(f'Weight optimization failed: {result.message}')
    return float(result.x), float(-result.fun)
