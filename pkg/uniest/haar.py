"""
Haar-random unitaries, Monte Carlo integration over U(d)/SU(d) and SU(2)
axis-angle conversions.

Sampling on U(d) followed by :func:`project_su` is the SU(d) sampler: the
figure of merit ignores global phases, and the projection only removes one.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from uniest.errors import UniestInputError
from uniest.numerics import PAULIS, as_matrix, is_unitary

Logger = logging.getLogger('uniest.haar')

DET_TOL = 1e-8
AXIS_TOL = 1e-12
# number of Haar draws materialised at once by the Monte Carlo integrators
CHUNK = 4096


@dataclass(frozen=True)
class RngStream:
    """
    A reproducible source of randomness.

    ``(seed, stream)`` fixes the sequence. The stream generator and the
    per-trial generators are derived through numpy's ``SeedSequence`` spawn
    keys, so they are statistically independent and do not depend on how work
    is split between workers.
    """
    seed: int
    stream: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream < 0:
            raise UniestInputError('Seeds and stream indices must be nonnegative.')

    def generator(self):
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(self.stream,))))

    def trial(self, index):
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream, int(index)))
        return np.random.Generator(np.random.PCG64(sequence))


def as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return np.random.default_rng(rng)
    raise UniestInputError(f'Cannot draw random numbers from {rng!r}.')


@dataclass(frozen=True)
class AxisAngle:
    """exp(-i angle axis.sigma): a rotation axis and an angle in [0, pi]."""
    axis: tuple
    angle: float

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise UniestInputError('Axis must be a 3-vector.')
        norm = np.linalg.norm(axis)
        if norm == 0:
            raise UniestInputError('Axis must be nonzero.')
        if abs(norm - 1) > AXIS_TOL:
            axis = axis / norm
        angle = float(self.angle)
        if not 0 <= angle <= math.pi:
            raise UniestInputError(f'Angle {angle} outside [0, pi].')
        object.__setattr__(self, 'axis', tuple(float(x) for x in axis))
        object.__setattr__(self, 'angle', angle)


def haar_unitaries(d, size, rng):
    """
    ``size`` Haar-distributed d x d unitaries as a (size, d, d) array.

    QR of a complex Ginibre matrix; column j of Q is multiplied by the phase of
    R[j, j] so that the triangular factor has a positive diagonal.
    """
    if d < 1:
        raise UniestInputError(f'Dimension must be positive, got {d}.')
    gen = as_generator(rng)
    ginibre = (gen.standard_normal((size, d, d)) + 1j * gen.standard_normal((size, d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(ginibre)
    diagonal = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diagonal / np.abs(diagonal)
    return q * phases[:, np.newaxis, :]


def haar_unitary(d, rng):
    if d < 2:
        raise UniestInputError(f'haar_unitary needs d >= 2, got {d}.')
    return haar_unitaries(d, 1, rng)[0]


def su_phases(matrices):
    """det(U)^(1/d) with the principal branch, for a stack of matrices."""
    d = matrices.shape[-1]
    angles = np.angle(np.linalg.det(matrices))
    # np.angle returns (-pi, pi]; -pi is folded onto pi
    angles = np.where(angles <= -math.pi, math.pi, angles)
    return np.exp(1j * angles / d)


def project_su(matrix):
    matrix = as_matrix(matrix)
    if not is_unitary(matrix, 1e-8):
        raise UniestInputError('project_su needs a unitary matrix.')
    return matrix / su_phases(matrix[np.newaxis])[0]


def project_su_stack(matrices):
    return matrices / su_phases(matrices)[:, np.newaxis, np.newaxis]


def haar_special_unitary(d, rng):
    return project_su(haar_unitary(d, rng))


def haar_mean_operator(f, d, n, rng):
    """
    Entrywise Haar average of ``f(V)`` over ``n`` draws of V in SU(d).

    Returns the mean operator and the largest per-entry standard error.
    """
    if n < 2:
        raise UniestInputError('haar_mean_operator needs at least two samples.')
    gen = as_generator(rng)
    total = None
    total_sq = None
    shape = None
    done = 0
    while done < n:
        batch = project_su_stack(haar_unitaries(d, min(CHUNK, n - done), gen))
        for v in batch:
            value = as_matrix(f(v))
            if shape is None:
                shape = value.shape
                total = np.zeros(shape, dtype=complex)
                total_sq = np.zeros(shape)
            elif value.shape != shape:
                raise UniestInputError(
                    f'Integrand changed shape from {shape} to {value.shape} between draws.'
                )
            total += value
            total_sq += np.abs(value) ** 2
        done += len(batch)
    mean = total / n
    variance = np.clip((total_sq - n * np.abs(mean) ** 2) / (n - 1), 0, None)
    stderr = float(np.sqrt(variance.max() / n))
    Logger.debug('Haar mean over %d draws of a %s integrand, max stderr %.3g', n, shape, stderr)
    return mean, stderr


def trace_moments(d, n, rng, powers=(1, 2)):
    """Sample means and standard errors of |tr V|^(2k) for each k in ``powers``."""
    gen = as_generator(rng)
    traces = []
    done = 0
    while done < n:
        batch = haar_unitaries(d, min(CHUNK, n - done), gen)
        traces.append(np.abs(np.trace(batch, axis1=1, axis2=2)) ** 2)
        done += len(batch)
    squared = np.concatenate(traces)
    moments = {}
    for k in powers:
        values = squared ** k
        moments[k] = (float(values.mean()), float(values.std(ddof=1) / math.sqrt(n)))
    return moments


def su2_from_axis_angle(aa):
    axis = np.asarray(aa.axis)
    generator = sum(component * pauli for component, pauli in zip(axis, PAULIS))
    return math.cos(aa.angle) * np.eye(2) - 1j * math.sin(aa.angle) * generator


def axis_angle_from_su2(matrix):
    matrix = as_matrix(matrix)
    if matrix.shape != (2, 2) or not is_unitary(matrix, DET_TOL):
        raise UniestInputError('axis_angle_from_su2 needs a 2x2 unitary.')
    if abs(np.linalg.det(matrix) - 1) > DET_TOL:
        raise UniestInputError('axis_angle_from_su2 needs determinant 1.')
    # tr(U sigma_k) = -2i sin(angle) m_k
    scaled_axis = np.array([-np.trace(matrix @ pauli).imag / 2 for pauli in PAULIS])
    sine = np.linalg.norm(scaled_axis)
    cosine = np.trace(matrix).real / 2
    angle = math.atan2(sine, cosine)
    if sine < AXIS_TOL:
        return AxisAngle((0.0, 0.0, 1.0), angle)
    return AxisAngle(tuple(scaled_axis / sine), angle)


def random_axis_angle(rng):
    gen = as_generator(rng)
    axis = gen.standard_normal(3)
    while np.linalg.norm(axis) < AXIS_TOL:
        axis = gen.standard_normal(3)
    return AxisAngle(tuple(axis / np.linalg.norm(axis)), float(gen.uniform(0, math.pi)))


def su2_euler(alpha, beta, gamma):
    """Rz(alpha) Ry(beta) Rz(gamma) in SU(2)."""
    return np.array([
        [np.exp(-0.5j * (alpha + gamma)) * math.cos(beta / 2), -np.exp(-0.5j * (alpha - gamma)) * math.sin(beta / 2)],
        [np.exp(0.5j * (alpha - gamma)) * math.sin(beta / 2), np.exp(0.5j * (alpha + gamma)) * math.cos(beta / 2)],
    ])


def su2_quadrature(order=16):
    """
    Nodes and weights integrating functions on SU(2) against the Haar measure.

    Trapezoid rules in alpha and gamma with ``order`` points each, Gauss-Legendre
    in beta with ``2 * order`` points; exact for the polynomial integrands of
    matrix entries used here. Only SO(3) is covered (gamma in [0, 2 pi)), which
    suffices for integrands invariant under V -> -V.
    """
    periodic = 2 * math.pi * np.arange(order) / order
    nodes, weights = roots_legendre(2 * order)
    betas = math.pi * (nodes + 1) / 2
    beta_weights = weights * (math.pi / 2) * np.sin(betas) / 2
    points = []
    point_weights = []
    for alpha in periodic:
        for beta, w_beta in zip(betas, beta_weights):
            for gamma in periodic:
                points.append(su2_euler(alpha, beta, gamma))
                point_weights.append(w_beta / order ** 2)
    return np.array(points), np.array(point_weights)
