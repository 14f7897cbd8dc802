"""
Measurement strategies: a probe to prepare plus a rule turning the evolved
probe into a guess for the unknown unitary.

Continuous (covariant) measurements are simulated by rejection sampling
against the Haar measure: a proposal W is accepted with probability
|<chi| (W^dagger)^(x)N (x) I |psi>|^2, which is the covariant density divided by its
scale constant.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np

from uniest.errors import UniestInputError, UniestInternalInconsistency, UniestSamplingError
from uniest.haar import as_generator, haar_unitaries, project_su, project_su_stack
from uniest.numerics import (
    PureState,
    as_matrix,
    frobenius,
    is_hermitian,
    is_projector,
    is_unitary,
    kron_power,
    kron_power_stack,
    symmetrize,
)
from uniest.probes import (
    defining_irrep,
    max_entangled,
    phi2,
    phi_N,
    reachable_support,
    su2_n2_irreps,
    twirl,
)

Logger = logging.getLogger('uniest.strategies')

PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
PROBABILITY_TOL = 1e-9
GUESS_TOL = 1e-8
DEFAULT_MAX_ATTEMPTS = 10**6
OPTIMAL_N2_PREPARATION = math.sqrt((5 + math.sqrt(5)) / 10)
OPTIMAL_N2_MEASUREMENT = math.sqrt(9 / 10)


@dataclass(frozen=True, eq=False)
class DiscretePOVM:
    elements: tuple
    guesses: tuple

    def __post_init__(self):
        elements = tuple(as_matrix(g) for g in self.elements)
        guesses = tuple(as_matrix(u) for u in self.guesses)
        if len(elements) != len(guesses):
            raise UniestInputError(f'{len(elements)} POVM elements but {len(guesses)} guesses.')
        if not elements:
            raise UniestInputError('A POVM needs at least one element.')
        object.__setattr__(self, 'elements', elements)
        object.__setattr__(self, 'guesses', guesses)

    @property
    def dimension(self):
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class ValidationReport:
    min_eigenvalue: float
    completeness_deviation: float
    guesses_unitary: bool
    hermitian: bool = True
    psd_tolerance: float = PSD_TOL
    completeness_tolerance: float = COMPLETENESS_TOL

    @property
    def positive(self):
        return self.hermitian and self.min_eigenvalue >= -self.psd_tolerance

    @property
    def complete(self):
        return self.completeness_deviation <= self.completeness_tolerance

    @property
    def passed(self):
        return self.positive and self.complete and self.guesses_unitary


def validate_povm(povm, psd_tolerance=PSD_TOL, completeness_tolerance=COMPLETENESS_TOL):
    dimension = povm.dimension
    min_eigenvalue = math.inf
    hermitian = True
    total = np.zeros((dimension, dimension), dtype=complex)
    for element in povm.elements:
        if element.shape != (dimension, dimension):
            raise UniestInputError(f'POVM element of shape {element.shape}, expected {(dimension, dimension)}.')
        hermitian = hermitian and is_hermitian(element, psd_tolerance)
        min_eigenvalue = min(min_eigenvalue, float(np.linalg.eigvalsh(symmetrize(element))[0]))
        total += element
    return ValidationReport(
        min_eigenvalue=min_eigenvalue,
        completeness_deviation=frobenius(total - np.eye(dimension)),
        guesses_unitary=all(is_unitary(u, GUESS_TOL) for u in povm.guesses),
        hermitian=hermitian,
        psd_tolerance=psd_tolerance,
        completeness_tolerance=completeness_tolerance,
    )


def born_probabilities(povm, psi):
    if psi.size != povm.dimension:
        raise UniestInputError(f'State of length {psi.size} cannot be measured by a {povm.dimension}-dimensional POVM.')
    amplitudes = psi.amplitudes
    probabilities = np.array([np.vdot(amplitudes, element @ amplitudes).real for element in povm.elements])
    if probabilities.min() < -PROBABILITY_TOL:
        raise UniestInternalInconsistency(f'Negative outcome probability {probabilities.min()!r}.')
    total = probabilities.sum()
    if abs(total - 1) > PROBABILITY_TOL:
        raise UniestInternalInconsistency(f'Outcome probabilities sum to {total!r}.')
    probabilities = np.clip(probabilities, 0, None)
    return probabilities / probabilities.sum()


def measure_discrete(povm, psi, rng):
    probabilities = born_probabilities(povm, psi)
    outcome = int(as_generator(rng).choice(len(probabilities), p=probabilities))
    return outcome, povm.guesses[outcome]


BELL_LABELS = ('phi+', 'psi+', 'psi-', 'phi-')


def bell_vectors():
    root = 1 / math.sqrt(2)
    return (
        np.array([root, 0, 0, root]),
        np.array([0, root, root, 0]),
        np.array([0, root, -root, 0]),
        np.array([root, 0, 0, -root]),
    )


def guess_for_entangled(vector, d):
    """The g in SU(d) with (g (x) I)|Phi> proportional to ``vector``."""
    return project_su(math.sqrt(d) * np.asarray(vector, dtype=complex).reshape(d, d))


def bell_povm():
    vectors = bell_vectors()
    return DiscretePOVM(
        elements=tuple(np.outer(v, v.conj()) for v in vectors),
        guesses=tuple(guess_for_entangled(v, 2) for v in vectors),
    )


@dataclass(frozen=True, eq=False)
class CovariantSampler:
    """
    The covariant measurement {c (W^(x)N (x) I)|chi><chi|(W^(x)N (x) I)^dagger dW, guess W}.
    """
    fiducial: PureState
    scale: float
    copies: int
    dimension: int
    max_attempts: int = DEFAULT_MAX_ATTEMPTS

    def __post_init__(self):
        if self.fiducial.dims[0] != self.dimension ** self.copies:
            raise UniestInputError('Fiducial state does not match the dimension and copy count.')
        if self.scale <= 0:
            raise UniestInputError(f'Scale must be positive, got {self.scale}.')

    @classmethod
    def from_probe(cls, irreps, weights, ancilla_dim, max_attempts=DEFAULT_MAX_ATTEMPTS):
        fiducial = phi_N(irreps, weights, ancilla_dim)
        support = reachable_support(irreps, ancilla_dim)
        average = twirl(fiducial.density(), irreps, ancilla_dim)
        rank = round(np.trace(support).real)
        captured = np.trace(support @ average @ support).real
        if captured <= 0:
            raise UniestInputError('Fiducial state has no weight on the reachable support.')
        return cls(fiducial, rank / captured, irreps.copies, irreps.d, max_attempts)

    @property
    def ancilla_dim(self):
        return self.fiducial.dims[1]

    @property
    def batch_size(self):
        return min(256, max(8, math.ceil(2 * self.scale)))

    def images(self, unitaries):
        """(W^(x)N (x) I)|chi> for each W of a stack, as rows."""
        powers = kron_power_stack(unitaries, self.copies)
        coefficients = self.fiducial.coefficients()
        return (powers @ coefficients).reshape(len(unitaries), -1)

    def overlaps(self, unitaries, psi):
        return self.images(unitaries).conj() @ psi.amplitudes

    def density(self, unitary, psi):
        return self.scale * abs(self.overlaps(unitary[np.newaxis], psi)[0]) ** 2

    def sample(self, psi, rng):
        if psi.size != self.fiducial.size:
            raise UniestInputError(f'State of length {psi.size} does not fit a fiducial of length {self.fiducial.size}.')
        gen = as_generator(rng)
        attempts = 0
        while attempts < self.max_attempts:
            size = min(self.batch_size, self.max_attempts - attempts)
            proposals = project_su_stack(haar_unitaries(self.dimension, size, gen))
            acceptance = np.abs(self.overlaps(proposals, psi)) ** 2
            accepted = np.flatnonzero(gen.random(size) < acceptance)
            if accepted.size:
                return proposals[accepted[0]]
            attempts += size
        raise UniestSamplingError(
            f'No proposal accepted in {self.max_attempts} attempts; the covariant density is probably not normalized.'
        )


def covariant_completeness(sampler, support, n, rng):
    """Frobenius distance between the Monte Carlo integral of the scaled fiducial family and ``support``."""
    support = as_matrix(support)
    if not is_projector(support):
        raise UniestInputError('Support must be a projector.')
    gen = as_generator(rng)
    total = np.zeros(support.shape, dtype=complex)
    done = 0
    while done < n:
        size = min(4096, n - done)
        images = sampler.images(project_su_stack(haar_unitaries(sampler.dimension, size, gen)))
        total += np.einsum('ki,kj->ij', images, images.conj())
        done += size
    mean = sampler.scale * total / n
    deviation = frobenius(support @ mean @ support - support)
    Logger.debug('Completeness of scale %.4g over %d draws: deviation %.4g', sampler.scale, n, deviation)
    return deviation


@dataclass(frozen=True, eq=False, kw_only=True)
class Strategy:
    """A probe to prepare and a measurement producing a guess."""
    name: str
    dimension: int
    copies: int
    prepare: PureState
    right_factor: np.ndarray = None

    def evolve(self, unitary):
        """U^(x)N (x) I_B applied to the prepared probe."""
        power = kron_power(unitary, self.copies)
        coefficients = self.prepare.amplitudes.reshape(power.shape[0], -1)
        return PureState((power @ coefficients).reshape(-1), self.prepare.dims)

    def guess(self, psi, rng):
        raise NotImplementedError

    def measure(self, psi, rng):
        guess = self.guess(psi, rng)
        if self.right_factor is not None:
            guess = guess @ self.right_factor
        if not is_unitary(guess, GUESS_TOL):
            raise UniestInternalInconsistency(f'Strategy {self.name!r} produced a non-unitary guess.')
        return guess

    def with_preparation(self, state):
        if state.size != self.prepare.size:
            raise UniestInputError(f'Preparation of length {state.size} does not replace one of length {self.prepare.size}.')
        return dataclasses.replace(self, prepare=state)

    def map_guesses(self, right):
        """The same strategy with every guess W replaced by W @ right."""
        right = as_matrix(right)
        if self.right_factor is not None:
            right = self.right_factor @ right
        return dataclasses.replace(self, right_factor=right)


@dataclass(frozen=True, eq=False, kw_only=True)
class BlindStrategy(Strategy):

    def guess(self, psi, rng):
        return np.eye(self.dimension, dtype=complex)


@dataclass(frozen=True, eq=False, kw_only=True)
class DiscreteStrategy(Strategy):
    povm: DiscretePOVM

    def guess(self, psi, rng):
        _, guess = measure_discrete(self.povm, psi, rng)
        return guess


@dataclass(frozen=True, eq=False, kw_only=True)
class CovariantStrategy(Strategy):
    sampler: CovariantSampler

    def guess(self, psi, rng):
        return self.sampler.sample(psi, rng)


def blind_strategy(d):
    if d < 2:
        raise UniestInputError(f'blind_strategy needs d >= 2, got {d}.')
    probe = np.zeros(d)
    probe[0] = 1
    return BlindStrategy(name='blind', dimension=d, copies=1, prepare=PureState(probe, (d,)))


def discrete_strategy(povm, prepare, name='discrete', dimension=None):
    report = validate_povm(povm)
    if not report.passed:
        raise UniestInputError(f'POVM failed validation: {report}.')
    if prepare.size != povm.dimension:
        raise UniestInputError('Preparation does not match the POVM dimension.')
    return DiscreteStrategy(
        name=name,
        dimension=dimension or prepare.dims[0],
        copies=1,
        prepare=prepare,
        povm=povm,
    )


def bell_strategy():
    return discrete_strategy(bell_povm(), max_entangled(2), name='bell', dimension=2)


def covariant_n1(d, max_attempts=DEFAULT_MAX_ATTEMPTS):
    sampler = CovariantSampler.from_probe(defining_irrep(d), (1.0,), d, max_attempts)
    return CovariantStrategy(
        name='covariant', dimension=d, copies=1, prepare=max_entangled(d), sampler=sampler,
    )


def covariant_n2(a_meas=OPTIMAL_N2_MEASUREMENT, a_prep=OPTIMAL_N2_PREPARATION, max_attempts=DEFAULT_MAX_ATTEMPTS):
    if not 0 <= a_meas <= 1:
        raise UniestInputError(f'Measurement weight must lie in [0, 1], got {a_meas}.')
    sampler = CovariantSampler.from_probe(
        su2_n2_irreps(), (a_meas, math.sqrt(1 - a_meas * a_meas)), 4, max_attempts,
    )
    return CovariantStrategy(
        name='covariant-n2', dimension=2, copies=2, prepare=phi2(a_prep), sampler=sampler,
    )
