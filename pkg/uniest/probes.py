"""
Probe states: the maximally entangled state, Schmidt analysis, and the
block-structured probes built from an irreducible decomposition of U^(x)N.

Irrep data is supplied by the caller; only the two-qubit triplet/singlet
decomposition ships with the library. Decompositions are checked for block
diagonality against a fixed set of random unitaries when they are built.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from uniest.errors import UniestInputError
from uniest.haar import RngStream, haar_unitaries, project_su_stack
from uniest.numerics import (
    PureState,
    canonical_phase,
    frobenius,
    frozen,
    kron,
    kron_power_stack,
    partial_trace,
    require_unitary,
)

Logger = logging.getLogger('uniest.probes')

ORTHONORMAL_TOL = 1e-10
BLOCK_TOL = 1e-9
WEIGHT_TOL = 1e-10
SCHMIDT_CUTOFF = 1e-12
BLOCK_CHECK_DRAWS = 20
BLOCK_CHECK_SEED = 20010


@dataclass(frozen=True)
class SchmidtForm:
    coefficients: tuple
    basis_a: tuple
    basis_b: tuple

    def rebuild(self):
        terms = (c * np.kron(mu, nu) for c, mu, nu in zip(self.coefficients, self.basis_a, self.basis_b))
        return sum(terms)


@dataclass(frozen=True, eq=False)
class IrrepBlock:
    """
    One isotypic block: ``multiplicity`` equivalent irreps of dimension ``dim``.

    ``basis`` holds the vectors |alpha beta k> as rows, ordered by (beta, k).
    """
    label: str
    multiplicity: int
    dim: int
    basis: np.ndarray

    def __post_init__(self):
        basis = frozen(np.atleast_2d(self.basis))
        object.__setattr__(self, 'basis', basis)
        if self.multiplicity < 1 or self.dim < 1:
            raise UniestInputError(f'Block {self.label!r} needs positive multiplicity and dimension.')
        if basis.shape[0] != self.multiplicity * self.dim:
            raise UniestInputError(
                f'Block {self.label!r} declares {self.multiplicity}x{self.dim} vectors but has {basis.shape[0]}.'
            )
        gram = basis.conj() @ basis.T
        if frobenius(gram - np.eye(len(basis))) > ORTHONORMAL_TOL:
            raise UniestInputError(f'Basis of block {self.label!r} is not orthonormal.')

    @property
    def size(self):
        return self.multiplicity * self.dim

    def copy_basis(self, beta):
        return self.basis[beta * self.dim:(beta + 1) * self.dim]

    def projector(self, beta=None):
        vectors = self.basis if beta is None else self.copy_basis(beta)
        return vectors.T @ vectors.conj()


@dataclass(frozen=True, eq=False)
class IrrepDecomposition:
    blocks: tuple
    d: int
    copies: int = 1
    verified: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'blocks', tuple(self.blocks))
        if not self.blocks:
            raise UniestInputError('A decomposition needs at least one block.')
        labels = [block.label for block in self.blocks]
        if len(set(labels)) != len(labels):
            raise UniestInputError(f'Block labels must be unique, got {labels}.')
        total = self.d ** self.copies
        for block in self.blocks:
            if block.basis.shape[1] != total:
                raise UniestInputError(
                    f'Block {block.label!r} lives in dimension {block.basis.shape[1]}, expected {total}.'
                )
        if sum(block.size for block in self.blocks) != total:
            raise UniestInputError(f'Block sizes do not add up to {total}.')
        everything = np.vstack([block.basis for block in self.blocks])
        if frobenius(everything.conj() @ everything.T - np.eye(total)) > ORTHONORMAL_TOL:
            raise UniestInputError('Union of the block bases is not orthonormal.')
        if not self.verified:
            self.check_block_diagonal()
            object.__setattr__(self, 'verified', True)

    @property
    def dimension(self):
        return self.d ** self.copies

    def block(self, label):
        for block in self.blocks:
            if block.label == label:
                return block
        raise UniestInputError(f'No block labelled {label!r}.')

    def projector(self, label):
        return self.block(label).projector()

    @property
    def multiplicity_free(self):
        return all(block.multiplicity == 1 for block in self.blocks)

    def ancilla_levels(self):
        """Ancilla indices assigned to each block, in block order."""
        levels = {}
        start = 0
        for block in self.blocks:
            levels[block.label] = range(start, start + block.size)
            start += block.size
        return levels

    def check_block_diagonal(self, draws=BLOCK_CHECK_DRAWS):
        unitaries = project_su_stack(haar_unitaries(self.d, draws, RngStream(BLOCK_CHECK_SEED).generator()))
        powers = kron_power_stack(unitaries, self.copies)
        identity = np.eye(self.dimension)
        worst = 0.0
        for block in self.blocks:
            for beta in range(block.multiplicity):
                projector = block.projector(beta)
                leak = np.einsum('ij,kjl,lm->kim', identity - projector, powers, projector)
                worst = max(worst, float(np.max(np.linalg.norm(leak, axis=(1, 2)))))
                if worst > BLOCK_TOL:
                    raise UniestInputError(
                        f'U^(x){self.copies} leaks out of copy {beta} of block {block.label!r} (by {worst:.2e}).'
                    )
        Logger.debug('Decomposition %s is block diagonal (worst leak %.1e)', [b.label for b in self.blocks], worst)


def max_entangled(d):
    if d < 2:
        raise UniestInputError(f'max_entangled needs d >= 2, got {d}.')
    return PureState(np.eye(d).reshape(-1) / math.sqrt(d), (d, d))


def schmidt_diagonal_probe(coefficients):
    """sum_i lambda_i |i i>, the Schmidt-diagonal form of a general single-use probe."""
    coefficients = np.asarray(coefficients, dtype=float)
    d = len(coefficients)
    return PureState(np.diag(coefficients).reshape(-1), (d, d))


def schmidt(psi):
    if len(psi.dims) != 2:
        raise UniestInputError(f'schmidt needs a bipartite state, got dimensions {psi.dims}.')
    u, values, vh = np.linalg.svd(psi.coefficients())
    terms = []
    for i, value in enumerate(values):
        if value <= SCHMIDT_CUTOFF:
            continue
        mu = canonical_phase(u[:, i])
        # mu = u_i * p with |p| = 1, so nu absorbs conj(p) to keep mu (x) nu fixed
        nu = vh[i, :] * (u[:, i] @ mu.conj())
        terms.append((float(value), mu, nu))

    def order(term):
        value, mu, _ = term
        components = tuple(x for z in np.round(mu, 12) for x in (z.real, z.imag))
        return (-round(value, 10), components)

    terms.sort(key=order)
    return SchmidtForm(
        coefficients=tuple(t[0] for t in terms),
        basis_a=tuple(t[1] for t in terms),
        basis_b=tuple(t[2] for t in terms),
    )


@dataclass(frozen=True)
class TransportCheck:
    deviation: float
    tolerance: float = 1e-10

    @property
    def passed(self):
        return self.deviation <= self.tolerance


def ril_transport_identity(y, d):
    """Compare (I (x) Y)|Phi> with (Y^T (x) I)|Phi>."""
    y = require_unitary(y, 1e-8, 'Y')
    if y.shape != (d, d):
        raise UniestInputError(f'Y must be {d}x{d}, got {y.shape}.')
    phi = max_entangled(d).amplitudes
    lhs = kron(np.eye(d), y) @ phi
    rhs = kron(y.T, np.eye(d)) @ phi
    return TransportCheck(float(np.max(np.abs(lhs - rhs))))


def defining_irrep(d):
    """The N = 1 decomposition: U itself is irreducible."""
    if d < 2:
        raise UniestInputError(f'defining_irrep needs d >= 2, got {d}.')
    return IrrepDecomposition((IrrepBlock('defining', 1, d, np.eye(d)),), d=d, copies=1)


SINGLET = np.array([0, 1, -1, 0]) / math.sqrt(2)
TRIPLET = np.array([
    [1, 0, 0, 0],
    [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0],
    [0, 0, 0, 1],
])


def su2_n2_irreps():
    return IrrepDecomposition(
        (
            IrrepBlock('triplet', 1, 3, TRIPLET),
            IrrepBlock('singlet', 1, 1, SINGLET),
        ),
        d=2,
        copies=2,
    )


def check_weights(irreps, weights):
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(irreps.blocks),):
        raise UniestInputError(f'Expected {len(irreps.blocks)} weights, got {weights.shape}.')
    if np.any(weights < 0):
        raise UniestInputError('Block weights must be nonnegative.')
    if abs(np.sum(weights ** 2) - 1) > WEIGHT_TOL:
        raise UniestInputError(f'Squared block weights must sum to 1, got {np.sum(weights ** 2)!r}.')
    return weights


def phi_N(irreps, weights, ancilla_dim):
    """
    sum_alpha a_alpha / sqrt(n_alpha d_alpha) sum_{beta,k} |alpha beta k>_A |e>_B.

    Ancilla levels are handed out in block order, (beta, k) lexicographic
    within a block, whether or not the block's weight vanishes.
    """
    weights = check_weights(irreps, weights)
    needed = sum(block.size for block in irreps.blocks)
    if ancilla_dim < needed:
        raise UniestInputError(f'Ancilla of dimension {ancilla_dim} cannot host {needed} orthogonal images.')
    coefficients = np.zeros((irreps.dimension, ancilla_dim), dtype=complex)
    level = 0
    for weight, block in zip(weights, irreps.blocks):
        scale = weight / math.sqrt(block.size)
        for vector in block.basis:
            coefficients[:, level] += scale * vector
            level += 1
    return PureState(coefficients.reshape(-1), (irreps.dimension, ancilla_dim))


def phi2(a):
    if not 0 <= a <= 1:
        raise UniestInputError(f'phi2 needs 0 <= a <= 1, got {a}.')
    return phi_N(su2_n2_irreps(), (a, math.sqrt(1 - a * a)), 4)


def reachable_support(irreps, ancilla_dim):
    """sum_alpha P_alpha (x) P_(ancilla levels of alpha), the span of U^(x)N (x) I applied to phi_N."""
    if not irreps.multiplicity_free:
        raise UniestInputError('Reachable supports are only built for multiplicity-free decompositions.')
    support = np.zeros((irreps.dimension * ancilla_dim,) * 2, dtype=complex)
    for block in irreps.blocks:
        levels = list(irreps.ancilla_levels()[block.label])
        ancilla = np.zeros((ancilla_dim, ancilla_dim))
        ancilla[levels, levels] = 1
        support += kron(block.projector(), ancilla)
    return support


def twirl(operator, irreps, ancilla_dim):
    """
    Exact Haar average of (U^(x)N (x) I) X (U^(x)N (x) I)^dagger.

    By Schur's lemma each block contributes P_alpha (x) tr_A[(P_alpha (x) I) X (P_alpha (x) I)] / d_alpha;
    blocks with different labels are taken to be inequivalent.
    """
    if not irreps.multiplicity_free:
        raise UniestInputError('The exact twirl needs a multiplicity-free decomposition.')
    dims = (irreps.dimension, ancilla_dim)
    result = np.zeros_like(operator, dtype=complex)
    for block in irreps.blocks:
        projector = kron(block.projector(), np.eye(ancilla_dim))
        reduced = partial_trace(projector @ operator @ projector, dims, [1])
        result += kron(block.projector(), reduced) / block.dim
    return result
