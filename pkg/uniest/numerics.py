"""
Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; states are
:class:`PureState` instances carrying their subsystem dimensions. Nothing here
needs more than a few thousand entries, so everything stays dense.
"""
import logging
from dataclasses import dataclass
from functools import reduce

import numpy as np

from uniest.errors import UniestInputError

Logger = logging.getLogger('uniest.numerics')

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-12
# components smaller than this are treated as zero when fixing phases
PHASE_CUTOFF = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(value):
    matrix = np.asarray(value, dtype=complex)
    if matrix.ndim != 2:
        raise UniestInputError(f'Expected a matrix, got an array of shape {matrix.shape}.')
    if not np.all(np.isfinite(matrix)):
        raise UniestInputError('Matrix has non-finite entries.')
    return matrix


def frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector over an ordered list of subsystems."""
    amplitudes: np.ndarray
    dims: tuple

    def __post_init__(self):
        amplitudes = frozen(np.ravel(self.amplitudes))
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, 'amplitudes', amplitudes)
        object.__setattr__(self, 'dims', dims)
        if int(np.prod(dims)) != amplitudes.size:
            raise UniestInputError(
                f'Subsystem dimensions {dims} do not match a vector of length {amplitudes.size}.'
            )
        if not np.all(np.isfinite(amplitudes)):
            raise UniestInputError('State has non-finite amplitudes.')
        norm = np.vdot(amplitudes, amplitudes).real
        if abs(norm - 1) > NORM_TOL:
            raise UniestInputError(f'State is not normalized (squared norm {norm!r}).')

    @classmethod
    def normalized(cls, vector, dims):
        vector = np.ravel(np.asarray(vector, dtype=complex))
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise UniestInputError('Cannot normalize the zero vector.')
        return cls(vector / norm, dims)

    @property
    def size(self):
        return self.amplitudes.size

    def density(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def apply(self, operator):
        operator = as_matrix(operator)
        if operator.shape != (self.size, self.size):
            raise UniestInputError(
                f'Operator of shape {operator.shape} cannot act on a state of length {self.size}.'
            )
        return PureState.normalized(operator @ self.amplitudes, self.dims)

    def overlap(self, other):
        return np.vdot(self.amplitudes, other.amplitudes)

    def coefficients(self):
        """Amplitudes as a (first factor) x (rest) matrix."""
        return self.amplitudes.reshape(self.dims[0], -1)


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*operators):
    return reduce(kron, operators)


def kron_power(operator, n):
    return kron_all(*([operator] * n))


def adjoint(matrix):
    return as_matrix(matrix).conj().T


def frobenius(matrix):
    return float(np.linalg.norm(matrix, 'fro'))


def partial_trace(rho, dims, keep):
    """Reduce ``rho`` over ``dims`` to the factors listed in ``keep``."""
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise UniestInputError(f'Operator of shape {rho.shape} does not match dimensions {dims}.')
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise UniestInputError(f'Cannot keep factors {keep} of a {len(dims)}-partite operator.')

    tensor = rho.reshape(dims + dims)
    n = len(dims)
    for axis in sorted(set(range(len(dims))) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=axis, axis2=axis + n)
        n -= 1
    kept = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(kept, kept)


def canonical_phase(vector):
    """Rotate ``vector`` so its first non-negligible component is real and nonnegative."""
    vector = np.asarray(vector, dtype=complex)
    nonzero = np.flatnonzero(np.abs(vector) > PHASE_CUTOFF)
    if nonzero.size == 0:
        return vector
    lead = vector[nonzero[0]]
    return vector * (abs(lead) / lead)


def is_hermitian(matrix, tol=HERMITIAN_TOL):
    matrix = as_matrix(matrix)
    return matrix.shape[0] == matrix.shape[1] and frobenius(matrix - adjoint(matrix)) <= tol


def herm_eig(matrix):
    """
    Eigen-decomposition of a Hermitian matrix.

    Returns eigenvalues in descending order and the matching eigenvectors as
    columns, each with its first non-negligible component real and nonnegative.
    """
    matrix = as_matrix(matrix)
    if not is_hermitian(matrix):
        raise UniestInputError('herm_eig needs a Hermitian matrix; symmetrize with (H + H^dagger)/2 first.')
    values, vectors = np.linalg.eigh(matrix)
    order = np.argsort(-values, kind='stable')
    values = values[order]
    vectors = np.column_stack([canonical_phase(vectors[:, i]) for i in order])
    return values, vectors


def symmetrize(matrix):
    matrix = as_matrix(matrix)
    return (matrix + adjoint(matrix)) / 2


def is_unitary(matrix, tol=1e-10):
    matrix = as_matrix(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        return False
    identity = np.eye(matrix.shape[0])
    return frobenius(adjoint(matrix) @ matrix - identity) <= tol


def is_projector(matrix, tol=1e-10):
    matrix = as_matrix(matrix)
    return is_hermitian(matrix, tol) and frobenius(matrix @ matrix - matrix) <= tol


def require_unitary(matrix, tol=1e-10, name='matrix'):
    matrix = as_matrix(matrix)
    if not is_unitary(matrix, tol):
        raise UniestInputError(f'{name} is not unitary within {tol}.')
    return matrix


def dagger_stack(matrices):
    """Conjugate transpose of a stack of matrices with shape (k, n, n)."""
    return np.conj(np.swapaxes(matrices, -1, -2))


def kron_power_stack(matrices, n):
    """U -> U^{(x)n} for every matrix of a (k, d, d) stack."""
    result = matrices
    for _ in range(n - 1):
        k, a, _ = result.shape
        d = matrices.shape[-1]
        result = np.einsum('kij,klm->kiljm', result, matrices).reshape(k, a * d, a * d)
    return result
