# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.

"""Dense complex linear algebra shared by every simulator module.

Matrices and state vectors are plain numpy arrays of dtype complex128. The
helpers here never mutate their inputs.
"""

import logging

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
NORM_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Returns `a` as a finite 2-d complex array.

    :raises: ValueError if `a` is not two dimensional, is empty or holds
             non-finite entries.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f'Expected a non-empty matrix, got shape {m.shape}')
    if not np.all(np.isfinite(m)):
        raise ValueError('Matrix has non-finite entries')
    return m


def _square(a, what: str) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f'{what} requires a square matrix, got {m.shape}')
    return m


def kron(a, b, *more) -> np.ndarray:
    """Kronecker product of two or more matrices, left to right."""
    result = np.kron(as_matrix(a), as_matrix(b))
    for m in more:
        result = np.kron(result, as_matrix(m))
    return result


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def is_unitary(a, tol: float = NORM_TOL) -> bool:
    """True iff every entry of A^dagger A - I is within `tol` of zero.

    :raises: ValueError for non-square input.
    """
    m = _square(a, 'is_unitary')
    deviation = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(deviation)) <= tol)


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    m = _square(a, 'is_hermitian')
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def min_eigenvalue(a) -> float:
    """Smallest eigenvalue of the Hermitian part of `a`."""
    m = _square(a, 'min_eigenvalue')
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])


def validate_density(rho, tol: float = DEFAULT_TOL) -> bool:
    """Checks that `rho` is a density matrix.

    A density matrix is Hermitian, has unit trace and no eigenvalue below
    -tol. The eigenvalues come from the Hermitian part so round-off of order
    1e-14 in the anti-Hermitian part does not matter.

    :param rho: candidate matrix
    :param tol: tolerance applied to all three checks
    :returns: whether every check passed
    :raises: ValueError for non-square input.
    """
    m = _square(rho, 'validate_density')
    if not is_hermitian(m, tol):
        logger.debug('Density check failed: not Hermitian')
        return False
    trace = np.trace(m)
    if abs(trace - 1) > tol:
        logger.debug(f'Density check failed: trace {trace}')
        return False
    lowest = min_eigenvalue(m)
    if lowest < -tol:
        logger.debug(f'Density check failed: eigenvalue {lowest}')
        return False
    return True


def normalize(v) -> np.ndarray:
    """Returns `v` scaled to unit norm.

    :raises: ValueError for a zero vector.
    """
    vec = np.asarray(v, dtype=complex).ravel()
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError('Cannot normalize the zero vector')
    return vec / norm


def is_normalized(v, tol: float = NORM_TOL) -> bool:
    vec = np.asarray(v, dtype=complex).ravel()
    return bool(abs(np.vdot(vec, vec).real - 1) <= tol)


def basis_state(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ValueError(f'Basis index {index} outside 0..{dim - 1}')
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1
    return vec


def projector(v) -> np.ndarray:
    """The density matrix |v><v| of a pure state."""
    vec = np.asarray(v, dtype=complex).ravel()
    return np.outer(vec, vec.conj())


def purity(rho) -> float:
    m = _square(rho, 'purity')
    return float(np.real(np.trace(m @ m)))


def overlap(u, v) -> float:
    """|<u|v>|, insensitive to a global phase."""
    return float(abs(np.vdot(np.ravel(u), np.ravel(v))))
