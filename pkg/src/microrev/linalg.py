"""Small dense complex linear algebra for 2-, 4- and 8-dimensional spaces.

Operators are plain ``numpy`` arrays of dtype ``complex128``. Composite
spaces are always ordered system first, reservoir second, so the two-qubit
basis reads ``|g,E_g>, |g,E_e>, |e,E_g>, |e,E_e>``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

#: tolerance for algebraic identities (unitarity, idempotence, ...)
ALGEBRA_TOL = 1e-12
#: tolerance for physicality checks on density matrices
PHYSICAL_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when operator shapes or factor dimensions do not agree."""


def as_matrix(m) -> np.ndarray:
    """Return `m` as a square complex128 array, raising on non-square input."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def ket(amplitudes, tol: float = ALGEBRA_TOL) -> np.ndarray:
    """Build a normalized ket; the squared amplitudes must already sum to one."""
    v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"ket is not normalized: <v|v> = {norm2!r}")
    return v


def projector(v) -> np.ndarray:
    """Rank-one projector ``|v><v|``."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def tensor(a, b) -> np.ndarray:
    """Kronecker product with `a` as the leading (system) factor."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def conjugate_transpose(m) -> np.ndarray:
    return np.asarray(m, dtype=np.complex128).conj().T


def expectation(rho, obs) -> complex:
    """``Tr[rho @ obs]``."""
    rho = as_matrix(rho)
    obs = as_matrix(obs)
    if rho.shape != obs.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {obs.shape}")
    # Tr[AB] = sum_ij A_ij B_ji
    return complex(np.einsum("ij,ji->", rho, obs))


def partial_trace(rho, keep: int | Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out every factor of `rho` except those listed in `keep`.

    Parameters
    ----------
    rho : array_like
        Operator on the composite space.
    keep : int or sequence of int
        Index (or indices) of the factors to keep, in ascending order.
    dims : sequence of int
        Dimensions of the factors; their product must equal ``rho.shape[0]``.

    Returns
    -------
    numpy.ndarray
        Reduced operator on the kept factors.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.shape[0]:
        raise DimensionError(f"factor dimensions {dims} do not multiply to {rho.shape[0]}")
    keep = [keep] if isinstance(keep, (int, np.integer)) else sorted(int(k) for k in keep)
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"kept factor index out of range: {keep}")

    n = len(dims)
    t = rho.reshape(dims + dims)
    # einsum labels: row indices a.., column indices A..; traced factors share a label
    letters = "abcdefghijklm"
    row = [letters[i] for i in range(n)]
    col = [letters[i].upper() if i in keep else letters[i] for i in range(n)]
    out = [letters[k] for k in keep] + [letters[k].upper() for k in keep]
    reduced = np.einsum("".join(row) + "".join(col) + "->" + "".join(out), t)
    d = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(d, d)


def is_unitary(m, tol: float = ALGEBRA_TOL) -> bool:
    m = as_matrix(m)
    err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    return bool(err <= tol)


def is_hermitian(m, tol: float = PHYSICAL_TOL) -> bool:
    m = as_matrix(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of the Hermitian part of `m`."""
    m = as_matrix(m)
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def is_density_matrix(m, tol: float = PHYSICAL_TOL) -> bool:
    """Hermitian, unit trace and positive semidefinite, all within `tol`."""
    m = as_matrix(m)
    return (
        is_hermitian(m, tol)
        and abs(np.trace(m) - 1.0) <= tol
        and min_eigenvalue(m) >= -tol
    )


def density_matrix(m, tol: float = PHYSICAL_TOL) -> np.ndarray:
    """Validate and return `m` as a density matrix."""
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    if min_eigenvalue(m) < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return m
