"""Linear inversion machinery for Hermitian process matrices.

A Hermitian D x D matrix has D**2 real degrees of freedom.  The fixed
parameter order used everywhere in this package is:

    [chi_00, chi_11, ..., chi_(D-1)(D-1),
     Re chi_01, Im chi_01, Re chi_02, Im chi_02, ..., Re chi_(D-2)(D-1), ...]

i.e. all diagonals first, then (Re, Im) pairs over the strict upper
triangle in row-major order.  Any linear functional of chi of the form
row(chi) = sum_mn M[m, n] chi[m, n] then becomes a real-linear functional
of this parameter vector, which is what the solvers below consume.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

__all__ = [
    "flatten_hermitian",
    "unflatten_hermitian",
    "real_design_from_amplitudes",
    "real_design_from_functionals",
    "upper_triangle_indices",
]


def upper_triangle_indices(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Row/column indices of the strict upper triangle, row-major."""
    return np.triu_indices(dim, k=1)


def flatten_hermitian(chi: np.ndarray) -> np.ndarray:
    """Real parameter vector of a Hermitian matrix (see module docstring)."""
    chi = np.asarray(chi, dtype=complex)
    dim = chi.shape[0]
    rows, cols = upper_triangle_indices(dim)
    upper = chi[rows, cols]
    out = np.empty(dim * dim)
    out[:dim] = chi.diagonal().real
    out[dim::2] = upper.real
    out[dim + 1 :: 2] = upper.imag
    return out


def unflatten_hermitian(x: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of `flatten_hermitian`; always returns an exactly Hermitian matrix."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dim * dim,):
        raise ValueError(f"parameter vector length {x.shape} != {dim * dim}")
    chi = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(chi, x[:dim])
    rows, cols = upper_triangle_indices(dim)
    upper = x[dim::2] + 1j * x[dim + 1 :: 2]
    chi[rows, cols] = upper
    chi[cols, rows] = upper.conj()
    return chi


def real_design_from_amplitudes(c: np.ndarray) -> np.ndarray:
    """Real design matrix of outcome probabilities q_k = (C chi C^dag)_kk.

    `c` holds measurement amplitudes c[k, m] = <outcome_k| E_m |input>; the
    returned matrix A satisfies q = A @ flatten_hermitian(chi) exactly.
    """
    c = np.asarray(c, dtype=complex)
    n_rows, dim = c.shape
    out = np.empty((n_rows, dim * dim))
    out[:, :dim] = (c * c.conj()).real
    rows, cols = upper_triangle_indices(dim)
    cross = c[:, rows] * c[:, cols].conj()
    out[:, dim::2] = 2.0 * cross.real
    out[:, dim + 1 :: 2] = -2.0 * cross.imag
    return out


def real_design_from_functionals(m: np.ndarray) -> np.ndarray:
    """Real design matrix of general complex functionals of chi.

    `m` has shape (R, D, D) with row r representing the functional
    b_r = sum_mn m[r, m, n] chi[m, n].  Returns the real (2R, D**2) matrix
    mapping the parameter vector to [Re b; Im b].
    """
    m = np.asarray(m, dtype=complex)
    n_rows, dim, _ = m.shape
    cplx = np.empty((n_rows, dim * dim), dtype=complex)
    cplx[:, :dim] = np.diagonal(m, axis1=1, axis2=2)
    rows, cols = upper_triangle_indices(dim)
    cplx[:, dim::2] = m[:, rows, cols] + m[:, cols, rows]
    cplx[:, dim + 1 :: 2] = 1j * (m[:, rows, cols] - m[:, cols, rows])
    return np.vstack([cplx.real, cplx.imag])


def stack_real_rhs(b: np.ndarray) -> np.ndarray:
    """Right-hand side matching `real_design_from_functionals` row stacking."""
    b = np.asarray(b, dtype=complex)
    return np.concatenate([b.real, b.imag])


def solve_hermitian(
    a_real: np.ndarray, b_real: np.ndarray, rcond: Optional[float] = None
) -> np.ndarray:
    """Least-squares solution of A x = b over the real parameter vector."""
    x, *_ = np.linalg.lstsq(np.asarray(a_real, float), np.asarray(b_real, float), rcond=rcond)
    return x
