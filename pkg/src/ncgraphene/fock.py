"""Truncated Fock-space oracle for the deformed Landau spectrum.

The analytic levels band * kappa * sqrt(A n) are validated independently by
building the off-diagonal block Hamiltonian

    H = v_F * Q * [[0, i a_dag], [-i a, 0]]

on a finite number-state basis and diagonalizing it numerically.  The
eigensolver is a self-contained cyclic Jacobi iteration acting on the real
symmetric embedding [[Re, -Im], [Im, Re]] of the complex Hermitian matrix,
whose spectrum is the Hermitian spectrum with every eigenvalue doubled.

Truncation corrupts the commutator [a, a_dag] at the top Fock level only;
levels with n <= dim/2 are treated as trusted when comparing against the
analytic spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NCParams, PhysicalScales, deformation_factor

# Jacobi convergence: off-diagonal Frobenius norm below JACOBI_REL_TOL times
# the full Frobenius norm, within at most JACOBI_MAX_SWEEPS cyclic sweeps.
JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

HERMITICITY_ATOL = 1e-10


class EigenSolverError(RuntimeError):
    """Raised when the Jacobi iteration fails to reach its target residual."""


@dataclass(frozen=True)
class FockRep:
    """Truncated ladder matrices, optionally with the assembled Hamiltonian."""

    dim: int
    a_matrix: np.ndarray
    adag_matrix: np.ndarray
    h_matrix: np.ndarray | None = None


@dataclass(frozen=True)
class DefectSummary:
    """Size of the truncation-induced commutator defect [a, a_dag] - 1."""

    interior_max: float     # largest |defect| away from the top level (exactly 0)
    edge_value: float       # defect at the top level (equals -dim)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray      # 2*dim numeric eigenvalues, ascending
    analytic: np.ndarray         # 2*dim analytic values +-v_F Q sqrt(n), ascending
    interior_residual: float     # max relative deviation over trusted levels
    defect_tail: DefectSummary


def _check_dim(dim: int, minimum: int = 2) -> int:
    dim = int(dim)
    if dim < minimum:
        raise ValueError(f"Fock cutoff must be >= {minimum}, got {dim}")
    return dim


def build_ladder(dim: int) -> FockRep:
    """Annihilation/creation matrices on the first ``dim`` number states.

    a|n> = sqrt(n)|n-1>, a_dag|n> = sqrt(n+1)|n+1> inside the cutoff, so the
    annihilator is strictly upper-bidiagonal with entries sqrt(1)..sqrt(dim-1).
    """
    dim = _check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1.0, dim)), k=1)
    return FockRep(dim=dim, a_matrix=a, adag_matrix=a.T.copy())


def commutator_defect(dim: int) -> np.ndarray:
    """Diagonal of [a, a_dag] - identity on the truncated basis.

    The bidiagonal ladder product is diagonal with integer entries
    (a a_dag has n+1 below the cutoff and 0 at the top, a_dag a has n), so the
    defect is assembled exactly: all entries vanish except the last, which
    equals -dim because the cutoff removes the top rung of the algebra.
    """
    dim = _check_dim(dim)
    upper = np.arange(1.0, dim + 1.0)
    upper[-1] = 0.0                      # truncation zeroes the top of a a_dag
    lower = np.arange(0.0, dim)
    return upper - lower - 1.0


def build_hamiltonian(params: NCParams, scales: PhysicalScales, dim: int) -> FockRep:
    """Assemble the 2*dim x 2*dim block Hamiltonian for the given deformation.

    The diagonal blocks are exactly zero; the off-diagonal blocks couple the
    two spinor components through the ladder operators with strength
    v_F * Q = kappa * sqrt(A).
    """
    rep = build_ladder(dim)
    vq = scales.kappa * np.sqrt(deformation_factor(params).a_value)
    h = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
    h[:dim, dim:] = 1j * vq * rep.adag_matrix
    h[dim:, :dim] = -1j * vq * rep.a_matrix
    return FockRep(dim=dim, a_matrix=rep.a_matrix, adag_matrix=rep.adag_matrix, h_matrix=h)


# ----------------------------------------------------------------------
# Cyclic Jacobi eigensolver
# ----------------------------------------------------------------------

def _jacobi_eigvals(sym: np.ndarray,
                    rel_tol: float = JACOBI_REL_TOL,
                    max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Deterministic row-major sweep order; rotations whose pivot is already
    below the per-entry share of the target residual are skipped.
    """
    a = np.array(sym, dtype=np.float64, copy=True)
    n = a.shape[0]
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return np.zeros(n)
    stop = rel_tol * norm
    skip = stop / n
    for _ in range(max_sweeps):
        off = float(np.sqrt(max((a * a).sum() - (np.diag(a) ** 2).sum(), 0.0)))
        if off <= stop:
            return np.sort(np.diag(a).copy())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = 1.0 / (theta - np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app, aqq = a[p, p], a[q, q]
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
    off = float(np.sqrt(max((a * a).sum() - (np.diag(a) ** 2).sum(), 0.0)))
    if off <= stop:
        return np.sort(np.diag(a).copy())
    raise EigenSolverError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps; "
        f"off-diagonal residual {off:.3e} vs target {stop:.3e}"
    )


def eig_hermitian(matrix: np.ndarray) -> np.ndarray:
    """Sorted real eigenvalues of a Hermitian (or real symmetric) matrix.

    Complex input is mapped to its real symmetric embedding
    [[Re, -Im], [Im, Re]], diagonalized, and the doubled spectrum is collapsed
    back by averaging adjacent pairs.  Rejects matrices that are not Hermitian
    to within an absolute tolerance scaled by the largest entry.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()) if m.size else 0.0)
    if float(np.abs(m - m.conj().T).max()) > HERMITICITY_ATOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    if np.iscomplexobj(m) and np.abs(m.imag).max() > 0.0:
        re, im = m.real, m.imag
        embedding = np.block([[re, -im], [im, re]])
        doubled = _jacobi_eigvals(embedding)
        return doubled.reshape(-1, 2).mean(axis=1)
    return _jacobi_eigvals(np.asarray(m.real, dtype=np.float64))


def analytic_spectrum(params: NCParams, scales: PhysicalScales, dim: int) -> np.ndarray:
    """Sorted analytic eigenvalues +-v_F Q sqrt(n) for n = 0..dim-1 (2*dim values)."""
    dim = _check_dim(dim)
    vq = scales.kappa * np.sqrt(deformation_factor(params).a_value)
    ladder = vq * np.sqrt(np.arange(dim, dtype=np.float64))
    return np.sort(np.concatenate([-ladder, ladder]))


def spectrum_report(params: NCParams, scales: PhysicalScales, dim: int) -> SpectrumReport:
    """Diagonalize the truncated Hamiltonian and compare with the analytic levels.

    The relative residual is taken only over trusted levels 1 <= n <= dim/2;
    the top of the ladder is reported but never asserted against, and the two
    zero modes are excluded from the relative comparison.
    """
    dim = _check_dim(dim, minimum=8)
    rep = build_hamiltonian(params, scales, dim)
    numeric = eig_hermitian(rep.h_matrix)
    exact = analytic_spectrum(params, scales, dim)

    # position i in the sorted lists carries level index dim-1-i (negative
    # branch) for i < dim and i-dim (positive branch) otherwise
    level_idx = np.concatenate([np.arange(dim - 1, -1, -1), np.arange(dim)])
    trusted = (level_idx >= 1) & (level_idx <= dim // 2)
    residual = float(np.max(np.abs(numeric[trusted] - exact[trusted]) / np.abs(exact[trusted])))

    defect = commutator_defect(dim)
    summary = DefectSummary(
        interior_max=float(np.abs(defect[:-1]).max()),
        edge_value=float(defect[-1]),
    )
    return SpectrumReport(
        eigenvalues=numeric,
        analytic=exact,
        interior_residual=residual,
        defect_tail=summary,
    )
