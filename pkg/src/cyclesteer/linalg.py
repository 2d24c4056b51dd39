"""Dense complex matrix kernel for small multi-qubit operators.

Tensor products, partial trace/transpose, Hermitian eigendecomposition,
trace norm and Bloch-vector conversions, for dimensions up to 64.
All functions are pure; matrices are plain ``numpy`` complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import TOL

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
ID2 = np.eye(2, dtype=complex)

MAX_DIM = 64


class NonHermitianError(ValueError):
    """Input expected to be Hermitian is not, beyond the acceptance tolerance."""


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.abs(m - m.conj().T).max())


def require_hermitian(m: np.ndarray, tol: float = TOL.herm_accept) -> np.ndarray:
    """Symmetrize ``m`` if it is Hermitian within ``tol``, raise otherwise.

    Symmetrization guards against drift accumulating over long searches.
    """
    res = hermiticity_residual(m)
    if res > tol:
        raise NonHermitianError(f"hermiticity residual {res:.3e} exceeds {tol:.1e}")
    return (m + m.conj().T) / 2


@dataclass(frozen=True)
class DensityMatrix:
    """A density matrix with its subsystem dimension bookkeeping.

    ``mat`` is the dense complex matrix, ``dims`` the ordered subsystem
    dimensions (e.g. ``(2, 2, 2)`` for three qubits). Validated on
    construction: unit trace, Hermitian, positive semidefinite.
    """

    mat: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        n = mat.shape[0]
        if mat.shape != (n, n):
            raise ValueError(f"matrix must be square, got {mat.shape}")
        if n > MAX_DIM:
            raise ValueError(f"dimension {n} exceeds supported maximum {MAX_DIM}")
        if int(np.prod(self.dims)) != n:
            raise ValueError(f"prod(dims)={np.prod(self.dims)} != matrix dim {n}")
        if abs(np.trace(mat).real - 1.0) > TOL.trace_one or abs(np.trace(mat).imag) > TOL.trace_one:
            raise ValueError(f"trace {np.trace(mat):.12f} not 1 within {TOL.trace_one:.1e}")
        if hermiticity_residual(mat) > TOL.hermiticity:
            raise ValueError("density matrix not Hermitian within tolerance")
        wmin = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2).min())
        if wmin < -TOL.psd:
            raise ValueError(f"minimum eigenvalue {wmin:.3e} below -{TOL.psd:.1e}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray   # real, descending
    eigenvectors: np.ndarray  # orthonormal columns, eigenvectors[:, i] <-> eigenvalues[i]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(a, b)


def tensor_states(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(a.mat, b.mat), a.dims + b.dims)


def _to_tensor(mat: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    return mat.reshape(tuple(dims) * 2)


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...] | list[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep`` (original order kept)."""
    keep = sorted(set(int(k) for k in keep))
    nsub = len(rho.dims)
    if not keep or any(k < 0 or k >= nsub for k in keep):
        raise IndexError(f"keep={keep} invalid for {nsub} subsystems")
    t = _to_tensor(rho.mat, rho.dims)
    traced = [i for i in range(nsub) if i not in keep]
    for off, i in enumerate(traced):
        ax = i - off
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    kept_dims = tuple(rho.dims[k] for k in keep)
    d = int(np.prod(kept_dims))
    return DensityMatrix(t.reshape(d, d), kept_dims)


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose a single subsystem; the result may be indefinite."""
    nsub = len(rho.dims)
    if subsystem < 0 or subsystem >= nsub:
        raise IndexError(f"subsystem {subsystem} out of range for {nsub} subsystems")
    t = _to_tensor(rho.mat, rho.dims)
    axes = list(range(2 * nsub))
    axes[subsystem], axes[subsystem + nsub] = axes[subsystem + nsub], axes[subsystem]
    d = rho.dim
    return t.transpose(axes).reshape(d, d)


def herm_eig(h: np.ndarray) -> HermEig:
    """Eigendecomposition of a Hermitian matrix (descending eigenvalues)."""
    h = require_hermitian(np.asarray(h, dtype=complex))
    w, v = np.linalg.eigh(h)
    order = np.argsort(w)[::-1]
    return HermEig(eigenvalues=w[order], eigenvectors=v[:, order])


def trace_norm(g: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|."""
    g = np.asarray(g, dtype=complex)
    if g.shape[0] != g.shape[1]:
        raise ValueError("trace_norm requires a square matrix")
    if hermiticity_residual(g) <= TOL.herm_accept:
        return float(np.abs(np.linalg.eigvalsh((g + g.conj().T) / 2)).sum())
    return float(np.linalg.svd(g, compute_uv=False).sum())


def bloch_to_obs(r) -> np.ndarray:
    """r . sigma for a real 3-vector r (traceless Hermitian 2x2)."""
    r = np.asarray(r, dtype=float)
    return np.tensordot(r, PAULIS, axes=1)


def obs_to_bloch(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`bloch_to_obs` on the traceless part of ``m``."""
    return np.array([np.trace(m @ p).real / 2 for p in PAULIS])


def permute_subsystems(rho: DensityMatrix, perm: list[int] | tuple[int, ...]) -> DensityMatrix:
    """Reorder subsystems: new subsystem i is old subsystem ``perm[i]``."""
    nsub = len(rho.dims)
    if sorted(perm) != list(range(nsub)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{nsub - 1}")
    t = _to_tensor(rho.mat, rho.dims)
    axes = list(perm) + [p + nsub for p in perm]
    new_dims = tuple(rho.dims[p] for p in perm)
    d = rho.dim
    return DensityMatrix(t.transpose(axes).reshape(d, d), new_dims)
