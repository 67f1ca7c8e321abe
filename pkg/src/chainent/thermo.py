"""Spectra, Gibbs ensembles, internal energy and reduced states."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .hilbert import ChainSpec, HermitianOperator, build_hamiltonian, sector_blocks

MAX_DENSE_SITES = 10
MAX_VECTOR_SITES = 12
PSD_TOL = 1e-10


class EigensolverError(RuntimeError):
    """The dense symmetric eigensolver failed to converge."""


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix on ``m`` qubits.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clipped to zero on construction.
    """

    def __init__(self, matrix, check: bool = True):
        rho = np.asarray(matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        dim = rho.shape[0]
        n = dim.bit_length() - 1
        if 1 << n != dim:
            raise ValueError(f"dimension {dim} is not a power of two")
        if check:
            tr = np.trace(rho).real
            if abs(tr - 1) > 1e-10:
                raise ValueError(f"trace {tr} differs from 1")
            if np.abs(rho - rho.conj().T).max() > 1e-10:
                raise ValueError("matrix is not Hermitian")
            rho = (rho + rho.conj().T) / 2
            w, v = np.linalg.eigh(rho)
            if w[0] < -PSD_TOL:
                raise ValueError(f"matrix has negative eigenvalue {w[0]:.3e}")
            if w[0] < 0:
                w = np.clip(w, 0, None)
                rho = (v * w) @ v.conj().T
                rho /= np.trace(rho).real
        self.matrix = rho
        self.n_qubits = n

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, psi) -> DensityMatrix:
        psi = np.asarray(psi, dtype=complex)
        return cls(np.outer(psi, psi.conj()))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def purity(self) -> float:
        return float(np.real(np.sum(self.matrix * self.matrix.T)))

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits})"


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending spectrum with eigenvectors kept in magnetization blocks.

    Eigenvector ``k`` lives on basis states ``block_indices[block_of[k]]``
    with amplitudes ``block_vectors[block_of[k]][:, column_of[k]]``.
    """

    eigenvalues: np.ndarray
    n_sites: int
    spec: ChainSpec | None = None
    block_indices: tuple = ()
    block_vectors: tuple = ()
    block_of: np.ndarray | None = None
    column_of: np.ndarray | None = None

    @property
    def has_vectors(self) -> bool:
        return self.block_of is not None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def vector(self, k: int) -> np.ndarray:
        if not self.has_vectors:
            raise ValueError("decomposition was computed without eigenvectors")
        b, c = self.block_of[k], self.column_of[k]
        out = np.zeros(1 << self.n_sites)
        out[self.block_indices[b]] = self.block_vectors[b][:, c]
        return out

    @cached_property
    def eigenvectors(self) -> np.ndarray:
        """Dense matrix with eigenvectors as columns (N <= 12 only)."""
        if self.n_sites > MAX_VECTOR_SITES:
            raise MemoryError(f"dense eigenvector matrix refused above N={MAX_VECTOR_SITES}")
        if not self.has_vectors:
            raise ValueError("decomposition was computed without eigenvectors")
        dim = 1 << self.n_sites
        out = np.zeros((dim, dim))
        for b, (idx, vecs) in enumerate(zip(self.block_indices, self.block_vectors)):
            cols = np.flatnonzero(self.block_of == b)
            out[np.ix_(idx, cols)] = vecs[:, self.column_of[cols]]
        return out

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def diagonalize(op: HermitianOperator, vectors: bool = True,
                spec: ChainSpec | None = None) -> SpectralDecomposition:
    """Full ascending spectrum, assembled from magnetization blocks."""
    blocks = sector_blocks(op)
    energies, owner, column = [], [], []
    indices, vecs = [], []
    for b, blk in enumerate(blocks):
        try:
            if vectors:
                w, v = scipy.linalg.eigh(blk.block)
                vecs.append(v)
            else:
                w = scipy.linalg.eigvalsh(blk.block)
        except np.linalg.LinAlgError as exc:
            raise EigensolverError(
                f"eigensolver failed on sector M={blk.magnetization}") from exc
        indices.append(blk.indices)
        energies.append(w)
        owner.append(np.full(w.size, b))
        column.append(np.arange(w.size))
    energies = np.concatenate(energies)
    order = np.argsort(energies, kind="stable")
    if not vectors:
        return SpectralDecomposition(energies[order], op.n_sites, spec)
    return SpectralDecomposition(
        energies[order], op.n_sites, spec, tuple(indices), tuple(vecs),
        np.concatenate(owner)[order], np.concatenate(column)[order])


def solve(spec: ChainSpec, vectors: bool = True) -> SpectralDecomposition:
    return diagonalize(build_hamiltonian(spec), vectors=vectors, spec=spec)


def boltzmann_weights(energies: np.ndarray, temperature: float,
                      degeneracy_tol: float = 1e-9) -> np.ndarray:
    """Normalized Gibbs weights from ground-shifted energies.

    At ``temperature == 0`` the degenerate ground space is weighted uniformly.
    """
    energies = np.asarray(energies, dtype=float)
    shifted = energies - energies.min()
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0:
        scale = degeneracy_tol * max(1.0, abs(energies.min()))
        w = (shifted <= scale).astype(float)
    else:
        w = np.exp(-shifted / temperature)
    return w / w.sum()


@dataclass(frozen=True, eq=False)
class ThermalEnsemble:
    decomposition: SpectralDecomposition
    temperature: float

    def __post_init__(self):
        if not self.temperature >= 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")

    @cached_property
    def weights(self) -> np.ndarray:
        return boltzmann_weights(self.decomposition.eigenvalues, self.temperature)


def internal_energy(ensemble: ThermalEnsemble) -> float:
    """U(T) = sum_i E_i w_i, in units of J."""
    return float(ensemble.weights @ ensemble.decomposition.eigenvalues)


def energy_curve(energies: np.ndarray, temperatures: Sequence[float]) -> np.ndarray:
    """U(T) for many temperatures sharing one spectrum."""
    return np.array([boltzmann_weights(energies, t) @ energies for t in temperatures])


def thermal_density_matrix(ensemble: ThermalEnsemble) -> DensityMatrix:
    dec = ensemble.decomposition
    if dec.n_sites > MAX_DENSE_SITES:
        raise MemoryError(f"full thermal states are capped at N={MAX_DENSE_SITES}")
    v = dec.eigenvectors
    rho = (v * ensemble.weights) @ v.T
    return DensityMatrix(rho, check=False)


def _site_axes(n_sites: int, sites: Sequence[int]) -> list[int]:
    sites = list(sites)
    if not sites or len(set(sites)) != len(sites):
        raise ValueError(f"invalid site subset {sites}")
    if len(sites) > 4:
        raise ValueError("reduced states are limited to at most 4 sites")
    if min(sites) < 1 or max(sites) > n_sites:
        raise ValueError(f"sites {sites} outside 1..{n_sites}")
    return [s - 1 for s in sites]


def reduced_density_matrix(state, sites: Sequence[int]) -> DensityMatrix:
    """Partial trace onto ``sites`` (1-based, kept in the given order)."""
    if isinstance(state, DensityMatrix):
        return _reduce_mixed(state.matrix, sites)
    arr = np.asarray(state)
    if arr.ndim == 2:
        return _reduce_mixed(arr, sites)
    n = arr.size.bit_length() - 1
    keep = _site_axes(n, sites)
    rest = [a for a in range(n) if a not in keep]
    psi = arr.reshape((2,) * n).transpose(keep + rest).reshape(1 << len(keep), -1)
    return DensityMatrix(psi @ psi.conj().T)


def _reduce_mixed(rho: np.ndarray, sites: Sequence[int]) -> DensityMatrix:
    n = rho.shape[0].bit_length() - 1
    keep = _site_axes(n, sites)
    rest = [a for a in range(n) if a not in keep]
    perm = keep + rest
    t = rho.reshape((2,) * (2 * n)).transpose(perm + [n + a for a in perm])
    dk, dr = 1 << len(keep), 1 << len(rest)
    red = np.trace(t.reshape(dk, dr, dk, dr), axis1=1, axis2=3)
    return DensityMatrix(red)


def reduced_thermal_state(ensemble: ThermalEnsemble, sites: Sequence[int],
                          cutoff: float = 1e-16) -> DensityMatrix:
    """Weighted sum of eigenvector partial traces; avoids the full 2^N x 2^N state."""
    dec = ensemble.decomposition
    keep = _site_axes(dec.n_sites, sites)
    rest = [a for a in range(dec.n_sites) if a not in keep]
    dk = 1 << len(keep)
    acc = np.zeros((dk, dk))
    w = ensemble.weights
    for k in np.flatnonzero(w > cutoff):
        psi = dec.vector(k).reshape((2,) * dec.n_sites).transpose(keep + rest)
        psi = psi.reshape(dk, -1)
        acc += w[k] * (psi @ psi.T)
    return DensityMatrix(acc / w[w > cutoff].sum())


def partial_transpose(rho: np.ndarray, dims=(2, 2), system: int = 1) -> np.ndarray:
    """Partial transpose of a bipartite matrix on subsystem ``system`` (0 or 1)."""
    da, db = dims
    t = np.asarray(rho).reshape(da, db, da, db)
    t = t.transpose(2, 1, 0, 3) if system == 0 else t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def two_qubit_entangled(rho: DensityMatrix | np.ndarray) -> tuple[bool, float]:
    """PPT test on a two-qubit state: (entangled, minimum PT eigenvalue)."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    if rho.dimension != 4:
        raise ValueError("two-qubit state required")
    lam = float(np.linalg.eigvalsh(partial_transpose(rho.matrix)).min())
    return lam < -PSD_TOL, lam


def is_ppt_all_cuts(rho: DensityMatrix) -> bool:
    """True if every single-qubit-versus-rest partial transpose is PSD."""
    n = rho.n_qubits
    for q in range(n):
        order = [q] + [a for a in range(n) if a != q]
        t = rho.matrix.reshape((2,) * (2 * n)).transpose(order + [n + a for a in order])
        m = t.reshape(1 << n, 1 << n)
        pt = partial_transpose(m, dims=(2, 1 << (n - 1)), system=0)
        if np.linalg.eigvalsh(pt).min() < -PSD_TOL:
            return False
    return True
