"""Spin-ring Hamiltonians, three-site witness operators and Pauli strings.

Basis convention: a basis index ``b`` of an ``n``-qubit register stores site
``s`` (1-based) in bit ``n - s``, so site 1 is the most significant bit and
``np.kron`` ordering is preserved. Bit value 0 is ``|0>`` (sigma_z = +1).

All energies are in units of J.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

MAX_SITES = 14


class ChainSpecError(ValueError):
    """Invalid chain parameters."""


class ResourceLimitError(ChainSpecError):
    """Requested system exceeds the supported size."""


class Model(str, enum.Enum):
    HEISENBERG = "heisenberg"
    XY = "xy"


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    OPEN = "open"


@dataclass(frozen=True)
class ChainSpec:
    model: Model
    n_sites: int
    J: float = 1.0
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        n = self.n_sites
        if not isinstance(n, (int, np.integer)):
            raise ChainSpecError(f"n_sites must be an integer, got {n!r}")
        if not self.J > 0:
            raise ChainSpecError(f"coupling J must be positive, got {self.J}")
        if self.boundary is Boundary.PERIODIC:
            if n % 2 or n < 4:
                raise ChainSpecError(
                    f"periodic rings need an even number of sites >= 4, got {n}")
        elif not 2 <= n <= 4:
            raise ChainSpecError(
                f"open chains are limited to segments of 2..4 sites, got {n}")
        if n > MAX_SITES:
            raise ResourceLimitError(
                f"n_sites={n} exceeds the supported ceiling of {MAX_SITES}")

    def bonds(self) -> list[tuple[int, int]]:
        """Nearest-neighbour bonds as 1-based site pairs."""
        n = self.n_sites
        bonds = [(i, i + 1) for i in range(1, n)]
        if self.boundary is Boundary.PERIODIC:
            bonds.append((n, 1))
        return bonds


_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class PauliString:
    """``coefficient * prod_s sigma_{axis(s)}^{(s)}`` with 1-based sites."""

    coefficient: float
    factors: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        for site, axis in self.factors.items():
            if axis not in _AXES:
                raise ValueError(f"unknown Pauli axis {axis!r}")
            if site < 1:
                raise ValueError(f"site indices are 1-based, got {site}")

    def to_matrix(self, n_sites: int) -> sp.csr_array:
        """Sparse (complex) matrix of the string on ``n_sites`` qubits."""
        if any(s > n_sites for s in self.factors):
            raise ValueError("site index beyond n_sites")
        dim = 1 << n_sites
        states = np.arange(dim)
        flip = 0
        phase = np.full(dim, complex(self.coefficient))
        for site, axis in self.factors.items():
            shift = n_sites - site
            bit = (states >> shift) & 1
            sign = 1 - 2 * bit
            if axis == "x":
                flip |= 1 << shift
            elif axis == "y":
                flip |= 1 << shift
                # sigma_y|0> = i|1>, sigma_y|1> = -i|0>
                phase = phase * (1j * sign)
            else:
                phase = phase * sign
        rows = states ^ flip
        mat = sp.coo_array((phase, (rows, states)), shape=(dim, dim)).tocsr()
        return mat


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Real symmetric operator in the computational basis.

    ``matrix`` is stored sparse; ``magnetization`` (total sigma_z of each
    basis state) is present when the operator conserves it.
    """

    matrix: sp.csr_array
    n_sites: int
    magnetization: np.ndarray | None = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def __matmul__(self, other):
        return self.matrix @ other

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        if other.n_sites != self.n_sites:
            raise ValueError("operators act on different numbers of sites")
        mag = self.magnetization
        if mag is None or other.magnetization is None:
            mag = None
        return HermitianOperator((self.matrix + other.matrix).tocsr(), self.n_sites, mag)

    def scaled(self, factor: float) -> HermitianOperator:
        return HermitianOperator((factor * self.matrix).tocsr(), self.n_sites,
                                 self.magnetization)


def magnetization(n_sites: int) -> np.ndarray:
    """Total sigma_z eigenvalue of every basis state."""
    states = np.arange(1 << n_sites)
    ones = np.zeros_like(states)
    for shift in range(n_sites):
        ones += (states >> shift) & 1
    return n_sites - 2 * ones


def _bond_terms(model: Model, n_sites: int, bonds: Sequence[tuple[int, int]],
                weight: float) -> HermitianOperator:
    dim = 1 << n_sites
    states = np.arange(dim)
    diag = np.zeros(dim)
    rows, cols, vals = [states], [states], [diag]
    for i, j in bonds:
        si, sj = n_sites - i, n_sites - j
        anti = ((states >> si) & 1) != ((states >> sj) & 1)
        if model is Model.HEISENBERG:
            diag += weight * np.where(anti, -1.0, 1.0)
        # sigma_x sigma_x + sigma_y sigma_y = 2 (sigma+ sigma- + h.c.): the
        # imaginary units of the two sigma_y cancel, leaving real entries.
        src = states[anti]
        rows.append(src ^ ((1 << si) | (1 << sj)))
        cols.append(src)
        vals.append(np.full(src.size, 2.0 * weight))
    mat = sp.coo_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim)).tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return HermitianOperator(mat, n_sites, magnetization(n_sites))


def build_hamiltonian(spec: ChainSpec) -> HermitianOperator:
    """Heisenberg or isotropic XY Hamiltonian of ``spec`` (Pauli matrices)."""
    return _bond_terms(spec.model, spec.n_sites, spec.bonds(), spec.J)


def build_witness_operator(i: int, j: int, k: int, model: Model | str) -> HermitianOperator:
    """Dimensionless W_ijk = bond(i, j) + bond(j, k) on three qubits.

    The returned 8x8 operator acts on qubits ordered (i, j, k); ``j`` is the
    middle site shared by both bonds.
    """
    model = Model(model)
    if len({i, j, k}) != 3:
        raise ValueError(f"witness sites must be pairwise distinct, got {(i, j, k)}")
    if min(i, j, k) < 1:
        raise ValueError("sites are 1-based")
    return _bond_terms(model, 3, [(1, 2), (2, 3)], 1.0)


def witness_tiling(n_sites: int) -> list[tuple[int, int, int]]:
    """Triples (1,2,3), (3,4,5), ... wrapping around the ring."""
    triples = []
    for start in range(1, n_sites, 2):
        triples.append(tuple((start - 1 + d) % n_sites + 1 for d in range(3)))
    return triples


def embed_witness(triple: tuple[int, int, int], model: Model | str,
                  n_sites: int) -> HermitianOperator:
    """W for ``triple`` as an operator on the full ``n_sites`` register."""
    i, j, k = triple
    return _bond_terms(Model(model), n_sites, [(i, j), (j, k)], 1.0)


def expectation(op, state) -> float:
    """<psi|O|psi> for a vector or Tr(rho O) for a density matrix.

    ``op`` may be a :class:`HermitianOperator`, sparse matrix or ndarray;
    ``state`` a 1-d vector, a 2-d ndarray or a ``DensityMatrix``.
    """
    mat = op.matrix if isinstance(op, HermitianOperator) else op
    rho = getattr(state, "matrix", state)
    rho = np.asarray(rho)
    dim = mat.shape[0]
    if rho.shape[0] != dim:
        raise ValueError(f"dimension mismatch: operator {dim}, state {rho.shape[0]}")
    if rho.ndim == 1:
        norm = np.vdot(rho, rho).real
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"state is not normalized (norm^2 = {norm})")
        value = np.vdot(rho, mat @ rho)
    elif rho.ndim == 2:
        tr = np.trace(rho).real
        if abs(tr - 1) > 1e-10:
            raise ValueError(f"density matrix trace is {tr}, not 1")
        # Tr(rho O) = sum_ab rho_ab O_ba
        if sp.issparse(mat):
            value = mat.multiply(rho.T).sum()
        else:
            value = np.sum(rho.T * mat)
    else:
        raise ValueError("state must be a vector or a square matrix")
    return float(np.real(value))


@dataclass(frozen=True)
class SectorBlock:
    magnetization: int
    indices: np.ndarray
    block: np.ndarray


def sector_blocks(op: HermitianOperator, tol: float = 1e-12) -> list[SectorBlock]:
    """Split ``op`` into dense magnetization blocks (ascending magnetization).

    Raises ``ValueError`` if elements connecting different sectors exceed ``tol``.
    """
    mag = op.magnetization if op.magnetization is not None else magnetization(op.n_sites)
    coo = op.matrix.tocoo()
    leak = np.abs(coo.data[mag[coo.row] != mag[coo.col]])
    if leak.size and leak.max() > tol:
        raise ValueError(
            f"operator mixes magnetization sectors (max element {leak.max():.3e})")
    csr = op.matrix.tocsr()
    blocks = []
    for m in np.unique(mag):
        idx = np.flatnonzero(mag == m)
        blocks.append(SectorBlock(int(m), idx, csr[idx][:, idx].toarray()))
    return blocks
