"""Brute-force and constructive checks of the energy and witness inequalities.

Everything here is a pure function of its inputs and an integer seed.
Random product states are evaluated through their local data (Bloch vectors
and two-site correlators), which gives the exact energy of a product state
without building the 2^N vector; ``assemble_product_state`` builds the full
vector when a cross-check or a counterexample file is needed.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from .hilbert import (ChainSpec, Model, build_hamiltonian,
                      build_witness_operator, expectation)
from .thermo import DensityMatrix, MAX_DENSE_SITES, is_ppt_all_cuts, reduced_density_matrix
from .witness import (BOUND_COEFFICIENTS, BoundClass, biseparable_witness_bound,
                      bound_value)

log = logging.getLogger(__name__)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
PAULIS = np.stack([SX, SY, SZ])

# per-axis weights of a bond: sigma_x, sigma_y, sigma_z
BOND_WEIGHTS = {Model.HEISENBERG: np.array([1.0, 1.0, 1.0]),
                Model.XY: np.array([1.0, 1.0, 0.0])}

XY_ALPHA_SQ = 4.0 / 3.0


@dataclass(frozen=True)
class VerifyConfig:
    """Sweep sizes, restarts and tolerances for :func:`verify_all`."""

    samples: int = 100_000
    sweep_sizes: tuple[int, ...] = (6, 8)
    saturation_sizes: tuple[int, ...] = (4, 6, 8)
    random_groupings: int = 20
    witness_restarts: int = 200
    segment_restarts: int = 40
    energy_restarts: int = 4
    singlet_tol: float = 1e-10        # per site
    dimer_tol: float = 1e-9           # per site
    soundness_tol: float = 1e-9       # per site
    witness_tightness: float = 1e-4
    witness_excess: float = 1e-7
    product_witness_slack: float = 1e-6
    energy_min_tol: float = 1e-7      # per site
    xy_energy_min_tol: float = 1e-6   # absolute, per chain
    segment_sup_tol: float = 1e-3


DEFAULT_CONFIG = VerifyConfig()


# ---------------------------------------------------------------- states

def singlet_chain_state(n_sites: int) -> np.ndarray:
    """Singlets (|01> - |10>)/sqrt(2) on bonds (1,2), (3,4), ..."""
    if n_sites % 2 or n_sites < 2:
        raise ValueError(f"singlet chain needs an even number of sites, got {n_sites}")
    singlet = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    psi = np.ones(1, dtype=complex)
    for _ in range(n_sites // 2):
        psi = np.kron(psi, singlet)
    return psi


def xy_dimer_block() -> np.ndarray:
    """Two-qubit projector saturating the XY 2-producible bound.

    1/4 (1 - XX - (YY + ZZ)/2 - sqrt(3)/2 (1 X - X 1)), checked to be a
    rank-one density matrix.
    """
    rho = 0.25 * (np.kron(I2, I2) - np.kron(SX, SX)
                  - 0.5 * (np.kron(SY, SY) + np.kron(SZ, SZ))
                  - math.sqrt(3) / 2 * (np.kron(I2, SX) - np.kron(SX, I2)))
    w = np.linalg.eigvalsh(rho)
    if (abs(np.trace(rho).real - 1) > 1e-12 or w.min() < -1e-12
            or np.sum(w > 1e-12) != 1):
        raise ValueError(f"dimer block is not a pure state: eigenvalues {w}")
    return rho


def xy_dimer_chain_state(n_sites: int) -> DensityMatrix:
    if n_sites % 2 or n_sites < 2:
        raise ValueError(f"dimer chain needs an even number of sites, got {n_sites}")
    if n_sites > MAX_DENSE_SITES:
        raise MemoryError(f"dense dimer chain refused above N={MAX_DENSE_SITES}")
    block = xy_dimer_block()
    rho = np.ones((1, 1), dtype=complex)
    for _ in range(n_sites // 2):
        rho = np.kron(rho, block)
    return DensityMatrix(rho, check=False)


def ghz_state(n_sites: int) -> np.ndarray:
    if n_sites < 3:
        raise ValueError("GHZ state needs at least 3 qubits")
    psi = np.zeros(1 << n_sites, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return psi


# ------------------------------------------------------- producible families

Grouping = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ProducibleFamily:
    """Partition of sites 1..n into blocks of at most ``k`` sites.

    ``params`` optionally fixes the block states (complex or real vectors,
    normalized on use); otherwise states are drawn at random.
    """

    n_sites: int
    grouping: Grouping
    params: tuple | None = None

    def __post_init__(self):
        sites = sorted(s for b in self.grouping for s in b)
        if sites != list(range(1, self.n_sites + 1)):
            raise ValueError(f"grouping {self.grouping} does not partition 1..{self.n_sites}")
        if self.params is not None and len(self.params) != len(self.grouping):
            raise ValueError("one parameter vector per block is required")

    @property
    def k(self) -> int:
        return max(len(b) for b in self.grouping)

    @classmethod
    def fully_separable(cls, n_sites: int) -> ProducibleFamily:
        return cls(n_sites, tuple((s,) for s in range(1, n_sites + 1)))

    @classmethod
    def dimers(cls, n_sites: int, offset: int = 0) -> ProducibleFamily:
        """Nearest-neighbour dimer covering; ``offset=1`` pairs (2,3), ..., (N,1)."""
        return cls(n_sites, dimer_covering(n_sites, offset))


def dimer_covering(n_sites: int, offset: int = 0) -> Grouping:
    return tuple(((i + offset - 1) % n_sites + 1, (i + offset) % n_sites + 1)
                 for i in range(1, n_sites, 2))


def random_grouping(n_sites: int, rng: np.random.Generator,
                    single_prob: float = 0.3) -> Grouping:
    """Random partition into pairs (adjacent or not) and isolated singles."""
    order = list(rng.permutation(np.arange(1, n_sites + 1)))
    blocks = []
    while order:
        a = int(order.pop())
        if order and rng.random() > single_prob:
            blocks.append((a, int(order.pop())))
        else:
            blocks.append((a,))
    return tuple(blocks)


def all_groupings(n_sites: int) -> list[Grouping]:
    """Every partition of 1..n into blocks of size one or two."""
    if n_sites > 8:
        raise ValueError("exhaustive pairing enumeration is capped at N=8")

    def rec(rest):
        if not rest:
            yield ()
            return
        a, tail = rest[0], rest[1:]
        for sub in rec(tail):
            yield ((a,),) + sub
        for idx, b in enumerate(tail):
            for sub in rec(tail[:idx] + tail[idx + 1:]):
                yield ((a, b),) + sub

    return list(rec(tuple(range(1, n_sites + 1))))


def haar_states(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` unit vectors from the unitarily invariant distribution."""
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _normalized(v, dim: int | None = None) -> np.ndarray:
    """Unit vector from complex amplitudes or a real (re..., im...) vector."""
    v = np.asarray(v)
    if dim is not None and np.isrealobj(v) and v.size == 2 * dim:
        v = v[:dim] + 1j * v[dim:]
    v = np.asarray(v, dtype=complex)
    if dim is not None and v.size != dim:
        raise ValueError(f"expected {dim} amplitudes, got {v.size}")
    return v / np.linalg.norm(v)


def assemble_product_state(n_sites: int, grouping: Grouping,
                           block_states: Sequence[np.ndarray]) -> np.ndarray:
    """Full 2^N vector of the tensor product of per-block states."""
    psi = np.ones(1, dtype=complex)
    order = []
    for block, state in zip(grouping, block_states):
        psi = np.kron(psi, state)
        order.extend(block)
    axes = np.argsort(np.asarray(order) - 1)
    return psi.reshape((2,) * n_sites).transpose(axes).reshape(-1)


def sample_producible(family: ProducibleFamily, seed: int) -> np.ndarray:
    """Pure state of ``family``; random blocks are deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    states = []
    for i, block in enumerate(family.grouping):
        if family.params is not None:
            states.append(_normalized(family.params[i], 1 << len(block)))
        else:
            states.append(haar_states(1, 1 << len(block), rng)[0])
    return assemble_product_state(family.n_sites, family.grouping, states)


# ----------------------------------------------------------- local data

def bloch_vectors(states: np.ndarray) -> np.ndarray:
    """(count, 3) Bloch vectors of single-qubit pure states (count, 2)."""
    return np.einsum("ni,mij,nj->nm", states.conj(), PAULIS, states).real


def pair_data(states: np.ndarray):
    """Bloch vectors of both qubits and diagonal correlators of pure pairs."""
    psi = states.reshape(-1, 2, 2)
    ra = np.einsum("nij,mik,nkj->nm", psi.conj(), PAULIS, psi).real
    rb = np.einsum("nij,mjk,nik->nm", psi.conj(), PAULIS, psi).real
    t = np.einsum("nij,mik,mjl,nkl->nm", psi.conj(), PAULIS, PAULIS, psi).real
    return ra, rb, t


def mixed_pair_data(rhos: np.ndarray):
    """As :func:`pair_data` for density matrices of shape (count, 4, 4)."""
    ra = np.stack([np.einsum("nij,ji->n", rhos, np.kron(p, I2)).real for p in PAULIS], 1)
    rb = np.stack([np.einsum("nij,ji->n", rhos, np.kron(I2, p)).real for p in PAULIS], 1)
    t = np.stack([np.einsum("nij,ji->n", rhos, np.kron(p, p)).real for p in PAULIS], 1)
    return ra, rb, t


def product_state_energies(spec: ChainSpec, grouping: Grouping,
                           block_states: Sequence[np.ndarray]) -> np.ndarray:
    """Exact <H> of a batch of product states from per-block local data.

    ``block_states[b]`` has shape (count, 2^|block b|), blocks of size <= 2.
    """
    w = BOND_WEIGHTS[spec.model]
    where = {}
    bloch = {}
    corr = {}
    for b, (block, states) in enumerate(zip(grouping, block_states)):
        if len(block) == 1:
            bloch[block[0]] = bloch_vectors(states)
        elif len(block) == 2:
            ra, rb, t = pair_data(states)
            bloch[block[0]], bloch[block[1]] = ra, rb
            corr[frozenset(block)] = t
        else:
            raise ValueError("blocks larger than two sites are not supported")
        for s in block:
            where[s] = b
    energy = 0.0
    for i, j in spec.bonds():
        if where[i] == where[j]:
            energy = energy + corr[frozenset((i, j))] @ w
        else:
            energy = energy + np.sum(bloch[i] * bloch[j] * w, axis=1)
    return spec.J * np.asarray(energy)


def chi_statistic(rho2) -> float:
    """Sum of squared Bloch components of both qubits and squared diagonal correlators."""
    rho = getattr(rho2, "matrix", rho2)
    ra, rb, t = mixed_pair_data(np.asarray(rho, dtype=complex)[None])
    return float(np.sum(ra ** 2) + np.sum(rb ** 2) + np.sum(t ** 2))


def xi_statistic(rho2) -> float:
    """XY analogue of chi with the correlator weight alpha^2 = 4/3."""
    rho = getattr(rho2, "matrix", rho2)
    ra, rb, t = mixed_pair_data(np.asarray(rho, dtype=complex)[None])
    beta = (t[:, 0] + t[:, 1]) / 2
    return float((ra[:, :2] ** 2).sum() + (rb[:, :2] ** 2).sum()
                 + 2 * XY_ALPHA_SQ * beta[0] ** 2)


def _segment_values(pair_states: np.ndarray, single_states: np.ndarray,
                    model: Model) -> np.ndarray:
    ri, rj, t = pair_data(pair_states)
    rk = bloch_vectors(single_states)
    if model is Model.HEISENBERG:
        return (np.sum(ri ** 2, 1) + np.sum(t ** 2, 1)
                + np.sum(rj * rk, 1) ** 2 + np.sum(rk ** 2, 1))
    beta = (t[:, 0] + t[:, 1]) / 2
    return (np.sum(ri[:, :2] ** 2, 1) + 2 * XY_ALPHA_SQ * beta ** 2
            + XY_ALPHA_SQ * np.sum(rj[:, :2] * rk[:, :2], 1) ** 2
            + np.sum(rk[:, :2] ** 2, 1))


SEGMENT_BOUND = {Model.HEISENBERG: 5.0, Model.XY: 4.5}


def segment_statistics(pair_state, single_state, model) -> float:
    """Quadratic form of a three-site segment |phi_ij> (x) |phi_k>.

    Heisenberg: |r_i|^2 + sum_mu <s_mu s_mu>_ij^2 + (r_j . r_k)^2 + |r_k|^2 <= 5.
    XY: the in-plane analogue with alpha^2 = 4/3 weights, <= 9/2.
    """
    model = Model(model)
    val = float(_segment_values(_normalized(pair_state, 4)[None],
                                _normalized(single_state, 2)[None], model)[0])
    if val > SEGMENT_BOUND[model] + 1e-12:
        raise AssertionError(f"segment form {val} exceeds {SEGMENT_BOUND[model]}")
    return val


# --------------------------------------------------------- optimization

@dataclass
class OptimizationReport:
    objective: str
    best_value: float
    restarts: int
    seeds: list[int]
    tolerance: float
    values: list[float] = field(default_factory=list, repr=False)
    best_state: np.ndarray | None = field(default=None, repr=False)
    best_label: object = None


def restart_seeds(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


_NM_OPTIONS = dict(maxiter=40_000, maxfev=40_000, xatol=1e-10, fatol=1e-12, adaptive=True)

BIPARTITIONS = ((0, (1, 2)), (1, (0, 2)), (2, (0, 1)))


def _biseparable_state(params: np.ndarray, single: int, pair: tuple[int, int]) -> np.ndarray:
    """(single qubit) x (pair) from 12 reals, returned in site order 1, 2, 3."""
    psi = _cut_ordered_state(params).reshape(2, 2, 2)
    return psi.transpose(np.argsort([single, *pair])).reshape(8)


def _cut_ordered_state(params: np.ndarray) -> np.ndarray:
    a = params[0:2] + 1j * params[2:4]
    b = params[4:8] + 1j * params[8:12]
    psi = np.outer(a, b).reshape(8)
    return psi / math.sqrt((a.real @ a.real + a.imag @ a.imag) * (b.real @ b.real + b.imag @ b.imag))


def maximize_witness_over_biseparable(model, restarts: int = 200, seed: int = 0,
                                      tol: float = 1e-9) -> OptimizationReport:
    """Largest |<W_123>| found over pure states biseparable across some cut.

    Restarts cycle through the cuts 1|23, 2|13, 3|12. Numerical maximization
    only certifies a lower bound on the supremum.
    """
    model = Model(model)
    w = build_witness_operator(1, 2, 3, model).dense()
    # W with qubits reordered to (single, pair) for each cut
    cut_ops = []
    for single, pair in BIPARTITIONS:
        order = [single, *pair]
        cut_ops.append(w.reshape((2,) * 6).transpose(order + [3 + q for q in order])
                       .reshape(8, 8))
    seeds = restart_seeds(seed, restarts)
    best, best_x, best_cut, values = -np.inf, None, 0, []
    for r, s in enumerate(seeds):
        wc = cut_ops[r % 3]

        def neg_abs(x):
            psi = _cut_ordered_state(x)
            re, im = psi.real, psi.imag
            return -abs(re @ wc @ re + im @ wc @ im)

        x0 = np.random.default_rng(s).standard_normal(12)
        res = minimize(neg_abs, x0, method="Nelder-Mead",
                       options={**_NM_OPTIONS, "xatol": 1e-6, "fatol": tol})
        values.append(-res.fun)
        if -res.fun > best:
            best, best_x, best_cut = -res.fun, res.x, r % 3
    state = _biseparable_state(best_x, *BIPARTITIONS[best_cut])
    return OptimizationReport(f"biseparable |<W>| ({model.value})", float(best),
                              restarts, seeds, tol, values, state,
                              ("1|23", "2|13", "3|12")[best_cut])


def _bloch_from_angles(x: np.ndarray) -> np.ndarray:
    th, ph = x[0::2], x[1::2]
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], 1)


def maximize_witness_over_products(model, restarts: int = 200,
                                   seed: int = 0) -> OptimizationReport:
    """Largest |<W_123>| over fully separable triples, via Bloch angles."""
    model = Model(model)
    wt = BOND_WEIGHTS[model]
    seeds = restart_seeds(seed, restarts)

    def neg_abs(x):
        r = _bloch_from_angles(x)
        return -abs(np.sum(r[0] * r[1] * wt) + np.sum(r[1] * r[2] * wt))

    values = []
    best, best_x = -np.inf, None
    for s in seeds:
        x0 = np.random.default_rng(s).uniform(0, 2 * np.pi, 6)
        res = minimize(neg_abs, x0, method="Nelder-Mead", options=_NM_OPTIONS)
        values.append(-res.fun)
        if -res.fun > best:
            best, best_x = -res.fun, res.x
    return OptimizationReport(f"product |<W>| ({model.value})", float(best), restarts,
                              seeds, _NM_OPTIONS["fatol"], values,
                              _bloch_from_angles(best_x))


def maximize_segment_form(model, restarts: int = 40, seed: int = 0) -> OptimizationReport:
    """Multistart maximization of :func:`segment_statistics`."""
    model = Model(model)
    seeds = restart_seeds(seed, restarts)

    def neg(x):
        pair = x[0:4] + 1j * x[4:8]
        single = x[8:10] + 1j * x[10:12]
        return -_segment_values((pair / np.linalg.norm(pair))[None],
                                (single / np.linalg.norm(single))[None], model)[0]

    values, best, best_x = [], -np.inf, None
    for s in seeds:
        res = minimize(neg, np.random.default_rng(s).standard_normal(12),
                       method="Nelder-Mead", options=_NM_OPTIONS)
        values.append(-res.fun)
        if -res.fun > best:
            best, best_x = -res.fun, res.x
    return OptimizationReport(f"segment form ({model.value})", float(best), restarts,
                              seeds, _NM_OPTIONS["fatol"], values, best_x)


def _local_ops(model: Model):
    """Intra-block bond operator (4x4) and per-axis single-site operators."""
    w = BOND_WEIGHTS[model]
    bond = sum(wm * np.kron(p, p) for wm, p in zip(w, PAULIS))
    return bond, w


def _block_field_operator(block, bloch, bonds, w, bond_op):
    """Effective Hamiltonian of one block with all other blocks frozen."""
    size = len(block)
    dim = 1 << size
    h = np.zeros((dim, dim), dtype=complex)
    if size == 2 and any(frozenset(b) == frozenset(block) for b in bonds):
        h += bond_op
    for i, j in bonds:
        for here, there in ((i, j), (j, i)):
            if here in block and there not in block:
                field_ = w * bloch[there]
                op = np.einsum("m,mij->ij", field_, PAULIS)
                if size == 1:
                    h += op
                elif block[0] == here:
                    h += np.kron(op, I2)
                else:
                    h += np.kron(I2, op)
    return h


def _mean_field_descent(spec: ChainSpec, grouping: Grouping, rng,
                        max_sweeps: int = 5_000, tol: float = 1e-14):
    """Alternating exact block updates; each update cannot raise the energy."""
    bonds = [b for b in spec.bonds() if b[0] != b[1]]
    bond_op, w = _local_ops(spec.model)
    states = [haar_states(1, 1 << len(blk), rng)[0] for blk in grouping]

    def local(b):
        st = states[b][None]
        blk = grouping[b]
        if len(blk) == 1:
            return {blk[0]: bloch_vectors(st)[0]}
        ra, rb, _ = pair_data(st)
        return {blk[0]: ra[0], blk[1]: rb[0]}

    bloch = {}
    for b in range(len(grouping)):
        bloch.update(local(b))
    energy = product_state_energies(spec, grouping, [s[None] for s in states])[0]
    for _ in range(max_sweeps):
        for b, blk in enumerate(grouping):
            h = _block_field_operator(blk, bloch, bonds, w, bond_op)
            _, vec = np.linalg.eigh(h)
            states[b] = vec[:, 0]
            bloch.update(local(b))
        new = product_state_energies(spec, grouping, [s[None] for s in states])[0]
        if energy - new < tol * spec.n_sites:
            energy = new
            break
        energy = new
    return float(energy), states


def minimize_energy_over_two_producible(
        spec: ChainSpec, strategies: Iterable = ("dimer",), restarts: int = 8,
        seed: int = 0, random_count: int = 10) -> OptimizationReport:
    """Lowest <H> found over 2-producible pure states.

    ``strategies`` entries: ``"dimer"`` (both nearest-neighbour coverings),
    ``"random"`` (``random_count`` random pairings with isolated singles),
    ``"enumerate"`` (every pairing, N <= 8), or an explicit grouping.
    """
    groupings: list[Grouping] = []
    rng = np.random.default_rng(seed)
    for strat in strategies:
        if strat == "dimer":
            groupings += [dimer_covering(spec.n_sites, 0), dimer_covering(spec.n_sites, 1)]
        elif strat == "random":
            groupings += [random_grouping(spec.n_sites, rng) for _ in range(random_count)]
        elif strat == "enumerate":
            groupings += all_groupings(spec.n_sites)
        else:
            groupings.append(tuple(tuple(b) for b in strat))
    seeds = restart_seeds(seed, restarts)
    best, best_state, best_group, values = np.inf, None, None, []
    for grouping in groupings:
        ProducibleFamily(spec.n_sites, grouping)
        for s in seeds:
            e, states = _mean_field_descent(spec, grouping, np.random.default_rng(s))
            values.append(e)
            if e < best:
                best, best_state, best_group = e, states, grouping
    full = assemble_product_state(spec.n_sites, best_group, best_state) \
        if spec.n_sites <= 12 else None
    return OptimizationReport(f"2-producible min <H> ({spec.model.value}, N={spec.n_sites})",
                              best, restarts * len(groupings), seeds, 1e-14, values,
                              full, best_group)


# --------------------------------------------------------------- sweeps

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    counterexample: Path | None = None


@dataclass
class VerificationReport:
    seed: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}"
                 for c in self.checks]
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def write_counterexample(directory, objective: str, seed: int, amplitudes) -> Path:
    """One amplitude per line as ``real imag`` (matrices flattened row-major)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    safe = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in objective)
    path = directory / f"{safe}_seed{seed}.txt"
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    path.write_text("".join(f"{a.real:.17g} {a.imag:.17g}\n" for a in amps))
    return path


def read_counterexample(path) -> np.ndarray:
    data = np.loadtxt(path, ndmin=2)
    return data[:, 0] + 1j * data[:, 1]


def producible_sweep(spec: ChainSpec, k: int, samples: int, seed: int,
                     n_groupings: int = 20):
    """Random k-producible states; returns (min energy, violating state or None, bound).

    k=1 is checked against the C2 bound and k=2 against C3.
    """
    rng = np.random.default_rng(seed)
    bound_class = BoundClass.C2 if k == 1 else BoundClass.C3
    bound = bound_value(spec.model, bound_class, spec.n_sites, spec.J)
    if k == 1:
        groupings = [ProducibleFamily.fully_separable(spec.n_sites).grouping]
    else:
        groupings = [dimer_covering(spec.n_sites, 0), dimer_covering(spec.n_sites, 1)]
        groupings += [random_grouping(spec.n_sites, rng)
                      for _ in range(max(n_groupings - 2, 0))]
    per = -(-samples // len(groupings))
    done, lowest, violation = 0, np.inf, None
    for grouping in groupings:
        count = min(per, samples - done)
        if count <= 0:
            break
        states = [haar_states(count, 1 << len(b), rng) for b in grouping]
        e = product_state_energies(spec, grouping, states)
        done += count
        idx = int(np.argmin(e))
        lowest = min(lowest, float(e[idx]))
        if violation is None and e[idx] < bound - 1e-9 * spec.n_sites:
            violation = assemble_product_state(spec.n_sites, grouping,
                                               [s[idx] for s in states])
    return lowest, violation, bound


def random_mixed_pairs(count: int, rng: np.random.Generator) -> np.ndarray:
    """Two-qubit density matrices G G^dag / Tr with random rank 1..4."""
    out = np.empty((count, 4, 4), dtype=complex)
    ranks = rng.integers(1, 5, size=count)
    for r in range(1, 5):
        sel = np.flatnonzero(ranks == r)
        g = rng.standard_normal((sel.size, 4, r)) + 1j * rng.standard_normal((sel.size, 4, r))
        rho = g @ g.conj().transpose(0, 2, 1)
        out[sel] = rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]
    return out


def _ok(name, passed, detail, directory=None, seed=0, state=None):
    path = None
    if not passed and state is not None and directory is not None:
        path = write_counterexample(directory, name, seed, state)
        log.warning("counterexample for %s written to %s", name, path)
    return CheckResult(name, bool(passed), detail, path)


def verify_all(seed: int = 0, config: VerifyConfig = DEFAULT_CONFIG, table=None,
               counterexample_dir=None) -> VerificationReport:
    """Run every oracle check with one master seed.

    ``table`` overrides the bound coefficients (used for fault injection);
    failing checks write their offending state to ``counterexample_dir``.
    """
    table = BOUND_COEFFICIENTS if table is None else table
    if counterexample_dir is None:
        counterexample_dir = os.environ.get("CHAINENT_OUTPUT_DIR", "counterexamples")
    cdir = counterexample_dir
    cfg = config
    checks: list[CheckResult] = []
    child = iter(restart_seeds(seed, 64))

    # saturating states sit exactly on the 2-producible bounds
    for n in cfg.saturation_sizes:
        spec = ChainSpec(Model.HEISENBERG, n)
        psi = singlet_chain_state(n)
        e = expectation(build_hamiltonian(spec), psi)
        b = bound_value(spec.model, BoundClass.C3, n, table=table)
        checks.append(_ok(f"singlet-chain saturation N={n}",
                          abs(e - b) <= cfg.singlet_tol * n,
                          f"<H>={e:.12g}, bound={b:.12g}", cdir, seed, psi))
    for n in cfg.saturation_sizes:
        spec = ChainSpec(Model.XY, n)
        rho = xy_dimer_chain_state(n)
        e = expectation(build_hamiltonian(spec), rho)
        b = bound_value(spec.model, BoundClass.C3, n, table=table)
        checks.append(_ok(f"xy-dimer saturation N={n}",
                          abs(e - b) <= cfg.dimer_tol * n,
                          f"<H>={e:.12g}, bound={b:.12g}", cdir, seed, rho.matrix))

    # soundness of the producibility bounds on random product states
    for model in Model:
        for n in cfg.sweep_sizes:
            spec = ChainSpec(model, n)
            for k, cls in ((1, BoundClass.C2), (2, BoundClass.C3)):
                s = next(child)
                lowest, bad, _ = producible_sweep(spec, k, cfg.samples, s, cfg.random_groupings)
                b = bound_value(model, cls, n, table=table)
                passed = lowest >= b - cfg.soundness_tol * n
                checks.append(_ok(f"{k}-producible sweep {model.value} N={n}", passed,
                                  f"min <H>={lowest:.12g} over {cfg.samples}, bound={b:.12g}",
                                  cdir, s, bad))

    # two-qubit and segment quadratic forms
    rng = np.random.default_rng(next(child))
    rhos = random_mixed_pairs(cfg.samples, rng)
    ra, rb, t = mixed_pair_data(rhos)
    chi = np.sum(ra ** 2, 1) + np.sum(rb ** 2, 1) + np.sum(t ** 2, 1)
    purity = np.einsum("nij,nji->n", rhos, rhos).real
    worst = int(np.argmax(chi - (4 * purity - 1)))
    passed = np.all(chi <= 4 * purity - 1 + 1e-12) and chi.max() <= 3 + 1e-12
    checks.append(_ok("chi <= 4 Tr(rho^2) - 1 <= 3", passed,
                      f"max chi={chi.max():.12g} over {cfg.samples}", cdir, seed, rhos[worst]))
    beta = (t[:, 0] + t[:, 1]) / 2
    xi = np.sum(ra[:, :2] ** 2, 1) + np.sum(rb[:, :2] ** 2, 1) + 2 * XY_ALPHA_SQ * beta ** 2
    checks.append(_ok("xi <= 3", xi.max() <= 3 + 1e-12,
                      f"max xi={xi.max():.12g} over {cfg.samples}", cdir, seed,
                      rhos[int(np.argmax(xi))]))
    for model in Model:
        pairs = haar_states(cfg.samples, 4, rng)
        singles = haar_states(cfg.samples, 2, rng)
        vals = _segment_values(pairs, singles, model)
        idx = int(np.argmax(vals))
        checks.append(_ok(f"segment bound {model.value}",
                          vals[idx] <= SEGMENT_BOUND[model] + 1e-12,
                          f"max={vals[idx]:.12g} <= {SEGMENT_BOUND[model]}", cdir, seed,
                          np.kron(pairs[idx], singles[idx])))

    # witness suprema over biseparable triples
    for model in Model:
        rep = maximize_witness_over_biseparable(model, cfg.witness_restarts, next(child))
        target = biseparable_witness_bound(model)
        passed = (abs(rep.best_value - target) <= cfg.witness_tightness
                  and rep.best_value <= target + cfg.witness_excess)
        checks.append(_ok(f"biseparable witness supremum {model.value}", passed,
                          f"best={rep.best_value:.10f}, bound={target:.10f}",
                          cdir, seed, rep.best_state))
    rep = maximize_witness_over_products(Model.HEISENBERG, cfg.witness_restarts, next(child))
    checks.append(_ok("product witness <= 2 heisenberg",
                      rep.best_value <= 2 + cfg.product_witness_slack,
                      f"best={rep.best_value:.10f}"))

    # optimized 2-producible energies: sound everywhere, tight on dimer coverings
    for model, n, tol in ((Model.HEISENBERG, 6, cfg.energy_min_tol * 6),
                          (Model.XY, 8, cfg.xy_energy_min_tol)):
        spec = ChainSpec(model, n)
        b = bound_value(model, BoundClass.C3, n, table=table)
        rep = minimize_energy_over_two_producible(spec, ("dimer",), cfg.energy_restarts,
                                                  next(child))
        checks.append(_ok(f"2-producible minimum (dimers) {model.value} N={n}",
                          abs(rep.best_value - b) <= tol,
                          f"min={rep.best_value:.12g}, bound={b:.12g}", cdir, seed,
                          rep.best_state))
        rep = minimize_energy_over_two_producible(spec, ("random",), 2, next(child),
                                                  random_count=cfg.random_groupings)
        checks.append(_ok(f"2-producible minimum (random pairings) {model.value} N={n}",
                          rep.best_value >= b - cfg.energy_min_tol * n,
                          f"min={rep.best_value:.12g}, bound={b:.12g}", cdir, seed,
                          rep.best_state))

    # GHZ: positive energy, witness value 2, PPT reduced triples
    for n in (4, 6):
        spec = ChainSpec(Model.HEISENBERG, n)
        psi = ghz_state(n)
        e = expectation(build_hamiltonian(spec), psi)
        red = reduced_density_matrix(psi, (1, 2, 3))
        wv = expectation(build_witness_operator(1, 2, 3, Model.HEISENBERG), red)
        passed = (abs(e - n) < 1e-10 and abs(wv - 2) < 1e-10 and is_ppt_all_cuts(red))
        checks.append(_ok(f"GHZ consistency N={n}", passed,
                          f"<H>={e:.12g}, <W_123>={wv:.12g}", cdir, seed, psi))
    return VerificationReport(seed, checks)


def faulty_table(c_c3: float = -1.6):
    """Bound table with the Heisenberg C3 coefficient replaced (fault injection)."""
    table = {m: dict(v) for m, v in BOUND_COEFFICIENTS.items()}
    table[Model.HEISENBERG][BoundClass.C3] = c_c3
    return table


def quick_config(samples: int = 2000) -> VerifyConfig:
    return replace(DEFAULT_CONFIG, samples=samples, witness_restarts=30,
                   energy_restarts=3, random_groupings=6, segment_restarts=10)
