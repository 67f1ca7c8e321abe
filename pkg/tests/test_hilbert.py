import math

import numpy as np
import pytest
import scipy.linalg

from chainent.hilbert import (Boundary, ChainSpec, ChainSpecError, HermitianOperator,
                              PauliString, ResourceLimitError, build_hamiltonian,
                              build_witness_operator, embed_witness, expectation,
                              magnetization, sector_blocks, witness_tiling)
from chainent.oracle import ghz_state, singlet_chain_state

from conftest import SX, SY, SZ, kron_hamiltonian, random_state, site_op

SPECS = [(m, n) for m in ("heisenberg", "xy") for n in (4, 6, 8)]


def test_hamiltonian_matches_kron_construction():
    for model in ("heisenberg", "xy"):
        for n in (4, 6):
            h = build_hamiltonian(ChainSpec(model, n)).dense()
            assert np.abs(h - kron_hamiltonian(model, n)).max() < 1e-14


def test_open_segment_matches_kron_construction():
    h = build_hamiltonian(ChainSpec("heisenberg", 4, boundary="open")).dense()
    assert np.abs(h - kron_hamiltonian("heisenberg", 4, periodic=False)).max() < 1e-14


def test_coupling_scales_matrix():
    a = build_hamiltonian(ChainSpec("xy", 6, J=2.5)).dense()
    b = build_hamiltonian(ChainSpec("xy", 6)).dense()
    assert np.allclose(a, 2.5 * b)


def _spin_ring4_ground():
    # sum of bonds on the 4-ring = (S1+S3).(S2+S4) = [S^2 - SA^2 - SB^2]/2 in spin units;
    # Pauli units multiply by 4
    best = np.inf
    for sa in (0, 1):
        for sb in (0, 1):
            for s in range(abs(sa - sb), sa + sb + 1):
                val = 4 * 0.5 * (s * (s + 1) - sa * (sa + 1) - sb * (sb + 1))
                best = min(best, val)
    return best


def test_heisenberg_ring4_trace_and_ground():
    h = build_hamiltonian(ChainSpec("heisenberg", 4)).dense()
    assert np.trace(h) == 0
    dense_min = scipy.linalg.eigvalsh(h).min()
    assert dense_min == pytest.approx(-8, abs=1e-12)
    assert _spin_ring4_ground() == -8


@pytest.mark.parametrize("bad", [
    dict(model="xy", n_sites=2),
    dict(model="heisenberg", n_sites=5),
    dict(model="heisenberg", n_sites=6, J=0.0),
    dict(model="heisenberg", n_sites=6, J=-1.0),
    dict(model="heisenberg", n_sites=6, boundary="open"),
    dict(model="ising", n_sites=6),
])
def test_invalid_specs_rejected(bad):
    with pytest.raises((ChainSpecError, ValueError)):
        ChainSpec(**bad)


def test_size_ceiling():
    with pytest.raises(ResourceLimitError):
        ChainSpec("heisenberg", 16)


def test_bonds_close_the_ring():
    assert ChainSpec("xy", 4).bonds() == [(1, 2), (2, 3), (3, 4), (4, 1)]
    assert ChainSpec("xy", 3, boundary=Boundary.OPEN).bonds() == [(1, 2), (2, 3)]


def _spin_triple_ground():
    # S2.(S1+S3) = [S^2 - S2^2 - S13^2]/2, times 4 for Pauli units
    vals = []
    for s13 in (0, 1):
        for s in ([0.5] if s13 == 0 else [0.5, 1.5]):
            vals.append(4 * 0.5 * (s * (s + 1) - 0.75 - s13 * (s13 + 1)))
    return min(vals)


def test_heisenberg_witness_ground():
    w = build_witness_operator(1, 2, 3, "heisenberg").dense()
    assert w.shape == (8, 8)
    assert scipy.linalg.eigvalsh(w).min() == pytest.approx(-4, abs=1e-12)
    assert _spin_triple_ground() == pytest.approx(-4)


def test_xy_witness_ground():
    w = build_witness_operator(1, 2, 3, "xy").dense()
    # one fermion on a 3-site open chain with hopping amplitude 2
    hop = np.array([[0, 2, 0], [2, 0, 2], [0, 2, 0]], dtype=float)
    eps = np.linalg.eigvalsh(hop)
    many_body_min = min(0.0, eps[eps < 0].sum())
    assert many_body_min == pytest.approx(-2 * math.sqrt(2))
    assert scipy.linalg.eigvalsh(w).min() == pytest.approx(-2 * math.sqrt(2), abs=1e-12)


def test_witness_on_singlet_times_up():
    w = build_witness_operator(1, 2, 3, "heisenberg")
    psi = np.kron(np.array([0, 1, -1, 0]) / math.sqrt(2), np.array([1, 0]))
    assert expectation(w, psi) == pytest.approx(-3, abs=1e-12)


def test_witness_rejects_repeated_sites():
    with pytest.raises(ValueError):
        build_witness_operator(1, 1, 2, "xy")


def test_expectation_examples():
    h = build_hamiltonian(ChainSpec("heisenberg", 4))
    assert expectation(h, np.eye(16) / 16) == pytest.approx(0, abs=1e-14)
    assert expectation(h, ghz_state(4)) == pytest.approx(4, abs=1e-12)
    assert expectation(h, singlet_chain_state(4)) == pytest.approx(-6, abs=1e-12)


def test_expectation_vector_and_matrix_agree(rng):
    h = build_hamiltonian(ChainSpec("xy", 6))
    psi = random_state(6, rng)
    assert expectation(h, psi) == pytest.approx(
        expectation(h, np.outer(psi, psi.conj())), abs=1e-12)


def test_expectation_errors():
    h = build_hamiltonian(ChainSpec("heisenberg", 4))
    with pytest.raises(ValueError, match="dimension"):
        expectation(h, np.ones(8) / math.sqrt(8))
    with pytest.raises(ValueError, match="normalized"):
        expectation(h, np.ones(16))
    with pytest.raises(ValueError, match="trace"):
        expectation(h, np.eye(16))


def test_pauli_string_matches_kron():
    ps = PauliString(0.5, {1: "y", 3: "x", 4: "z"})
    expected = 0.5 * site_op(SY, 1, 4) @ site_op(SX, 3, 4) @ site_op(SZ, 4, 4)
    assert np.abs(ps.to_matrix(4).toarray() - expected).max() < 1e-15
    with pytest.raises(ValueError):
        PauliString(1.0, {1: "w"})
    with pytest.raises(ValueError):
        PauliString(1.0, {5: "x"}).to_matrix(4)


def test_magnetization_labels():
    assert list(magnetization(2)) == [2, 0, 0, -2]


@pytest.mark.parametrize("model", ["heisenberg", "xy"])
def test_sector_block_sizes(model):
    blocks = sector_blocks(build_hamiltonian(ChainSpec(model, 4)))
    assert sorted(b.indices.size for b in blocks) == [1, 1, 4, 4, 6]
    assert [b.magnetization for b in blocks] == [-4, -2, 0, 2, 4]


def test_block_spectra_union_equals_full_spectrum():
    op = build_hamiltonian(ChainSpec("heisenberg", 6))
    blocked = np.sort(np.concatenate([np.linalg.eigvalsh(b.block) for b in sector_blocks(op)]))
    full = scipy.linalg.eigvalsh(op.dense())
    assert np.abs(blocked - full).max() < 1e-12


def test_sector_blocks_reject_non_conserving_operator():
    n = 4
    field = sum(PauliString(1.0, {s: "x"}).to_matrix(n) for s in range(1, n + 1))
    op = HermitianOperator(field.real.tocsr(), n)
    with pytest.raises(ValueError, match="sector"):
        sector_blocks(op)


@pytest.mark.parametrize("model,n", SPECS)
def test_hamiltonian_structure(model, n):
    op = build_hamiltonian(ChainSpec(model, n))
    m = op.matrix
    assert abs(m - m.T).max() == 0
    assert m.diagonal().sum() == 0
    coo = m.tocoo()
    mag = magnetization(n)
    assert np.all(mag[coo.row] == mag[coo.col])


@pytest.mark.parametrize("model,n", SPECS)
def test_global_spin_flip_symmetry(model, n):
    h = build_hamiltonian(ChainSpec(model, n)).dense()
    flip = np.arange(2 ** n) ^ (2 ** n - 1)   # sigma_x on every site
    assert np.array_equal(h[np.ix_(flip, flip)], h)


@pytest.mark.parametrize("model,n", SPECS)
def test_translation_invariance(model, n):
    h = build_hamiltonian(ChainSpec(model, n)).dense()
    states = np.arange(2 ** n)
    # cyclic shift of site labels: bit rotation
    shifted = ((states >> 1) | ((states & 1) << (n - 1)))
    assert np.array_equal(h[np.ix_(shifted, shifted)], h)


@pytest.mark.parametrize("model", ["heisenberg", "xy"])
@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_witness_tiling_reproduces_hamiltonian(model, n):
    spec = ChainSpec(model, n, J=1.7)
    total = None
    for triple in witness_tiling(n):
        w = embed_witness(triple, model, n)
        total = w if total is None else total + w
    diff = build_hamiltonian(spec).matrix - spec.J * total.matrix
    assert abs(diff).max() < 1e-12


def test_embedded_witness_matches_local_operator(rng):
    psi = random_state(5, rng)
    from chainent.thermo import reduced_density_matrix
    red = reduced_density_matrix(psi, (2, 3, 4))
    local = expectation(build_witness_operator(2, 3, 4, "heisenberg"), red)
    full = expectation(embed_witness((2, 3, 4), "heisenberg", 5), psi)
    assert local == pytest.approx(full, abs=1e-12)
