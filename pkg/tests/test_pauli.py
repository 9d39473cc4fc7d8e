import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsee_bench.errors import SizeMismatch, TooLarge
from gsee_bench.fcidump import FciDump
from gsee_bench.fci import build_basis, build_fci_matrix
from gsee_bench.pauli import (
    PauliString,
    PauliSum,
    jordan_wigner_hamiltonian,
    jw_annihilation,
    jw_creation,
    pauli_multiply,
)

from conftest import random_fcidump, sector_indices

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_matrix(label: str) -> np.ndarray:
    """Reference tensor product with qubit 0 least significant."""
    mat = np.array([[1.0 + 0j]])
    for ch in label:  # qubit q is character q; LSB first means right-to-left kron
        mat = np.kron(SINGLE[ch], mat)
    return mat


def test_label_roundtrip():
    for label in ("I", "X", "XZIY", "YYZX"):
        assert PauliString.from_label(label).label == label


def test_single_qubit_multiplication_table():
    x = PauliString.from_label("X")
    z = PauliString.from_label("Z")
    y = PauliString.from_label("Y")
    prod, phase = pauli_multiply(x, z)
    assert prod == y and phase == -1j
    prod, phase = pauli_multiply(z, x)
    assert prod == y and phase == 1j
    prod, phase = pauli_multiply(x, y)
    assert prod == z and phase == 1j


@given(st.integers(0, 15), st.integers(0, 15))
def test_self_product_is_identity(x_mask, z_mask):
    p = PauliString(4, x_mask, z_mask)
    prod, phase = pauli_multiply(p, p)
    assert prod.is_identity
    assert phase == 1


@settings(max_examples=50)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_product_matches_matrix_product(xa, za, xb, zb):
    a = PauliString(4, xa, za)
    b = PauliString(4, xb, zb)
    prod, phase = pauli_multiply(a, b)
    lhs = a.to_matrix() @ b.to_matrix()
    rhs = phase * prod.to_matrix()
    assert np.allclose(lhs, rhs)


def test_string_matrix_matches_kron(rng):
    for _ in range(25):
        n = int(rng.integers(1, 5))
        label = "".join(rng.choice(list("IXYZ")) for _ in range(n))
        ps = PauliString.from_label(label)
        assert np.allclose(ps.to_matrix(), kron_matrix(label))


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        pauli_multiply(PauliString(2), PauliString(3))


def test_weight_and_support():
    ps = PauliString.from_label("XIZY")
    assert ps.weight == 3
    assert ps.support == (0, 2, 3)


def test_to_matrix_conventions():
    z0 = PauliSum(1, {PauliString.from_label("Z"): 1.0})
    assert np.allclose(z0.to_matrix(), np.diag([1.0, -1.0]))
    x0 = PauliSum(2, {PauliString.from_label("XI"): 1.0})
    m = x0.to_matrix()
    expected = np.zeros((4, 4))
    expected[0, 1] = expected[1, 0] = expected[2, 3] = expected[3, 2] = 1.0
    assert np.allclose(m, expected)


def test_too_large_cap():
    with pytest.raises(TooLarge):
        PauliSum.identity(15).to_matrix()


def test_simplify_prunes_and_is_idempotent(rng):
    ps = PauliString.from_label("XZ")
    s = PauliSum.from_terms(2, [(ps, 0.5), (ps, -0.5), (PauliString.from_label("YY"), 1.0 + 1e-12j)])
    simplified = s.simplify()
    assert len(simplified) == 1
    coeff = simplified.coefficient(PauliString.from_label("YY"))
    assert coeff.imag == 0.0
    again = simplified.simplify()
    assert again.terms == simplified.terms


def test_simplify_order_independent(rng):
    terms = [
        (PauliString(3, int(rng.integers(0, 8)), int(rng.integers(0, 8))), complex(rng.normal()))
        for _ in range(30)
    ]
    a = PauliSum.from_terms(3, terms).simplify()
    order = rng.permutation(len(terms))
    b = PauliSum.from_terms(3, [terms[i] for i in order]).simplify()
    assert a.terms == b.terms


def test_text_roundtrip():
    s = PauliSum.from_terms(
        3,
        [(PauliString.from_label("XZI"), 0.25), (PauliString.from_label("IIY"), -1.5)],
    ).simplify()
    assert PauliSum.from_text(s.to_text()).terms == s.terms


def test_jw_number_operator():
    d = FciDump.from_tensors(1, 1, 1, h1=np.array([[0.7]]))
    h = jordan_wigner_hamiltonian(d)
    ident = PauliString.identity(2)
    z0 = PauliString.from_label("ZI")
    z1 = PauliString.from_label("IZ")
    assert h.coefficient(ident) == pytest.approx(0.7)
    assert h.coefficient(z0) == pytest.approx(-0.35)
    assert h.coefficient(z1) == pytest.approx(-0.35)
    assert len(h) == 3


def test_jw_core_energy_only():
    d = FciDump(norb=1, nelec=0, e_core=-2.5)
    h = jordan_wigner_hamiltonian(d)
    assert len(h) == 1
    assert h.coefficient(PauliString.identity(2)) == pytest.approx(-2.5)


def test_jw_coefficients_real(rng):
    d = random_fcidump(rng, 2)
    h = jordan_wigner_hamiltonian(d)
    for coeff in h.terms.values():
        assert coeff.imag == 0.0


def test_jw_matrix_hermitian(rng):
    d = random_fcidump(rng, 2)
    m = jordan_wigner_hamiltonian(d).to_matrix()
    assert np.allclose(m, m.conj().T)


def test_jw_spectrum_matches_fci_sector(rng):
    for _ in range(5):
        norb = int(rng.integers(1, 4))
        d = random_fcidump(rng, norb)
        m = jordan_wigner_hamiltonian(d).to_matrix()
        idx = sector_indices(2 * norb, d.n_alpha, d.n_beta)
        qubit_eigs = np.linalg.eigvalsh(m[np.ix_(idx, idx)])
        basis = build_basis(norb, d.n_alpha, d.n_beta)
        fci_eigs = np.linalg.eigvalsh(build_fci_matrix(d, basis).toarray())
        assert np.abs(qubit_eigs - fci_eigs).max() < 1e-8


def test_jw_spectrum_matches_fci_sector_four_orbitals(rng):
    d = random_fcidump(rng, 4, 4, 0)
    m = jordan_wigner_hamiltonian(d).to_matrix(max_qubits=8)
    idx = sector_indices(8, 2, 2)
    qubit_eigs = np.linalg.eigvalsh(m[np.ix_(idx, idx)])
    fci_eigs = np.linalg.eigvalsh(build_fci_matrix(d, build_basis(4, 2, 2)).toarray())
    assert np.abs(qubit_eigs - fci_eigs).max() < 1e-8


def test_ladder_anticommutation(rng):
    n = 6
    ident = np.eye(1 << n)
    for p in range(n):
        for q in range(n):
            a_p = jw_annihilation(n, p).to_matrix()
            adag_q = jw_creation(n, q).to_matrix()
            anti = a_p @ adag_q + adag_q @ a_p
            expected = ident if p == q else np.zeros_like(ident)
            assert np.allclose(anti, expected, atol=1e-12)


def test_jw_term_count_scales_quartically(rng):
    d = random_fcidump(rng, 3)
    h = jordan_wigner_hamiltonian(d)
    n = 2 * d.norb
    assert len(h) <= n**4


def test_jw_rebuild_from_shuffled_terms(rng):
    d = random_fcidump(rng, 2)
    h = jordan_wigner_hamiltonian(d)
    pairs = list(h.terms.items())
    order = rng.permutation(len(pairs))
    rebuilt = PauliSum.from_terms(h.n_qubits, [pairs[i] for i in order]).simplify()
    assert len(rebuilt) == len(h)
    assert rebuilt.terms == h.terms
