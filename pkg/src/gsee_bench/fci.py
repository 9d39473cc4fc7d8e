"""Desk-scale exact ground-state solver over a Slater determinant basis.

Determinants are (alpha, beta) occupation bitmask pairs over spatial orbitals.
Matrix elements follow the Slater-Condon rules with chemist-notation
integrals; fermionic phases are counted in the interleaved spin-orbital
ordering (alpha of orbital p on index 2p, beta on 2p+1) so the matrix is
sign-consistent with the qubit encoding in `pauli`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse

from .errors import InconsistentBasis, InvalidOccupation, TooLarge
from .fcidump import FciDump

MAX_ORBITALS = 16
MAX_DIMENSION = 2_000_000
DENSE_CUTOFF = 2000


@dataclass(frozen=True)
class DeterminantBasis:
    """All (alpha, beta) occupations of a fixed particle-number sector."""

    norb: int
    n_alpha: int
    n_beta: int
    dets: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.dets)


@dataclass(frozen=True)
class SpectrumResult:
    """Lowest eigenvalues (core energy included) with convergence info."""

    energies: tuple[float, ...]
    gap: float | None
    n_iterations: int
    converged: bool


def _occupation_masks(norb: int, n_occ: int) -> list[int]:
    masks = []
    for occ in combinations(range(norb), n_occ):
        mask = 0
        for orbital in occ:
            mask |= 1 << orbital
        masks.append(mask)
    return masks


def build_basis(
    norb: int,
    n_alpha: int,
    n_beta: int,
    max_dim: int = MAX_DIMENSION,
) -> DeterminantBasis:
    """Enumerate the sector basis in lexicographic (alpha-major) order."""
    if norb > MAX_ORBITALS:
        raise TooLarge(f"norb={norb} exceeds oracle cap {MAX_ORBITALS}")
    for occ in (n_alpha, n_beta):
        if not 0 <= occ <= norb:
            raise InvalidOccupation(f"{occ} electrons in {norb} orbitals")
    dim = math.comb(norb, n_alpha) * math.comb(norb, n_beta)
    if dim > max_dim:
        raise TooLarge(f"FCI dimension {dim} exceeds cap {max_dim}")
    alphas = _occupation_masks(norb, n_alpha)
    betas = _occupation_masks(norb, n_beta)
    dets = tuple((a, b) for a in alphas for b in betas)
    return DeterminantBasis(norb, n_alpha, n_beta, dets)


def interleave(alpha_mask: int, beta_mask: int, norb: int) -> int:
    """Spin-orbital occupation mask: bit 2p from alpha, bit 2p+1 from beta."""
    mask = 0
    for p in range(norb):
        mask |= (alpha_mask >> p & 1) << (2 * p)
        mask |= (beta_mask >> p & 1) << (2 * p + 1)
    return mask


def _annihilate(mask: int, s: int) -> tuple[int, int] | None:
    if not mask >> s & 1:
        return None
    phase = -1 if (mask & ((1 << s) - 1)).bit_count() % 2 else 1
    return mask & ~(1 << s), phase


def _create(mask: int, s: int) -> tuple[int, int] | None:
    if mask >> s & 1:
        return None
    phase = -1 if (mask & ((1 << s) - 1)).bit_count() % 2 else 1
    return mask | (1 << s), phase


def _excitation_phase(occ: int, annihilate: tuple[int, ...], create: tuple[int, ...]) -> int:
    """Phase of a+_{p1} a+_{p0} ... a_{m1} a_{m0} applied to |occ>."""
    phase = 1
    for s in annihilate:
        occ, p = _annihilate(occ, s)  # type: ignore[misc]
        phase *= p
    for s in create:
        occ, p = _create(occ, s)  # type: ignore[misc]
        phase *= p
    return phase


def _occupied(mask: int, n_spin: int) -> list[int]:
    return [s for s in range(n_spin) if mask >> s & 1]


def build_fci_matrix(dump: FciDump, basis: DeterminantBasis) -> scipy.sparse.csr_array:
    """Sparse symmetric sector Hamiltonian via the Slater-Condon rules."""
    if basis.norb != dump.norb or basis.n_alpha != dump.n_alpha or basis.n_beta != dump.n_beta:
        raise InconsistentBasis(
            f"basis sector ({basis.norb}, {basis.n_alpha}, {basis.n_beta}) does not "
            f"match Hamiltonian ({dump.norb}, {dump.n_alpha}, {dump.n_beta})"
        )
    norb = dump.norb
    n_spin = 2 * norb
    h1 = dump.h1
    eri = dump.two_body_tensor()

    def one_body(s: int, t: int) -> float:
        # Spin-orbital h element; spin conservation is enforced by the caller.
        return h1[s // 2, t // 2]

    occ_masks = [interleave(a, b, norb) for a, b in basis.dets]
    index_of = {mask: i for i, mask in enumerate(occ_masks)}
    if len(index_of) != len(occ_masks):
        raise InconsistentBasis("duplicate determinants in basis")

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    def emit(i: int, j: int, value: float) -> None:
        if value == 0.0:
            return
        rows.append(i)
        cols.append(j)
        vals.append(value)
        if i != j:
            rows.append(j)
            cols.append(i)
            vals.append(value)

    for col, occ in enumerate(occ_masks):
        occupied = _occupied(occ, n_spin)
        virtual = [s for s in range(n_spin) if not occ >> s & 1]

        # Diagonal: one-body plus Coulomb minus same-spin exchange.
        diag = dump.e_core
        for s in occupied:
            diag += one_body(s, s)
        for a, s in enumerate(occupied):
            for t in occupied[a + 1:]:
                diag += eri[s // 2, s // 2, t // 2, t // 2]
                if s % 2 == t % 2:
                    diag -= eri[s // 2, t // 2, t // 2, s // 2]
        emit(col, col, diag)

        # Single excitations m -> p within one spin channel.
        for m in occupied:
            for p in virtual:
                if p % 2 != m % 2:
                    continue
                target = occ & ~(1 << m) | (1 << p)
                row = index_of[target]
                if row <= col:
                    continue
                value = one_body(m, p)
                for j in occupied:
                    if j == m:
                        continue
                    value += eri[m // 2, p // 2, j // 2, j // 2]
                    if j % 2 == m % 2:
                        value -= eri[m // 2, j // 2, j // 2, p // 2]
                phase = _excitation_phase(occ, (m,), (p,))
                emit(row, col, phase * value)

        # Double excitations (m, n) -> (p, q); pairing carries the spin match.
        for a, m in enumerate(occupied):
            for n in occupied[a + 1:]:
                for b, p in enumerate(virtual):
                    for q in virtual[b + 1:]:
                        spins_out = sorted((m % 2, n % 2))
                        spins_in = sorted((p % 2, q % 2))
                        if spins_out != spins_in:
                            continue
                        target = occ & ~(1 << m) & ~(1 << n) | (1 << p) | (1 << q)
                        row = index_of[target]
                        if row <= col:
                            continue
                        value = 0.0
                        if m % 2 == p % 2 and n % 2 == q % 2:
                            value += eri[m // 2, p // 2, n // 2, q // 2]
                        if m % 2 == q % 2 and n % 2 == p % 2:
                            value -= eri[m // 2, q // 2, n // 2, p // 2]
                        if value == 0.0:
                            continue
                        # Phase of a+_p a+_q a_n a_m acting on the ket.
                        phase = _excitation_phase(occ, (m, n), (q, p))
                        emit(row, col, phase * value)

    mat = scipy.sparse.coo_array(
        (vals, (rows, cols)), shape=(len(occ_masks), len(occ_masks))
    )
    return mat.tocsr()


def lowest_eigenvalues(
    matrix,
    k: int = 1,
    tol: float = 1e-8,
    max_iterations: int = 300,
    max_subspace: int = 30,
    dense_cutoff: int = DENSE_CUTOFF,
) -> SpectrumResult:
    """Lowest k eigenvalues of a symmetric matrix.

    Small problems are solved densely; larger ones by Davidson iteration with
    a diagonal preconditioner, restarting when the subspace exceeds
    max_subspace.  If the iteration stalls the best estimates are returned
    with converged=False rather than raising.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = matrix.shape[0]
    k_eff = min(k, n)

    if n <= max(dense_cutoff, 3 * max_subspace):
        dense = matrix.toarray() if scipy.sparse.issparse(matrix) else np.asarray(matrix)
        eigvals = np.linalg.eigvalsh(dense)
        return _spectrum(eigvals[:k_eff], k, 0, True)

    diag = matrix.diagonal() if scipy.sparse.issparse(matrix) else np.diag(matrix)
    n_guess = min(n, max(2 * k_eff, k_eff + 2))
    guess_idx = np.argsort(diag, kind="stable")[:n_guess]
    basis = np.zeros((n, n_guess))
    basis[guess_idx, np.arange(n_guess)] = 1.0

    sigma = None
    theta = np.zeros(k_eff)
    ritz = basis[:, :k_eff]
    converged = False
    iteration = 0

    for iteration in range(1, max_iterations + 1):
        sigma = matrix @ basis
        projected = basis.T @ sigma
        projected = (projected + projected.T) / 2.0
        eigvals, eigvecs = np.linalg.eigh(projected)
        theta = eigvals[:k_eff]
        y = eigvecs[:, :k_eff]
        ritz = basis @ y
        residuals = sigma @ y - ritz * theta
        norms = np.linalg.norm(residuals, axis=0)
        if np.all(norms < tol):
            converged = True
            break

        if basis.shape[1] + k_eff > max_subspace:
            keep = min(2 * k_eff + 2, eigvecs.shape[1])
            basis = _orthonormalize(basis @ eigvecs[:, :keep])
            continue

        new_dirs = []
        for root in range(k_eff):
            if norms[root] < tol:
                continue
            denom = theta[root] - diag
            denom = np.where(np.abs(denom) < 1e-8, np.copysign(1e-8, denom + 1e-300), denom)
            new_dirs.append(residuals[:, root] / denom)
        grown = _extend_basis(basis, new_dirs)
        if grown is None:
            # No independent direction left; the subspace is exhausted.
            converged = bool(np.all(norms < max(tol, 1e-6)))
            break
        basis = grown

    order = np.argsort(theta)
    return _spectrum(theta[order], k, iteration, converged)


def _orthonormalize(block: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(block)
    return q


def _extend_basis(basis: np.ndarray, new_dirs: list[np.ndarray]) -> np.ndarray | None:
    added = []
    current = basis
    for direction in new_dirs:
        vec = direction.copy()
        for _ in range(2):
            vec -= current @ (current.T @ vec)
        norm = np.linalg.norm(vec)
        if norm > 1e-10:
            vec /= norm
            current = np.column_stack([current, vec])
            added.append(vec)
    if not added:
        return None
    return current


def _spectrum(energies: np.ndarray, k: int, iterations: int, converged: bool) -> SpectrumResult:
    energies = np.sort(np.asarray(energies, dtype=float))
    gap = float(energies[1] - energies[0]) if energies.size >= 2 else None
    return SpectrumResult(tuple(float(e) for e in energies), gap, iterations, converged)


def solve_ground_state(dump: FciDump, k: int = 2, tol: float = 1e-8) -> tuple[SpectrumResult, int]:
    """Convenience wrapper: basis + matrix + eigensolve; returns (result, dim)."""
    basis = build_basis(dump.norb, dump.n_alpha, dump.n_beta)
    matrix = build_fci_matrix(dump, basis)
    return lowest_eigenvalues(matrix, k=k, tol=tol), len(basis)
