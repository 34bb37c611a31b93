"""Dense complex linear algebra on multiqubit operators.

Conventions used package-wide:

* Qubits are numbered ``0 .. n-1`` and qubit 0 is the MOST significant bit
  of a computational-basis index, so ``|j>`` of an n-qubit register is the
  length ``2**n`` unit vector with a one at position ``j``.
* A subset S of the qubits (one side of a bipartition) is a bitmask aligned
  with that convention: qubit ``q`` contributes ``1 << (n - 1 - q)``, so a
  mask is itself a valid basis index. Bipartition masks must be nonempty
  proper subsets.

Kets are 1-d complex arrays and density operators 2-d complex arrays; the
``check_*`` helpers enforce the invariants the operations rely on
(power-of-two dimension, hermiticity, unit trace).
"""

from __future__ import annotations

import numpy as np

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
NORM_ATOL = 1e-12

# Positivity cutoff for partial-transpose spectra. Kept flat in the
# dimension: every spectrum handled here belongs to a trace-one operator of
# dimension at most 2**12, so all eigenvalues are O(1).
DEFAULT_PT_TOL = 1e-9

# Below this outcome probability a post-measurement state is not defined.
DEGENERATE_PROBABILITY = 1e-14


class DegenerateOutcomeError(ValueError):
    """Projection onto a measurement outcome of numerically zero probability."""


def n_qubits_of(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension, requiring a power of two."""
    n = int(dim).bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a positive power of two")
    return n


def ket(amplitudes) -> np.ndarray:
    """Coerce to a 1-d complex vector of power-of-two length."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n_qubits_of(v.shape[0])
    return v


def basis_ket(n: int, j: int) -> np.ndarray:
    """Computational-basis ket |j> on n qubits."""
    if not 0 <= j < (1 << n):
        raise ValueError(f"basis index {j} out of range for {n} qubits")
    v = np.zeros(1 << n, dtype=complex)
    v[j] = 1.0
    return v


def density_of(psi) -> np.ndarray:
    """Rank-one density operator |psi><psi| of a normalized ket."""
    v = ket(psi)
    return np.outer(v, v.conj())


def kron(a, b) -> np.ndarray:
    """Tensor product; the first factor supplies the high-order bits."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("kron expects two kets or two operators")
    return np.kron(a, b)


def check_hermitian(mat: np.ndarray, atol: float = HERMITIAN_ATOL) -> None:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("operator must be a square matrix")
    dev = np.abs(mat - mat.conj().T).max()
    if dev > atol:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e} > {atol:.1e})")


def check_density(
    rho: np.ndarray,
    normalized: bool = True,
    herm_atol: float = HERMITIAN_ATOL,
    trace_atol: float = TRACE_ATOL,
) -> int:
    """Validate a density operator, returning its qubit count."""
    rho = np.asarray(rho)
    check_hermitian(rho, atol=herm_atol)
    n = n_qubits_of(rho.shape[0])
    tr = rho.trace().real
    if tr < -trace_atol:
        raise ValueError(f"negative trace {tr}")
    if normalized and abs(tr - 1.0) > trace_atol:
        raise ValueError(f"trace {tr} differs from 1 by more than {trace_atol:.1e}")
    return n


def qubits_to_mask(qubits, n: int) -> int:
    """Bitmask of a qubit subset (qubit 0 is the most significant bit)."""
    mask = 0
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
        mask |= 1 << (n - 1 - q)
    return mask


def mask_to_qubits(mask: int, n: int) -> tuple[int, ...]:
    """Qubit indices contained in a mask, ascending."""
    return tuple(q for q in range(n) if (mask >> (n - 1 - q)) & 1)


def complement(mask: int, n: int) -> int:
    return ((1 << n) - 1) ^ mask


def check_partition(mask: int, n: int) -> None:
    """A bipartition mask must be a nonempty proper subset of the register."""
    if not 0 < mask < (1 << n) - 1:
        raise ValueError(f"mask {mask:#b} is not a proper nonempty subset of {n} qubits")


def partial_transpose(rho: np.ndarray, mask: int) -> np.ndarray:
    """Transpose the indices of the qubits in ``mask`` only.

    Entry ((i_S, i_R), (j_S, j_R)) of the result equals entry
    ((j_S, i_R), (i_S, j_R)) of the input, where S is the masked subset and
    R the rest. Hermiticity is preserved; the operation is an involution.
    """
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho.shape[0])
    check_partition(mask, n)
    t = rho.reshape([2] * (2 * n))
    axes = list(range(2 * n))
    for q in range(n):
        if (mask >> (n - 1 - q)) & 1:
            axes[q], axes[n + q] = axes[n + q], axes[q]
    return t.transpose(axes).reshape(rho.shape)


def permute_index_bits(index: int, source, n: int) -> int:
    """Reassemble a basis index so bit i of the output is bit source[i] of the input."""
    out = 0
    for i, q in enumerate(source):
        out |= ((index >> (n - 1 - q)) & 1) << (n - 1 - i)
    return out


def permute_qubits(rho: np.ndarray, source) -> np.ndarray:
    """Relabel qubits: output register position i carries input qubit source[i]."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho.shape[0])
    source = list(source)
    if sorted(source) != list(range(n)):
        raise ValueError(f"{source} is not a permutation of {n} qubits")
    axes = source + [n + q for q in source]
    return rho.reshape([2] * (2 * n)).transpose(axes).reshape(rho.shape)


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Trace out every qubit not listed in ``keep`` (kept qubits stay ordered)."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho.shape[0])
    keep = sorted(set(keep))
    if any(not 0 <= q < n for q in keep):
        raise ValueError("keep list out of range")
    if len(keep) == n:
        return rho.copy()
    t = rho.reshape([2] * (2 * n))
    row = list(range(n))
    col = [n + q if q in keep else q for q in range(n)]
    out = [q for q in keep] + [n + q for q in keep]
    d = 1 << len(keep)
    return np.einsum(t, row + col, out).reshape(d, d)


def min_eigenvalue(h: np.ndarray, herm_atol: float = HERMITIAN_ATOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    h = np.asarray(h)
    check_hermitian(h, atol=herm_atol)
    return float(np.linalg.eigvalsh(h)[0])


def is_ppt(rho: np.ndarray, mask: int, tol: float = DEFAULT_PT_TOL) -> bool:
    """Whether the partial transpose over ``mask`` is positive semidefinite.

    Positivity includes the zero-eigenvalue boundary: the test passes when
    the minimum eigenvalue is >= -tol.
    """
    return min_eigenvalue(partial_transpose(rho, mask)) >= -tol


def project_qubit(rho: np.ndarray, k: int, phi) -> tuple[np.ndarray, float]:
    """Measure qubit ``k`` and project onto the single-qubit ket ``phi``.

    Returns the normalized post-measurement state of the remaining n-1
    qubits together with the outcome probability. Raises
    DegenerateOutcomeError when the outcome probability is below
    ``DEGENERATE_PROBABILITY``.
    """
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho.shape[0])
    if not 0 <= k < n:
        raise ValueError(f"qubit index {k} out of range for {n} qubits")
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.shape[0] != 2:
        raise ValueError("projection ket must be a single-qubit state")
    if abs(np.vdot(phi, phi).real - 1.0) > NORM_ATOL:
        raise ValueError("projection ket must be normalized")
    t = rho.reshape([2] * (2 * n))
    # sigma[i', j'] = sum_{a,b} conj(phi[a]) rho[(i',a at k), (j',b at k)] phi[b]
    t = np.tensordot(phi.conj(), t, axes=(0, k))
    t = np.tensordot(phi, t, axes=(0, n - 1 + k))
    d = 1 << (n - 1)
    sigma = t.reshape(d, d)
    prob = sigma.trace().real
    if prob < DEGENERATE_PROBABILITY:
        raise DegenerateOutcomeError(f"outcome probability {prob:.3e} below cutoff")
    return sigma / prob, float(prob)
