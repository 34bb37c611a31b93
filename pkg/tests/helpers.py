"""Shared fixtures-in-plain-functions for the test suite."""

import numpy as np

from sepkit import GhzWeights, classify_family, random_weights

SQRT1_2 = 1.0 / np.sqrt(2.0)

KET_PLUS = np.array([SQRT1_2, SQRT1_2], dtype=complex)
BELL_PHI_PLUS = np.array([SQRT1_2, 0.0, 0.0, SQRT1_2], dtype=complex)


def random_density(n, rng):
    """Full-rank Wishart density matrix on n qubits."""
    d = 1 << n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / rho.trace().real


def weights_max_diff(a: GhzWeights, b: GhzWeights) -> float:
    return max(
        abs(a.lambda0_plus - b.lambda0_plus),
        abs(a.lambda0_minus - b.lambda0_minus),
        max(abs(x - y) for x, y in zip(a.lambdas, b.lambdas)),
    )


def brute_permutation_unitary(source, n):
    """Permutation matrix built index-by-index, independent of axis tricks."""
    d = 1 << n
    u = np.zeros((d, d))
    for old in range(d):
        new = 0
        for i in range(n):
            bit = (old >> (n - 1 - source[i])) & 1
            new |= bit << (n - 1 - i)
        u[new, old] = 1.0
    return u


def random_class5_weights(rng, count):
    """Rejection-sample three-qubit draws whose class is 5."""
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("class-5 rejection sampling stalled")
        w = random_weights(3, rng)
        if classify_family(w).class3 == 5:
            out.append(w)
    return out
