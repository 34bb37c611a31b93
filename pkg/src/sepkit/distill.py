"""Multi-copy distillation planning for three-qubit family states.

The protocol: take M trios in the same family state, let each party apply
the two-outcome filter whose success element is

    P = |00..0><00..0| + |10..0><11..1|     (on that party's M qubits),

keep the success branch, and project the first trio's first qubit onto
|+>. Filtering leaves the first trio in an unnormalized family state whose
computational-basis entries are the M-th powers of the single-copy ones:
pair weights become lambda_k**M, the (0,7) coherence (delta/2)**M, and the
0/7 diagonal block ((lambda0_plus + lambda0_minus)/2)**M. The |+>
projection then yields a two-qubit state with Bell fidelity
lambda0_plus + lambda2 (probability 1/2), which exceeds 1/2 exactly when
delta/2 > lambda_1 + lambda_3. `amplify` implements the closed form and
`dense_filter_oracle` the literal tensor construction it must match.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor
from .classify import pair_distillable
from .family import GhzWeights, family_density

# Qubit q of a trio <-> the pair index j whose weight controls positivity
# of that qubit's partial transpose (j = 2, 1, 3 for qubits 0, 1, 2).
ASSOC_LAMBDA = (2, 1, 3)

# 3 * DENSE_ORACLE_MAX_COPIES qubits is the largest register the dense
# oracle will materialize (4096-dimensional at the cap).
DENSE_ORACLE_MAX_COPIES = 4

MINIMAL_M_CAP = 10**6


class FilterCapReachedError(RuntimeError):
    """The copy-count search passed its cap without satisfying the criterion."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"no copy count up to {cap} amplifies the coherence enough")


@dataclass(frozen=True)
class DistillOutcome:
    """Result of planning pair distillation on relabeled weights.

    ``filtered_weights`` describe the surviving trio in the relabeled frame
    where the projected qubit sits first. ``purifiable`` is the statement
    pair_fidelity > 1/2.
    """

    m_used: int
    filtered_weights: GhzWeights
    filter_success_probability: float
    projection_success_probability: float
    pair_fidelity: float
    purifiable: bool


def _require_three_qubits(w: GhzWeights) -> None:
    if w.n_qubits != 3:
        raise ValueError("the distillation protocol is defined for 3 qubits")


def pair_fidelity_after_projection(w: GhzWeights) -> tuple[float, float]:
    """Bell fidelity of qubits 1,2 after projecting qubit 0 onto |+>.

    Closed form: fidelity lambda0_plus + lambda_2, probability 1/2.
    """
    _require_three_qubits(w)
    return w.lambda0_plus + w.lam(2), 0.5


def filter_operator(m: int) -> np.ndarray:
    """One party's m-qubit filter: |00..0><00..0| + |10..0><11..1|."""
    if m < 1:
        raise ValueError("need at least one copy")
    dim = 1 << m
    p = np.zeros((dim, dim), dtype=complex)
    p[0, 0] = 1.0
    p[dim >> 1, dim - 1] = 1.0
    return p


def amplify(w: GhzWeights, m: int) -> tuple[GhzWeights, float]:
    """Closed-form filtered state of the first trio after m copies.

    Returns the normalized weights and the success probability (the trace
    of the unnormalized filtered state, 2 * (block**m + sum lambda_k**m)).
    """
    _require_three_qubits(w)
    if m < 1:
        raise ValueError("need at least one copy")
    block = ((w.lambda0_plus + w.lambda0_minus) / 2.0) ** m
    coh = (w.delta / 2.0) ** m
    lams = [lam**m for lam in w.lambdas]
    total = 2.0 * (block + sum(lams))
    if total < tensor.DEGENERATE_PROBABILITY:
        raise tensor.DegenerateOutcomeError("filter success probability is zero")
    out = GhzWeights(
        n_qubits=3,
        lambda0_plus=(block + coh) / total,
        lambda0_minus=(block - coh) / total,
        lambdas=tuple(x / total for x in lams),
        basis_flipped=w.basis_flipped,
        delta=2.0 * coh / total,
    )
    return out, total


def _trio_to_party_order(m: int) -> list[int]:
    # New position p*m + t holds copy t's qubit of party p.
    return [3 * t + p for p in range(3) for t in range(m)]


def dense_filter_oracle(w: GhzWeights, m: int) -> tuple[np.ndarray, float]:
    """Brute-force filtered state: m-fold tensor power, filter, reduce.

    Builds the full 8**m density matrix, regroups qubits party-major,
    applies the filter on each party's block (conjugated on the column
    side), and partial-traces down to the first trio. Returns the
    normalized trio state and the success probability.
    """
    _require_three_qubits(w)
    if m < 1:
        raise ValueError("need at least one copy")
    if m > DENSE_ORACLE_MAX_COPIES:
        raise ValueError(f"dense oracle capped at {DENSE_ORACLE_MAX_COPIES} copies")
    rho = family_density(w)
    big = rho
    for _ in range(m - 1):
        big = np.kron(big, rho)
    if m > 1:
        big = tensor.permute_qubits(big, _trio_to_party_order(m))
    p = filter_operator(m)
    block = 1 << m
    t = big.reshape((block,) * 6)
    for axis in range(3):
        t = np.moveaxis(np.tensordot(p, t, axes=(1, axis)), 0, axis)
    for axis in range(3, 6):
        t = np.moveaxis(np.tensordot(p.conj(), t, axes=(1, axis)), 0, axis)
    filtered = t.reshape(block**3, block**3)
    prob = filtered.trace().real
    if prob < tensor.DEGENERATE_PROBABILITY:
        raise tensor.DegenerateOutcomeError("filter success probability is zero")
    trio = tensor.partial_trace(filtered, keep=(0, m, 2 * m))
    return trio / prob, float(prob)


def minimal_m_raw(
    half_delta: float, lam1: float, lam3: float, cap: int = MINIMAL_M_CAP
) -> int | None:
    """Smallest m >= 1 with half_delta**m > lam1**m + lam3**m.

    Returns None when half_delta <= max(lam1, lam3), where no m works. The
    predicate is evaluated in the log domain so large m cannot underflow;
    if the cap is passed FilterCapReachedError is raised.
    """
    if half_delta <= max(lam1, lam3):
        return None
    if lam1 == 0.0 and lam3 == 0.0:
        return 1
    log_half = np.log(half_delta)
    log1 = np.log(lam1) if lam1 > 0.0 else -np.inf
    log3 = np.log(lam3) if lam3 > 0.0 else -np.inf
    for m in range(1, cap + 1):
        if m * log_half > np.logaddexp(m * log1, m * log3):
            return m
    raise FilterCapReachedError(cap)


def minimal_m(w: GhzWeights, cap: int = MINIMAL_M_CAP) -> int | None:
    """Smallest copy count whose filtered state projects to fidelity > 1/2.

    That is the criterion (delta/2)**m > lambda_1**m + lambda_3**m; None
    means delta/2 <= max(lambda_1, lambda_3), i.e. qubits 1 and 2 are not
    pair-distillable and no copy count helps.
    """
    _require_three_qubits(w)
    return minimal_m_raw(w.delta / 2.0, w.lam(1), w.lam(3), cap=cap)


def relabel_for_projection(w: GhzWeights, spectator: int, b: int, c: int) -> GhzWeights:
    """Weights after moving ``spectator`` to the projected (first) position.

    A relabeling that sends old qubit q to new position p carries
    lambda_{ASSOC_LAMBDA[q]} to lambda_{ASSOC_LAMBDA[p]}; the j = 0 pair is
    untouched. Agrees with family.permute_weights on the same permutation.
    """
    new = [0.0, 0.0, 0.0]
    for new_pos, old_q in enumerate((spectator, b, c)):
        new[ASSOC_LAMBDA[new_pos] - 1] = w.lam(ASSOC_LAMBDA[old_q])
    return GhzWeights(
        n_qubits=3,
        lambda0_plus=w.lambda0_plus,
        lambda0_minus=w.lambda0_minus,
        lambdas=tuple(new),
        basis_flipped=w.basis_flipped,
        delta=w.delta,
    )


def plan_pair_distillation(
    w: GhzWeights, i: int, k: int, m: int | None = None
) -> DistillOutcome | None:
    """Plan distilling a maximally entangled pair between qubits i and k.

    Relabels the trio so the remaining qubit is projected (it takes the
    first position; the pair weights permute along ASSOC_LAMBDA), searches
    for the minimal copy count unless ``m`` is given, filters, and projects.
    Returns None exactly when the pair is not distillable.
    """
    _require_three_qubits(w)
    if i == k or not (0 <= i < 3 and 0 <= k < 3):
        raise ValueError(f"({i}, {k}) is not a pair of distinct trio qubits")
    if not pair_distillable(w, i, k):
        return None
    spectator = 3 - i - k
    relabeled = relabel_for_projection(w, spectator, i, k)
    m_used = minimal_m(relabeled) if m is None else m
    if m_used is None or m_used < 1:
        raise ValueError(f"invalid copy count {m_used}")
    filtered, filter_prob = amplify(relabeled, m_used)
    fid, proj_prob = pair_fidelity_after_projection(filtered)
    return DistillOutcome(
        m_used=m_used,
        filtered_weights=filtered,
        filter_success_probability=filter_prob,
        projection_success_probability=proj_prob,
        pair_fidelity=fid,
        purifiable=fid > 0.5,
    )
