"""Separability and distillability predicates for family states.

For a family state the partial transpose over a qubit subset S is positive
semidefinite iff delta <= 2 * lambda_{j(S)}: transposing S moves the
|00..0><11..1| coherence onto the basis-index pair (mask(S), ~mask(S)),
whose shared diagonal entry is lambda_{j(S)}. The pair index is

    j(S) = mask(S) >> 1          if the last qubit is not in S,
    j(S) = (~mask(S)) >> 1       otherwise,

which also shows why S and its complement give the same answer. Every
predicate here is an exact closed-form comparison; `pt_positive_numeric`
rebuilds the dense matrix and diagonalizes, serving as the independent
ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import tensor
from .family import GhzWeights, family_density


@dataclass(frozen=True)
class ClassReport:
    """Classification summary for one family state.

    ``pt_positive`` maps single-qubit partition masks to the positivity of
    the corresponding partial transpose. ``class3`` follows the three-qubit
    scheme (1 fully inseparable, 2 biseparable w.r.t. one qubit, 3 w.r.t.
    two, 5 fully separable; within the family the count of positive
    single-qubit transposes decides) and is None for other sizes.
    """

    n_qubits: int
    pt_positive: dict
    class3: int | None
    biseparable_qubits: frozenset
    fully_separable: bool
    ghz_distillable: bool
    distillable_pairs: frozenset
    activation_hint: tuple | None


def bipartition_masks(n: int):
    """One representative mask per distinct bipartition (the even ones)."""
    return (2 * j for j in range(1, 1 << (n - 1)))


def partition_lambda_index(mask: int, n: int) -> int:
    """Pair index j(S) whose weight controls positivity of the transpose over S."""
    tensor.check_partition(mask, n)
    if mask % 2 == 1:
        mask = tensor.complement(mask, n)
    return mask >> 1


def pt_positive_analytic(w: GhzWeights, mask: int) -> bool:
    """Closed-form positivity of the partial transpose over ``mask``.

    Boundary convention: equality delta == 2 lambda_{j(S)} counts as
    positive (the minimum eigenvalue is exactly zero there).
    """
    j = partition_lambda_index(mask, w.n_qubits)
    return w.delta <= 2.0 * w.lambdas[j - 1]


def pt_positive_numeric(
    w: GhzWeights, mask: int, tol: float = tensor.DEFAULT_PT_TOL
) -> bool:
    """Eigenvalue-oracle counterpart of pt_positive_analytic."""
    return tensor.is_ppt(family_density(w), mask, tol=tol)


def separable_wrt(w: GhzWeights, qubit: int) -> bool:
    """Whether the state is separable with respect to one qubit versus the rest.

    Within the family this coincides with positivity of that qubit's
    partial transpose.
    """
    return pt_positive_analytic(w, tensor.qubits_to_mask((qubit,), w.n_qubits))


def fully_separable(w: GhzWeights) -> bool:
    """True iff the partial transpose is positive for every bipartition.

    Equivalent to delta <= 2 * min(lambdas), since the distinct
    bipartitions sweep out every pair index exactly once.
    """
    return w.delta <= 2.0 * min(w.lambdas)


def pair_distillable(w: GhzWeights, i: int, k: int) -> bool:
    """Whether a maximally entangled pair between qubits i and k is distillable.

    Requires a negative partial transpose for every bipartition that
    separates i from k.
    """
    n = w.n_qubits
    if i == k:
        raise ValueError("need two distinct qubits")
    if not (0 <= i < n and 0 <= k < n):
        raise ValueError(f"qubit pair ({i}, {k}) out of range for {n} qubits")
    rest = [q for q in range(n) if q not in (i, k)]
    for bits in range(1 << len(rest)):
        side = [i] + [q for idx, q in enumerate(rest) if (bits >> idx) & 1]
        if pt_positive_analytic(w, tensor.qubits_to_mask(side, n)):
            return False
    return True


def ghz_distillable(w: GhzWeights) -> bool:
    """True iff every bipartition has a negative partial transpose.

    For three qubits this is the criterion for distilling a GHZ state (the
    three single-qubit transposes cover all bipartitions). For n > 3 the
    same all-partitions-negative predicate makes every pair distillable,
    from which a GHZ state can be assembled by connecting pairs; we expose
    that extension under the same name.
    """
    return w.delta > 2.0 * max(w.lambdas)


def classify_family(w: GhzWeights) -> ClassReport:
    """Full classification report; ``class3`` is filled only for 3 qubits."""
    n = w.n_qubits
    singles = {
        tensor.qubits_to_mask((q,), n): pt_positive_analytic(w, tensor.qubits_to_mask((q,), n))
        for q in range(n)
    }
    bisep = frozenset(q for q in range(n) if singles[tensor.qubits_to_mask((q,), n)])
    pairs = frozenset(
        (i, k) for i, k in combinations(range(n), 2) if pair_distillable(w, i, k)
    )
    class3 = None
    hint = None
    if n == 3:
        class3 = {0: 1, 1: 2, 2: 3, 3: 5}[len(bisep)]
        if class3 == 3:
            hint = tuple(sorted(bisep))
    return ClassReport(
        n_qubits=n,
        pt_positive=singles,
        class3=class3,
        biseparable_qubits=bisep,
        fully_separable=fully_separable(w),
        ghz_distillable=ghz_distillable(w),
        distillable_pairs=pairs,
        activation_hint=hint,
    )


def classify3(w: GhzWeights) -> ClassReport:
    """Three-qubit classification (class labels 1, 2, 3, 5)."""
    if w.n_qubits != 3:
        raise ValueError("classify3 requires exactly 3 qubits")
    return classify_family(w)
