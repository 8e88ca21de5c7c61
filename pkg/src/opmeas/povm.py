"""Positive-operator-valued measures on finite outcome sets.

A ``Pom`` assigns one effect to each outcome of a finite, ordered label
set.  The sigma-algebra is the full power set, so additivity over disjoint
subsets holds by construction: the effect of a subset is the sum of its
singleton effects.  Sub-normalized measures (sum strictly below identity)
are first-class; ``normalized`` records whether the total is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple, Sequence

import numpy as np

from . import linalg
from .effects import TOL_ONE, Effect, is_sharp, validate_effect
from .errors import (
    InvalidEffectError,
    NotNormalizedError,
    OpmeasError,
    SumExceedsIdentityError,
    UnknownOutcomeError,
)
from .linalg import TOL_EIG, TOL_PSD, commutator_norm, eig_hermitian, op_norm

Outcome = Hashable


@dataclass(frozen=True)
class Pom:
    """Finite outcome set with one effect per outcome."""

    outcomes: tuple
    effects: tuple[Effect, ...]
    normalized: bool

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    def __len__(self) -> int:
        return len(self.outcomes)

    def index(self, outcome: Outcome) -> int:
        try:
            return self.outcomes.index(outcome)
        except ValueError:
            raise UnknownOutcomeError(f"unknown outcome {outcome!r}") from None

    def effect(self, outcome: Outcome) -> Effect:
        return self.effects[self.index(outcome)]


def build_pom(
    effects: Sequence[np.ndarray | Effect],
    require_normalized: bool,
    outcomes: Sequence[Outcome] | None = None,
    tol: float = TOL_PSD,
) -> Pom:
    """Validate a list of operators as a POM.

    Checks each entry is a valid effect and that the total sum stays below
    the identity (within tol).  With ``require_normalized`` the sum must
    equal the identity within TOL_EIG.  The ``normalized`` flag on the
    result records whether the sum is the identity, independently of
    whether that was required.
    """
    if len(effects) == 0:
        raise OpmeasError("a POM needs at least one outcome")
    validated: list[Effect] = []
    for i, raw in enumerate(effects):
        m = raw.op if isinstance(raw, Effect) else raw
        try:
            validated.append(validate_effect(m, tol))
        except OpmeasError as exc:
            raise InvalidEffectError(i, exc) from exc
    dim = validated[0].dim
    for i, e in enumerate(validated):
        if e.dim != dim:
            raise InvalidEffectError(i, OpmeasError(f"dim {e.dim} != {dim}"))
    total = np.zeros((dim, dim), dtype=complex)
    for e in validated:
        total = total + e.op
    slack = eig_hermitian(np.eye(dim, dtype=complex) - linalg.hermitize(total)).eigenvalues
    if slack[0] < -tol:
        raise SumExceedsIdentityError(f"effect sum exceeds identity by {-slack[0]:.3e}")
    deficit = op_norm(total - np.eye(dim, dtype=complex))
    is_normalized = deficit <= TOL_EIG
    if require_normalized and not is_normalized:
        raise NotNormalizedError(f"effect sum differs from identity by {deficit:.3e}")
    labels = tuple(range(len(validated))) if outcomes is None else tuple(outcomes)
    if len(labels) != len(validated):
        raise OpmeasError("outcome labels and effects differ in length")
    if len(set(labels)) != len(labels):
        raise OpmeasError("outcome labels must be distinct")
    return Pom(outcomes=labels, effects=tuple(validated), normalized=is_normalized)


def effect_of(pom: Pom, subset: Iterable[Outcome]) -> Effect:
    """Sum of the effects over a subset of outcomes, in outcome order.

    The empty set gives the zero effect; the full set gives the identity
    exactly when the POM is normalized.
    """
    wanted = set(subset)
    unknown = wanted.difference(pom.outcomes)
    if unknown:
        raise UnknownOutcomeError(f"unknown outcomes {sorted(map(repr, unknown))}")
    dim = pom.dim
    total = np.zeros((dim, dim), dtype=complex)
    for label, eff in zip(pom.outcomes, pom.effects):
        if label in wanted:
            total = total + eff.op
    return Effect(op=total)


def is_sharp_pom(pom: Pom, tol: float = TOL_ONE) -> bool:
    """True iff every single-outcome effect is a projection (up to tol)."""
    return all(is_sharp(e, tol) for e in pom.effects)


class CommutativityReport(NamedTuple):
    commutative: bool
    max_commutator: float
    worst_pair: tuple | None


def is_commutative(pom: Pom, tol: float = TOL_ONE) -> CommutativityReport:
    """Scan all outcome pairs for the largest commutator norm."""
    worst = 0.0
    worst_pair: tuple | None = None
    for i in range(len(pom)):
        for j in range(i + 1, len(pom)):
            c = commutator_norm(pom.effects[i].op, pom.effects[j].op)
            if c > worst:
                worst = c
                worst_pair = (pom.outcomes[i], pom.outcomes[j])
    commutative = worst <= tol
    return CommutativityReport(
        commutative=commutative,
        max_commutator=worst,
        worst_pair=None if commutative else worst_pair,
    )


def coarse_grain(pom: Pom, partition: Sequence[Iterable[Outcome]]) -> Pom:
    """Merge outcomes along a partition of the outcome set.

    The partition cells must be disjoint and cover every outcome.  The new
    POM has one outcome per cell, labelled by cell index, and inherits the
    normalization flag (the total operator is unchanged).
    """
    cells = [set(cell) for cell in partition]
    seen: set = set()
    for cell in cells:
        if seen & cell:
            raise OpmeasError("partition cells overlap")
        seen |= cell
    if seen != set(pom.outcomes):
        raise OpmeasError("partition does not cover the outcome set")
    merged = [effect_of(pom, cell) for cell in cells]
    return Pom(
        outcomes=tuple(range(len(cells))),
        effects=tuple(merged),
        normalized=pom.normalized,
    )
