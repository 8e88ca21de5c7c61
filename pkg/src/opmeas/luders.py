"""Lüders instruments and the three operational equivalences.

Central object: the Lüders instrument of a normalized POM, with selective
operations rho -> sqrt(E_i) rho sqrt(E_i) and their trace-preserving sum.
On top of it sit three checkers:

* ``nondisturbance`` — measuring A nonselectively leaves the statistics of
  an effect B unchanged for *every* input state iff B is a fixed point of
  the Heisenberg dual of the channel, so the "for all rho" quantifier
  collapses to a single operator identity.
* ``proposition1_verify`` — nondisturbance against commutativity of B with
  the POM's effects.
* ``objectivity_check`` / ``causality_check_C`` — commutation of selective
  operations for two POMs, and mutual nondisturbance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .effects import Effect
from .errors import NotNormalizedError, OpmeasError, SpectrumOutOfRangeError
from .linalg import (
    TOL_PSD,
    as_matrix,
    commutator_norm,
    eig_hermitian,
    hermitize,
    is_hermitian,
    op_norm,
    outer,
    psd_sqrt,
    require_same_dim,
)
from .povm import Pom

TOL_TRACE = 1e-10

_EQUIV_TOL = 1e-8


@dataclass(frozen=True)
class State:
    """Density matrix: Hermitian, PSD, unit trace."""

    rho: np.ndarray

    def __post_init__(self):
        a = np.array(as_matrix(self.rho))
        a.setflags(write=False)
        object.__setattr__(self, "rho", a)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


def validate_state(m, tol: float = TOL_PSD) -> State:
    """Check Hermiticity, positivity, and unit trace, then wrap."""
    a = as_matrix(m)
    if not is_hermitian(a):
        raise OpmeasError("state is not Hermitian")
    evals = eig_hermitian(a).eigenvalues
    if evals[0] < -tol:
        raise SpectrumOutOfRangeError(float(evals[0]), "state has a negative eigenvalue")
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TOL_TRACE:
        raise OpmeasError(f"state trace {tr!r} differs from 1 beyond {TOL_TRACE}")
    return State(rho=a)


def pure_state(vec) -> State:
    """Normalize a vector and return the rank-one density matrix on it."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise OpmeasError("zero vector has no associated pure state")
    v = v / n
    return State(rho=outer(v))


def maximally_mixed(dim: int) -> State:
    return State(rho=np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class LudersInstrument:
    """Normalized source POM together with its Kraus operators sqrt(E_i)."""

    source: Pom
    kraus: tuple[np.ndarray, ...]

    @classmethod
    def from_pom(cls, pom: Pom) -> LudersInstrument:
        if not pom.normalized:
            raise NotNormalizedError("Luders instrument requires a normalized POM")
        ops = []
        for e in pom.effects:
            k = psd_sqrt(e.op)
            k.setflags(write=False)
            ops.append(k)
        return cls(source=pom, kraus=tuple(ops))

    @property
    def dim(self) -> int:
        return self.source.dim


def luders_channel(instr: LudersInstrument, rho: State) -> State:
    """Nonselective state update: sum of sqrt(E_i) rho sqrt(E_i)."""
    require_same_dim(instr.kraus[0], rho.rho)
    out = np.zeros_like(rho.rho)
    for k in instr.kraus:
        out = out + k @ rho.rho @ k
    return State(rho=hermitize(out))


class SelectiveResult(NamedTuple):
    sub_state: np.ndarray
    probability: float


def luders_selective(instr: LudersInstrument, outcome, rho: State) -> SelectiveResult:
    """Unnormalized post-measurement state for one outcome.

    The trace of the sub-state is the outcome probability tr[rho E_i];
    summing sub-states over all outcomes recovers the full channel.
    """
    i = instr.source.index(outcome)
    require_same_dim(instr.kraus[0], rho.rho)
    k = instr.kraus[i]
    sub = hermitize(k @ rho.rho @ k)
    return SelectiveResult(sub_state=sub, probability=float(np.trace(sub).real))


def heisenberg_dual(instr: LudersInstrument, b: Effect) -> Effect:
    """Dual map on effects: B -> sum sqrt(E_i) B sqrt(E_i).

    The dual of a Luders channel maps effects to effects, so the result is
    wrapped without revalidation.
    """
    require_same_dim(instr.kraus[0], b.op)
    out = np.zeros_like(b.op)
    for k in instr.kraus:
        out = out + k @ b.op @ k
    return Effect(op=hermitize(out))


class NondisturbanceReport(NamedTuple):
    holds: bool
    deviation: float
    witness: State | None


def nondisturbance(instr: LudersInstrument, b: Effect, tol: float = _EQUIV_TOL) -> NondisturbanceReport:
    """Fixed-point test for the Heisenberg dual.

    deviation = ||dual(B) - B||_op.  Since tr[rho (dual(B) - B)] ranges over
    the numerical range of the deviation operator as rho ranges over all
    states, the statistics of B are unchanged for every input state iff the
    deviation vanishes.  The witness is the pure state on the eigenvector
    of the extremal eigenvalue, attaining |tr[rho dual(B)] - tr[rho B]| =
    deviation.
    """
    d = heisenberg_dual(instr, b).op - b.op
    eig = eig_hermitian(hermitize(d))
    lo, hi = eig.eigenvalues[0], eig.eigenvalues[-1]
    deviation = float(max(abs(lo), abs(hi)))
    if deviation <= tol:
        return NondisturbanceReport(holds=True, deviation=deviation, witness=None)
    col = 0 if abs(lo) >= abs(hi) else d.shape[0] - 1
    witness = State(rho=outer(eig.eigenvectors[:, col]))
    return NondisturbanceReport(holds=False, deviation=deviation, witness=witness)


class Prop1Report(NamedTuple):
    case: str
    commute: bool
    nondisturb: bool
    equivalent: bool
    max_commutator: float
    deviation: float


def proposition1_verify(pom: Pom, b: Effect, tol: float = _EQUIV_TOL) -> Prop1Report:
    """Commutativity of B with a POM versus nondisturbance of B by its Luders channel.

    In finite dimension every effect has a discretely ordered spectrum, so
    the ordered-spectrum case applies to any source POM ("alpha"); binary
    POMs additionally fall under the two-outcome case ("both").
    """
    if not pom.normalized:
        raise NotNormalizedError("proposition1_verify requires a normalized POM")
    max_comm = max(commutator_norm(b.op, e.op) for e in pom.effects)
    commute = max_comm <= tol
    instr = LudersInstrument.from_pom(pom)
    nd = nondisturbance(instr, b, tol)
    return Prop1Report(
        case="both" if len(pom) == 2 else "alpha",
        commute=commute,
        nondisturb=nd.holds,
        equivalent=commute == nd.holds,
        max_commutator=float(max_comm),
        deviation=nd.deviation,
    )


def _spanning_pure_states(dim: int) -> list[np.ndarray]:
    """dim**2 pure density matrices spanning the Hermitian matrices.

    Basis states |i>, (|i> + |j>)/sqrt(2), (|i> + i|j>)/sqrt(2): real and
    imaginary parts of every matrix unit are linear combinations of these,
    so two linear maps agreeing on all of them agree on every state.
    """
    states: list[np.ndarray] = []
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        states.append(outer(v))
    for i in range(dim):
        for j in range(i + 1, dim):
            v = np.zeros(dim, dtype=complex)
            v[i] = 1.0
            v[j] = 1.0
            states.append(outer(v / np.sqrt(2.0)))
            w = np.zeros(dim, dtype=complex)
            w[i] = 1.0
            w[j] = 1.0j
            states.append(outer(w / np.sqrt(2.0)))
    return states


class ObjectivityReport(NamedTuple):
    ops_commute: bool
    effects_commute: bool
    agree: bool
    max_order_gap: float


def objectivity_check(pom_a: Pom, pom_b: Pom, tol: float = _EQUIV_TOL) -> ObjectivityReport:
    """Do the selective operations of two POMs commute as maps?

    Both compositions are evaluated on a spanning set of pure states, so
    map equality is decided by linearity.  Compared against plain pairwise
    commutativity of the effects.
    """
    if not (pom_a.normalized and pom_b.normalized):
        raise NotNormalizedError("objectivity_check requires normalized POMs")
    require_same_dim(pom_a.effects[0].op, pom_b.effects[0].op)
    ia = LudersInstrument.from_pom(pom_a)
    ib = LudersInstrument.from_pom(pom_b)
    states = _spanning_pure_states(pom_a.dim)
    gap = 0.0
    for ka in ia.kraus:
        for kb in ib.kraus:
            for rho in states:
                ab = ka @ (kb @ rho @ kb) @ ka
                ba = kb @ (ka @ rho @ ka) @ kb
                gap = max(gap, op_norm(ab - ba))
    ops_commute = gap <= tol
    max_eff = max(
        commutator_norm(ea.op, eb.op)
        for ea in pom_a.effects
        for eb in pom_b.effects
    )
    effects_commute = max_eff <= tol
    return ObjectivityReport(
        ops_commute=ops_commute,
        effects_commute=effects_commute,
        agree=ops_commute == effects_commute,
        max_order_gap=float(gap),
    )


class CausalityCReport(NamedTuple):
    a_disturbs_b: bool
    b_disturbs_a: bool


def causality_check_C(pom_a: Pom, pom_b: Pom, tol: float = _EQUIV_TOL) -> CausalityCReport:
    """Mutual statistics disturbance between two normalized POMs.

    A disturbs B when some effect of B fails the fixed-point test under
    A's Luders channel.  Neither direction is disturbed exactly when all
    cross-pairs of effects commute.
    """
    ia = LudersInstrument.from_pom(pom_a)
    ib = LudersInstrument.from_pom(pom_b)
    a_disturbs = any(not nondisturbance(ia, f, tol).holds for f in pom_b.effects)
    b_disturbs = any(not nondisturbance(ib, e, tol).holds for e in pom_a.effects)
    return CausalityCReport(a_disturbs_b=a_disturbs, b_disturbs_a=b_disturbs)
