"""Translation-covariant localization on a cyclic lattice.

Space is the cyclic group Z_N, so the shift unitary gives *exact*
translation covariance; time is a real parameter driving Heisenberg
evolution under a fixed Hamiltonian.  A ``LocalizationMap`` assigns to
every site set and time slice an effect

    E_Delta(t) = exp(+iHt tau) (sum_{x in Delta} E_x) exp(-iHt tau),

built from a base POM over the sites at slice zero.  Three constructions
are provided — sharp position, kernel-smeared position, and the position
marginal of a discrete Weyl-covariant phase-space POVM — together with
checkers for covariance, localizability (strict and weak), spacelike
separation, and local commutativity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple

import numpy as np

from .effects import TOL_ONE, Effect, spectral_projection
from .errors import GeometryError, NotHermitianError, OpmeasError
from .linalg import as_matrix, commutator_norm, eig_hermitian, hermitize, is_hermitian, op_norm
from .povm import Pom, build_pom, effect_of


def shift_matrix(n: int) -> np.ndarray:
    """Cyclic shift unitary: T|x> = |x+1 mod n>."""
    t = np.zeros((n, n), dtype=complex)
    for x in range(n):
        t[(x + 1) % n, x] = 1.0
    return t


def hopping_hamiltonian(n: int) -> np.ndarray:
    """Nearest-neighbour hopping, H = -(T + T†)/2.

    Eigenvalues -cos(2 pi k / n), so the group velocity |dE/dk| is at most
    one site per unit time; with light_speed 1 the model's light cones
    are physically meaningful.
    """
    t = shift_matrix(n)
    return hermitize(-(t + t.conj().T) / 2.0)


def zero_hamiltonian(n: int) -> np.ndarray:
    return np.zeros((n, n), dtype=complex)


@dataclass(frozen=True)
class LatticeModel:
    """Cyclic lattice Z_N with a Hamiltonian and light-cone geometry."""

    n_sites: int
    hamiltonian: np.ndarray
    shift: np.ndarray
    light_speed: float
    time_step: float

    def __post_init__(self):
        h = np.array(as_matrix(self.hamiltonian))
        h.setflags(write=False)
        s = np.array(as_matrix(self.shift))
        s.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "shift", s)


def make_model(
    n_sites: int,
    hamiltonian: np.ndarray | None = None,
    light_speed: float = 1.0,
    time_step: float = 1.0,
) -> LatticeModel:
    """Validated model; the Hamiltonian defaults to nearest-neighbour hopping."""
    if n_sites < 2:
        raise OpmeasError("need at least two sites")
    if light_speed <= 0 or time_step <= 0:
        raise OpmeasError("light_speed and time_step must be positive")
    h = hopping_hamiltonian(n_sites) if hamiltonian is None else as_matrix(hamiltonian)
    if h.shape[0] != n_sites:
        raise OpmeasError(f"Hamiltonian dim {h.shape[0]} != n_sites {n_sites}")
    if not is_hermitian(h):
        raise NotHermitianError("Hamiltonian must be Hermitian")
    return LatticeModel(
        n_sites=n_sites,
        hamiltonian=h,
        shift=shift_matrix(n_sites),
        light_speed=light_speed,
        time_step=time_step,
    )


def cyclic_distance(n: int, x: int, y: int) -> int:
    d = abs(x % n - y % n)
    return min(d, n - d)


@dataclass(frozen=True)
class SpatialSet:
    """Subset of Z_N pinned to an integer time slice."""

    sites: frozenset[int]
    time_slice: int = 0

    def __init__(self, sites: Iterable[int], time_slice: int = 0):
        object.__setattr__(self, "sites", frozenset(int(x) for x in sites))
        object.__setattr__(self, "time_slice", int(time_slice))

    def sorted_sites(self) -> tuple[int, ...]:
        return tuple(sorted(self.sites))


def _check_sites(model: LatticeModel, d: SpatialSet) -> None:
    if not d.sites:
        raise GeometryError("spatial set is empty")
    bad = [x for x in d.sites if not (0 <= x < model.n_sites)]
    if bad:
        raise GeometryError(f"sites {bad} outside Z_{model.n_sites}")


def set_distance(n: int, a: Iterable[int], b: Iterable[int]) -> int:
    return min(cyclic_distance(n, x, y) for x in a for y in b)


def spacelike_separated(d1: SpatialSet, d2: SpatialSet, model: LatticeModel) -> bool:
    """Minimum cyclic distance strictly exceeds c * tau * |t1 - t2|."""
    _check_sites(model, d1)
    _check_sites(model, d2)
    dist = set_distance(model.n_sites, d1.sites, d2.sites)
    dt = abs(d1.time_slice - d2.time_slice)
    return dist > model.light_speed * model.time_step * dt


@dataclass(frozen=True)
class LocalizationMap:
    """Base POM over sites at slice zero plus the model that evolves it."""

    base_pom: Pom
    model: LatticeModel

    def __post_init__(self):
        if self.base_pom.dim != self.model.n_sites:
            raise OpmeasError("base POM dimension must equal n_sites")
        if self.base_pom.outcomes != tuple(range(self.model.n_sites)):
            raise OpmeasError("base POM outcomes must be the sites 0..N-1")


def propagator(model: LatticeModel, t: float) -> np.ndarray:
    """exp(-i H t tau) via spectral decomposition of H."""
    eig = eig_hermitian(model.hamiltonian)
    phases = np.exp(-1j * eig.eigenvalues * (t * model.time_step))
    return (eig.eigenvectors * phases) @ eig.eigenvectors.conj().T


def effect_for(lmap: LocalizationMap, d: SpatialSet) -> Effect:
    """Heisenberg effect of a spatial set at its time slice."""
    _check_sites(lmap.model, d)
    base = effect_of(lmap.base_pom, d.sites)
    t = d.time_slice
    if t == 0:
        return base
    u = propagator(lmap.model, t)
    return Effect(op=hermitize(u.conj().T @ base.op @ u))


# ---------------------------------------------------------------------------
# constructions


def sharp_position_map(model: LatticeModel) -> LocalizationMap:
    """E_x = |x><x|: sharp, normalized, exactly shift-covariant."""
    n = model.n_sites
    effects = []
    for x in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[x, x] = 1.0
        effects.append(e)
    return LocalizationMap(base_pom=build_pom(effects, require_normalized=True), model=model)


def smeared_position_map(model: LatticeModel, kernel) -> LocalizationMap:
    """Convolve the sharp map with a probability kernel on Z_N.

    E_x = sum_y kernel[(x - y) mod N] |y><y|.  All effects are diagonal, so
    the map is commutative; it is shift-covariant because the construction
    is convolutional; and whenever the kernel has two or more nonzero
    entries, every singleton effect has maximal eigenvalue
    max(kernel) < 1, i.e. the map is strongly unsharp.
    """
    n = model.n_sites
    k = np.asarray(kernel, dtype=float).reshape(-1)
    if k.shape[0] != n:
        raise OpmeasError(f"kernel length {k.shape[0]} != n_sites {n}")
    if (k < 0).any():
        raise OpmeasError("kernel entries must be nonnegative")
    if abs(k.sum() - 1.0) > 1e-12:
        raise OpmeasError(f"kernel must sum to 1, got {k.sum()!r}")
    effects = []
    for x in range(n):
        diag = np.array([k[(x - y) % n] for y in range(n)], dtype=complex)
        effects.append(np.diag(diag))
    return LocalizationMap(base_pom=build_pom(effects, require_normalized=True), model=model)


def three_point_kernel(n: int, center: float = 0.5, side: float = 0.25) -> np.ndarray:
    """Kernel with weight at offsets -1, 0, +1 and zeros elsewhere."""
    if n < 3:
        raise OpmeasError("three-point kernel needs n >= 3")
    if abs(center + 2 * side - 1.0) > 1e-12:
        raise OpmeasError("center + 2*side must equal 1")
    k = np.zeros(n)
    k[0] = center
    k[1] = side
    k[-1] = side
    return k


def gaussian_fiducial(n: int, width: float | None = None) -> np.ndarray:
    """Periodic discrete Gaussian centred at site 0, unit norm.

    Width defaults to n/8.  Amplitudes fall off with cyclic distance, so
    the vector wraps smoothly.
    """
    sigma = n / 8.0 if width is None else float(width)
    if sigma <= 0:
        raise OpmeasError("width must be positive")
    amp = np.array(
        [math.exp(-cyclic_distance(n, x, 0) ** 2 / (4.0 * sigma**2)) for x in range(n)]
    )
    v = amp.astype(complex)
    return v / np.linalg.norm(v)


def coherent_state_povm(model: LatticeModel, fiducial) -> Pom:
    """Discrete Weyl orbit POVM on phase space Z_N x Z_N.

    G(q, p) = (1/N) |eta_qp><eta_qp| with eta_qp = X^q Z^p eta, where X is
    the cyclic shift and Z the modulation Z|x> = exp(2 pi i x / N)|x>.
    The orbit resolves the identity, so the result is a normalized POM
    with N^2 rank-one effects, generically noncommutative.
    """
    n = model.n_sites
    eta = np.asarray(fiducial, dtype=complex).reshape(-1)
    if eta.shape[0] != n:
        raise OpmeasError(f"fiducial length {eta.shape[0]} != n_sites {n}")
    if abs(np.linalg.norm(eta) - 1.0) > 1e-10:
        raise OpmeasError("fiducial must be a unit vector")
    omega = np.exp(2j * np.pi * np.arange(n) / n)
    effects = []
    outcomes = []
    for q in range(n):
        for p in range(n):
            mod = (omega**p) * eta  # Z^p eta
            vec = np.roll(mod, q)  # X^q: amplitude at x comes from x - q
            effects.append(np.outer(vec, vec.conj()) / n)
            outcomes.append((q, p))
    return build_pom(effects, require_normalized=True, outcomes=outcomes)


def position_marginal(povm: Pom, model: LatticeModel) -> LocalizationMap:
    """Collapse a phase-space POM to its position coordinate.

    E_q = sum_p G(q, p); the outcome grid must be exactly
    {(q, p) : q, p in Z_N}.  For Weyl-orbit POVMs the marginal is diagonal
    in the position basis, hence commutative.
    """
    n = model.n_sites
    expected = {(q, p) for q in range(n) for p in range(n)}
    if set(povm.outcomes) != expected:
        raise OpmeasError("outcome grid is not Z_N x Z_N for this model")
    effects = [effect_of(povm, {(q, p) for p in range(n)}).op for q in range(n)]
    return LocalizationMap(
        base_pom=build_pom(effects, require_normalized=povm.normalized),
        model=model,
    )


# ---------------------------------------------------------------------------
# condition checkers


class CovarianceReport(NamedTuple):
    holds: bool
    residual: float


def check_covariance(lmap: LocalizationMap, a: int, tol: float = 1e-12) -> CovarianceReport:
    """Conjugation by the a-fold shift versus relabelling by a.

    residual = max over sites x of || T^a E_x T^-a  -  E_{x+a} ||.
    """
    n = lmap.model.n_sites
    ta = np.linalg.matrix_power(lmap.model.shift, a % n)
    worst = 0.0
    for x in range(n):
        ex = lmap.base_pom.effects[x].op
        shifted = ta @ ex @ ta.conj().T
        target = lmap.base_pom.effects[(x + a) % n].op
        worst = max(worst, op_norm(shifted - target))
    return CovarianceReport(holds=worst <= tol, residual=worst)


class LocalizabilityReport(NamedTuple):
    holds: bool
    residual: float


def check_localizability(
    lmap: LocalizationMap,
    d1: SpatialSet,
    d2: SpatialSet,
    variant: Literal["strict", "weak"] = "strict",
    tol: float = TOL_ONE,
) -> LocalizabilityReport:
    """Disjoint same-slice sets: does localization here exclude there?

    strict: ||E_1 E_2|| — vanishes iff the effects annihilate.
    weak:   ||P1_(1) (I - P0_(2))|| — certainty in the first set forbids
            any chance of detection in the second; P1/P0 are the
            eigenvalue-1 and eigenvalue-0 spectral projections.
    """
    if variant not in ("strict", "weak"):
        raise ValueError("variant must be 'strict' or 'weak'")
    if d1.time_slice != d2.time_slice:
        raise GeometryError("localizability compares sets on one time slice")
    if d1.sites & d2.sites:
        raise GeometryError("sets must be disjoint")
    e1 = effect_for(lmap, d1)
    e2 = effect_for(lmap, d2)
    if variant == "strict":
        residual = op_norm(e1.op @ e2.op)
    else:
        p1 = spectral_projection(e1, "one")
        p0 = spectral_projection(e2, "zero")
        eye = np.eye(e1.dim, dtype=complex)
        residual = op_norm(p1.op @ (eye - p0.op))
    return LocalizabilityReport(holds=residual <= tol, residual=residual)


class LocalCommutativityReport(NamedTuple):
    applicable: bool
    holds: bool | None
    commutator: float


def check_local_commutativity(
    lmap: LocalizationMap,
    d1: SpatialSet,
    d2: SpatialSet,
    tol: float = TOL_ONE,
) -> LocalCommutativityReport:
    """Commutator of the Heisenberg-evolved effects for two set/slice pairs.

    Only spacelike-separated pairs carry a verdict; for timelike ones the
    commutator is still reported but holds is None.
    """
    applicable = spacelike_separated(d1, d2, lmap.model)
    c = commutator_norm(effect_for(lmap, d1).op, effect_for(lmap, d2).op)
    return LocalCommutativityReport(
        applicable=applicable,
        holds=(c <= tol) if applicable else None,
        commutator=c,
    )
