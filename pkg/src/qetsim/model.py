"""Model builders: the 2-qubit minimal model, the {3,q} star model with
zero-point offsets, dense ground-state solving, and the feedback angle.

Site-count convention for the star family: a {3,q} network cell is modeled
with q qubits, the sender at site 0 and q-1 receivers at sites 1..q-1, each
coupled to the sender by 2k X0Xj.  The q=2 member of the family is exactly
the minimal model, whose coupling term is 2k X0X1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .ops import (
    DegenerateGroundError,
    ObservableSum,
    PauliString,
    StateVector,
    expectation,
    heisenberg_derivative,
    single_term,
    to_dense,
    word_product,
    z_on,
)

DEGENERACY_TOL = 1e-9
MAX_SOLVE_QUBITS = 14


@dataclass(frozen=True)
class MinimalModelParams:
    h: float
    k: float

    def __post_init__(self):
        if not (self.h > 0 and self.k > 0):
            raise ValueError("h and k must be positive")


@dataclass(frozen=True)
class StarModelParams:
    """h, k and the coordination number q of the {3,q} tiling (q sites).

    q = 2 is allowed as the degenerate member of the family: one sender and
    one receiver, which is exactly the minimal model.
    """

    h: float
    k: float
    q: int

    def __post_init__(self):
        if not (self.h > 0 and self.k > 0):
            raise ValueError("h and k must be positive")
        if self.q < 2:
            raise ValueError("q must be at least 2")
        if self.q > MAX_SOLVE_QUBITS:
            raise ValueError(f"q = {self.q} exceeds the {MAX_SOLVE_QUBITS}-qubit guard")


@dataclass(frozen=True, eq=False)
class ModelBundle:
    """Total Hamiltonian plus its named local terms and the site roles.

    The sum of the locals equals the total (canonical equality), and every
    local has zero ground-state expectation by construction of the offsets.
    """

    kind: str  # "minimal" | "star"
    params: object
    total: ObservableSum
    locals: dict[str, ObservableSum]
    sender_site: int
    receiver_sites: tuple[int, ...]

    @property
    def n_qubits(self) -> int:
        return self.total.n_qubits

    def local(self, name: str) -> ObservableSum:
        return self.locals[name]

    def hz_name(self, site: int) -> str:
        if self.kind == "minimal":
            return "H0" if site == 0 else "H1"
        return f"Z{site}"

    def hx_name(self, site: int) -> str:
        return "V" if self.kind == "minimal" else f"X{site}"

    def receiver_local(self, site: int) -> ObservableSum:
        if site not in self.receiver_sites:
            raise ValueError(f"site {site} is not a receiver")
        return self.locals[self.hz_name(site)] + self.locals[self.hx_name(site)]


@dataclass(frozen=True, eq=False)
class GroundSolution:
    state: StateVector
    energy: float
    gap: float


@dataclass(frozen=True)
class FeedbackAngle:
    """Conditional-rotation angle with the moments that determine it.

    xi = <g| s_j H s_j |g> and eta = <g| s_i (i[H, s_j]) |g>; theta is the
    branch of atan2(eta, xi)/2 that minimizes the receiver energy, i.e.
    cos(2 theta) = xi / sqrt(xi^2 + eta^2) and
    sin(2 theta) = eta / sqrt(xi^2 + eta^2).
    """

    theta: float
    xi: float
    eta: float


def build_minimal(params: MinimalModelParams) -> ModelBundle:
    """H0 = hZ0 + h^2/r, H1 = hZ1 + h^2/r, V = 2k X0X1 + 2k^2/r, r = sqrt(h^2+k^2)."""
    h, k = params.h, params.k
    r = np.hypot(h, k)
    H0 = single_term(h, z_on(2, 0), offset=h * h / r)
    H1 = single_term(h, z_on(2, 1), offset=h * h / r)
    V = single_term(2 * k, PauliString(2, "XX"), offset=2 * k * k / r)
    locals_ = {"H0": H0, "H1": H1, "V": V}
    return ModelBundle(
        kind="minimal",
        params=params,
        total=H0 + H1 + V,
        locals=locals_,
        sender_site=0,
        receiver_sites=(1,),
    )


def analytic_ground_minimal(params: MinimalModelParams) -> StateVector:
    """Closed-form minimal-model ground state, supported on |00> and |11>."""
    h, k = params.h, params.k
    r = np.hypot(h, k)
    amps = np.zeros(4, dtype=np.complex128)
    amps[0b00] = np.sqrt((1.0 - h / r) / 2.0)
    amps[0b11] = -np.sqrt((1.0 + h / r) / 2.0)
    return StateVector(2, amps)


def solve_ground(obs: ObservableSum) -> GroundSolution:
    """Minimal eigenpair of the dense Hermitian matrix, with the spectral gap.

    Rejects (numerically) degenerate ground spaces: the protocol angles are
    undefined on a degenerate ground space.
    """
    if obs.n_qubits > MAX_SOLVE_QUBITS:
        raise ValueError(f"{obs.n_qubits} qubits exceeds the {MAX_SOLVE_QUBITS}-qubit guard")
    M = to_dense(obs)
    if np.abs(M.imag).max() < 1e-14:
        M = np.ascontiguousarray(M.real)
    vals, vecs = scipy.linalg.eigh(M, subset_by_index=(0, 1))
    gap = float(vals[1] - vals[0])
    if gap < DEGENERACY_TOL:
        raise DegenerateGroundError(
            f"ground space degenerate within tolerance (gap = {gap:.3e})"
        )
    vec = vecs[:, 0].astype(np.complex128)
    # deterministic global phase: largest-magnitude amplitude real positive
    pivot = int(np.argmax(np.abs(vec)))
    vec *= np.exp(-1j * np.angle(vec[pivot]))
    vec /= np.linalg.norm(vec)
    return GroundSolution(
        state=StateVector(obs.n_qubits, vec), energy=float(vals[0]), gap=gap
    )


@lru_cache(maxsize=None)
def minimal_model(params: MinimalModelParams) -> tuple[ModelBundle, GroundSolution]:
    bundle = build_minimal(params)
    return bundle, solve_ground(bundle.total)


@lru_cache(maxsize=None)
def star_model(params: StarModelParams) -> tuple[ModelBundle, GroundSolution]:
    """Build the star bundle and its ground solution (offsets need the ground).

    The offsets cannot change the eigenvectors, so the ground state is solved
    on the Pauli parts alone and each local's offset is then set to the
    negative of its Pauli-part ground expectation, making every local and the
    total vanish in the ground state.
    """
    h, k, q = params.h, params.k, params.q
    n = q
    z_words = [z_on(n, i) for i in range(n)]
    xx_words = {j: PauliString.from_map(n, {0: "X", j: "X"}) for j in range(1, n)}
    pauli_total = ObservableSum(
        n,
        tuple((h, w) for w in z_words) + tuple((2 * k, w) for w in xx_words.values()),
    )
    raw = solve_ground(pauli_total)
    g = raw.state
    locals_: dict[str, ObservableSum] = {}
    for i, w in enumerate(z_words):
        part = single_term(h, w)
        locals_[f"Z{i}"] = single_term(h, w, offset=-expectation(g, part))
    for j, w in xx_words.items():
        part = single_term(2 * k, w)
        locals_[f"X{j}"] = single_term(2 * k, w, offset=-expectation(g, part))
    total = ObservableSum(n)
    for term in locals_.values():
        total = total + term
    bundle = ModelBundle(
        kind="star",
        params=params,
        total=total,
        locals=locals_,
        sender_site=0,
        receiver_sites=tuple(range(1, n)),
    )
    ground = GroundSolution(state=g, energy=raw.energy + total.offset, gap=raw.gap)
    return bundle, ground


def build_star(params: StarModelParams) -> ModelBundle:
    return star_model(params)[0]


def compute_theta(
    ground: GroundSolution,
    H: ObservableSum,
    sender_sigma: PauliString,
    receiver_sigma: PauliString,
) -> FeedbackAngle:
    """Feedback angle from xi and eta; theta in (-pi/2, pi/2].

    theta = atan2(eta, xi) / 2 is the global minimizer of the receiver energy
    E(theta) = xi sin^2(theta) - eta sin(theta) cos(theta); the sign of eta is
    pinned by the dense-matrix commutator convention of heisenberg_derivative.
    """
    g = ground.state
    xi = expectation(g, H.conjugated_by(receiver_sigma))
    sigma_dot = heisenberg_derivative(H, receiver_sigma)
    cross_terms = []
    for coeff, word in sigma_dot.terms:
        phase, prod = word_product(sender_sigma, word)
        c = coeff * phase
        if abs(c.imag) > 1e-10:
            raise ValueError("sender and derivative words do not form a Hermitian product")
        cross_terms.append((c.real, prod))
    eta = expectation(g, ObservableSum(H.n_qubits, tuple(cross_terms)))
    if xi * xi + eta * eta <= 0.0:
        raise ValueError("xi = eta = 0: receiver decoupled, feedback angle undefined")
    theta = 0.5 * np.arctan2(eta, xi)
    return FeedbackAngle(theta=float(theta), xi=float(xi), eta=float(eta))


def feedback_angle(
    bundle: ModelBundle,
    ground: GroundSolution,
    receiver_site: int,
    sender_axis: str = "X",
    receiver_axis: str = "Y",
) -> FeedbackAngle:
    """Angle for one receiver; axes default to the protocol's X0 / Yj."""
    n = bundle.n_qubits
    sender = PauliString.from_map(n, {bundle.sender_site: sender_axis})
    receiver = PauliString.from_map(n, {receiver_site: receiver_axis})
    return compute_theta(ground, bundle.total, sender, receiver)
