"""Shot-based Monte Carlo estimation of the protocol observables.

A run is either a Z-run (terminal computational readout of every site) or an
X-run (Hadamard at every site first, so the readout bits are X eigenvalues);
the two never share shots because X and Z do not commute.  The mid-circuit
measurement is realized by Born sampling: the two mu-conditional
post-feedback readout distributions are precomputed once (they do not depend
on the shot), and each shot draws (mu, outcome) from them by inverse CDF.

Randomness is counter-based (numpy Philox keyed by master seed, model
parameters, receiver set and basis), so the pair of uniforms consumed by
shot i is a pure function of (key, i): results are independent of execution
order, and tallies are plain integer bincounts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import pauli_eigs
from .model import GroundSolution, ModelBundle, feedback_angle
from .ops import HADAMARD, ObservableSum, apply_gate_1q
from .protocol import QetRecord, ReceiverEnergy, alice_measure, apply_feedback

_BASIS_CODES = {"Z": 0, "X": 1}


@dataclass(frozen=True)
class ShotPlan:
    basis_run: str  # "Z" | "X"
    shots: int
    master_seed: int

    def __post_init__(self):
        if self.basis_run not in _BASIS_CODES:
            raise ValueError(f"basis_run must be 'Z' or 'X', got {self.basis_run!r}")
        if self.shots < 1:
            raise ValueError("shots must be positive")


@dataclass(frozen=True, eq=False)
class SampleTallies:
    basis: str
    shots: int
    n_qubits: int
    counts: np.ndarray  # int64 occurrences per computational outcome
    mu_counts: tuple[int, int]  # occurrences of mu = +1, -1
    master_seed: int


@dataclass(frozen=True)
class EstimateRow:
    observable: str
    mean: float
    stderr: float
    shots: int


def _float_bits(x: float) -> int:
    return int.from_bytes(np.float64(x).tobytes(), "little")


def _seed_key(bundle: ModelBundle, receivers: tuple[int, ...], plan: ShotPlan) -> list[int]:
    p = bundle.params
    kind_code = 1 if bundle.kind == "minimal" else 2
    q = getattr(p, "q", 0)
    return [
        plan.master_seed,
        kind_code,
        q,
        _float_bits(p.h),
        _float_bits(p.k),
        _BASIS_CODES[plan.basis_run],
        *receivers,
    ]


def sample_protocol(
    bundle: ModelBundle,
    ground: GroundSolution,
    receivers: tuple[int, ...],
    plan: ShotPlan,
) -> SampleTallies:
    """Run `plan.shots` end-to-end shots and tally the terminal outcomes."""
    ensemble, _ = alice_measure(bundle, ground)
    for j in receivers:
        ensemble = apply_feedback(ensemble, j, feedback_angle(bundle, ground, j))

    n = bundle.n_qubits
    dim = 2**n
    probs = {}
    for branch in ensemble.branches:
        state = branch.state
        if plan.basis_run == "X":
            for site in range(n):
                state = apply_gate_1q(state, site, HADAMARD)
        probs[branch.label] = (
            branch.probability,
            np.abs(state.amplitudes) ** 2,
        )
    p_plus = probs.get(+1, (0.0, None))[0]

    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(_seed_key(bundle, receivers, plan)))
    )
    u = rng.random((plan.shots, 2))
    take_plus = u[:, 0] < p_plus
    counts = np.zeros(dim, dtype=np.int64)
    mu_counts = [0, 0]
    for mu, selector in ((+1, take_plus), (-1, ~take_plus)):
        n_mu = int(selector.sum())
        mu_counts[0 if mu == +1 else 1] = n_mu
        if n_mu == 0 or mu not in probs:
            continue
        cdf = np.cumsum(probs[mu][1])
        cdf[-1] = 1.0
        outcomes = np.searchsorted(cdf, u[selector, 1], side="right")
        counts += np.bincount(outcomes, minlength=dim)
    return SampleTallies(
        basis=plan.basis_run,
        shots=plan.shots,
        n_qubits=n,
        counts=counts,
        mu_counts=(mu_counts[0], mu_counts[1]),
        master_seed=plan.master_seed,
    )


def _readout_mask(word, basis: str) -> int:
    letters = set(word.letters) - {"I"}
    if basis == "Z" and letters <= {"Z"}:
        return word.z_mask
    if basis == "X" and letters <= {"X"}:
        return word.x_mask
    raise ValueError(
        f"observable word {word.letters} is not measurable from a {basis}-run"
    )


def estimate(tallies: SampleTallies, obs: ObservableSum, label: str = "") -> EstimateRow:
    """Mean and standard error of an observable from one basis run.

    The per-shot value is offset + sum_t c_t * (+-1 parity of the outcome
    bits on t's support); stderr is the sample standard deviation over shots
    divided by sqrt(shots).
    """
    if obs.n_qubits != tallies.n_qubits:
        raise ValueError("qubit count mismatch")
    dim = 2**tallies.n_qubits
    values = np.full(dim, obs.offset, dtype=np.float64)
    idx = np.arange(dim, dtype=np.int64)
    for coeff, word in obs.terms:
        values += coeff * pauli_eigs(idx, _readout_mask(word, tallies.basis))
    n = tallies.shots
    mean = float(np.dot(tallies.counts, values)) / n
    if n < 2:
        stderr = 0.0
    else:
        var = float(np.dot(tallies.counts, (values - mean) ** 2)) / (n - 1)
        stderr = float(np.sqrt(var / n))
    return EstimateRow(observable=label, mean=mean, stderr=stderr, shots=n)


def sampled_record(
    bundle: ModelBundle,
    ground: GroundSolution,
    receivers: tuple[int, ...],
    shots: int,
    master_seed: int,
) -> QetRecord:
    """Shot-sampled analogue of the exact protocol record.

    E0 comes from the Z-run estimator of the sender's field term (its
    post-measurement mean equals the injected energy); each receiver energy
    combines its Z-run and X-run terms with quadrature standard errors.
    """
    receivers = tuple(receivers)
    z_tallies = sample_protocol(bundle, ground, receivers, ShotPlan("Z", shots, master_seed))
    x_tallies = sample_protocol(bundle, ground, receivers, ShotPlan("X", shots, master_seed))

    hz0 = bundle.hz_name(bundle.sender_site)
    e0_row = estimate(z_tallies, bundle.locals[hz0], "E0")
    stderr = {"E0": e0_row.stderr}
    energies = {}
    for j in receivers:
        hz_row = estimate(z_tallies, bundle.locals[bundle.hz_name(j)], f"HZ{j}")
        hx_row = estimate(x_tallies, bundle.locals[bundle.hx_name(j)], f"HX{j}")
        e_j = hx_row.mean + hz_row.mean
        energies[j] = ReceiverEnergy(hx=hx_row.mean, hz=hz_row.mean, e_j=e_j, e_b=-e_j)
        stderr[f"HZ{j}"] = hz_row.stderr
        stderr[f"HX{j}"] = hx_row.stderr
        stderr[f"E{j}"] = float(np.hypot(hx_row.stderr, hz_row.stderr))
    angles = {j: feedback_angle(bundle, ground, j) for j in receivers}
    if bundle.kind == "minimal":
        params = {"h": bundle.params.h, "k": bundle.params.k}
    else:
        params = {"h": bundle.params.h, "k": bundle.params.k, "q": bundle.params.q}
    return QetRecord(
        kind=bundle.kind,
        params=params,
        e0=e0_row.mean,
        theta=angles,
        receivers=energies,
        method="sampled",
        stderr=stderr,
    )


@dataclass(frozen=True)
class TableCell:
    tiling: str
    h: float
    k: float
    observable: str
    site: int
    method: str  # "exact" | "sampled"
    mean: float
    stderr: float | None
    shots: int | None
    seed: int | None


_TABLE_OBSERVABLES = ("E0", "HX1", "HZ1", "E1", "HX2", "HZ2", "E2")


def _record_value(record: QetRecord, observable: str) -> float:
    if observable == "E0":
        return record.e0
    site = int(observable[-1])
    r = record.receivers[site]
    if observable.startswith("HX"):
        return r.hx
    if observable.startswith("HZ"):
        return r.hz
    return r.e_j


def _site_of(observable: str) -> int:
    return 0 if observable == "E0" else int(observable[-1])


def estimate_table1(
    configs,
    shots: int,
    master_seed: int,
) -> list[TableCell]:
    """Exact and sampled values for every (tiling q, h, k) config.

    Row layout per config: E0, HX1, HZ1, E1, HX2, HZ2, E2 with receivers 1
    and 2 acting simultaneously.
    """
    from .model import StarModelParams, star_model
    from .protocol import run_qed

    cells = []
    for (q, h, k) in configs:
        params = StarModelParams(h=float(h), k=float(k), q=int(q))
        bundle, ground = star_model(params)
        exact = run_qed(params, (1, 2))
        sampled = sampled_record(bundle, ground, (1, 2), shots, master_seed)
        tiling = f"{{3,{q}}}"
        for obs in _TABLE_OBSERVABLES:
            cells.append(
                TableCell(
                    tiling=tiling, h=float(h), k=float(k), observable=obs,
                    site=_site_of(obs), method="exact",
                    mean=_record_value(exact, obs), stderr=None, shots=None, seed=None,
                )
            )
        for obs in _TABLE_OBSERVABLES:
            cells.append(
                TableCell(
                    tiling=tiling, h=float(h), k=float(k), observable=obs,
                    site=_site_of(obs), method="sampled",
                    mean=_record_value(sampled, obs),
                    stderr=sampled.stderr[obs], shots=shots, seed=master_seed,
                )
            )
    return cells


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".12g")
    value = str(x)
    if "," in value:
        value = f'"{value}"'
    return value


def cells_to_csv(cells: list[TableCell], extra_columns: dict[str, list] | None = None) -> str:
    """Long-format CSV: tiling,h,k,observable,site,method,mean,stderr,shots,seed."""
    header = ["tiling", "h", "k", "observable", "site", "method",
              "mean", "stderr", "shots", "seed"]
    extras = extra_columns or {}
    header += list(extras)
    lines = [",".join(header)]
    for i, c in enumerate(cells):
        row = [_fmt(c.tiling), _fmt(c.h), _fmt(c.k), c.observable, str(c.site),
               c.method, _fmt(c.mean), _fmt(c.stderr), _fmt(c.shots), _fmt(c.seed)]
        row += [_fmt(extras[name][i]) for name in extras]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
