import numpy as np
import pytest

from oracle_utils import star_reduced_values

from qetsim.model import (
    DegenerateGroundError,
    FeedbackAngle,
    MinimalModelParams,
    StarModelParams,
    analytic_ground_minimal,
    build_minimal,
    build_star,
    compute_theta,
    feedback_angle,
    minimal_model,
    solve_ground,
    star_model,
)
from qetsim.ops import (
    ObservableSum,
    PauliString,
    expectation,
    fidelity,
    single_term,
    x_on,
    y_on,
    z_on,
)

HK_GRID = [(h, k) for h in (2.0, 4.0, 6.0, 8.0, 9.0) for k in (1.0, 2.0, 3.0, 4.0, 5.0)]


# --- minimal model -----------------------------------------------------------

def test_minimal_offsets_at_h_k_one():
    bundle = build_minimal(MinimalModelParams(1.0, 1.0))
    assert bundle.locals["H0"].offset == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert bundle.locals["H1"].offset == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert bundle.locals["V"].offset == pytest.approx(2 / np.sqrt(2), abs=1e-14)


def test_minimal_total_is_sum_of_locals():
    bundle = build_minimal(MinimalModelParams(3.0, 0.5))
    summed = bundle.locals["H0"] + bundle.locals["H1"] + bundle.locals["V"]
    assert bundle.total.isclose(summed)


def test_minimal_small_k_limit():
    bundle = build_minimal(MinimalModelParams(2.0, 1e-8))
    assert bundle.locals["H0"].offset == pytest.approx(2.0, rel=1e-12)
    assert bundle.locals["V"].offset == pytest.approx(0.0, abs=1e-12)
    (coeff, _), = bundle.locals["V"].terms
    assert coeff == pytest.approx(2e-8)


def test_analytic_ground_amplitudes():
    g = analytic_ground_minimal(MinimalModelParams(1.0, 1.0))
    assert g.amplitudes[0b00].real == pytest.approx(0.3826834323650898, abs=1e-12)
    assert g.amplitudes[0b11].real == pytest.approx(-0.9238795325112867, abs=1e-12)
    assert g.amplitudes[0b01] == 0 and g.amplitudes[0b10] == 0


def test_analytic_ground_small_k_limit_and_norm():
    g = analytic_ground_minimal(MinimalModelParams(1.0, 1e-9))
    assert abs(g.amplitudes[0b11] + 1.0) < 1e-9
    for h, k in HK_GRID:
        g = analytic_ground_minimal(MinimalModelParams(h, k))
        assert np.linalg.norm(g.amplitudes) == pytest.approx(1.0, abs=1e-14)


def test_minimal_zero_mean_suite():
    for h, k in HK_GRID:
        bundle, ground = minimal_model(MinimalModelParams(h, k))
        for obs in [bundle.total, *bundle.locals.values()]:
            assert abs(expectation(ground.state, obs)) < 1e-10, (h, k)


def test_minimal_ground_energy_zero_for_9_2():
    _, ground = minimal_model(MinimalModelParams(9.0, 2.0))
    assert abs(ground.energy) < 1e-10


# --- solve_ground ------------------------------------------------------------

def test_single_qubit_field_ground():
    h = 1.3
    sol = solve_ground(single_term(h, z_on(1, 0)))
    assert sol.energy == pytest.approx(-h, abs=1e-12)
    assert sol.gap == pytest.approx(2 * h, abs=1e-12)
    assert abs(sol.state.amplitudes[1]) == pytest.approx(1.0, abs=1e-12)


def test_numeric_matches_analytic_across_grid():
    for h, k in HK_GRID:
        bundle, ground = minimal_model(MinimalModelParams(h, k))
        assert fidelity(ground.state, analytic_ground_minimal(MinimalModelParams(h, k))) >= 1 - 1e-10


def test_degenerate_ground_rejected():
    with pytest.raises(DegenerateGroundError):
        solve_ground(single_term(1.0, PauliString(2, "ZZ")))


def test_offsets_do_not_change_eigenvectors():
    base = ObservableSum(
        2, ((1.0, z_on(2, 0)), (0.5, z_on(2, 1)), (0.7, PauliString(2, "XX")))
    )
    shifted = ObservableSum(2, base.terms, offset=5.5)
    a = solve_ground(base)
    b = solve_ground(shifted)
    assert fidelity(a.state, b.state) >= 1 - 1e-12
    assert b.energy == pytest.approx(a.energy + 5.5, abs=1e-10)


# --- star model --------------------------------------------------------------

def test_star_locals_sum_and_zero_mean():
    for q in (3, 6, 7):
        bundle, ground = star_model(StarModelParams(9.0, 2.0, q))
        assert build_star(StarModelParams(9.0, 2.0, q)) is bundle
        assert bundle.n_qubits == q
        assert bundle.receiver_sites == tuple(range(1, q))
        total = ObservableSum(q)
        for local in bundle.locals.values():
            total = total + local
        assert bundle.total.isclose(total)
        for name, local in bundle.locals.items():
            assert abs(expectation(ground.state, local)) < 1e-10, name
        assert abs(expectation(ground.state, bundle.total)) < 1e-10
        assert abs(ground.energy) < 1e-10


def test_star_q2_is_the_minimal_model():
    star_b, star_g = star_model(StarModelParams(1.0, 1.0, 2))
    mini_b, mini_g = minimal_model(MinimalModelParams(1.0, 1.0))
    assert star_b.total.isclose(mini_b.total, tol=1e-10)
    assert fidelity(star_g.state, mini_g.state) >= 1 - 1e-12


def test_star_sender_offset_is_e0_reference_band():
    bundle, _ = star_model(StarModelParams(9.0, 2.0, 6))
    e0 = bundle.locals["Z0"].offset
    assert e0 > 0
    assert e0 == pytest.approx(7.8897, abs=0.036)  # sampled reference +-4 stderr


def test_star_matches_reduced_basis_oracle():
    for q, h, k in ((6, 9.0, 2.0), (7, 7.0, 2.0)):
        oracle = star_reduced_values(q, h, k)
        bundle, ground = star_model(StarModelParams(h, k, q))
        assert bundle.locals["Z0"].offset == pytest.approx(oracle["E0"], abs=1e-9)
        assert ground.gap == pytest.approx(oracle["gap"], abs=1e-9)
        angle = feedback_angle(bundle, ground, 1)
        assert angle.theta == pytest.approx(oracle["theta"], abs=1e-9)
        assert angle.xi == pytest.approx(oracle["xi"], abs=1e-9)
        assert angle.eta == pytest.approx(oracle["eta"], abs=1e-9)


def test_star_small_k_limit_all_down():
    bundle, ground = star_model(StarModelParams(2.0, 1e-6, 5))
    n = bundle.n_qubits
    assert abs(abs(ground.state.amplitudes[2**n - 1]) - 1.0) < 1e-6
    for i in range(n):
        assert bundle.locals[f"Z{i}"].offset == pytest.approx(2.0, abs=1e-6)
    for j in range(1, n):
        assert bundle.locals[f"X{j}"].offset == pytest.approx(0.0, abs=1e-6)


def test_star_energy_equals_minus_offset_sum():
    params = StarModelParams(8.0, 2.0, 7)
    bundle, _ = star_model(params)
    pauli_only = ObservableSum(bundle.n_qubits, bundle.total.terms)
    raw = solve_ground(pauli_only)
    assert raw.energy == pytest.approx(-bundle.total.offset, abs=1e-9)


def test_star_param_validation():
    with pytest.raises(ValueError):
        StarModelParams(1.0, 1.0, 1)
    with pytest.raises(ValueError):
        StarModelParams(1.0, 1.0, 15)
    with pytest.raises(ValueError):
        StarModelParams(-1.0, 1.0, 6)


# --- feedback angle ----------------------------------------------------------

def _receiver_energy_curve(bundle, ground, site, thetas):
    from qetsim.protocol import alice_measure, apply_feedback, receiver_energy

    ens, _ = alice_measure(bundle, ground)
    out = []
    for theta in thetas:
        fb = apply_feedback(ens, site, FeedbackAngle(theta=float(theta), xi=0.0, eta=0.0))
        out.append(receiver_energy(fb, bundle, site).e_j)
    return np.array(out)


@pytest.mark.parametrize("maker", [
    lambda: minimal_model(MinimalModelParams(1.0, 1.0)),
    lambda: star_model(StarModelParams(6.0, 2.0, 6)),
])
def test_theta_minimizes_receiver_energy_grid_scan(maker):
    bundle, ground = maker()
    angle = feedback_angle(bundle, ground, 1)
    thetas = np.arange(-np.pi / 2 + 1e-4, np.pi / 2 + 1e-9, 1e-4)
    energies = _receiver_energy_curve(bundle, ground, 1, thetas)
    e_closed = _receiver_energy_curve(bundle, ground, 1, [angle.theta])[0]
    assert e_closed <= energies.min() + 1e-12
    assert abs(angle.theta - thetas[np.argmin(energies)]) <= 1e-4


def test_theta_double_angle_identities():
    for params in (MinimalModelParams(1.0, 1.0), MinimalModelParams(9.0, 2.0)):
        bundle, ground = minimal_model(params)
        a = feedback_angle(bundle, ground, 1)
        norm = np.hypot(a.xi, a.eta)
        assert np.cos(2 * a.theta) == pytest.approx(a.xi / norm, abs=1e-10)
        assert np.sin(2 * a.theta) == pytest.approx(a.eta / norm, abs=1e-10)
        assert np.cos(2 * a.theta) ** 2 + np.sin(2 * a.theta) ** 2 == pytest.approx(1.0, abs=1e-12)
        assert -np.pi / 2 < a.theta <= np.pi / 2


def test_theta_vanishes_when_decoupled():
    bundle, ground = minimal_model(MinimalModelParams(1.0, 1e-7))
    angle = feedback_angle(bundle, ground, 1)
    assert abs(angle.theta) < 1e-6


def test_theta_known_value_h_k_one():
    bundle, ground = minimal_model(MinimalModelParams(1.0, 1.0))
    angle = feedback_angle(bundle, ground, 1)
    assert angle.theta == pytest.approx(0.1608752771983211, abs=1e-12)
    assert angle.xi == pytest.approx(2 * 3 / np.sqrt(2), abs=1e-10)
    assert angle.eta == pytest.approx(2 / np.sqrt(2), abs=1e-10)


def test_compute_theta_rejects_fully_decoupled_receiver():
    # a zero operator leaves xi = eta = 0, so the angle is undefined
    obs = ObservableSum(2, ((1.0, z_on(2, 0)), (0.5, z_on(2, 1))))
    ground = solve_ground(obs)
    with pytest.raises(ValueError):
        compute_theta(ground, ObservableSum(2), x_on(2, 0), y_on(2, 1))
