import math

import numpy as np
import pytest

from nlwalk.core import (
    EventKind,
    HorizonError,
    ProblemInstance,
    SubspaceState,
    Unreachable,
    strengths,
)
from nlwalk.dynamics import (
    IntegratorConfig,
    integrate,
    rhs,
    time_to_probability_numeric,
    x_rate,
)


def test_rhs_uniform_start_symmetric():
    # at the uniform state gamma*n = 1 exactly (f_alpha = f_beta)
    inst = ProblemInstance(100, 1, 99.0, 1.0)
    s0 = SubspaceState.uniform(inst)
    da, db = rhs(s0, inst)
    s = strengths(s0.x, inst)
    assert s.gamma_c * inst.n == pytest.approx(1.0, abs=1e-14)
    # the uniform state is real, so dx/dt starts at exactly zero and the
    # probability builds up quadratically; check the rate just after t=0
    assert x_rate(s0, inst) == pytest.approx(0.0, abs=1e-14)
    traj = integrate(inst, IntegratorConfig(t_max=0.1))
    assert traj.x[-1] > s0.x


def test_rhs_linear_reduction():
    # g = 0: gamma = 1/n and the nonlinear diagonal terms vanish
    inst = ProblemInstance(64, 2, 0.0, 0.0)
    state = SubspaceState(complex(0.3), complex(math.sqrt(1 - 0.09)))
    da, db = rhs(state, inst)
    n, k = inst.n, inst.k
    gamma = 1.0 / n
    off = gamma * math.sqrt(k * (n - k))
    assert da == pytest.approx(1j * ((gamma * k + 1) * state.alpha + off * state.beta))
    assert db == pytest.approx(1j * (off * state.alpha + gamma * (n - k) * state.beta))


def test_rhs_diagonal_at_plateau_root():
    from nlwalk.analytics import stationary_roots

    inst = ProblemInstance(1000, 2, 10.0, 4.0)
    x_plus = stationary_roots(inst).x_plus
    s = strengths(x_plus, inst)
    # off-diagonal coupling is gamma*sqrt(k(n-k)); gamma vanishes at x_plus
    assert abs(s.gamma_c) * math.sqrt(inst.k * (inst.n - inst.k)) < 1e-12


def test_first_peak_wide():
    traj = integrate(ProblemInstance(100, 1, 99.0, 1.0), IntegratorConfig(t_max=5.0))
    peak = traj.event(EventKind.FIRST_PEAK)
    assert peak is not None
    assert peak.x >= 1 - 1e-4
    assert 3.0 < peak.t < 3.3


def test_plateau_heights():
    # weak g converges to its plateau slowly (dx/dt only drops below the
    # detection threshold near t ~ 60), so only the height is asserted there
    traj = integrate(ProblemInstance(1000, 2, 10.0, 4.0), IntegratorConfig(t_max=40.0))
    assert traj.x[-1] == pytest.approx(0.653, abs=5e-3)

    traj = integrate(ProblemInstance(1000, 3, 999.0, 5.0), IntegratorConfig(t_max=20.0))
    assert traj.x[-1] == pytest.approx(0.6, abs=5e-3)
    assert traj.event(EventKind.PLATEAU_DETECTED) is not None


def test_norm_and_sampling_invariants():
    traj = integrate(ProblemInstance(500, 3, 100.0, 2.0), IntegratorConfig(t_max=10.0))
    assert np.all(np.diff(traj.t) > 0)
    assert traj.norm_err.max() <= 1e-9
    assert np.all(traj.x >= 0) and np.all(traj.x <= 1 + 1e-12)


def test_determinism_bitwise():
    inst = ProblemInstance(300, 2, 50.0, 1.5)
    a = integrate(inst, IntegratorConfig(t_max=5.0))
    b = integrate(inst, IntegratorConfig(t_max=5.0))
    assert np.array_equal(a.alpha, b.alpha) and np.array_equal(a.beta, b.beta)


def test_flow_consistency():
    # dx/dt = (2 sqrt(k)/n) [1 + g(f_a - f_b)] sqrt((1-x)(n x - k)) before the peak
    inst = ProblemInstance(1000, 3, 999.0, 1.0)
    traj = integrate(inst, IntegratorConfig(t_max=1.5))
    peak = traj.event(EventKind.FIRST_PEAK)
    t_stop = peak.t if peak else traj.t[-1]
    n, k, g = inst.n, inst.k, inst.g
    for i in range(0, len(traj.t), 25):
        t, x = traj.t[i], traj.x[i]
        if t >= t_stop - 0.05 or x > 1 - 1e-6:
            continue
        state = SubspaceState(complex(traj.alpha[i]), complex(traj.beta[i]))
        s = strengths(x, inst)
        predicted = (
            2 * math.sqrt(k) / n
            * (1 + g * (s.f_alpha - s.f_beta))
            * math.sqrt((1 - x) * (n * x - k))
        )
        assert x_rate(state, inst) == pytest.approx(predicted, rel=1e-6)


def test_time_to_probability_linear_case():
    # g = 0 reduces to the linear walk: t(1) = (pi/2) sqrt(n/k)
    t = time_to_probability_numeric(ProblemInstance(100, 1, 0.0, 0.0), 1.0)
    assert t == pytest.approx(5 * math.pi, rel=1e-6)


def test_time_to_probability_wide_peak():
    # leading-order prediction pi*sqrt(1000/1011) = 3.124; exact is ~0.3% above
    t = time_to_probability_numeric(ProblemInstance(1000, 3, 999.0, 3.0), 1.0)
    assert t == pytest.approx(3.124, rel=5e-3)


def test_time_to_probability_unreachable_in_plateau():
    with pytest.raises(Unreachable):
        time_to_probability_numeric(ProblemInstance(1000, 3, 999.0, 4.0), 0.9)


def test_time_to_probability_horizon():
    inst = ProblemInstance(1000, 3, 10.0, 1.0)
    with pytest.raises(HorizonError):
        time_to_probability_numeric(inst, 0.9, IntegratorConfig(t_max=1.0))


def test_fixed_point_stays_put():
    from nlwalk.analytics import stationary_roots
    from nlwalk.dynamics import _solve

    inst = ProblemInstance(1000, 3, 999.0, 4.0)
    x_plus = stationary_roots(inst).x_plus
    y0 = np.array([math.sqrt(x_plus), math.sqrt(1 - x_plus)], dtype=complex)
    sol = _solve(inst, IntegratorConfig(t_max=10.0), y0=y0)
    t = np.linspace(0, 10, 2001)
    x = np.abs(sol.sol(t)[0]) ** 2
    assert np.abs(x - x_plus).max() <= 1e-6


def test_bad_config_rejected():
    with pytest.raises(ValueError):
        IntegratorConfig(t_max=-1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(sample_dt=5.0, t_max=1.0)
