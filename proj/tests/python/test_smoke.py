"""Smoke checks for the python extension: import, classify, simulate,
convergence fit, stationary law helpers, and error mapping."""

import math

import swlogistic as sw


def close(x, y, tol=1e-12):
    return abs(x - y) <= tol


def extinct_model():
    return sw.Model(
        b=[2.0, 1.0],
        a=[1.8, 2.5],
        sigma=[0.8, 2.0],
        generator=[[-8.0, 8.0], [2.0, -2.0]],
        x0=25.0,
        r0=0,
    )


def test_classify():
    result = sw.classify(extinct_model())
    assert result.kind == sw.DynamicsKind.Extinct
    assert close(result.pi[0], 0.2, 1e-12) and close(result.pi[1], 0.8, 1e-12)
    assert close(result.pi_beta, -0.464, 1e-12)
    drifts = sw.beta(extinct_model())
    assert close(drifts[0], 1.68) and close(drifts[1], -1.0)


def test_simulate_replays_and_stays_positive():
    model = extinct_model()
    scheme = sw.SchemeConfig(dt=0.02, cap_constant=25.0, theta=0.4)
    first = sw.simulate(model, scheme, horizon=5.0, seed=7)
    second = sw.simulate(model, scheme, horizon=5.0, seed=7)
    assert first.state == second.state
    assert len(first.state) == 251
    bound = math.exp(sw.truncation_cap(scheme))
    assert all(x > 0.0 for x in first.state)
    assert all(x <= bound for x in first.state[1:])
    other = sw.simulate(model, scheme, horizon=5.0, seed=8)
    assert other.state != first.state


def test_transition_matrix_and_chain():
    gen = [[-8.0, 8.0], [2.0, -2.0]]
    p = sw.transition_matrix(gen, 0.02)
    for row in p:
        assert all(v >= 0.0 for v in row)
        assert close(sum(row), 1.0, 1e-12)
    states = sw.sample_chain(gen, 0.02, 0, 1000, seed=3)
    assert len(states) == 1001
    assert set(states) <= {0, 1}
    pi = sw.stationary_distribution(gen)
    assert close(pi[0], 0.2, 1e-12)


def test_strong_error_fit():
    options = sw.StrongErrorOptions()
    options.dts = [0.0625, 0.03125, 0.015625]
    options.trajectories = 16
    options.horizon = 1.0
    options.cap_constant = 25.0
    options.theta = 0.5
    options.dt_reference = 0.001953125
    options.seed = 0
    options.workers = 1
    curve = sw.strong_error(extinct_model(), options)
    assert len(curve.entries) == 3
    assert all(e.error > 0.0 for e in curve.entries)
    fit = sw.fit_slope(curve)
    assert fit.levels_used == 3
    assert fit.slope > 0.0


def test_gamma_and_ks():
    gamma = sw.gamma_stationary(0.5, 0.8, 0.3)
    assert close(gamma.shape, 91.0 / 9.0) and close(gamma.rate, 160.0 / 9.0)
    assert close(gamma.mean, 0.56875)
    assert close(sw.gamma_cdf(gamma, 100.0), 1.0, 1e-12)
    result = sw.ks_statistic([0.1, 0.4, 0.9], lambda x: x)
    assert 0.0 < result.statistic < 1.0


def test_errors_are_value_errors():
    try:
        sw.Model(b=[-1.0], a=[0.0], sigma=[1.0], generator=[[0.0]], x0=1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative b must be rejected")
    try:
        sw.gamma_stationary(0.5, 0.0, 0.3)
    except ValueError:
        pass
    else:
        raise AssertionError("a = 0 has no stationary density")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
