"""Integrator unit tests: accuracy, dense output, and event location."""

import math

import numpy as np
import pytest

from ndeshock.odeint import (EventSpec, OdeProblem, TerminationKind,
                             Trajectory, integrate)


def _decay_problem(span=(0.0, 5.0)):
    return OdeProblem(dimension=1,
                      rhs=lambda y, s: np.array([-s[0]]),
                      span=span)


def _oscillator_problem(span=(0.0, 20.0)):
    return OdeProblem(dimension=2,
                      rhs=lambda y, s: np.array([s[1], -s[0]]),
                      span=span)


def test_exponential_decay_accuracy():
    traj = integrate(_decay_problem(), [1.0], rtol=1e-10, atol=1e-12)
    assert traj.termination.kind == TerminationKind.REACHED_END
    assert traj.states[-1, 0] == pytest.approx(math.exp(-5.0), rel=1e-8)


def test_tolerance_controls_error():
    errs = []
    for rtol in (1e-4, 1e-7, 1e-10):
        traj = integrate(_decay_problem(), [1.0], rtol=rtol, atol=1e-14)
        errs.append(abs(traj.states[-1, 0] - math.exp(-5.0)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-9


def test_dense_output_matches_exact_solution():
    traj = integrate(_oscillator_problem(), [1.0, 0.0],
                     rtol=1e-10, atol=1e-12)
    ys = np.linspace(0.5, 19.5, 101)
    vals = traj(ys)
    np.testing.assert_allclose(vals[:, 0], np.cos(ys), atol=1e-7)
    np.testing.assert_allclose(vals[:, 1], -np.sin(ys), atol=1e-7)


def test_event_location_accuracy():
    # cos(y) crosses 0.5 going down at y = pi/3.
    ev = EventSpec(id=7, test=lambda y, s: s[0] - 0.5,
                   direction="falling", terminal=True)
    traj = integrate(_oscillator_problem(), [1.0, 0.0],
                     rtol=1e-10, atol=1e-12, events=[ev])
    assert traj.termination.kind == TerminationKind.EVENT
    assert traj.termination.event_id == 7
    assert traj.termination.y == pytest.approx(math.pi / 3.0, abs=1e-9)


def test_event_direction_filter():
    # With direction=+1 the first hit is the *rising* crossing at 5*pi/3.
    ev = EventSpec(id=1, test=lambda y, s: s[0] - 0.5,
                   direction="rising", terminal=True)
    traj = integrate(_oscillator_problem(), [1.0, 0.0],
                     rtol=1e-10, atol=1e-12, events=[ev])
    assert traj.termination.y == pytest.approx(5.0 * math.pi / 3.0, abs=1e-8)


def test_backward_integration():
    traj = integrate(_decay_problem(span=(0.0, -3.0)), [1.0],
                     rtol=1e-10, atol=1e-12)
    assert traj.states[-1, 0] == pytest.approx(math.exp(3.0), rel=1e-8)


def test_dense_eval_outside_span_raises():
    traj = integrate(_decay_problem(), [1.0], rtol=1e-8, atol=1e-10)
    with pytest.raises(Exception):
        traj(np.array([6.0]))
