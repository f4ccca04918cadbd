import numpy as np
import numpy.testing as npt
import pytest
import scipy.optimize

from isoflow import (
    DivergenceDetectedError,
    FlowProblem,
    SolverConfig,
    SolverMethod,
    cayley,
    fixed_point_map,
    in_quadratic_algebra,
    solve_stage,
    spectrum_key,
    step,
    step_cayley_form,
    step_stage_form_oracle,
)
from isoflow.systems import (
    BrockettSpec,
    RigidBodySpec,
    brockett_initial,
    brockett_problem,
    rigid_body_initial,
    rigid_body_problem,
)

from _problems import problem_instances, random_skew_problem

FP = SolverConfig(tol=1e-13, max_iters=200)
NEWTON = SolverConfig(method=SolverMethod.NEWTON, tol=1e-13, max_iters=100)


def zero_problem(n):
    return FlowProblem(dim=n, b_map=lambda w: np.zeros_like(w))


# ---------------------------------------------------------------------------
# fixed_point_map


def test_fixed_point_map_zero_step(rng):
    y = rng.normal(size=(3, 3))
    x = rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3))
    npt.assert_array_equal(fixed_point_map(y, x, b, 0.0), y)


def test_fixed_point_map_stationary_flow(rng):
    y = rng.normal(size=(3, 3))
    x = rng.normal(size=(3, 3))
    npt.assert_array_equal(fixed_point_map(y, x, np.zeros((3, 3)), 0.7), y)


def test_fixed_point_map_hand_evaluation():
    eye = np.eye(2)
    out = fixed_point_map(np.zeros((2, 2)), eye, eye, 2.0)
    npt.assert_allclose(out, eye, atol=0)


# ---------------------------------------------------------------------------
# solve_stage


def test_solve_stage_stationary_one_iteration(rng):
    w = rng.normal(size=(4, 4))
    w_tilde, iters, res = solve_stage(zero_problem(4), w, 0.3, FP)
    npt.assert_array_equal(w_tilde, w)
    assert iters == 1 and res == 0.0


def test_solve_stage_rigid_body_newton_tolerance():
    problem = rigid_body_problem(RigidBodySpec(10))
    w0 = rigid_body_initial(10)
    w_tilde, iters, res = solve_stage(problem, w0, 0.1, NEWTON)
    assert res <= 1e-13
    b = problem.b_map(w_tilde)
    npt.assert_allclose(
        w_tilde, fixed_point_map(w0, w_tilde, b, 0.1), atol=2e-13
    )


def test_solve_stage_matches_independent_root_finder(rng):
    # constant-coefficient 2x2 problem solved by an unrelated dense root
    # finder over the 4 real unknowns
    omega = np.array([[0.0, -0.9], [0.9, 0.0]])
    problem = FlowProblem(dim=2, b_map=lambda w: omega)
    w0 = rng.normal(size=(2, 2))
    h = 0.05

    def residual(v):
        x = v.reshape(2, 2)
        return (x - fixed_point_map(w0, x, omega, h)).ravel()

    sol = scipy.optimize.root(residual, w0.ravel(), method="hybr", tol=1e-14)
    assert sol.success
    w_tilde, _, _ = solve_stage(problem, w0, h, FP)
    npt.assert_allclose(w_tilde, sol.x.reshape(2, 2), atol=1e-12)


# ---------------------------------------------------------------------------
# step


def test_step_zero_stepsize(rng):
    problem, w0 = random_skew_problem(rng, 3)
    report = step(problem, w0, 0.0, FP)
    npt.assert_array_equal(report.w_next, w0)


def test_step_constant_b_is_cayley_conjugation(rng):
    omega = rng.normal(size=(3, 3))
    omega = 0.4 * (omega - omega.T)
    problem = FlowProblem(dim=3, b_map=lambda w: omega)
    w0 = rng.normal(size=(3, 3))
    h = 0.2
    report = step(problem, w0, h, FP)
    cay = cayley(0.5 * h * omega)
    expected = np.linalg.solve(cay, w0) @ cay
    npt.assert_allclose(report.w_next, expected, atol=1e-12)


def test_step_rigid_body_preserves_spectrum():
    problem = rigid_body_problem(RigidBodySpec(10))
    w0 = rigid_body_initial(10)
    report = step(problem, w0, 0.1, NEWTON)
    npt.assert_allclose(
        spectrum_key(report.w_next), spectrum_key(w0), atol=1e-11
    )


def test_step_newton_matches_fixed_point():
    problem = rigid_body_problem(RigidBodySpec(10))
    w0 = rigid_body_initial(10)
    a = step(problem, w0, 0.1, FP).w_next
    b = step(problem, w0, 0.1, NEWTON).w_next
    npt.assert_allclose(a, b, atol=1e-12)


def test_step_fixed_point_divergence_detected_on_stiff_flow():
    problem = brockett_problem(BrockettSpec(n=10, seed=1234))
    w0 = brockett_initial(BrockettSpec(n=10, seed=1234))
    with pytest.raises(DivergenceDetectedError):
        step(problem, w0, 0.1, FP)


# ---------------------------------------------------------------------------
# alternate forms


def test_cayley_form_zero_step(rng):
    problem, w0 = random_skew_problem(rng, 3)
    npt.assert_allclose(step_cayley_form(problem, w0, w0, 0.0), w0, atol=0)


def test_cayley_form_agrees_with_step(rng):
    for problem, w0 in problem_instances(rng, 9):
        report = step(problem, w0, 0.05, FP)
        alt = step_cayley_form(problem, w0, report.w_tilde, 0.05)
        npt.assert_allclose(alt, report.w_next, atol=1e-12)


def test_cayley_form_preserves_skew(rng):
    problem, w0 = random_skew_problem(rng, 4)
    report = step(problem, w0, 0.1, FP)
    out = step_cayley_form(problem, w0, report.w_tilde, 0.1)
    npt.assert_allclose(out, -out.T, atol=1e-12)


def test_stage_form_oracle_stationary(rng):
    w = rng.normal(size=(3, 3))
    npt.assert_array_equal(step_stage_form_oracle(zero_problem(3), w, 0.4, FP), w)


def test_stage_form_oracle_agrees_rigid_body(rng):
    problem, w0 = random_skew_problem(rng, 4)
    expected = step(problem, w0, 0.05, FP).w_next
    got = step_stage_form_oracle(problem, w0, 0.05, FP)
    npt.assert_allclose(got, expected, atol=1e-10)


def test_stage_form_oracle_agrees_brockett():
    spec = BrockettSpec(n=3, seed=7)
    problem = brockett_problem(spec)
    w0 = brockett_initial(spec)
    expected = step(problem, w0, 0.01, FP).w_next
    got = step_stage_form_oracle(problem, w0, 0.01, FP)
    npt.assert_allclose(got, expected, atol=1e-10)


# ---------------------------------------------------------------------------
# invariants and properties


def test_isospectrality_random_instances(rng):
    for problem, w0 in problem_instances(rng, 9):
        report = step(problem, w0, 0.1, FP)
        drift = np.max(np.abs(spectrum_key(report.w_next) - spectrum_key(w0)))
        assert drift <= 100 * FP.tol


def test_structure_closure(rng):
    for problem, w0 in problem_instances(rng, 9):
        if problem.structure_j is None:
            continue
        j = problem.structure_j
        assert in_quadratic_algebra(w0, j, FP.tol)
        report = step(problem, w0, 0.1, FP)
        assert in_quadratic_algebra(report.w_tilde, j, 100 * FP.tol)
        assert in_quadratic_algebra(report.w_next, j, 100 * FP.tol)


def test_averaging_identity(rng):
    for problem, w0 in problem_instances(rng, 6):
        h = 0.1
        report = step(problem, w0, h, FP)
        b = problem.b_map(report.w_tilde)
        lhs = w0 + report.w_next
        rhs = 2.0 * report.w_tilde - 0.5 * h * h * (b @ report.w_tilde @ b)
        npt.assert_allclose(lhs, rhs, atol=1e-12)


def test_time_reversal_symmetry(rng):
    for problem, w0 in problem_instances(rng, 6):
        forward = step(problem, w0, 0.1, FP)
        back = step(problem, forward.w_next, -0.1, FP)
        npt.assert_allclose(back.w_next, w0, atol=100 * FP.tol)


def test_flow_problem_validation():
    with pytest.raises(ValueError):
        FlowProblem(dim=0, b_map=lambda w: w)
