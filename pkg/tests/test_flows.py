import math

import numpy as np
import pytest

import flows
from config import get_settings
from corpus import (
    compact_innovations,
    decaying_innovations,
    jordan_matrix,
    make_instance,
    make_rng,
    matrix_corpus,
    random_initial_conditions,
    safe_half_width,
    similar,
)
from errors import (
    InconsistencyError,
    InputError,
    NumericError,
    PreconditionError,
    RecursionViolation,
)
from flows import (
    FLOW_NAMES,
    InitialConditions,
    SupportInfo,
    backward_eps_flow,
    decompose,
    forward_eps_flow,
    outward_eps_flow,
    predetermined_backward,
    predetermined_forward,
    predetermined_outward,
    recover_initial_conditions,
    solution_scale,
    solution_space,
    synthesize,
    trig_outward_pair,
    verify_recursion,
)
from oracles import iterate_recursion, subexponential_diagnostic
from schemas import SupportMode
from sequences import TimeWindowSequence, Window, add, max_difference
from spectral import Matrix, SubsetKind, analyze, norm


def _analysis(rows, **overrides):
    return analyze(Matrix.from_real(rows), get_settings().tolerances(**overrides))


def _similar_analysis(blocks, seed, **overrides):
    rng = make_rng(seed)
    phi = Matrix.from_real(similar(jordan_matrix(blocks), rng))
    return analyze(phi, get_settings().tolerances(**overrides)), rng


def _binomial(times, k):
    return np.array(
        [math.comb(int(t), k) if t >= 0 else (-1) ** k * math.comb(k - int(t) - 1, k) for t in times],
        dtype=float,
    )


def _column(s):
    return s.real_values()[:, 0]


def test_forward_eps_flow_of_delta_is_geometric():
    w = Window(-5, 8)
    flow = forward_eps_flow(_analysis([[0.5]]), TimeWindowSequence.delta(w, 0, [1.0]))
    expected = np.where(w.times >= 0, 0.5 ** w.times.astype(float), 0.0)
    np.testing.assert_allclose(_column(flow), expected, atol=1e-15)
    assert flow.is_real


def test_eps_flows_of_zero_innovations_are_zero():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    eps = TimeWindowSequence.zeros(Window(-3, 3), 2)
    for flow in (
        forward_eps_flow(analysis, eps),
        backward_eps_flow(analysis, eps),
        outward_eps_flow(analysis, eps),
    ):
        np.testing.assert_array_equal(flow.values, np.zeros((7, 2)))


def test_forward_eps_flow_of_nilpotent_is_two_terms():
    w = Window(-3, 4)
    flow = forward_eps_flow(
        _analysis([[0.0, 1.0], [0.0, 0.0]]), TimeWindowSequence.delta(w, 0, [0.0, 1.0])
    )
    expected = np.zeros((w.length, 2))
    expected[w.index(0)] = [0.0, 1.0]
    expected[w.index(1)] = [1.0, 0.0]
    np.testing.assert_array_equal(flow.real_values(), expected)


def test_backward_eps_flow_of_delta():
    w = Window(-6, 4)
    flow = backward_eps_flow(_analysis([[2.0]]), TimeWindowSequence.delta(w, 0, [1.0]))
    expected = np.where(w.times <= -1, -(2.0 ** w.times.astype(float)), 0.0)
    np.testing.assert_allclose(_column(flow), expected, atol=1e-15)


def test_outward_eps_flow_of_delta_is_step():
    w = Window(-4, 5)
    flow = outward_eps_flow(_analysis([[1.0]]), TimeWindowSequence.delta(w, 1, [1.0]))
    np.testing.assert_array_equal(_column(flow), (w.times >= 1).astype(float))


def test_outward_eps_flow_without_unit_roots_is_zero():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    eps = TimeWindowSequence.constant(Window(-2, 2), [1.0, 1.0])
    np.testing.assert_array_equal(outward_eps_flow(analysis, eps).values, np.zeros((5, 2)))


def test_outward_eps_flow_of_jordan_block_matches_iteration():
    phi = [[1.0, 1.0], [0.0, 1.0]]
    w = Window(-4, 7)
    eps = TimeWindowSequence.delta(w, 1, [0.0, 1.0])
    analysis = _analysis(phi)
    flow = outward_eps_flow(analysis, eps)
    reference = iterate_recursion(analysis.phi, 0, [0.0, 0.0], eps)
    np.testing.assert_allclose(flow.real_values(), reference.real_values(), atol=1e-12)
    assert flow.at(4)[0] == pytest.approx(3.0)


def test_outward_eps_flow_vanishes_at_zero():
    analysis, rng = _similar_analysis([(1j, 1), (1.0, 2), (0.5, 1)], 11, tol_cluster=1e-4)
    w = Window(-6, 6)
    flow = outward_eps_flow(analysis, compact_innovations(w, analysis.dim, rng))
    np.testing.assert_array_equal(flow.at(0), np.zeros(analysis.dim))


def test_predetermined_forward_examples():
    w = Window(-4, 4)
    scalar = _analysis([[0.5]])
    np.testing.assert_array_equal(predetermined_forward(scalar, [0.0], w).values, np.zeros((9, 1)))
    np.testing.assert_allclose(
        _column(predetermined_forward(scalar, [1.0], w)), 0.5 ** w.times.astype(float)
    )

    analysis = _analysis([[1.0, 1.0], [0.0, 0.5]])
    v = np.array([-2.0, 1.0])
    flow = predetermined_forward(analysis, v, w)
    expected = (0.5 ** w.times.astype(float))[:, None] * v[None, :]
    np.testing.assert_allclose(flow.real_values(), expected, rtol=1e-12, atol=1e-12)


def test_predetermined_forward_rejects_vector_outside_subspace():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    with pytest.raises(InputError):
        predetermined_forward(analysis, [0.0, 1.0], Window(-2, 2))


def test_predetermined_backward_is_bubble_path():
    w = Window(-3, 5)
    flow = predetermined_backward(_analysis([[2.0]]), [3.0], w)
    np.testing.assert_allclose(_column(flow), 3.0 * 2.0 ** w.times.astype(float))


def test_predetermined_outward_examples():
    w = Window(-4, 4)
    constant = predetermined_outward(_analysis([[1.0, 0.0], [0.0, 0.5]]), [1.0, 0.0], w)
    np.testing.assert_allclose(constant.real_values(), np.tile([1.0, 0.0], (9, 1)))

    jordan = predetermined_outward(_analysis([[1.0, 1.0], [0.0, 1.0]]), [0.0, 1.0], w)
    expected = np.column_stack([w.times, np.ones(w.length)])
    np.testing.assert_allclose(jordan.real_values(), expected, atol=1e-12)

    alternating = predetermined_outward(_analysis([[-1.0]]), [1.0], w)
    np.testing.assert_array_equal(_column(alternating), [(-1.0) ** t for t in w.times])


@pytest.mark.parametrize("size", [1, 2, 3])
def test_binomial_outward_form(size):
    rng = make_rng(100 + size)
    instance = make_instance(f"unit-{size}", [(1.0, size), (0.4, 1), (2.5, 1)], rng)
    analysis = instance.analyze()
    assert analysis.frequencies == (0.0,)
    v = analysis.projector(SubsetKind.unit).entries.real @ rng.uniform(-1.0, 1.0, analysis.dim)
    w = Window(-6, 6)
    flow = predetermined_outward(analysis, v, w)
    shift = analysis.phi.entries.real - np.eye(analysis.dim)
    expected = sum(
        _binomial(w.times, k)[:, None] * (np.linalg.matrix_power(shift, k) @ v)[None, :]
        for k in range(size)
    )
    assert np.max(np.abs(flow.real_values() - expected)) <= 1e-9 * max(1.0, np.max(np.abs(expected)))


def test_binomial_check_rejects_wrong_cumulation(monkeypatch):
    w = Window(-3, 3)
    analysis = _analysis([[1.0, 1.0], [0.0, 1.0]])
    monkeypatch.setattr(
        flows, "_outward_chain", lambda *args: TimeWindowSequence.constant(w, [99.0, 99.0])
    )
    with pytest.raises(NumericError):
        predetermined_outward(analysis, [0.0, 1.0], w)


def test_predetermined_outward_is_polynomial_of_degree_index_minus_one():
    rng = make_rng(31)
    instance = make_instance("poly", [(1.0, 3), (0.4, 1)], rng)
    analysis = instance.analyze()
    v = analysis.projector(SubsetKind.unit).entries.real @ rng.uniform(-1.0, 1.0, analysis.dim)
    w = Window(-6, 6)
    values = predetermined_outward(analysis, v, w).real_values()
    t = w.times.astype(float)
    scale = max(1.0, np.max(np.abs(values)))
    for j in range(analysis.dim):
        quadratic = np.polyval(np.polyfit(t, values[:, j], 2), t)
        assert np.max(np.abs(quadratic - values[:, j])) <= 1e-9 * scale
    linear_misfit = max(
        np.max(np.abs(np.polyval(np.polyfit(t, values[:, j], 1), t) - values[:, j]))
        for j in range(analysis.dim)
    )
    assert linear_misfit > 1e-6


def test_synthesize_nilpotent_is_unique_finite_sum():
    analysis = _analysis([[0.0, 1.0], [0.0, 0.0]])
    w = Window(-4, 4)
    eps = compact_innovations(w, 2, make_rng(5), support=(-2, 2))
    x = synthesize(analysis, eps)
    phi = analysis.phi.entries.real
    lagged = np.vstack([np.zeros((1, 2)), eps.real_values()[:-1]])
    np.testing.assert_allclose(x.real_values(), eps.real_values() + lagged @ phi.T, atol=1e-14)
    with pytest.raises(InputError):
        synthesize(analysis, eps, InitialConditions(np.ones(2), np.zeros(2), np.zeros(2)))
    assert solution_space(analysis).unique


def test_synthesize_scalar_forward_example():
    w = Window(-4, 6)
    x = synthesize(
        _analysis([[0.5]]),
        TimeWindowSequence.delta(w, 0, [1.0]),
        InitialConditions([1.0], [0.0], [0.0]),
    )
    powers = 0.5 ** w.times.astype(float)
    np.testing.assert_allclose(_column(x), np.where(w.times >= 0, 2 * powers, powers))


def test_synthesize_zero_everything_is_zero():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    x = synthesize(analysis, TimeWindowSequence.zeros(Window(-3, 3), 2))
    np.testing.assert_array_equal(x.values, np.zeros((7, 2)))


def test_synthesize_on_wider_window_still_solves_recursion():
    analysis, rng = _similar_analysis([(0.5, 1), (2.0, 1), (1.0, 1)], 3)
    eps = compact_innovations(Window(-3, 3), 3, rng)
    wide = Window(-10, 10)
    x = synthesize(analysis, eps, window=wide)
    assert x.window == wide
    assert verify_recursion(analysis.phi, x, eps.on(wide)).passed


def test_non_nilpotent_solutions_depend_on_initial_conditions():
    instances = [c for c in matrix_corpus(40) if not c.analyze().is_nilpotent]
    for instance in instances:
        analysis = instance.analyze()
        rng = make_rng(17)
        eps = compact_innovations(Window(-3, 3), analysis.dim, rng)
        initial = random_initial_conditions(analysis, rng)
        gap, _ = max_difference(synthesize(analysis, eps), synthesize(analysis, eps, initial))
        assert gap >= 1e-6
        assert not solution_space(analysis).unique


def test_recover_pure_unit_root_solution():
    analysis = _analysis([[1.0, 0.0], [0.0, 1.0]])
    w = Window(-5, 5)
    x = TimeWindowSequence.constant(w, [1.0, 2.0])
    initial = recover_initial_conditions(analysis, x, TimeWindowSequence.zeros(w, 2))
    np.testing.assert_allclose(initial.outward, [1.0, 2.0])
    np.testing.assert_array_equal(initial.forward, [0.0, 0.0])
    np.testing.assert_array_equal(initial.backward, [0.0, 0.0])


def test_recover_rotation_solution_has_no_exponential_parts():
    analysis = _analysis([[0.0, -1.0], [1.0, 0.0]])
    w = Window(-20, 20)
    eps = compact_innovations(w, 2, make_rng(8), support=(-5, 5))
    x = synthesize(analysis, eps, InitialConditions([0.0, 0.0], [0.0, 0.0], [1.0, -1.0]))
    initial = recover_initial_conditions(analysis, x, eps)
    np.testing.assert_allclose(initial.forward, [0.0, 0.0])
    np.testing.assert_allclose(initial.backward, [0.0, 0.0])
    np.testing.assert_allclose(initial.outward, [1.0, -1.0], atol=1e-12)


def test_recover_needs_room_before_support():
    analysis = _analysis([[0.5]])
    w = Window(-3, 3)
    eps = TimeWindowSequence.delta(w, -3, [1.0])
    x = synthesize(analysis, eps)
    with pytest.raises(PreconditionError):
        recover_initial_conditions(analysis, x, eps)


def test_recover_flags_non_solution():
    analysis = _analysis([[0.5]])
    w = Window(-3, 3)
    x = TimeWindowSequence.constant(w, [1.0])
    with pytest.raises(InconsistencyError) as exc:
        recover_initial_conditions(analysis, x, TimeWindowSequence.zeros(w, 1))
    assert exc.value.offending_t == -1


def test_support_outside_window_is_precondition_error():
    analysis = _analysis([[0.5]])
    eps = TimeWindowSequence.delta(Window(-3, 3), 0, [1.0])
    with pytest.raises(PreconditionError):
        forward_eps_flow(analysis, eps, SupportInfo(-10, 2))
    with pytest.raises(InputError):
        forward_eps_flow(analysis, eps, SupportInfo(2, 1))


def test_verify_recursion_reports_residuals():
    phi = Matrix.from_real([[0.5, 0.0], [0.0, 2.0]])
    w = Window(-3, 3)
    eps = TimeWindowSequence.delta(w, 1, [3.0, 4.0])
    report = verify_recursion(phi, TimeWindowSequence.zeros(w, 2), eps)
    assert report.max_residual == pytest.approx(5.0)
    assert report.offending_t == 1
    assert not report.passed
    with pytest.raises(InputError):
        verify_recursion(phi, TimeWindowSequence.zeros(Window(-2, 2), 2), eps)


def test_decompose_rejects_perturbed_solution():
    analysis = _analysis([[0.5]])
    w = Window(-5, 5)
    eps = TimeWindowSequence.delta(w, 0, [1.0])
    x = synthesize(analysis, eps, InitialConditions([1.0], [0.0], [0.0]))
    bumped = add(x, TimeWindowSequence.delta(w, 2, [1.0]))
    report = verify_recursion(analysis.phi, bumped, eps)
    assert report.max_residual >= 1.0 - 1e-12
    with pytest.raises(RecursionViolation) as exc:
        decompose(analysis, bumped, eps)
    assert exc.value.offending_t == 2


ROUND_TRIP = matrix_corpus(100)


@pytest.mark.parametrize("index", range(len(ROUND_TRIP)), ids=[c.name for c in ROUND_TRIP])
def test_synthesize_decompose_round_trip(index):
    instance = ROUND_TRIP[index]
    analysis = instance.analyze()
    rng = make_rng(get_settings().seed + index)
    half = min(12, safe_half_width(analysis, 12, limit=1e6))
    window = Window.symmetric(half)
    eps = compact_innovations(window, analysis.dim, rng, support=(-half + 2, half - 2))
    initial = random_initial_conditions(analysis, rng)

    x = synthesize(analysis, eps, initial)
    assert verify_recursion(analysis.phi, x, eps, tolerances=analysis.tolerances).passed

    scale = solution_scale(analysis.phi, x, eps)
    result = decompose(analysis, x, eps)
    for name in ("forward", "backward", "outward"):
        gap = norm(getattr(result.initial, name) - getattr(initial, name))
        assert gap <= 1e-8 * scale, name

    expected = {
        "predetermined_forward": predetermined_forward(analysis, initial.forward, window),
        "forward_eps": forward_eps_flow(analysis, eps),
        "predetermined_backward": predetermined_backward(analysis, initial.backward, window),
        "backward_eps": backward_eps_flow(analysis, eps),
        "predetermined_outward": predetermined_outward(analysis, initial.outward, window),
        "outward_eps": outward_eps_flow(analysis, eps),
    }
    for name, flow in result.flows().items():
        gap, _ = max_difference(flow, expected[name])
        assert gap <= 1e-8 * scale, name
    assert result.residual_report.total <= analysis.tolerances.tol_flow * scale


def test_decompose_without_unit_roots_is_stationary_solution():
    analysis, rng = _similar_analysis([(0.5, 1), (-0.3, 1), (2.0, 1)], 21)
    w = Window(-10, 10)
    eps = compact_innovations(w, 3, rng, support=(-8, 8))
    x = synthesize(analysis, eps)
    result = decompose(analysis, x, eps)
    scale = solution_scale(analysis.phi, x, eps)
    assert result.predetermined_forward.max_norm() <= 1e-8 * scale
    assert result.predetermined_backward.max_norm() <= 1e-8 * scale
    np.testing.assert_array_equal(result.predetermined_outward.values, np.zeros((21, 3)))
    np.testing.assert_array_equal(result.outward_eps.values, np.zeros((21, 3)))
    gap, _ = max_difference(x, add(result.forward_eps, result.backward_eps))
    assert gap <= 1e-8 * scale


def test_forward_shift_only_changes_predetermined_forward():
    analysis, rng = _similar_analysis([(0.5, 1), (2.0, 1), (1.0, 1)], 22)
    w = Window(-8, 8)
    eps = compact_innovations(w, 3, rng, support=(-6, 6))
    x = synthesize(analysis, eps, random_initial_conditions(analysis, rng))
    shift = analysis.projector(SubsetKind.forward).entries.real @ np.array([1.0, -1.0, 0.5])
    x_shifted = add(x, predetermined_forward(analysis, shift, w))

    base = decompose(analysis, x, eps).flows()
    moved = decompose(analysis, x_shifted, eps).flows()
    scale = solution_scale(analysis.phi, x_shifted, eps)
    for name in FLOW_NAMES:
        gap, _ = max_difference(base[name], moved[name])
        if name == "predetermined_forward":
            assert gap > 1e-3
        else:
            assert gap <= 1e-8 * scale, name


def test_decompose_parallel_matches_serial():
    analysis, rng = _similar_analysis([(0.5, 1), (2.0, 1), (1j, 1)], 23)
    w = Window(-8, 8)
    eps = compact_innovations(w, 4, rng, support=(-6, 6))
    x = synthesize(analysis, eps, random_initial_conditions(analysis, rng))
    serial = decompose(analysis, x, eps, max_workers=1)
    parallel = decompose(analysis, x, eps, max_workers=4)
    for name in FLOW_NAMES:
        np.testing.assert_array_equal(serial.flows()[name].values, parallel.flows()[name].values)


def test_backward_component_follows_exponential_trend():
    analysis, rng = _similar_analysis([(2.0, 1), (-1.5, 1), (0.5, 1), (1.0, 1)], 24)
    w = Window(-6, 8)
    eps = compact_innovations(w, 4, rng, support=(-4, 6))
    x = synthesize(analysis, eps, random_initial_conditions(analysis, rng))
    phi = analysis.phi.entries.real
    p = analysis.projector(SubsetKind.backward).entries.real
    scale = solution_scale(analysis.phi, x, eps)
    for t in range(1, w.t_max + 1):
        trend = np.linalg.matrix_power(phi, t) @ p @ x.at(0).real
        trend = trend + sum(
            np.linalg.matrix_power(phi, t - s) @ p @ eps.at(s).real for s in range(1, t + 1)
        )
        assert norm(p @ x.at(t).real - trend) <= 1e-9 * scale


def test_projected_components_solve_their_own_recursion():
    analysis, rng = _similar_analysis([(0.5, 1), (2.0, 1), (1j, 1)], 25)
    w = Window(-6, 6)
    eps = compact_innovations(w, 4, rng)
    x = synthesize(analysis, eps, random_initial_conditions(analysis, rng))
    scale = solution_scale(analysis.phi, x, eps)
    subsets = [SubsetKind.stable, SubsetKind.backward] + list(analysis.frequencies)
    for subset in subsets:
        p = analysis.projector(subset).entries
        phi = analysis.phi.entries
        residual = x.values[1:] @ p.T - x.values[:-1] @ (phi @ p).T - eps.values[1:] @ p.T
        assert np.max(np.linalg.norm(residual, axis=1)) <= 1e-9 * scale


def test_decay_mode_recovers_initial_conditions():
    analysis = _analysis([[0.5, 0.0], [0.0, 2.0]])
    w = Window(-20, 20)
    rng = make_rng(26)
    eps = decaying_innovations(w, 2, rng, rate=0.3)
    support = SupportInfo.of(eps, SupportMode.decay)
    initial = InitialConditions([0.7, 0.0], [0.0, -0.4], [0.0, 0.0])
    x = synthesize(analysis, eps, initial, support)
    result = decompose(analysis, x, eps, support)
    scale = solution_scale(analysis.phi, x, eps)
    np.testing.assert_allclose(result.initial.forward, initial.forward, atol=1e-8 * scale)
    np.testing.assert_allclose(result.initial.backward, initial.backward, atol=1e-8 * scale)
    truncation = result.residual_report.truncation
    assert truncation.mode == SupportMode.decay
    assert truncation.forward_terms > 0
    assert truncation.tail_bound < 1e-9


def test_trig_pair_rotation_orbit():
    analysis = _analysis([[0.0, -1.0], [1.0, 0.0]])
    w = Window(-4, 8)
    flow = trig_outward_pair(analysis, math.pi / 2, x0=[1.0, 0.0], window=w)
    expected = np.column_stack([np.cos(math.pi * w.times / 2), np.sin(math.pi * w.times / 2)])
    np.testing.assert_allclose(flow.real_values(), expected, atol=1e-12)
    complex_path = predetermined_outward(analysis, [1.0, 0.0], w)
    np.testing.assert_allclose(flow.real_values(), complex_path.real_values(), atol=1e-9)


@pytest.mark.parametrize(
    "root, theta",
    [(1j, math.pi / 2), (complex(-0.5, math.sqrt(3) / 2), 2 * math.pi / 3)],
)
def test_trig_pair_matches_complex_flows(root, theta):
    analysis, rng = _similar_analysis([(root, 1), (0.5, 1), (2.0, 1)], 27)
    w = Window(-8, 8)
    eps = compact_innovations(w, analysis.dim, rng, support=(-6, 6))
    x0 = analysis.projector(SubsetKind.unit).entries.real @ rng.uniform(-1.0, 1.0, analysis.dim)

    trig_eps = trig_outward_pair(analysis, theta, eps=eps)
    gap, _ = max_difference(trig_eps, outward_eps_flow(analysis, eps))
    assert gap <= 1e-9 * max(1.0, eps.max_norm())
    np.testing.assert_array_equal(trig_eps.at(0), np.zeros(analysis.dim))

    trig_x = trig_outward_pair(analysis, theta, x0=x0, window=w)
    gap, _ = max_difference(trig_x, predetermined_outward(analysis, x0, w))
    assert gap <= 1e-9 * max(1.0, norm(x0))


def test_trig_pair_preconditions():
    rotation = _analysis([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(PreconditionError):
        trig_outward_pair(rotation, 0.3, window=Window(-2, 2))
    with pytest.raises(PreconditionError):
        trig_outward_pair(_analysis([[-1.0]]), math.pi, window=Window(-2, 2))
    defective = analyze(
        Matrix.from_real(jordan_matrix([(1j, 2)])), get_settings().tolerances(tol_cluster=1e-4)
    )
    with pytest.raises(PreconditionError):
        trig_outward_pair(defective, math.pi / 2, window=Window(-2, 2))


def test_solution_space_dimensions():
    report = solution_space(_analysis([[0.5, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]))
    assert (report.dim_forward, report.dim_backward, report.dim_outward) == (1, 1, 1)
    assert report.dim_zero == 0
    assert report.subexponential_dim == 1
    assert not report.unique


def test_growth_separates_exponential_parts():
    analysis = _analysis([[0.5, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
    rng = make_rng(28)
    for half in (10, 20, 30):
        w = Window.symmetric(half)
        eps = compact_innovations(w, 3, rng, support=(-3, 3))
        calm = synthesize(analysis, eps)
        for row in subexponential_diagnostic(calm, [0.5, 0.9]).rows:
            assert not row.exponential_future
            assert not row.exponential_past

        past = synthesize(analysis, eps, InitialConditions([1.0, 0, 0], [0, 0, 0], [0, 0, 0]))
        (row,) = subexponential_diagnostic(past, [0.9]).rows
        assert row.exponential_past
        assert not row.exponential_future

        future = synthesize(analysis, eps, InitialConditions([0, 0, 0], [0, 1.0, 0], [0, 0, 0]))
        (row,) = subexponential_diagnostic(future, [0.9]).rows
        assert row.exponential_future
        assert not row.exponential_past
