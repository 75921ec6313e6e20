import math

import numpy as np
import pytest

from thermoclock import (
    TRUMPED,
    AutonomousSpec,
    BoundReport,
    CommutingInteraction,
    DensityMatrix,
    HermitianOp,
    PhasedInteraction,
    PotentialSpec,
    QuasiIdealClock,
    Trajectory,
    admissible_times,
    build_hamiltonian,
    clock_disturbance,
    embezzle_distance,
    free_clock_state,
    interaction_error,
    max_overlap_defect,
    measure_embezzlement,
    nogo_witness,
    op_norm,
    potential_operator,
    reference_embezzlement_setup,
    resolution_bound,
    simulate,
    smoothed_target,
    theta_step,
    trace_distance,
    unitary_of,
    verify_catalytic_reachability,
    window_bound_reports,
)
from thermoclock.clock import interaction_generator
from thermoclock.dynamics import _embed

from oracles import (
    dumb_partial_trace,
    embezzle_oracle,
    resolution_domain_oracle,
    resolution_oracle,
)

T0 = 2.0 * math.pi


def test_theta_step_profile():
    assert theta_step(0.2, 1.0, 2.0) == 0.0
    assert theta_step(1.0, 1.0, 2.0) == 0.0
    assert theta_step(2.0, 1.0, 2.0) == 1.0
    assert theta_step(5.0, 1.0, 2.0) == 1.0
    with pytest.raises(ValueError):
        theta_step(1.5, 1.0, 2.0)


def test_admissible_times_avoid_the_window():
    ts = admissible_times(T0 / 4.0, 3.0 * T0 / 4.0, T0)
    assert len(ts) == 33
    assert ts[0] == 0.0
    assert ts[-1] < T0
    assert not np.any((ts > T0 / 4.0 + 1e-9) & (ts < 3.0 * T0 / 4.0 - 1e-9))


def test_embed_matches_index_loops():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    dims = (2, 3, 2)
    m = _embed(a, dims, (0, 2))
    for i0 in range(2):
        for i1 in range(3):
            for i2 in range(2):
                for j0 in range(2):
                    for j1 in range(3):
                        for j2 in range(2):
                            row = (i0 * 3 + i1) * 2 + i2
                            col = (j0 * 3 + j1) * 2 + j2
                            want = a[i0 * 2 + i2, j0 * 2 + j2] if i1 == j1 else 0.0
                            assert m[row, col] == pytest.approx(want, abs=1e-15)


class TestSpecAssembly:
    def test_phase_domain(self):
        with pytest.raises(ValueError):
            PhasedInteraction(phases=(0.0, math.pi), basis=np.eye(2),
                              potential=_pot(8))

    def test_basis_must_be_orthonormal(self):
        bad = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            PhasedInteraction(phases=(0.0, 0.5), basis=bad, potential=_pot(8))

    def test_one_phase_per_column(self):
        with pytest.raises(ValueError):
            PhasedInteraction(phases=(0.0,), basis=np.eye(2), potential=_pot(8))

    def test_commuting_generator_norm_cap(self):
        big = HermitianOp(np.diag([4.0, 0.0]))
        with pytest.raises(ValueError):
            CommutingInteraction(generator=big, clock_generator=HermitianOp(np.eye(4)))

    def test_time_ordering(self):
        setup = reference_embezzlement_setup(8)
        with pytest.raises(ValueError):
            AutonomousSpec(
                h_sys=setup.spec.h_sys, h_cat=setup.spec.h_cat,
                h_gibbs=setup.spec.h_gibbs, interaction=setup.spec.interaction,
                clock=setup.spec.clock, t1=3.0, t2=1.0, t3=4.0,
            )

    def test_interaction_type_checked(self):
        setup = reference_embezzlement_setup(8)
        with pytest.raises(TypeError):
            AutonomousSpec(
                h_sys=setup.spec.h_sys, h_cat=setup.spec.h_cat,
                h_gibbs=setup.spec.h_gibbs, interaction="swap",
                clock=setup.spec.clock, t1=1.0, t2=2.0, t3=3.0,
            )

    def test_noncommuting_interaction_rejected_at_assembly(self):
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        ck = QuasiIdealClock(8)
        inter = CommutingInteraction(
            generator=HermitianOp(np.kron(np.kron(x, np.eye(1)), np.eye(2)),
                                  factor_dims=(2, 1, 2)),
            clock_generator=potential_operator(ck, _pot(8)),
        )
        spec = AutonomousSpec(
            h_sys=HermitianOp(np.diag([0.0, 1.0])), h_cat=HermitianOp.zero(1),
            h_gibbs=HermitianOp.zero(2), interaction=inter, clock=ck,
            t1=T0 / 4.0, t2=3.0 * T0 / 4.0, t3=T0,
        )
        with pytest.raises(ValueError):
            build_hamiltonian(spec)

    def test_commuting_and_phased_agree_on_reference(self):
        h1 = build_hamiltonian(reference_embezzlement_setup(8).spec)
        h2 = build_hamiltonian(reference_embezzlement_setup(8, commuting=True).spec)
        np.testing.assert_allclose(h1.data, h2.data, atol=1e-12)

    def test_reference_sector_weights(self):
        setup = reference_embezzlement_setup(8)
        assert setup.clock_weights == pytest.approx((0.5, 0.25, 0.0, 0.25))
        assert setup.phases == (0.0, math.pi / 2.0, -math.pi, -math.pi / 2.0)


def _pot(d):
    return PotentialSpec.from_window(T0 / 4.0, 3.0 * T0 / 4.0, T0, d)


class TestSimulation:
    def test_spectrum_is_conserved(self):
        setup = reference_embezzlement_setup(8)
        h = build_hamiltonian(setup.spec)
        traj = simulate(setup.parts, h, [0.0, 1.0, 2.5])
        ref = np.sort(np.linalg.eigvalsh(traj.joint_states[0].data))
        for s in traj.joint_states[1:]:
            np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(s.data)), ref,
                                       atol=1e-9)

    def test_dimension_mismatch(self):
        setup = reference_embezzlement_setup(8)
        h = build_hamiltonian(reference_embezzlement_setup(16).spec)
        with pytest.raises(ValueError):
            simulate(setup.parts, h, [0.0])

    def test_trajectory_validation(self):
        rho = DensityMatrix.maximally_mixed(2)
        with pytest.raises(ValueError):
            Trajectory([0.0, 0.0], [rho, rho])
        with pytest.raises(ValueError):
            Trajectory([0.0, 1.0], [rho])

    def test_trajectory_caches_reductions(self):
        setup = reference_embezzlement_setup(8)
        traj = simulate(setup.parts, build_hamiltonian(setup.spec), [0.0])
        assert traj.system[0].dim == 2
        assert traj.catalyst[0].dim == 1
        assert traj.clock[0].dim == 8
        assert traj.correlated[0].dim == 16
        want = dumb_partial_trace(traj.joint_states[0].data, (2, 1, 8, 2), (2,))
        np.testing.assert_allclose(traj.clock[0].data, want, atol=1e-12)

    def test_sector_shortcut_matches_joint_reduction(self):
        # the dephased-control decomposition must reproduce the clock marginal
        # of the exact joint evolution
        setup = reference_embezzlement_setup(8)
        spec = setup.spec
        ts = admissible_times(spec.t1, spec.t2, spec.clock.T0, 17)
        traj = simulate(setup.parts, build_hamiltonian(spec), ts)
        short = clock_disturbance(spec.clock, spec.interaction.potential,
                                  setup.phases, setup.clock_weights, ts)
        for i, t in enumerate(ts):
            joint_dist = trace_distance(traj.clock[i],
                                        free_clock_state(spec.clock, float(t)))
            assert abs(joint_dist - short[i]) < 1e-9

    def test_frozen_reference_embezzlement(self):
        setup = reference_embezzlement_setup(32)
        spec = setup.spec
        ts = admissible_times(spec.t1, spec.t2, spec.clock.T0)
        traj = simulate(setup.parts, build_hamiltonian(spec), ts)
        emb = measure_embezzlement(traj, spec, setup.parts[1], setup.parts[2])
        assert float(emb.max()) == pytest.approx(0.0013631445137579747, rel=1e-9)
        assert float(emb[0]) < 1e-10  # nothing has happened at t = 0


class TestResolution:
    def test_matches_high_precision_oracle(self):
        cases = [
            (math.exp(-200.0), 2, 4),
            (0.1, 2, 4),
            (1e-3, 2, 32),
            (1e-12, 3, 9),
            (0.0013631445137579747, 2, 32),
        ]
        for eps, ds, dc in cases:
            for form in (False, True):
                got, dom = resolution_bound(eps, ds, dc, main_text_form=form)
                want = resolution_oracle(eps, ds, dc, main_text_form=form)
                assert got == pytest.approx(float(want), rel=1e-12)
                assert dom == resolution_domain_oracle(eps, ds, dc)

    def test_frozen_values(self):
        v, dom = resolution_bound(math.exp(-200.0), 2, 4)
        assert v == pytest.approx(1.0571328127865578, rel=1e-12)
        assert dom is True
        v, dom = resolution_bound(0.1, 2, 4)
        assert v == pytest.approx(31.879910150093767, rel=1e-12)
        assert dom is False
        v, dom = resolution_bound(0.0013631445137579747, 2, 32)
        assert v == pytest.approx(57.54520623999988, rel=1e-12)
        assert dom is False

    def test_extreme_smallness_does_not_overflow(self):
        v, dom = resolution_bound(math.exp(-700.0), 2, 8)
        assert math.isfinite(v)
        assert dom is True

    def test_validation(self):
        with pytest.raises(ValueError):
            resolution_bound(0.0, 2, 4)
        with pytest.raises(ValueError):
            resolution_bound(1.0, 2, 4)
        with pytest.raises(ValueError):
            resolution_bound(0.1, 1, 4)
        with pytest.raises(ValueError):
            resolution_bound(0.1, 2, 0)


class TestSmoothedTarget:
    def test_pure_qubit(self):
        out = smoothed_target(DensityMatrix(np.diag([1.0, 0.0])), 0.1)
        np.testing.assert_allclose(np.diag(out.data).real, [0.95, 0.05], atol=1e-14)

    def test_full_budget_gives_maximal_mixing(self):
        out = smoothed_target(DensityMatrix(np.diag([1.0, 0.0])), 1.0)
        np.testing.assert_allclose(out.data, np.eye(2) / 2.0, atol=1e-14)

    def test_already_close_snaps_to_mixed(self):
        near = DensityMatrix(np.diag([0.5 + 1e-6, 0.5 - 1e-6]))
        out = smoothed_target(near, 0.1)
        np.testing.assert_allclose(out.data, np.eye(2) / 2.0, atol=0)

    def test_output_is_full_rank(self):
        out = smoothed_target(DensityMatrix(np.diag([1.0, 0.0, 0.0])), 0.05)
        assert np.linalg.eigvalsh(out.data).min() > 0.0

    def test_resolution_domain(self):
        with pytest.raises(ValueError):
            smoothed_target(DensityMatrix.maximally_mixed(2), 0.0)


class TestReachability:
    def test_full_rank_input_is_an_error(self):
        with pytest.raises(ValueError):
            verify_catalytic_reachability(DensityMatrix(np.diag([0.6, 0.4])),
                                          DensityMatrix(np.diag([0.5, 0.5])))

    def test_identity_transition(self):
        rho = DensityMatrix(np.diag([0.7, 0.3, 0.0]))
        assert verify_catalytic_reachability(rho, rho) == TRUMPED

    def test_flagship_transition_is_reachable(self):
        rho = DensityMatrix(np.diag([0.5, 0.25, 0.25, 0.0]))
        sigma = DensityMatrix(np.diag([0.4, 0.4, 0.1, 0.1]))
        assert verify_catalytic_reachability(rho, sigma) == TRUMPED

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            verify_catalytic_reachability(DensityMatrix(np.diag([1.0, 0.0])),
                                          DensityMatrix.maximally_mixed(3))


class TestInteractionError:
    def test_exact_realiser(self):
        setup = reference_embezzlement_setup(8)
        a = setup.spec.interaction_generator()
        err = interaction_error(setup.parts[0], setup.parts[1], setup.parts[3],
                                a, setup.target_system)
        assert err < 1e-12

    def test_perturbation_obeys_unitary_bound(self):
        setup = reference_embezzlement_setup(8)
        a = setup.spec.interaction_generator()
        rng = np.random.default_rng(9)
        for _ in range(10):
            g = rng.normal(size=a.data.shape) + 1j * rng.normal(size=a.data.shape)
            delta = 0.5 * (g + g.conj().T)
            u = float(rng.uniform(1e-3, 0.4))
            delta *= u / op_norm(delta)
            noisy = HermitianOp(a.data + delta, factor_dims=a.factor_dims)
            err = interaction_error(setup.parts[0], setup.parts[1],
                                    setup.parts[3], noisy, setup.target_system)
            assert err <= 2.0 * u + u * u + 1e-9

    def test_dimension_mismatch(self):
        setup = reference_embezzlement_setup(8)
        with pytest.raises(ValueError):
            interaction_error(setup.parts[0], setup.parts[1], setup.parts[3],
                              HermitianOp.zero(3), setup.target_system)


class TestBoundReports:
    def test_report_semantics(self):
        r = BoundReport(time=1.0, lhs=0.2, rhs=0.5, label="x")
        assert not r.violated
        assert r.margin == pytest.approx(0.3)
        assert BoundReport(time=0.0, lhs=0.5 + 2e-9, rhs=0.5, label="x").violated
        with pytest.raises(ValueError):
            BoundReport(time=0.0, lhs=-0.1, rhs=0.5, label="x")

    def test_window_reports_hold_on_reference(self):
        setup = reference_embezzlement_setup(16, commuting=True)
        spec = setup.spec
        ts = admissible_times(spec.t1, spec.t2, spec.clock.T0, 17)
        traj = simulate(setup.parts, build_hamiltonian(spec), ts)
        vop = potential_operator(spec.clock, _pot(16))
        rho_cl = spec.clock.quasi_ideal_state()
        delta_max = max(
            max_overlap_defect(rho_cl, spec.clock.hamiltonian, vop, 0, spec.t1 / 2.0),
            max_overlap_defect(rho_cl, spec.clock.hamiltonian, vop, 1,
                               (spec.t2 + spec.clock.T0) / 2.0),
        )
        a = spec.interaction_generator()
        eps_sigma = interaction_error(setup.parts[0], setup.parts[1],
                                      setup.parts[3], a, setup.target_system)
        product, target = window_bound_reports(spec, traj, setup.parts,
                                               delta_max, eps_sigma)
        assert len(product) == len(ts) and len(target) == len(ts)
        assert {r.label for r in product} == {"product_deviation"}
        assert {r.label for r in target} == {"target_deviation"}
        for r in product + target:
            assert not r.violated
            assert not (spec.t1 + 1e-9 < r.time < spec.t2 - 1e-9)
        # late-time inputs carry the switched profile
        assert product[-1].inputs["theta"] == 1.0
        assert product[0].inputs["theta"] == 0.0


class TestNoGo:
    def test_finite_clock_witness_is_macroscopic(self):
        d = 8
        ck = QuasiIdealClock(d)
        pot = _pot(d)
        omegas = (0.0, math.pi / 2.0)
        blocks = [interaction_generator(ck, pot, om) for om in omegas]
        w = nogo_witness(blocks, omegas, ck.quasi_ideal_state(), 1.0,
                         np.linspace(0.0, 2.0, 9))
        assert w == pytest.approx(1.981760716387476, rel=1e-9)
        assert w > 1e-6

    def test_vanishes_before_the_step(self):
        ck = QuasiIdealClock(8)
        blocks = [ck.hamiltonian, ck.hamiltonian]
        w = nogo_witness(blocks, (0.0, 1.0), ck.quasi_ideal_state(), 5.0,
                         np.linspace(0.0, 4.0, 5))
        assert w < 1e-12

    def test_validation(self):
        ck = QuasiIdealClock(8)
        rho = ck.quasi_ideal_state()
        with pytest.raises(ValueError):
            nogo_witness([ck.hamiltonian], (0.0,), rho, 1.0, [0.0])
        with pytest.raises(ValueError):
            nogo_witness([ck.hamiltonian, ck.hamiltonian], (0.3, 0.3), rho, 1.0, [0.0])
        with pytest.raises(ValueError):
            nogo_witness([ck.hamiltonian], (0.0, 1.0), rho, 1.0, [0.0])


class TestEmbezzleDistance:
    def test_closed_form_values(self):
        assert embezzle_distance(2, 4) == pytest.approx(2.0 / 3.0, rel=1e-15)
        assert embezzle_distance(2, 2) == pytest.approx(1.0, rel=1e-15)
        assert embezzle_distance(2, 4) == pytest.approx(float(embezzle_oracle(2, 4)),
                                                        rel=1e-12)

    def test_decays_only_logarithmically(self):
        vals = [embezzle_distance(2, 2 ** k) for k in range(1, 21)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        # even at d_cat = 2**20 the budget is still macroscopic
        assert vals[-1] > 0.09

    def test_validation(self):
        with pytest.raises(ValueError):
            embezzle_distance(1, 4)
        with pytest.raises(ValueError):
            embezzle_distance(2, 1)
