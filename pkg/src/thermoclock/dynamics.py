"""Joint system-catalyst-clock-bath dynamics and the error-bound chain.

The autonomous model couples a finite clock to a target transformation on
system + catalyst + bath: the clock's bump potential switches the interaction
on and off with no external timing signal.  This module builds the joint
Hamiltonians, runs exact dense simulations, measures how far the realised
dynamics sit from the idealised switched dynamics, evaluates the closed-form
bounds on those deviations, and checks whether the resulting system
transition is legitimately reachable with a returned catalyst.

Factor ordering is fixed everywhere as system (0), catalyst (1), clock (2),
bath (3).  Reduced states are taken by index, so the ordering never leaks
into results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clock import PotentialSpec, QuasiIdealClock, potential_operator
from .prob_entropy import TRUMPED, default_alpha_grid, trumping_check
from .quantum_state import (
    DensityMatrix,
    HermitianOp,
    compose,
    evolve,
    op_norm,
    reduce,
    trace_distance,
    unitary_of,
)

BOUND_SLACK = 1e-9  # absolute tolerance when comparing measured lhs to analytic rhs


def _as_matrix(op):
    return op.data if hasattr(op, "data") else np.asarray(op, dtype=complex)


def theta_step(t: float, t1: float, t2: float) -> float:
    """Exact switching profile: 0 before the crossing starts, 1 once it completes.

    Inside the open window (t1, t2) the switched dynamics are undefined, so
    asking for the profile there is an error rather than an interpolation.
    """
    if t <= t1:
        return 0.0
    if t >= t2:
        return 1.0
    raise ValueError(
        f"time {t!r} lies inside the open switching window ({t1!r}, {t2!r}); "
        "no target is defined during the crossing"
    )


def admissible_times(t1: float, t2: float, period: float, n: int = 65):
    """Uniform grid over one period, restricted to where the target is defined.

    Takes ``n`` evenly spaced points on [0, period], drops the endpoint
    (one full period returns the free clock to its start, so the fundamental
    domain is half-open) and removes every point inside the open switching
    window (t1, t2).
    """
    ts = np.linspace(0.0, period, n)[:-1]
    keep = (ts <= t1 + 1e-12) | (ts >= t2 - 1e-12)
    return ts[keep]


@dataclass(frozen=True)
class PhasedInteraction:
    """Target unitary specified as phases on a joint eigenbasis, bump-driven.

    ``basis`` holds the joint system+catalyst+bath eigenvectors as columns;
    eigenvector n picks up the phase ``exp(-i * phases[n])`` once the clock
    has fully crossed the bump.
    """

    phases: tuple
    basis: np.ndarray
    potential: PotentialSpec

    def __post_init__(self):
        phases = tuple(float(w) for w in self.phases)
        object.__setattr__(self, "phases", phases)
        if any(not (-math.pi <= w < math.pi) for w in phases):
            raise ValueError("target phases must lie in [-pi, pi)")
        basis = np.asarray(self.basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise ValueError("eigenbasis must be a square matrix of column vectors")
        if basis.shape[0] != len(phases):
            raise ValueError("need exactly one phase per basis column")
        gram = basis.conj().T @ basis
        if op_norm(gram - np.eye(basis.shape[0])) > 1e-9:
            raise ValueError("eigenbasis columns must be orthonormal")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    def generator(self) -> np.ndarray:
        return (self.basis * np.asarray(self.phases)) @ self.basis.conj().T


@dataclass(frozen=True)
class CommutingInteraction:
    """Bounded interaction generator commuting with the free Hamiltonian.

    ``generator`` acts on system+catalyst+bath and must have operator norm
    at most pi; ``clock_generator`` is the clock-side factor it multiplies.
    Commutation with the free part is checked when the joint Hamiltonian is
    assembled, since only the full spec knows the free terms.
    """

    generator: HermitianOp
    clock_generator: HermitianOp

    def __post_init__(self):
        if op_norm(self.generator) > math.pi + 1e-9:
            raise ValueError("interaction generator must have operator norm <= pi")


@dataclass(frozen=True)
class AutonomousSpec:
    """Everything needed to assemble one autonomous protocol.

    Times satisfy 0 < t1 < t2 < t3 <= clock period: the interaction is off
    until t1, the crossing happens inside (t1, t2), and t3 marks the end of
    the examined window.
    """

    h_sys: HermitianOp
    h_cat: HermitianOp
    h_gibbs: HermitianOp
    interaction: object
    clock: QuasiIdealClock
    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        if not isinstance(self.interaction, (PhasedInteraction, CommutingInteraction)):
            raise TypeError("interaction must be PhasedInteraction or CommutingInteraction")
        if not (0.0 < self.t1 < self.t2 < self.t3 <= self.clock.T0 + 1e-12):
            raise ValueError("need 0 < t1 < t2 < t3 <= clock period")

    @property
    def joint_dims(self):
        return (self.h_sys.dim, self.h_cat.dim, self.clock.d, self.h_gibbs.dim)

    def interaction_generator(self) -> HermitianOp:
        """The system+catalyst+bath side of the interaction."""
        dims = (self.h_sys.dim, self.h_cat.dim, self.h_gibbs.dim)
        if isinstance(self.interaction, PhasedInteraction):
            return HermitianOp(self.interaction.generator(), factor_dims=dims)
        gen = self.interaction.generator
        if gen.dim != dims[0] * dims[1] * dims[2]:
            raise ValueError("interaction generator dimension does not match the spec")
        return HermitianOp(gen.data, factor_dims=dims)

    def clock_interaction(self) -> HermitianOp:
        """The clock-side switching operator."""
        if isinstance(self.interaction, PhasedInteraction):
            return potential_operator(self.clock, self.interaction.potential)
        h = self.interaction.clock_generator
        if h.dim != self.clock.d:
            raise ValueError("clock generator dimension does not match the clock")
        return h


def _embed(mat: np.ndarray, joint_dims, positions) -> np.ndarray:
    """Lift an operator acting on the factors at ``positions`` to the full space.

    ``mat`` is ordered like the listed positions (which must be increasing);
    identity is inserted on every other factor.
    """
    positions = tuple(positions)
    rest = [i for i in range(len(joint_dims)) if i not in positions]
    rest_dim = int(np.prod([joint_dims[i] for i in rest])) if rest else 1
    full = np.kron(mat, np.eye(rest_dim))
    order = list(positions) + rest
    perm = np.argsort(order)
    dims_in_full = [joint_dims[i] for i in order]
    n = len(joint_dims)
    tensor = full.reshape(dims_in_full + dims_in_full)
    tensor = tensor.transpose(list(perm) + [int(p) + n for p in perm])
    total = int(np.prod(joint_dims))
    return np.ascontiguousarray(tensor.reshape(total, total))


def _free_sum(h_sys: HermitianOp, h_cat: HermitianOp, h_gibbs: HermitianOp) -> HermitianOp:
    """Non-interacting system+catalyst+bath Hamiltonian on their joint space."""
    ds, dc, dg = h_sys.dim, h_cat.dim, h_gibbs.dim
    m = (
        np.kron(np.kron(h_sys.data, np.eye(dc)), np.eye(dg))
        + np.kron(np.kron(np.eye(ds), h_cat.data), np.eye(dg))
        + np.kron(np.kron(np.eye(ds), np.eye(dc)), h_gibbs.data)
    )
    return HermitianOp(m, factor_dims=(ds, dc, dg))


def build_hamiltonian(spec: AutonomousSpec) -> HermitianOp:
    """Assemble the full autonomous Hamiltonian on system x catalyst x clock x bath.

    The interaction is a product of a system+catalyst+bath generator and the
    clock's switching operator; the free part adds the local Hamiltonians and
    the clock's own generator of time translation.
    """
    dims = spec.joint_dims
    a = spec.interaction_generator()
    if isinstance(spec.interaction, CommutingInteraction):
        free = _free_sum(spec.h_sys, spec.h_cat, spec.h_gibbs)
        comm = free.data @ a.data - a.data @ free.data
        if np.linalg.norm(comm) > 1e-9:
            raise ValueError(
                "interaction generator must commute with the free Hamiltonian "
                f"(Frobenius norm of commutator {np.linalg.norm(comm):.3e})"
            )
    v = spec.clock_interaction()
    h = (
        _embed(spec.h_sys.data, dims, (0,))
        + _embed(spec.h_cat.data, dims, (1,))
        + _embed(spec.clock.hamiltonian.data, dims, (2,))
        + _embed(spec.h_gibbs.data, dims, (3,))
        + _embed(a.data, dims, (0, 1, 3)) @ _embed(v.data, dims, (2,))
    )
    h = 0.5 * (h + h.conj().T)  # kill roundoff asymmetry from the product term
    return HermitianOp(h, factor_dims=dims)


class Trajectory:
    """Exact joint states over a time grid, with the reductions used downstream.

    Caches the reduced system, catalyst and clock states plus the
    system+catalyst+clock block at every time.
    """

    def __init__(self, times, joint_states):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("need a non-empty 1-D time grid")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if len(joint_states) != times.size:
            raise ValueError("one joint state per time point required")
        self.times = times
        self.joint_states = list(joint_states)
        self.system = [reduce(s, (0,)) for s in self.joint_states]
        self.catalyst = [reduce(s, (1,)) for s in self.joint_states]
        self.clock = [reduce(s, (2,)) for s in self.joint_states]
        self.correlated = [reduce(s, (0, 1, 2)) for s in self.joint_states]

    def __len__(self):
        return self.times.size


def simulate(parts, h: HermitianOp, times) -> Trajectory:
    """Evolve an initial product state exactly under ``h`` at the given times.

    One eigendecomposition of ``h`` is reused for every time point.  The
    global purity is monitored as a unitarity check and any drift beyond
    1e-10 raises.
    """
    rho_s, rho_cat, rho_cl, tau_g = parts
    joint0 = compose(compose(rho_s, rho_cat), compose(rho_cl, tau_g))
    if joint0.dim != h.dim:
        raise ValueError(
            f"state dimension {joint0.dim} does not match Hamiltonian dimension {h.dim}"
        )
    evals, evecs = np.linalg.eigh(h.data)
    base = evecs.conj().T @ joint0.data @ evecs
    purity0 = float(np.vdot(joint0.data, joint0.data).real)
    states = []
    for t in np.asarray(times, dtype=float):
        phase = np.exp(-1j * evals * t)
        m = evecs @ (np.outer(phase, phase.conj()) * base) @ evecs.conj().T
        drift = abs(float(np.vdot(m, m).real) - purity0)
        if drift > 1e-10:
            raise ValueError(f"purity drifted by {drift:.3e} at t={t!r}; evolution not unitary")
        states.append(DensityMatrix(m, factor_dims=h.factor_dims))
    return Trajectory(times, states)


def measure_embezzlement(traj: Trajectory, spec: AutonomousSpec, rho_cat0, rho_cl0):
    """Distance of the realised system+catalyst+clock block from the ideal product.

    At each time the reference is the *measured* reduced system state next to
    freely evolved catalyst and clock states: any excess distance is
    correlation or disturbance the protocol was supposed to avoid, i.e. fuel
    it could be covertly embezzling.
    """
    out = np.empty(len(traj))
    h_cl = spec.clock.hamiltonian
    for i, t in enumerate(traj.times):
        ref = compose(
            compose(traj.system[i], evolve(rho_cat0, spec.h_cat, t)),
            evolve(rho_cl0, h_cl, t),
        )
        out[i] = trace_distance(traj.correlated[i], ref)
    return out


def resolution_bound(eps_emb: float, d_sys: int, d_cat_total: int, *, main_text_form: bool = False):
    """How far the realised state may sit from a legitimately reachable target.

    Returns ``(value, in_domain)``.  ``d_cat_total`` is the total dimension of
    everything acting as the returned catalyst (ancilla plus clock).  The
    radical form is the canonical one (it is what the derivation proves);
    ``main_text_form`` selects the summary variant that omits the square
    root.  ``in_domain`` reports whether both validity constraints of the
    derivation hold; outside them the value is still evaluated but carries no
    guarantee.
    """
    if not 0.0 < eps_emb < 1.0:
        raise ValueError("embezzlement error must lie strictly inside (0, 1)")
    if d_sys < 2 or d_cat_total < 1:
        raise ValueError("need system dimension >= 2 and catalyst dimension >= 1")
    d_total = float(d_sys * d_cat_total)
    log_eps = math.log(eps_emb)
    neg_log = -log_eps
    # Third term written via logs so extreme eps cannot overflow the ratio.
    tail = math.exp(0.5 * (log_eps - math.log(d_total)))
    log_term = 0.5 * (math.log(d_total) + neg_log)
    inner = (
        (d_sys ** (5.0 / 3.0) + 4.0 * math.log(d_total) * math.log(d_sys)) / neg_log
        + d_total * math.exp(log_eps / 6.0)
        + 5.0 * (d_total * d_total * tail * log_term) ** (2.0 / 3.0)
    )
    value = 5.0 * inner if main_text_form else 5.0 * math.sqrt(inner)
    in_domain = (10.0 * math.log(d_total) <= neg_log) and (
        log_eps * math.log1p(-1.0 / d_sys) >= math.log(d_total) ** 2
    )
    return value, in_domain


def smoothed_target(rho_sys_free: DensityMatrix, eps_res: float) -> DensityMatrix:
    """The reachable target: the free system state nudged toward maximal mixing.

    If the free state already sits within ``eps_res`` of the maximally mixed
    state the latter is returned outright; otherwise a convex mixture with
    weight ``eps_res`` on the maximally mixed state, which is full rank by
    construction.
    """
    if not 0.0 < eps_res <= 1.0:
        raise ValueError("resolution must lie in (0, 1]")
    d = rho_sys_free.dim
    mixed = DensityMatrix.maximally_mixed(d)
    if trace_distance(rho_sys_free, mixed) < eps_res:
        return mixed
    blend = (1.0 - eps_res) * rho_sys_free.data + eps_res * np.eye(d) / d
    return DensityMatrix(blend, factor_dims=rho_sys_free.factor_dims)


def verify_catalytic_reachability(rho_s0: DensityMatrix, sigma_s: DensityMatrix, grid=None):
    """Can the system go from ``rho_s0`` to ``sigma_s`` with a catalyst returned exactly?

    Reachability depends only on the spectra, and reduces to the trumping
    relation between them.  The initial state must not be of full rank; that
    hypothesis is what makes the reduction valid, so a full-rank input is an
    error, not a verdict.
    """
    p = rho_s0.spectrum()
    if p[-1] > 1e-12:
        raise ValueError(
            "initial state must not be of full rank "
            f"(smallest eigenvalue {p[-1]:.3e}); the reachability reduction "
            "requires a vanishing eigenvalue"
        )
    q = sigma_s.spectrum()
    if p.size != q.size:
        raise ValueError("states must share one system dimension")
    if float(np.max(np.abs(p - q))) <= 1e-12:
        return TRUMPED  # identity transition: the trivial catalyst suffices
    if grid is None:
        grid = default_alpha_grid()
    return trumping_check(p, q, grid)


def interaction_error(rho_s0, rho_cat0, tau_g, h_int: HermitianOp, rho_s1_ref) -> float:
    """How imperfectly an interaction generator realises the intended transition.

    Applies ``exp(-i h_int)`` to the initial product state, traces out the
    bath, and returns the trace distance of the surviving system+catalyst
    block from the intended product of the target system state with the
    untouched catalyst.
    """
    joint = compose(compose(rho_s0, rho_cat0), tau_g)
    if h_int.dim != joint.dim:
        raise ValueError(
            f"interaction dimension {h_int.dim} does not match the joint state {joint.dim}"
        )
    u = unitary_of(h_int, -1.0)
    after = DensityMatrix(
        u.data @ joint.data @ u.data.conj().T, factor_dims=joint.factor_dims
    )
    block = reduce(after, (0, 1))
    return trace_distance(block, compose(rho_s1_ref, rho_cat0))


@dataclass(frozen=True)
class BoundReport:
    """One measured quantity paired with the analytic bound that must dominate it."""

    time: float
    lhs: float
    rhs: float
    label: str
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lhs < 0.0 or self.rhs < 0.0:
            raise ValueError("measured value and bound must both be non-negative")

    @property
    def violated(self) -> bool:
        return self.lhs > self.rhs + BOUND_SLACK

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def window_bound_reports(spec: AutonomousSpec, traj: Trajectory, parts, delta_max: float,
                         eps_sigma: float):
    """Pair every admissible time with the two bounds that hold outside the crossing.

    ``delta_max`` is the grid maximum of the clock's steering-overlap defect
    ``|1 - D^2|`` and ``eps_sigma`` the interaction imperfection.  The first
    sequence bounds the deviation of the system+catalyst+clock block from the
    drifting product; the second bounds the deviation of the reduced system
    state from the switched target.  Times inside the open window (t1, t2)
    are rejected: no claim is made mid-crossing.
    """
    rho_s0, rho_cat0, rho_cl0, tau_g = parts
    ds, dcat, dg = spec.h_sys.dim, spec.h_cat.dim, spec.h_gibbs.dim
    coeff = ds * rho_s0.purity() * dcat * dg * tau_g.purity()
    a = spec.interaction_generator()
    free = _free_sum(spec.h_sys, spec.h_cat, spec.h_gibbs)
    joint0 = compose(compose(rho_s0, rho_cat0), tau_g)
    u_switch = unitary_of(a, -1.0)
    emb = measure_embezzlement(traj, spec, rho_cat0, rho_cl0)

    common = {
        "d_sys": float(ds),
        "d_cat": float(dcat),
        "d_bath": float(dg),
        "purity_sys": rho_s0.purity(),
        "purity_bath": tau_g.purity(),
        "coeff": coeff,
        "delta_max": float(delta_max),
        "eps_sigma": float(eps_sigma),
    }
    product_reports = []
    target_reports = []
    for i, t in enumerate(traj.times):
        th = theta_step(float(t), spec.t1, spec.t2)
        inputs = dict(common, theta=th)
        rhs1 = 2.0 * eps_sigma * th + 10.0 * (coeff * delta_max) ** 0.25
        product_reports.append(
            BoundReport(time=float(t), lhs=float(emb[i]), rhs=rhs1,
                        label="product_deviation", inputs=inputs)
        )
        drifted = evolve(joint0, free, float(t))
        if th:
            drifted = DensityMatrix(
                u_switch.data @ drifted.data @ u_switch.data.conj().T,
                factor_dims=drifted.factor_dims,
            )
        target_sys = reduce(drifted, (0,))
        rhs2 = eps_sigma * th + math.sqrt(coeff) * delta_max
        target_reports.append(
            BoundReport(time=float(t), lhs=trace_distance(traj.system[i], target_sys),
                        rhs=rhs2, label="target_deviation", inputs=inputs)
        )
    return product_reports, target_reports


def nogo_witness(h_blocks, omegas, rho_cl: DensityMatrix, t_step: float, times) -> float:
    """Numerical witness that a finite clock cannot produce an exact step.

    An idealised control would imprint the phase ``exp(-i t (w_m - w_l))``
    between any two target sectors only after the step time.  Each clock
    sector instead evolves under its own block Hamiltonian; the witness is
    the largest deviation between the idealised phase and the measured
    cross-sector trace, over all times and ordered sector pairs.  Strictly
    positive output is the finite-clock obstruction; zero would require the
    blocks to reproduce a discontinuous phase exactly.
    """
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or omegas.size < 2:
        raise ValueError("need at least two target phases")
    if float(np.max(omegas) - np.min(omegas)) < 1e-15:
        raise ValueError("degenerate phase list: all target phases are equal")
    if len(h_blocks) != omegas.size:
        raise ValueError("need exactly one clock block per target phase")
    blocks = [np.linalg.eigh(_as_matrix(h)) for h in h_blocks]
    rho = rho_cl.data
    worst = 0.0
    for t in np.asarray(times, dtype=float):
        delta = 0.0 if t <= t_step else 1.0
        us = [(vecs * np.exp(-1j * vals * t)) @ vecs.conj().T for vals, vecs in blocks]
        for l in range(omegas.size):
            for m in range(omegas.size):
                if l == m:
                    continue
                ideal = np.exp(-1j * t * (omegas[m] - omegas[l]) * delta)
                realised = np.trace(us[l] @ rho @ us[m].conj().T)
                worst = max(worst, abs(ideal - realised))
    return worst


def embezzle_distance(d_sys: int, d_cat: int) -> float:
    """Trace-distance budget a catalyst of size ``d_cat`` needs to unlock anything.

    Decreases only logarithmically in the catalyst dimension: even an
    astronomically large catalyst must move a non-negligible distance, which
    is why inexact catalysis is a physical concern rather than a pathology.
    """
    if d_sys < 2 or d_cat < 2:
        raise ValueError("both dimensions must be at least 2")
    return d_sys / (1.0 + (d_sys - 1) * (math.log2(d_cat) / math.log2(d_sys)))


@dataclass(frozen=True)
class ReferenceSetup:
    """A ready-to-run qubit demonstration shared by the CLI and the test-suite."""

    spec: AutonomousSpec
    parts: tuple
    phases: tuple
    clock_weights: tuple
    target_system: DensityMatrix


def reference_embezzlement_setup(d_clock: int, *, t1: float | None = None,
                                 t2: float | None = None, t3: float | None = None,
                                 tail_fraction: float = 0.75,
                                 commuting: bool = False) -> ReferenceSetup:
    """Qubit-swap demonstration: pure system, trivial catalyst, maximally mixed bath.

    The phased target acts on the system-bath pair as a swap up to signs, so
    the pure system ends maximally mixed -- a transition that genuinely needs
    the bath.  The phases are non-degenerate, the free Hamiltonians vanish
    (every energy-preservation constraint holds trivially), and the same
    generator doubles as the bounded commuting interaction when
    ``commuting=True``.
    """
    clock = QuasiIdealClock(d_clock)
    period = clock.T0
    t1 = period / 4.0 if t1 is None else t1
    t2 = 3.0 * period / 4.0 if t2 is None else t2
    t3 = period if t3 is None else t3
    s = 1.0 / math.sqrt(2.0)
    # Columns: |00>, the symmetric pair state, |11>, the antisymmetric pair state.
    basis = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, s, 0.0, s],
            [0.0, s, 0.0, -s],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )
    phases = (0.0, math.pi / 2.0, -math.pi, -math.pi / 2.0)
    potential = PotentialSpec.from_window(t1, t2, period, d_clock, tail_fraction=tail_fraction)
    if commuting:
        gen = (basis * np.asarray(phases)) @ basis.conj().T
        interaction = CommutingInteraction(
            generator=HermitianOp(gen, factor_dims=(2, 1, 2)),
            clock_generator=potential_operator(clock, potential),
        )
    else:
        interaction = PhasedInteraction(phases=phases, basis=basis, potential=potential)
    spec = AutonomousSpec(
        h_sys=HermitianOp.zero(2),
        h_cat=HermitianOp.zero(1),
        h_gibbs=HermitianOp.zero(2),
        interaction=interaction,
        clock=clock,
        t1=t1,
        t2=t2,
        t3=t3,
    )
    parts = (
        DensityMatrix(np.diag([1.0, 0.0])),
        DensityMatrix(np.eye(1)),
        clock.quasi_ideal_state(),
        DensityMatrix.maximally_mixed(2),
    )
    # The initial state weights each target sector: diagonal overlaps with the
    # basis columns.  Cross terms die under the bath trace, so these weights
    # alone drive the clock's back-reaction.
    rho_a0 = compose(compose(parts[0], parts[1]), parts[3])
    weights = tuple(
        float(np.real(np.vdot(basis[:, n], rho_a0.data @ basis[:, n]))) for n in range(4)
    )
    return ReferenceSetup(
        spec=spec,
        parts=parts,
        phases=phases,
        clock_weights=weights,
        target_system=DensityMatrix.maximally_mixed(2),
    )
