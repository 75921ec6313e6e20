"""Experiment harness: config files, nine experiments, CSV records, and the CLI.

Config format is flat ``key=value`` text: one ``experiment=`` line, optional
``seed=`` and ``output=`` lines, and repeated ``param.<name>=`` lines with
comma-separated sequences.  Every experiment writes one CSV whose column set
is fixed (see ``EXPERIMENT_COLUMNS``): five common identity columns, the
experiment's own named numeric columns, then ``value, lhs, rhs, margin,
passed``.  Rows are either measurements (``kind=info``, only ``value``
filled) or bound checks (``kind=bound``, lhs/rhs/margin/passed filled).
Floating-point cells use 17 significant digits so they round-trip exactly.

Randomness comes from one counter-based generator keyed by the seed;
sweep point ``i`` runs on the stream jumped ``i`` blocks ahead, which is what
makes parallel sweeps byte-identical to serial ones.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .clock import (
    PotentialSpec,
    QuasiIdealClock,
    clock_disturbance,
    clock_error_norms,
    default_momentum_spec,
    disturbance_bound,
    max_overlap_defect,
    momentum_control_overlap,
    tail_leakage,
)
from .dynamics import (
    BOUND_SLACK,
    _embed,
    admissible_times,
    build_hamiltonian,
    embezzle_distance,
    interaction_error,
    measure_embezzlement,
    nogo_witness,
    reference_embezzlement_setup,
    resolution_bound,
    simulate,
    smoothed_target,
    theta_step,
    verify_catalytic_reachability,
    window_bound_reports,
)
from .prob_entropy import (
    BOUNDED_QUANTITY,
    INCONCLUSIVE,
    NOT_TRUMPED,
    REGIME_KINDS,
    TRUMPED,
    BoundRegime,
    continuity_bound,
    renyi_entropy,
    tsallis_entropy,
)
from .quantum_state import (
    DensityMatrix,
    HermitianOp,
    evolve,
    op_norm,
    reduce,
    trace_distance,
)

EXPERIMENT_NAMES = (
    "entropy_bounds",
    "perturbation",
    "clock_scaling",
    "thm1_chain",
    "thm2_bound",
    "thm3_bound",
    "nogo",
    "momentum_delta",
    "embezzle_formula",
)

# Named numeric columns placed between the identity columns and the
# value/lhs/rhs/margin/passed tail.  Fixed per experiment; adding a column is
# a breaking change.
EXPERIMENT_COLUMNS = {
    "entropy_bounds": ("alpha", "dim", "delta"),
    "perturbation": ("dim", "strength"),
    "clock_scaling": ("d_clock", "time"),
    "thm1_chain": ("d_clock", "time"),
    "thm2_bound": ("d_clock", "time"),
    "thm3_bound": ("d_clock", "time"),
    "nogo": ("instance", "d_clock"),
    "momentum_delta": ("time",),
    "embezzle_formula": ("d_sys", "d_cat"),
}

_CSV_COMMON = ("experiment", "config_hash", "row", "kind", "label")
_CSV_TAIL = ("value", "lhs", "rhs", "margin", "passed")

# Demonstration protocol constants: target phases of the swap-like unitary and
# the weight each target sector receives from the demonstration's initial
# state (pure system, trivial catalyst, maximally mixed bath).
DEMO_PHASES = (0.0, math.pi / 2.0, -math.pi, -math.pi / 2.0)
DEMO_WEIGHTS = (0.5, 0.25, 0.0, 0.25)

_VERDICT_CODE = {TRUMPED: 1.0, INCONCLUSIVE: 0.5, NOT_TRUMPED: 0.0}


class ConfigError(ValueError):
    """A configuration problem the user can fix: bad file, bad key, bad value."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0


def parse_config(text: str) -> ExperimentConfig:
    experiment = None
    params = {}
    output = None
    seed = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "experiment":
            if experiment is not None:
                raise ConfigError(f"line {lineno}: duplicate experiment line")
            experiment = value
        elif key == "seed":
            seed = int(value)
        elif key == "output":
            output = value
        elif key.startswith("param."):
            name = key[len("param."):]
            if not name:
                raise ConfigError(f"line {lineno}: empty parameter name")
            if name in params:
                raise ConfigError(f"line {lineno}: duplicate parameter {name!r}")
            params[name] = value
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if experiment is None:
        raise ConfigError("config has no experiment= line")
    return ExperimentConfig(experiment=experiment, params=params, output=output, seed=seed)


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


_REQUIRED = object()


def _param(cfg: ExperimentConfig, name: str, default=_REQUIRED) -> str:
    if name in cfg.params:
        return cfg.params[name]
    if default is _REQUIRED:
        raise ConfigError(
            f"experiment {cfg.experiment!r} is missing required parameter {name!r}"
        )
    return default


def _param_int(cfg, name, default=_REQUIRED) -> int:
    raw = _param(cfg, name, default)
    return raw if isinstance(raw, int) else int(raw)


def _param_float(cfg, name, default=_REQUIRED) -> float:
    raw = _param(cfg, name, default)
    return raw if isinstance(raw, float) else float(raw)


def _param_ints(cfg, name, default=_REQUIRED):
    raw = _param(cfg, name, default)
    if not isinstance(raw, str):
        return tuple(raw)
    return tuple(int(s) for s in raw.split(",") if s.strip())


def _param_floats(cfg, name, default=_REQUIRED):
    raw = _param(cfg, name, default)
    if not isinstance(raw, str):
        return tuple(raw)
    return tuple(float(s) for s in raw.split(",") if s.strip())


def config_hash(cfg: ExperimentConfig) -> str:
    pieces = [f"experiment={cfg.experiment}"]
    pieces.extend(f"param.{k}={cfg.params[k]}" for k in sorted(cfg.params))
    pieces.append(f"seed={cfg.seed}")
    digest = hashlib.sha256("\n".join(pieces).encode("utf-8")).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class ResultRecord:
    """One CSV row: a measurement (info) or a measured-vs-bound check (bound)."""

    experiment: str
    config_hash: str
    row: int
    kind: str
    label: str
    extras: tuple
    value: float | None = None
    lhs: float | None = None
    rhs: float | None = None

    def __post_init__(self):
        if self.kind not in ("bound", "info"):
            raise ValueError(f"row kind must be 'bound' or 'info', got {self.kind!r}")
        if self.kind == "bound" and (self.lhs is None or self.rhs is None):
            raise ValueError("bound rows need both lhs and rhs")

    @property
    def margin(self):
        if self.kind != "bound":
            return None
        return self.rhs - self.lhs

    @property
    def passed(self):
        if self.kind != "bound":
            return None
        return self.lhs <= self.rhs + BOUND_SLACK


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.16e" % float(v)
    return str(v)


def write_csv(path: str, experiment: str, records) -> None:
    if experiment not in EXPERIMENT_COLUMNS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    header = _CSV_COMMON + EXPERIMENT_COLUMNS[experiment] + _CSV_TAIL
    lines = [",".join(header)]
    for r in records:
        cells = [r.experiment, r.config_hash, str(r.row), r.kind, r.label]
        cells.extend(_cell(x) for x in r.extras)
        cells.extend(_cell(x) for x in (r.value, r.lhs, r.rhs, r.margin, r.passed))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


class _Rows:
    """Tiny builder that numbers rows and pins the experiment/hash columns."""

    def __init__(self, experiment: str, cfg_hash: str):
        self.experiment = experiment
        self.cfg_hash = cfg_hash
        self.records = []

    def info(self, label, extras, value):
        self.records.append(
            ResultRecord(self.experiment, self.cfg_hash, len(self.records), "info",
                         label, tuple(extras), value=float(value))
        )

    def bound(self, label, extras, lhs, rhs):
        self.records.append(
            ResultRecord(self.experiment, self.cfg_hash, len(self.records), "bound",
                         label, tuple(extras), lhs=float(lhs), rhs=float(rhs))
        )


# --------------------------------------------------------------------------
# entropy_bounds


def _perturbed_pair(rng, d, delta_target, floor_frac=0.1):
    """A strictly positive vector and a nearby one at a chosen one-norm distance.

    The perturbation direction is zero-sum with unit one-norm, so the step
    size is exactly the resulting distance; the step is capped to keep every
    entry at least ``floor_frac`` of its original value (positivity for the
    negative-order entropies).
    """
    p = rng.dirichlet(np.ones(d))
    p = np.maximum(p, 1e-9)
    p = p / p.sum()
    v = rng.normal(size=d)
    v = v - v.mean()
    norm = float(np.abs(v).sum())
    if norm < 1e-12:  # astronomically unlikely; keep the draw count fixed
        v = np.zeros(d)
        v[0], v[1] = 0.5, -0.5
        norm = 1.0
    v = v / norm
    neg = v < 0.0
    s_max = float(np.min((1.0 - floor_frac) * p[neg] / -v[neg])) if neg.any() else 2.0
    s = min(delta_target, s_max)
    q = p + s * v
    delta = float(np.abs(p - q).sum())
    return p, q, delta


def _sample_regime(kind: str, rng, d: int):
    """Draw (alpha, delta_target) inside the regime's validity domain."""
    u = rng.uniform
    if kind == "tsallis_raw":
        a = u(0.05, 0.95) if u() < 0.5 else u(1.05, 8.0)
        return a, 10.0 ** u(-6.0, 0.25)
    if kind == "tsallis_low":
        a_min = math.log(2.0 * math.e * d) / (math.log(d) + 27.6)
        a = u(a_min, 1.0)
        dmax = d * (1.0 / (2.0 * math.e * d)) ** (1.0 / a)
        return a, dmax * 10.0 ** u(-3.0, -0.05)
    if kind == "tsallis_high":
        a = u(1.0, 4.0)
        dmax = 1.0 / (2.0 * math.e * math.ceil(a) * d**a)
        return a, dmax * 10.0 ** u(-3.0, -0.05)
    if kind == "renyi_neg":
        a = float("-inf") if u() < 0.1 else -(10.0 ** u(0.0, 1.3))
        return a, 10.0 ** u(-6.0, -0.5)
    if kind == "renyi_low":
        return u(0.05, 0.95), 10.0 ** u(-6.0, 0.25)
    if kind == "renyi_high":
        a = float("inf") if u() < 0.1 else 1.0 + 10.0 ** u(-1.0, 0.9)
        return a, 10.0 ** u(-6.0, 0.25)
    if kind == "renyi_mid_half1":
        a = u(0.5, 0.999)
        dmax = 1.0 / ((4.0 * math.e) ** 2 * d)
        return a, dmax * 10.0 ** u(-3.0, -0.02)
    if kind == "renyi_mid_12":
        a = u(1.0, 2.0)
        dmax = d / (8.0 * math.e) ** 2
        return a, dmax * 10.0 ** u(-3.0, -0.02)
    if kind == "lem_cont_half":
        return u(0.01, 0.5), 10.0 ** u(-6.0, 0.25)
    if kind == "lem_cont_mid":
        a = u(0.5, 2.0)
        dmax = 1.0 / (32.0 * d * d)
        return a, dmax * 10.0 ** u(-3.0, -0.02)
    if kind == "lem_cont_geq2":
        return u(2.0, 6.0), 10.0 ** u(-6.0, 0.25)
    # s_infty: bound holds for the sup-order entropy at any distance
    return float("inf"), 10.0 ** u(-6.0, 0.25)


def _entropy_gap(quantity: str, p, q, alpha) -> float:
    if quantity == "tsallis":
        return abs(tsallis_entropy(p, alpha) - tsallis_entropy(q, alpha))
    if quantity == "renyi":
        return abs(renyi_entropy(p, alpha) - renyi_entropy(q, alpha))
    # sup-order: the max-entropy difference, the quantity the d*delta bound controls
    return abs(renyi_entropy(p, "infinity") - renyi_entropy(q, "infinity"))


def _run_entropy_bounds(cfg: ExperimentConfig, rng, cfg_hash: str):
    trials = _param_int(cfg, "trials", 1000)
    dims = _param_ints(cfg, "dims", "2,4,8,16")
    rows = _Rows(cfg.experiment, cfg_hash)
    for kind in REGIME_KINDS:
        quantity = BOUNDED_QUANTITY[kind]
        for _ in range(trials):
            d = int(dims[rng.integers(len(dims))])
            alpha, delta_target = _sample_regime(kind, rng, d)
            p, q, delta = _perturbed_pair(rng, d, delta_target)
            p_min = float(min(p.min(), q.min())) if kind == "renyi_neg" else None
            regime = BoundRegime(kind, p_min=p_min)
            bound = continuity_bound(regime, d, alpha, delta)
            gap = _entropy_gap(quantity, p, q, alpha)
            rows.bound(kind, (alpha, d, delta), lhs=gap, rhs=bound)
    return rows.records


# --------------------------------------------------------------------------
# perturbation


def _random_hermitian(rng, d, scale=1.0):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = 0.5 * (m + m.conj().T)
    return m * scale


def _expm_i(mat, sign):
    vals, vecs = np.linalg.eigh(mat)
    return (vecs * np.exp(1j * sign * vals)) @ vecs.conj().T


def _random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def _run_perturbation(cfg: ExperimentConfig, rng, cfg_hash: str):
    trials = _param_int(cfg, "trials")
    setups = _param_int(cfg, "setups", max(0, trials // 2))
    rows = _Rows(cfg.experiment, cfg_hash)
    for _ in range(trials):
        d = int(rng.integers(2, 9))
        h = _random_hermitian(rng, d, scale=rng.uniform(0.5, 3.0))
        v = _random_hermitian(rng, d)
        v = v * (rng.uniform(0.05, 2.0) / op_norm(v))
        s = op_norm(v)
        lhs = op_norm(_expm_i(h + v, +1) - _expm_i(h, +1))
        rows.bound("unitary_difference", (d, s), lhs=lhs, rhs=s + 0.5 * s * s)
    for _ in range(setups):
        ds = int(rng.integers(2, 4))
        dcat = int(rng.integers(2, 4))
        dg = int(rng.integers(2, 4))
        dims = (ds, dcat, dg)
        rho_s = _random_density(rng, ds)
        rho_cat = _random_density(rng, dcat)
        tau_g = DensityMatrix.maximally_mixed(dg)
        # Exact realiser: acts only on system+bath, so the catalyst block
        # factors out and the post-interaction reference is a true product.
        a = _random_hermitian(rng, ds * dg, scale=rng.uniform(0.5, 2.0))
        ideal = HermitianOp(_embed(a, dims, (0, 2)), factor_dims=dims)
        w = _expm_i(ideal.data, -1)
        joint0 = np.kron(np.kron(rho_s.data, rho_cat.data), tau_g.data)
        after = DensityMatrix(w @ joint0 @ w.conj().T, factor_dims=dims)
        s1_ref = reduce(after, (0,))
        strength = 10.0 ** rng.uniform(-3.0, math.log10(0.5))
        delta_op = _random_hermitian(rng, ds * dcat * dg)
        delta_op = delta_op * (strength / op_norm(delta_op))
        perturbed = HermitianOp(ideal.data + delta_op, factor_dims=dims)
        lhs = interaction_error(rho_s, rho_cat, tau_g, perturbed, s1_ref)
        rows.bound("interaction_error", (ds * dcat * dg, strength),
                   lhs=lhs, rhs=2.0 * strength + strength * strength)
    return rows.records


# --------------------------------------------------------------------------
# clock experiments


def _window(cfg: ExperimentConfig, d: int):
    t1_frac = _param_float(cfg, "t1_frac", 0.25)
    t2_frac = _param_float(cfg, "t2_frac", 0.75)
    tail_fraction = _param_float(cfg, "tail_fraction", 0.75)
    clock = QuasiIdealClock(d)
    t1 = t1_frac * clock.T0
    t2 = t2_frac * clock.T0
    potential = PotentialSpec.from_window(t1, t2, clock.T0, d, tail_fraction=tail_fraction)
    return clock, potential, t1, t2


def _run_clock_scaling(cfg: ExperimentConfig, rng, cfg_hash: str):
    d_list = _param_ints(cfg, "d_list", "16,32,64")
    n_times = _param_int(cfg, "n_times", 65)
    rows = _Rows(cfg.experiment, cfg_hash)
    eps_by_d = []
    for d in d_list:
        clock, potential, t1, t2 = _window(cfg, d)
        ts = admissible_times(t1, t2, clock.T0, n_times)
        dists = clock_disturbance(clock, potential, DEMO_PHASES, DEMO_WEIGHTS, ts)
        eps_cl = float(dists.max())
        eps_by_d.append(eps_cl)
        # Window-maximised measured inputs feed the analytic disturbance bound.
        eps_lr = max(tail_leakage(clock, potential.gamma_psi, float(t)) for t in ts)
        eps_c = 0.0
        eps_nu = 0.0
        for omega in sorted(set(DEMO_PHASES)):
            for t in ts:
                c, nu = clock_error_norms(clock, potential, omega, float(t))
                eps_c = max(eps_c, c)
                eps_nu = max(eps_nu, nu)
        analytic = disturbance_bound(potential.tilde_eps_v, eps_lr, eps_c, eps_nu)
        rows.info("clock_error", (d, None), eps_cl)
        rows.info("tail_leakage_max", (d, None), eps_lr)
        rows.info("free_residual_max", (d, None), eps_c)
        rows.info("interaction_residual_max", (d, None), eps_nu)
        for i, t in enumerate(ts):
            rows.bound("disturbance_dominance", (d, float(t)),
                       lhs=float(dists[i]), rhs=analytic)
    for prev, (d, eps) in zip(eps_by_d, list(zip(d_list, eps_by_d))[1:]):
        rows.bound("strict_decrease", (d, None), lhs=eps, rhs=prev)
    if len(eps_by_d) >= 2:
        rows.bound("halving_ratio", (int(d_list[-1]), None),
                   lhs=eps_by_d[-1] / eps_by_d[-2], rhs=0.5)
    return rows.records


def _demo_simulation(cfg: ExperimentConfig, d: int, commuting: bool):
    tail_fraction = _param_float(cfg, "tail_fraction", 0.75)
    t1_frac = _param_float(cfg, "t1_frac", 0.25)
    t2_frac = _param_float(cfg, "t2_frac", 0.75)
    n_times = _param_int(cfg, "n_times", 65)
    setup = reference_embezzlement_setup(
        d,
        t1=t1_frac * 2.0 * math.pi,
        t2=t2_frac * 2.0 * math.pi,
        tail_fraction=tail_fraction,
        commuting=commuting,
    )
    h = build_hamiltonian(setup.spec)
    ts = admissible_times(setup.spec.t1, setup.spec.t2, setup.spec.clock.T0, n_times)
    traj = simulate(setup.parts, h, ts)
    return setup, ts, traj


def _measured_clock_error(setup, ts, traj) -> float:
    h_cl = setup.spec.clock.hamiltonian
    rho_cl0 = setup.parts[2]
    worst = 0.0
    for i, t in enumerate(ts):
        worst = max(worst, trace_distance(traj.clock[i], evolve(rho_cl0, h_cl, float(t))))
    return worst


def _run_thm2_bound(cfg: ExperimentConfig, rng, cfg_hash: str):
    d = _param_int(cfg, "d_clock", 32)
    rows = _Rows(cfg.experiment, cfg_hash)
    setup, ts, traj = _demo_simulation(cfg, d, commuting=False)
    emb = measure_embezzlement(traj, setup.spec, setup.parts[1], setup.parts[2])
    eps_cl = _measured_clock_error(setup, ts, traj)
    ds, dcat = setup.spec.h_sys.dim, setup.spec.h_cat.dim
    rhs = (2.0 + 5.0 * (ds * dcat) ** 0.25) * math.sqrt(eps_cl)
    rows.info("clock_error", (d, None), eps_cl)
    for i, t in enumerate(ts):
        rows.bound("embezzlement_bound", (d, float(t)), lhs=float(emb[i]), rhs=rhs)
    return rows.records


def _run_thm1_chain(cfg: ExperimentConfig, rng, cfg_hash: str):
    d_list = _param_ints(cfg, "d_list", "16,32,64")
    rows = _Rows(cfg.experiment, cfg_hash)
    for d in d_list:
        setup, ts, traj = _demo_simulation(cfg, int(d), commuting=False)
        emb = measure_embezzlement(traj, setup.spec, setup.parts[1], setup.parts[2])
        max_emb = float(emb.max())
        d_cat_total = setup.spec.h_cat.dim * int(d)  # ancilla and clock both return
        value, in_domain = resolution_bound(max_emb, setup.spec.h_sys.dim, d_cat_total)
        d_total = setup.spec.h_sys.dim * d_cat_total
        threshold = d_total ** (-10.0)
        rows.info("max_embezzlement", (d, None), max_emb)
        rows.info("resolution_value", (d, None), value)
        rows.info("in_domain", (d, None), 1.0 if in_domain else 0.0)
        rows.info("domain_threshold", (d, None), threshold)
        if in_domain:
            for i, t in enumerate(ts):
                sigma = smoothed_target(traj.system[i], value)
                verdict = verify_catalytic_reachability(setup.parts[0], sigma)
                rows.bound("sigma_distance", (d, float(t)),
                           lhs=trace_distance(sigma, traj.system[i]), rhs=value)
                rows.bound("reachability", (d, float(t)),
                           lhs=0.0 if verdict != NOT_TRUMPED else 1.0, rhs=0.0)
        else:
            # Documented outcome at desk scale: the validity constraint needs
            # an embezzlement error below d_total**-10, far beyond what these
            # clock sizes reach.  Report the gap and still exercise the
            # target-construction pipeline with a clamped resolution.
            rows.info("domain_gap_ratio", (d, None), max_emb / threshold)
            sigma = smoothed_target(traj.system[-1], min(value, 1.0))
            verdict = verify_catalytic_reachability(setup.parts[0], sigma)
            rows.info("fallback_sigma_distance", (d, float(ts[-1])),
                      trace_distance(sigma, traj.system[-1]))
            rows.info("fallback_reachability", (d, float(ts[-1])), _VERDICT_CODE[verdict])
    return rows.records


def _run_thm3_bound(cfg: ExperimentConfig, rng, cfg_hash: str):
    d = _param_int(cfg, "d_clock", 32)
    grid_n = _param_int(cfg, "grid_n", 17)
    rows = _Rows(cfg.experiment, cfg_hash)
    setup, ts, traj = _demo_simulation(cfg, d, commuting=True)
    spec = setup.spec
    h_cl = spec.clock.hamiltonian
    v_cl = spec.clock_interaction()
    rho_cl0 = setup.parts[2]
    delta_max = 0.0
    for t in ts:
        th = int(theta_step(float(t), spec.t1, spec.t2))
        delta_max = max(delta_max, max_overlap_defect(rho_cl0, h_cl, v_cl, th, float(t), n=grid_n))
    eps_sigma = interaction_error(
        setup.parts[0], setup.parts[1], setup.parts[3],
        spec.interaction_generator(), setup.target_system,
    )
    rows.info("overlap_defect_max", (d, None), delta_max)
    rows.info("interaction_error", (d, None), eps_sigma)
    rows.info("grid_spacing", (d, None), 2.0 * math.pi / (grid_n - 1))
    product_reports, target_reports = window_bound_reports(
        spec, traj, setup.parts, delta_max, eps_sigma
    )
    for rep in product_reports:
        rows.bound(rep.label, (d, rep.time), lhs=rep.lhs, rhs=rep.rhs)
    for rep in target_reports:
        rows.bound(rep.label, (d, rep.time), lhs=rep.lhs, rhs=rep.rhs)
    return rows.records


def _run_nogo(cfg: ExperimentConfig, rng, cfg_hash: str):
    instances = _param_int(cfg, "instances", 10)
    d = _param_int(cfg, "d_clock", 8)
    t_step = _param_float(cfg, "t_step", 1.0)
    n_times = _param_int(cfg, "n_times", 9)
    phases = _param_floats(cfg, "phases", "0.0,%r" % (math.pi / 2.0))
    threshold = _param_float(cfg, "threshold", 1e-6)
    times = np.linspace(0.0, 2.0 * t_step, n_times)
    rows = _Rows(cfg.experiment, cfg_hash)
    for k in range(instances):
        blocks = [_random_hermitian(rng, d) for _ in phases]
        rho_cl = _random_density(rng, d)
        witness = nogo_witness(blocks, phases, rho_cl, t_step, times)
        rows.bound("witness_positive", (k, d), lhs=threshold, rhs=witness)
    return rows.records


def _run_momentum_delta(cfg: ExperimentConfig, rng, cfg_hash: str):
    times = _param_floats(cfg, "times", "0.5,3.5")
    thetas = _param_ints(cfg, "thetas", "0,1")
    grid_n = _param_int(cfg, "grid_n", 17)
    tol = _param_float(cfg, "tolerance", 1e-8)
    if len(times) != len(thetas):
        raise ConfigError("parameters 'times' and 'thetas' must have equal length")
    spec = default_momentum_spec()
    grid = np.linspace(-math.pi, math.pi, grid_n)
    rows = _Rows(cfg.experiment, cfg_hash)
    for t, theta in zip(times, thetas):
        worst = 0.0
        for z in grid:
            for y in grid:
                delta = momentum_control_overlap(spec, float(t), float(z), float(y), int(theta))
                worst = max(worst, abs(delta - 1.0))
        rows.bound("idealised_overlap", (float(t),), lhs=worst, rhs=tol)
    return rows.records


def _run_embezzle_formula(cfg: ExperimentConfig, rng, cfg_hash: str):
    d_sys = _param_int(cfg, "d_sys", 2)
    d_cats = _param_ints(cfg, "d_cat", "4")
    rows = _Rows(cfg.experiment, cfg_hash)
    values = []
    for d_cat in d_cats:
        val = embezzle_distance(d_sys, int(d_cat))
        values.append(val)
        rows.info("distance_budget", (d_sys, int(d_cat)), val)
    for (d_cat, val), prev in zip(list(zip(d_cats, values))[1:], values):
        rows.bound("monotone_decreasing", (d_sys, int(d_cat)), lhs=val, rhs=prev)
    return rows.records


_EXPERIMENTS = {
    "entropy_bounds": _run_entropy_bounds,
    "perturbation": _run_perturbation,
    "clock_scaling": _run_clock_scaling,
    "thm1_chain": _run_thm1_chain,
    "thm2_bound": _run_thm2_bound,
    "thm3_bound": _run_thm3_bound,
    "nogo": _run_nogo,
    "momentum_delta": _run_momentum_delta,
    "embezzle_formula": _run_embezzle_formula,
}


def _execute(cfg: ExperimentConfig, stream_index: int):
    if cfg.experiment not in _EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    rng = np.random.Generator(np.random.Philox(key=cfg.seed).jumped(stream_index))
    return _EXPERIMENTS[cfg.experiment](cfg, rng, config_hash(cfg))


def run(cfg: ExperimentConfig):
    """Run one experiment and return its records (stream index 0)."""
    return _execute(cfg, 0)


def sweep(cfg: ExperimentConfig, axis: str, values, threads: int = 1):
    """Run the experiment once per axis value and merge the records.

    Point ``i`` runs on the generator stream jumped ``i`` blocks ahead, so the
    merged output is identical whether points run serially or in parallel.
    Records are merged sorted by (axis value, row index).
    """
    if axis not in cfg.params:
        raise ConfigError(f"sweep axis {axis!r} not found in config parameters")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")

    def point(i):
        params = dict(cfg.params)
        params[axis] = ",".join(str(v) for v in [values[i]])
        sub = ExperimentConfig(cfg.experiment, params, cfg.output, cfg.seed)
        return _execute(sub, i)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(point, range(len(values))))
    else:
        chunks = [point(i) for i in range(len(values))]
    order = sorted(range(len(values)), key=lambda i: (float(values[i]), i))
    merged = []
    for i in order:
        merged.extend(chunks[i])
    return merged


def summarize(records):
    """(passed, total) over the bound rows."""
    bound = [r for r in records if r.kind == "bound"]
    return sum(1 for r in bound if r.passed), len(bound)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="thermoclock",
        description="Clock-driven thermodynamic protocol experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("config", help="path to a key=value config file")
        p.add_argument("--out", help="output CSV path (overrides the config)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--threads", type=int, help="worker threads for sweeps")
        if name == "sweep":
            p.add_argument("--axis", required=True, help="parameter name to sweep")
            p.add_argument("--values", required=True,
                           help="comma-separated values for the axis")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = ExperimentConfig(cfg.experiment, cfg.params, cfg.output, args.seed)
        threads = args.threads
        if threads is None:
            threads = int(os.environ.get("THERMOCLOCK_THREADS", "1"))
        if args.command == "run":
            records = run(cfg)
        else:
            values = [float(s) for s in args.values.split(",") if s.strip()]
            int_values = [int(v) if float(v).is_integer() else v for v in values]
            records = sweep(cfg, args.axis, int_values, threads=threads)
        out = args.out or cfg.output or f"{cfg.experiment}.csv"
        write_csv(out, cfg.experiment, records)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    k, n = summarize(records)
    print(f"PASS {k}/{n}")
    return 0 if k == n else 1


if __name__ == "__main__":
    sys.exit(main())
