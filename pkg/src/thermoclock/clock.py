"""Finite-dimensional quasi-ideal clocks and their control error budget.

A clock of dimension d is a truncated oscillator ``H_Cl = sum_n w n |n><n|``
with angular frequency ``w = 2 pi / T0``; its canonical pointer states are the
discrete Fourier transform of the energy basis, ``|theta_k> = d**-0.5 *
sum_n exp(-2 pi i n k / d) |n>``, chosen so that free evolution shifts the
pointer forward: ``exp(-i t H_Cl)|theta_k> = |theta_(k + t d/T0)>`` whenever
``t d / T0`` is an integer.  The clock is prepared in a discrete Gaussian
wavepacket over pointer states; a smooth bump potential, diagonal in the
pointer basis, fires the control phase while the packet crosses its support.

This module measures (not merely estimates) the residuals of the two
rigid-translation predictions for the free and interacting evolutions, and
evaluates the closed-form pieces of the disturbance budget: the Gaussian tail
mass leaking past the potential window, the bump normalisation defect, and
the combined bound.  It also computes the pairwise overlap of conditionally
evolved clock states -- the quantity that controls how well the clock hides
which control phase was applied -- both for the finite clock and for the
idealised momentum clock on the real line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .quantum_state import DensityMatrix, HermitianOp

__all__ = [
    "QuasiIdealClock",
    "PotentialSpec",
    "MomentumClockSpec",
    "potential_operator",
    "clock_error_norms",
    "tail_leakage",
    "disturbance_bound",
    "control_overlap",
    "control_overlap_grid",
    "max_overlap_defect",
    "interaction_generator",
    "clock_disturbance",
    "free_clock_state",
    "default_momentum_spec",
    "momentum_control_overlap",
]

_TWO_PI = 2.0 * math.pi


def _wrap_pi(x):
    """Wrap angles into [-pi, pi)."""
    return (np.asarray(x, dtype=float) + math.pi) % _TWO_PI - math.pi


# ---------------------------------------------------------------------------
# the unit bump and its cumulative table
# ---------------------------------------------------------------------------

def _mollifier(u):
    """exp(-1/(1-u^2)) on (-1, 1), zero outside; smooth everywhere."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


_MOLL_PANELS = 1 << 16
_moll_cache = None


def _moll_table():
    """Dense cumulative integral of the unit mollifier on [-1, 1].

    Composite 4-point Gauss-Legendre per panel; the cumulative grid is fine
    enough that linear interpolation of the primitive is accurate to ~5e-11.
    """
    global _moll_cache
    if _moll_cache is None:
        edges = np.linspace(-1.0, 1.0, _MOLL_PANELS + 1)
        nodes, weights = np.polynomial.legendre.leggauss(4)
        half = 0.5 * (edges[1] - edges[0])
        mids = 0.5 * (edges[:-1] + edges[1:])
        pts = mids[:, None] + half * nodes[None, :]
        panel = (_mollifier(pts) * weights[None, :]).sum(axis=1) * half
        cum = np.concatenate(([0.0], np.cumsum(panel)))
        _moll_cache = (edges, cum, float(cum[-1]))
    return _moll_cache


def _moll_cdf(u):
    """Normalised primitive of the unit mollifier, clamped to [0, 1]."""
    edges, cum, total = _moll_table()
    return np.interp(np.clip(u, -1.0, 1.0), edges, cum) / total


def _moll_norm() -> float:
    return _moll_table()[2]


# ---------------------------------------------------------------------------
# potential window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PotentialSpec:
    """A smooth 2 pi periodic unit-integral bump matched to a firing window.

    The bump is the mollifier scaled to half-support ``width`` and centred at
    ``x0`` (its unique maximum over a period).  ``x_vr`` is the half-window
    within which the bump must integrate to ``1 - tilde_eps_v``; with
    ``width = x_vr`` the defect ``tilde_eps_v`` is exactly zero.  ``gamma_psi``
    is the fraction of the window budget reserved for the wavepacket tails,
    snapped onto the admissible grid {(m-2)/d} (``gamma_snapped`` records
    whether snapping moved it).
    """

    x0: float
    x_vr: float
    gamma_psi: float
    d: int
    T0: float
    width: float
    gamma_snapped: bool
    tilde_eps_v: float

    @classmethod
    def from_window(cls, t1: float, t2: float, T0: float, d: int,
                    tail_fraction: float = 0.75) -> "PotentialSpec":
        """Match a bump to the firing window (t1, t2) of a period-T0 clock.

        The window converts to angles as x0 = (t1+t2)/2 * 2 pi/T0 and
        x_vr + pi gamma_psi = (t2-t1)/2 * 2 pi/T0; ``tail_fraction`` fixes how
        much of that angle budget goes to gamma_psi before snapping.
        """
        if not (0.0 <= t1 < t2 <= T0):
            raise ValueError(f"need 0 <= t1 < t2 <= T0, got t1={t1!r}, t2={t2!r}, T0={T0!r}")
        if not (0.0 < tail_fraction < 1.0):
            raise ValueError(f"tail_fraction must lie in (0, 1), got {tail_fraction!r}")
        half = 0.5 * (t2 - t1) * _TWO_PI / T0
        gamma_raw = tail_fraction * half / math.pi
        lo = 2 if d % 2 == 0 else 1
        grid = [m / d for m in range(lo, d + 1, 2)]
        feasible = [g for g in grid if g <= gamma_raw]
        gamma = max(feasible) if feasible else grid[0]
        snapped = abs(gamma - gamma_raw) > 1e-15
        x_vr = half - math.pi * gamma
        if not (0.0 < x_vr <= math.pi):
            raise ValueError(
                f"window too small for the admissible tail grid: x_vr={x_vr!r} not in (0, pi]"
            )
        x0 = 0.5 * (t1 + t2) * _TWO_PI / T0
        width = x_vr
        # support sits exactly inside the half-window, so the defect vanishes
        tilde = max(0.0, 1.0 - float(_moll_cdf(1.0) - _moll_cdf(-1.0)))
        return cls(x0=x0, x_vr=x_vr, gamma_psi=gamma, d=int(d), T0=float(T0),
                   width=width, gamma_snapped=snapped, tilde_eps_v=tilde)

    # -- bump profile in angle coordinates ----------------------------------

    def v0(self, x):
        """Bump value at angle x (2 pi periodic, unit integral per period)."""
        u = _wrap_pi(np.asarray(x, dtype=float) - self.x0) / self.width
        return _mollifier(u) / (self.width * _moll_norm())

    def v0_primitive(self, x):
        """Period-counting primitive F(x) = integral of v0 from x0 - pi to x."""
        x = np.asarray(x, dtype=float)
        base = self.x0 - math.pi
        n = np.floor((x - base) / _TWO_PI)
        rel = (x - base) - _TWO_PI * n - math.pi  # in [-pi, pi), relative to x0
        return n + _moll_cdf(rel / self.width)

    def v0_integral(self, a, b):
        return self.v0_primitive(b) - self.v0_primitive(a)

    # -- label coordinates (x in units of pointer index) --------------------

    def vd(self, x):
        """Potential on pointer labels: vd(x) = (2 pi / d) v0(2 pi x / d)."""
        x = np.asarray(x, dtype=float)
        return (_TWO_PI / self.d) * self.v0(_TWO_PI * x / self.d)

    def vd_integral(self, a, b):
        return self.v0_integral(_TWO_PI * np.asarray(a) / self.d,
                                _TWO_PI * np.asarray(b) / self.d)


# ---------------------------------------------------------------------------
# the clock itself
# ---------------------------------------------------------------------------

class QuasiIdealClock:
    """Truncated-oscillator clock with a Gaussian pointer wavepacket.

    Parameters: dimension d >= 4; packet width sigma in (0, d) (default
    sqrt(d)); mean energy n0 in (0, d-1) (default d/2); packet centre k0
    (default 0); period T0 > 0 (default 2 pi, i.e. unit energy spacing).
    """

    def __init__(self, d: int, sigma: float | None = None, n0: float | None = None,
                 k0: float = 0.0, T0: float = _TWO_PI):
        d = int(d)
        if d < 4:
            raise ValueError(f"clock dimension must be >= 4, got {d}")
        if not T0 > 0.0:
            raise ValueError(f"T0 must be positive, got {T0!r}")
        sigma = math.sqrt(d) if sigma is None else float(sigma)
        if not (0.0 < sigma < d):
            raise ValueError(f"sigma must lie in (0, d), got {sigma!r}")
        n0 = d / 2.0 if n0 is None else float(n0)
        if not (0.0 < n0 < d - 1):
            raise ValueError(f"n0 must lie in (0, d-1), got {n0!r}")
        self.d = d
        self.sigma = sigma
        self.n0 = n0
        self.k0 = float(k0)
        self.T0 = float(T0)
        self.omega = _TWO_PI / self.T0
        self.energies = self.omega * np.arange(d)
        self._theta = None

    # -- bases ---------------------------------------------------------------

    @property
    def hamiltonian(self) -> HermitianOp:
        return HermitianOp(np.diag(self.energies.astype(complex)), (self.d,))

    def theta_basis(self) -> np.ndarray:
        """Unitary whose k-th column is |theta_k> in the energy basis."""
        if self._theta is None:
            n = np.arange(self.d)
            f = np.exp(-2j * math.pi * np.outer(n, n) / self.d) / math.sqrt(self.d)
            f.flags.writeable = False
            self._theta = f
        return self._theta

    # -- the wavepacket ------------------------------------------------------

    def state_labels(self, k0: float | None = None) -> np.ndarray:
        """The d integer labels closest to k0: the window (k0-d/2, k0+d/2]."""
        k0 = self.k0 if k0 is None else float(k0)
        lo = math.floor(k0 - self.d / 2.0) + 1
        return np.arange(lo, lo + self.d)

    def gaussian_normalization(self, k0: float | None = None) -> float:
        """A(sigma; k0) = (sum_k exp(-2 pi (k-k0)^2/sigma^2))**-0.5."""
        k0 = self.k0 if k0 is None else float(k0)
        ks = self.state_labels(k0)
        s = np.exp(-_TWO_PI * (ks - k0) ** 2 / self.sigma**2).sum()
        return float(1.0 / math.sqrt(s))

    def packet_amplitudes(self, k0: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(labels, normalised amplitudes) of the packet centred at k0."""
        k0 = self.k0 if k0 is None else float(k0)
        ks = self.state_labels(k0)
        a = self.gaussian_normalization(k0)
        amps = a * np.exp(-math.pi * (ks - k0) ** 2 / self.sigma**2) \
                 * np.exp(2j * math.pi * self.n0 * (ks - k0) / self.d)
        return ks, amps

    def quasi_ideal_vector(self, k0: float | None = None) -> np.ndarray:
        """The packet as a normalised vector in the energy basis."""
        ks, amps = self.packet_amplitudes(k0)
        f = self.theta_basis()
        return f[:, ks % self.d] @ amps

    def quasi_ideal_state(self, k0: float | None = None) -> DensityMatrix:
        return DensityMatrix.pure(self.quasi_ideal_vector(k0), (self.d,))


# ---------------------------------------------------------------------------
# potential operator and measured residuals
# ---------------------------------------------------------------------------

def potential_operator(clock: QuasiIdealClock, spec: PotentialSpec) -> HermitianOp:
    """The pointer-diagonal bump operator (d/T0) sum_k vd(k) |theta_k><theta_k|
    expressed in the energy basis."""
    if spec.d != clock.d or spec.T0 != clock.T0:
        raise ValueError("potential spec and clock disagree on (d, T0)")
    vals = (clock.d / clock.T0) * spec.vd(np.arange(clock.d))
    f = clock.theta_basis()
    return HermitianOp((f * vals) @ f.conj().T, (clock.d,))


def interaction_generator(clock: QuasiIdealClock, spec: PotentialSpec,
                          omega: float) -> HermitianOp:
    """H_Cl + omega * V_d: the clock generator conditioned on control phase
    omega."""
    v = potential_operator(clock, spec).data
    return HermitianOp(np.diag(clock.energies.astype(complex)) + omega * v, (clock.d,))


def clock_error_norms(clock: QuasiIdealClock, spec: PotentialSpec,
                      omega: float, t: float) -> tuple[float, float]:
    """Measured 2-norm residuals of the rigid-translation predictions.

    Free evolution should carry the packet at k0 to the packet at
    k0 + t d/T0; interacting evolution (generator H_Cl + omega V_d) should do
    the same while each pointer component k acquires the line-integral phase
    exp(-i omega * integral_{k - t d/T0}^{k} vd).  Returns
    (||free residual||_2, ||interacting residual||_2).
    """
    if not (-math.pi <= omega <= math.pi):
        raise ValueError(f"omega must lie in [-pi, pi], got {omega!r}")
    if not (0.0 <= t <= clock.T0):
        raise ValueError(f"t must lie in [0, T0], got {t!r}")
    v0 = clock.quasi_ideal_vector()
    shift = t * clock.d / clock.T0
    k0_t = clock.k0 + shift

    exact_free = v0 * np.exp(-1j * t * clock.energies)
    ks, amps = clock.packet_amplitudes(k0_t)
    f = clock.theta_basis()
    cols = f[:, ks % clock.d]
    pred_free = cols @ amps
    eps_c = float(np.linalg.norm(exact_free - pred_free))

    gen = interaction_generator(clock, spec, omega).data
    w, u = np.linalg.eigh(gen)
    exact_int = u @ (np.exp(-1j * t * w) * (u.conj().T @ v0))
    theta = omega * spec.vd_integral(ks - shift, ks)
    pred_int = cols @ (np.exp(-1j * theta) * amps)
    eps_nu = float(np.linalg.norm(exact_int - pred_int))
    return eps_c, eps_nu


def tail_leakage(clock: QuasiIdealClock, gamma_psi: float, t: float) -> float:
    """Closed-form Gaussian tail mass past the potential window.

    A^2 exp(-2 pi x^2/sigma^2) / (1 - exp(-4 pi |x|/sigma^2)) with
    x = gamma_psi d/2 - kbar(t), where kbar(t) in [0, 1] tracks the packet
    centre's offset from the nearest label window edge.
    """
    if not (0.0 < gamma_psi <= 1.0):
        raise ValueError(f"gamma_psi must lie in (0, 1], got {gamma_psi!r}")
    d, s = clock.d, clock.sigma
    kbar = (math.floor(-d / 2.0 + clock.k0 + t * d / clock.T0 + 1.0)
            + d / 2.0 - clock.k0 - t * d / clock.T0)
    x = gamma_psi * d / 2.0 - kbar
    if x == 0.0:
        return math.inf
    a2 = clock.gaussian_normalization() ** 2
    den = 1.0 - math.exp(-4.0 * math.pi * abs(x) / s**2)
    return a2 * math.exp(-_TWO_PI * x * x / s**2) / den


def disturbance_bound(tilde_eps_v: float, eps_lr: float,
                      eps_c: float, eps_nu: float) -> float:
    """Closed-form upper bound on the free-vs-interacting clock disturbance
    assembled from the four error components (all must be nonnegative)."""
    for name, val in (("tilde_eps_v", tilde_eps_v), ("eps_lr", eps_lr),
                      ("eps_c", eps_c), ("eps_nu", eps_nu)):
        if val < 0.0:
            raise ValueError(f"{name} must be nonnegative, got {val!r}")
    inner = (4.0 * (math.pi * tilde_eps_v) ** 2
             + 16.0 * eps_lr + 10.0 * eps_lr**2
             + 4.0 * (eps_c + eps_nu + eps_c**2 * eps_nu)
             + 6.0 * eps_c * eps_nu)
    return 2.0 * math.sqrt(inner)


# ---------------------------------------------------------------------------
# conditional overlaps
# ---------------------------------------------------------------------------

def _state_factor(rho: DensityMatrix) -> np.ndarray:
    """W with rho = W W^dag (columns weighted by sqrt eigenvalues)."""
    w, v = np.linalg.eigh(rho.data)
    w = np.clip(w, 0.0, None)
    keep = w > 1e-15
    return v[:, keep] * np.sqrt(w[keep])


def control_overlap(clock_state: DensityMatrix, h_cl: HermitianOp,
                    h_cl_int: HermitianOp, theta_t: int, t: float,
                    x: float, y: float) -> complex:
    """Overlap tr[Gamma(x,t)^dag Gamma(y,t) rho] of the clock steered by two
    control phases, with Gamma(z,t) = exp(i z theta_t) exp(-i t (H_Cl + z H_int)).

    x and y must lie in [-pi, pi]; theta_t is the step value (0 before the
    window, 1 after).  |result| <= 1, with equality at x = y.
    """
    for name, val in (("x", x), ("y", y)):
        if not (-math.pi <= val <= math.pi):
            raise ValueError(f"{name} must lie in [-pi, pi], got {val!r}")
    if theta_t not in (0, 1):
        raise ValueError(f"theta_t must be 0 or 1, got {theta_t!r}")
    wfac = _state_factor(clock_state)

    def steered(z: float) -> np.ndarray:
        w, u = np.linalg.eigh(h_cl.data + z * h_cl_int.data)
        m = u @ (np.exp(-1j * t * w)[:, None] * (u.conj().T @ wfac))
        return np.exp(1j * z * theta_t) * m

    mx, my = steered(x), steered(y)
    return complex(np.vdot(mx, my))


def control_overlap_grid(clock_state: DensityMatrix, h_cl: HermitianOp,
                         h_cl_int: HermitianOp, theta_t: int, t: float,
                         n: int = 17) -> tuple[np.ndarray, np.ndarray]:
    """Overlap matrix on an n x n uniform grid over [-pi, pi]^2 (one
    eigendecomposition per grid abscissa, shared across the row)."""
    if theta_t not in (0, 1):
        raise ValueError(f"theta_t must be 0 or 1, got {theta_t!r}")
    xs = np.linspace(-math.pi, math.pi, n)
    wfac = _state_factor(clock_state)
    steered = []
    for z in xs:
        w, u = np.linalg.eigh(h_cl.data + z * h_cl_int.data)
        m = u @ (np.exp(-1j * t * w)[:, None] * (u.conj().T @ wfac))
        steered.append(np.exp(1j * z * theta_t) * m)
    flat = np.array([m.ravel() for m in steered])
    gram = flat.conj() @ flat.T
    return xs, gram


def max_overlap_defect(clock_state: DensityMatrix, h_cl: HermitianOp,
                       h_cl_int: HermitianOp, theta_t: int, t: float,
                       n: int = 17) -> float:
    """Grid maximum of |1 - overlap^2|.

    A grid maximum is a lower bound on the continuum maximum; n = 17 matches
    the reporting convention used by the bound experiments.
    """
    _, gram = control_overlap_grid(clock_state, h_cl, h_cl_int, theta_t, t, n)
    return float(np.abs(1.0 - gram**2).max())


# ---------------------------------------------------------------------------
# reduced clock dynamics (the clock-only shortcut)
# ---------------------------------------------------------------------------

def free_clock_state(clock: QuasiIdealClock, t: float) -> DensityMatrix:
    """Exact freely evolved packet at time t."""
    v = clock.quasi_ideal_vector() * np.exp(-1j * t * clock.energies)
    return DensityMatrix.pure(v, (clock.d,))


def clock_disturbance(clock: QuasiIdealClock, spec: PotentialSpec,
                      omegas, weights, times) -> np.ndarray:
    """Measured ||rho_Cl^free(t) - rho_Cl(t)||_1 for a clock coupled to a
    control register dephased into sectors with phases ``omegas`` and
    populations ``weights``.

    When the joint generator is block diagonal over control sectors, the
    reduced clock state is exactly sum_n w_n U_n(t) |Psi><Psi| U_n(t)^dag with
    U_n generated by H_Cl + omega_n V_d; this evaluates that directly, which
    is how the d-dependence of the disturbance can be scanned without
    simulating the joint system.
    """
    omegas = np.asarray(omegas, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if omegas.shape != weights.shape:
        raise ValueError("omegas and weights must have matching shapes")
    if np.any(weights < -1e-12) or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be a probability vector over sectors")
    v0 = clock.quasi_ideal_vector()
    spec_eigs = []
    for om in omegas:
        w, u = np.linalg.eigh(interaction_generator(clock, spec, float(om)).data)
        spec_eigs.append((w, u, u.conj().T @ v0))
    out = np.empty(len(times))
    for i, t in enumerate(times):
        rho = np.zeros((clock.d, clock.d), dtype=complex)
        for wt, (w, u, coeff) in zip(weights, spec_eigs):
            if wt == 0.0:
                continue
            vt = u @ (np.exp(-1j * t * w) * coeff)
            rho += wt * np.outer(vt, vt.conj())
        free = clock.quasi_ideal_vector() * np.exp(-1j * t * clock.energies)
        diff = rho - np.outer(free, free.conj())
        out[i] = float(np.abs(np.linalg.eigvalsh(diff)).sum())
    return out


# ---------------------------------------------------------------------------
# idealised momentum clock
# ---------------------------------------------------------------------------

class MomentumClockSpec:
    """Idealised clock on the line: wavepacket density |psi|^2 supported on
    [psi_l, psi_r] and a unit-integral trigger profile g on [g_l, g_r].

    Both profiles are validated by quadrature (normalisation within 1e-10).
    """

    def __init__(self, psi, psi_support, g, g_support, g_primitive=None):
        self.psi = psi
        self.psi_support = (float(psi_support[0]), float(psi_support[1]))
        self.g = g
        self.g_support = (float(g_support[0]), float(g_support[1]))
        if not (self.psi_support[0] < self.psi_support[1]
                and self.g_support[0] < self.g_support[1]):
            raise ValueError("supports must be nonempty intervals")
        norm, _ = quad(lambda x: abs(self.psi(x)) ** 2, *self.psi_support, limit=200)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"|psi|^2 integrates to {norm!r}, not 1 within 1e-10")
        gint, _ = quad(self.g, *self.g_support, limit=200)
        if abs(gint - 1.0) > 1e-10:
            raise ValueError(f"g integrates to {gint!r}, not 1 within 1e-10")
        self._g_primitive = g_primitive  # callable, or None for a lazy table
        self._g_table = None

    def g_cdf(self, x):
        """Primitive of g, clamped to [0, 1] outside its support."""
        if self._g_primitive is not None:
            return np.clip(self._g_primitive(x), 0.0, 1.0)
        if self._g_table is None:
            a, b = self.g_support
            edges = np.linspace(a, b, (1 << 14) + 1)
            nodes, wts = np.polynomial.legendre.leggauss(6)
            half = 0.5 * (edges[1] - edges[0])
            mids = 0.5 * (edges[:-1] + edges[1:])
            pts = (mids[:, None] + half * nodes[None, :]).ravel()
            vals = np.array([self.g(p) for p in pts]).reshape(-1, len(nodes))
            cum = np.concatenate(([0.0], np.cumsum((vals * wts).sum(axis=1) * half)))
            self._g_table = (edges, cum / cum[-1])
        edges, cum = self._g_table
        return np.interp(np.clip(x, edges[0], edges[-1]), edges, cum)


def default_momentum_spec(psi_support=(0.0, 1.0), g_support=(2.0, 3.0)) -> MomentumClockSpec:
    """Mollifier-shaped packet and trigger on the given intervals."""
    pa, pb = float(psi_support[0]), float(psi_support[1])
    ga, gb = float(g_support[0]), float(g_support[1])
    pc, pw = 0.5 * (pa + pb), 0.5 * (pb - pa)
    gc, gw = 0.5 * (ga + gb), 0.5 * (gb - ga)
    norm = _moll_norm()

    def psi(x):
        return math.sqrt(float(_mollifier((x - pc) / pw)) / (pw * norm))

    def g(x):
        return float(_mollifier((x - gc) / gw)) / (gw * norm)

    def g_prim(x):
        return _moll_cdf((np.asarray(x, dtype=float) - gc) / gw)

    return MomentumClockSpec(psi, (pa, pb), g, (ga, gb), g_primitive=g_prim)


def momentum_control_overlap(spec: MomentumClockSpec, t: float,
                             z: float, y: float, theta_t: int) -> complex:
    """Conditional overlap of the momentum clock:
    exp(-i (z-y) theta_t) * integral |psi(x)|^2 exp(-i (y-z) G(x,t)) dx with
    G(x,t) the mass of g crossed between x and x+t.  Equals 1 exactly when
    the trigger is entirely ahead (theta_t = 0) or entirely behind
    (theta_t = 1), and whenever z = y.
    """
    if theta_t not in (0, 1):
        raise ValueError(f"theta_t must be 0 or 1, got {theta_t!r}")
    a, b = spec.psi_support
    phase = y - z

    def dens(x):
        return abs(spec.psi(x)) ** 2

    def cross(x):
        return float(spec.g_cdf(x + t) - spec.g_cdf(x))

    re, _ = quad(lambda x: dens(x) * math.cos(phase * cross(x)), a, b,
                 epsabs=1e-12, limit=200)
    im, _ = quad(lambda x: -dens(x) * math.sin(phase * cross(x)), a, b,
                 epsabs=1e-12, limit=200)
    return complex(np.exp(-1j * (z - y) * theta_t) * (re + 1j * im))
