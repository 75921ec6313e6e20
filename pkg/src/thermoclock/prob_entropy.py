"""Entropic order on probability vectors.

Everything in this module is classical: Renyi/Tsallis entropy families with
signed prefactors, Hellinger-type divergences, majorization and its catalytic
refinement (Klimesh's trumping criterion), smoothing toward the uniform
distribution, and a zoo of uniform-continuity bounds used to propagate
trace-distance errors into entropy differences.

Conventions used throughout:

* natural logarithms everywhere (entropies in nats);
* one-norms are unhalved, so ``||p - q||_1`` ranges over [0, 2];
* ``a/0 = +inf`` for a > 0, ``0 * ln 0 = 0`` and ``0**0 = 0``;
* entries below 1e-300 are clamped to exact zeros on construction, so the
  support of a vector is well defined before any exponent is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "ProbVec",
    "AlphaGrid",
    "BoundRegime",
    "DomainError",
    "BOUNDED_QUANTITY",
    "REGIME_KINDS",
    "TRUMPED",
    "NOT_TRUMPED",
    "INCONCLUSIVE",
    "default_alpha_grid",
    "renyi_entropy",
    "tsallis_entropy",
    "hellinger_divergence",
    "kl_divergence",
    "klimesh_f",
    "majorizes",
    "trumping_check",
    "smooth_toward_uniform",
    "continuity_bound",
    "sum_diff_bound",
    "one_norm_diff",
]

ZERO_CLAMP = 1e-300

# Verdict tokens returned by trumping_check.
TRUMPED = "trumped"
NOT_TRUMPED = "not_trumped"
INCONCLUSIVE = "inconclusive"

_ALPHA_TOKENS = {"one": 1.0, "infinity": math.inf, "neg_infinity": -math.inf}


class ProbVec:
    """A validated probability vector.

    Entries must be nonnegative, sum to 1 within 1e-12, and the dimension must
    be at least 2.  Entries smaller than ``ZERO_CLAMP`` are clamped to exact
    zeros so that support counting is unambiguous.  The stored array is
    read-only.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        v = np.array(entries, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError(f"need a 1-d vector with dim >= 2, got shape {v.shape}")
        if np.any(v < 0.0):
            raise ValueError(f"negative entry {v.min()!r} in probability vector")
        s = float(v.sum())
        if abs(s - 1.0) > 1e-12:
            raise ValueError(f"entries sum to {s!r}, not 1 within 1e-12")
        v[v < ZERO_CLAMP] = 0.0
        v.flags.writeable = False
        self.entries = v

    @property
    def dim(self) -> int:
        return self.entries.size

    def __repr__(self) -> str:  # pragma: no cover
        return f"ProbVec({self.entries.tolist()})"


def _vec(p) -> np.ndarray:
    """Coerce ``p`` (ProbVec or array-like) to a validated entry array."""
    if isinstance(p, ProbVec):
        return p.entries
    return ProbVec(p).entries


def _coerce_alpha(alpha) -> float:
    if isinstance(alpha, str):
        try:
            return _ALPHA_TOKENS[alpha]
        except KeyError:
            raise ValueError(
                f"unknown alpha token {alpha!r}; expected one of {sorted(_ALPHA_TOKENS)}"
            ) from None
    return float(alpha)


def one_norm_diff(p, q) -> float:
    """Unhalved one-norm distance ``||p - q||_1`` (range [0, 2])."""
    vp, vq = _vec(p), _vec(q)
    if vp.size != vq.size:
        raise ValueError(f"dimension mismatch: {vp.size} vs {vq.size}")
    return float(np.abs(vp - vq).sum())


# ---------------------------------------------------------------------------
# entropy families
# ---------------------------------------------------------------------------

def renyi_entropy(p, alpha) -> float:
    """Signed Renyi entropy ``sgn(a)/(1-a) * ln sum_k p_k**a``.

    ``alpha`` is a float or one of the tokens ``"one"``, ``"infinity"``,
    ``"neg_infinity"``.  The a = 0 and a = 1 points are evaluated by their
    closed-form limits (log of the support size, Shannon) rather than through
    the generic formula.  For a < 0 a zero entry makes the power sum diverge
    and the signed value is -inf.
    """
    a = _coerce_alpha(alpha)
    v = _vec(p)
    pos = v[v > 0.0]
    if a == 1.0:
        return float(-(pos * np.log(pos)).sum())
    if math.isinf(a):
        if a > 0:
            return float(-np.log(v.max()))
        mn = float(v.min())
        return -math.inf if mn == 0.0 else float(np.log(mn))
    if a == 0.0:
        return float(np.log(pos.size))
    if a < 0.0 and pos.size < v.size:
        # sum p_k**a = +inf, and the prefactor sgn(a)/(1-a) is negative
        return -math.inf
    log_sum = float(logsumexp(a * np.log(pos)))
    sgn = 1.0 if a > 0 else -1.0
    return sgn / (1.0 - a) * log_sum


def tsallis_entropy(p, alpha) -> float:
    """Tsallis entropy ``(1 - sum_k p_k**a) / (a - 1)`` for a > 0.

    a = 1 falls back to the Shannon limit; a = +inf returns the limiting
    value 0.  Nonpositive a is rejected.
    """
    a = _coerce_alpha(alpha)
    if not a > 0.0:
        raise ValueError(f"tsallis_entropy requires alpha > 0, got {a!r}")
    v = _vec(p)
    pos = v[v > 0.0]
    if a == 1.0:
        return float(-(pos * np.log(pos)).sum())
    if math.isinf(a):
        return 0.0
    s = float((pos**a).sum())
    return (1.0 - s) / (a - 1.0)


def hellinger_divergence(p, q, alpha) -> float:
    """Signed Hellinger-type divergence of order ``alpha``.

    ``sgn(a)/(a-1) * (sum_k p_k**a q_k**(1-a) - 1)`` with the 0/0 = 0
    convention; a = 1 is the Kullback-Leibler limit and a = 0 the mass of q
    outside the support of p.  Divergent cases (support mismatch punished by
    the exponent signs) return +inf.
    """
    a = _coerce_alpha(alpha)
    vp, vq = _vec(p), _vec(q)
    if vp.size != vq.size:
        raise ValueError(f"dimension mismatch: {vp.size} vs {vq.size}")
    if a == 1.0:
        mask = vp > 0.0
        if np.any(vq[mask] == 0.0):
            return math.inf
        return float((vp[mask] * np.log(vp[mask] / vq[mask])).sum())
    if a == 0.0:
        return float(1.0 - vq[vp > 0.0].sum())
    if math.isinf(a):
        return 0.0 if np.array_equal(vp, vq) else math.inf
    both = (vp > 0.0) & (vq > 0.0)
    p_only = (vp > 0.0) & (vq == 0.0)
    q_only = (vp == 0.0) & (vq > 0.0)
    if (a > 1.0 and bool(p_only.any())) or (a < 0.0 and bool(q_only.any())):
        return math.inf
    s = float((vp[both] ** a * vq[both] ** (1.0 - a)).sum())
    sgn = 1.0 if a > 0 else -1.0
    return sgn / (a - 1.0) * (s - 1.0)


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence in nats (the a -> 1 Hellinger limit)."""
    return hellinger_divergence(p, q, 1.0)


# ---------------------------------------------------------------------------
# majorization and trumping
# ---------------------------------------------------------------------------

def majorizes(p, q) -> bool:
    """True iff p majorizes q: every descending prefix sum of p dominates q's.

    A slack of 1e-12 absorbs roundoff on ties; dimensions must match.
    """
    vp, vq = _vec(p), _vec(q)
    if vp.size != vq.size:
        raise ValueError(f"dimension mismatch: {vp.size} vs {vq.size}")
    cp = np.cumsum(np.sort(vp)[::-1])
    cq = np.cumsum(np.sort(vq)[::-1])
    return bool(np.all(cp - cq >= -1e-12))


def klimesh_f(p, alpha) -> float:
    """Klimesh's monotone family f_a; p can be catalytically transformed into
    q exactly when f_a(p) > f_a(q) for every real a (p != q, no common zeros).

    Branches: ``ln sum p**a`` for a > 1 and a < 0, ``-ln sum p**a`` for
    0 < a < 1, ``sum p ln p`` at a = 1, ``-sum ln p_i`` at a = 0; for a <= 0 a
    zero entry sends the value to +inf.
    """
    v = _vec(p)
    a = float(alpha)
    pos = v[v > 0.0]
    if a > 1.0:
        return float(logsumexp(a * np.log(pos)))
    if a == 1.0:
        return float((pos * np.log(pos)).sum())
    if a > 0.0:
        return float(-logsumexp(a * np.log(pos)))
    if pos.size < v.size:
        return math.inf
    if a == 0.0:
        return float(-np.log(v).sum())
    return float(logsumexp(a * np.log(v)))


@dataclass(frozen=True)
class AlphaGrid:
    """Strictly increasing evaluation grid for order parameters, plus flags
    for the three limit checks (a -> 0+, a -> 1, a -> inf)."""

    values: tuple[float, ...]
    include_zero_limit: bool = True
    include_one_limit: bool = True
    include_inf_limit: bool = True

    def __post_init__(self):
        vals = tuple(float(a) for a in self.values)
        if len(vals) < 1:
            raise ValueError("alpha grid must be nonempty")
        if any(not math.isfinite(a) for a in vals):
            raise ValueError("grid values must be finite; limits are flags")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("grid values must be strictly increasing")
        object.__setattr__(self, "values", vals)


def default_alpha_grid(n: int = 400, lo: float = 1e-3, hi: float = 50.0) -> AlphaGrid:
    """Log-spaced default grid on [lo, hi] with all limit checks enabled."""
    return AlphaGrid(values=tuple(np.geomspace(lo, hi, n)))


# Relative margin below which a pointwise f_a comparison is treated as a tie.
_TRUMP_MARGIN = 1e-9


def trumping_check(p, q, grid: AlphaGrid | None = None) -> str:
    """Decide whether p can reach q with the help of an exact catalyst.

    Evaluates Klimesh's criterion on a finite grid.  The verdict is computed
    on the descending-sorted inputs (the question is permutation invariant)
    after dropping coordinates that vanish in both vectors:

    * ``"not_trumped"``  -- some f_a(p) - f_a(q) is negative beyond noise, or
      a limit check fails outright (support of p strictly larger than q's, or
      max(p) < max(q));
    * ``"trumped"``      -- every evaluated gap is positive with relative
      margin >= 1e-9 against max(1, |f_a(p)|, |f_a(q)|) and no limit check is
      marginal;
    * ``"inconclusive"`` -- everything else (ties within noise, equal maxima,
      margins too thin for a finite grid to certify strictness).

    If p has zero entries only a > 0 is examined (the target of a noisy
    transition is full rank; nonpositive orders are vacuous there).  Identical
    inputs (equal sorted spectra) are rejected with ValueError.
    """
    if grid is None:
        grid = default_alpha_grid()
    vp = np.sort(_vec(p))[::-1]
    vq = np.sort(_vec(q))[::-1]
    if vp.size != vq.size:
        raise ValueError(f"dimension mismatch: {vp.size} vs {vq.size}")
    while vp.size > 1 and vp[-1] == 0.0 and vq[-1] == 0.0:
        vp, vq = vp[:-1], vq[:-1]
    if np.array_equal(vp, vq):
        raise ValueError("p and q are identical up to permutation; no transition to decide")

    full_rank_p = bool(vp[-1] > 0.0)
    alphas = list(grid.values) if full_rank_p else [a for a in grid.values if a > 0.0]
    if grid.include_one_limit and 1.0 not in alphas:
        alphas.append(1.0)
    if grid.include_zero_limit and full_rank_p and 0.0 not in alphas:
        alphas.append(0.0)

    marginal = False

    # limit a -> inf: the gap grows like a * ln(max p / max q)
    if grid.include_inf_limit:
        lp, lq = math.log(vp[0]), math.log(vq[0])
        if lp < lq - 1e-12:
            return NOT_TRUMPED
        if abs(lp - lq) <= 1e-12:
            marginal = True  # equal maxima: strictness at large a not certifiable

    # limit a -> 0+: the gap tends to ln(rank q / rank p)
    if grid.include_zero_limit:
        rank_p = int(np.count_nonzero(vp))
        rank_q = int(np.count_nonzero(vq))
        if rank_p > rank_q:
            return NOT_TRUMPED
        if rank_p == rank_q and not full_rank_p:
            # equal deficient ranks: the a -> 0+ gap vanishes and a grid
            # restricted to a > 0 cannot certify strictness near zero
            marginal = marginal or False

    min_rel = math.inf
    for a in alphas:
        fp = klimesh_f(vp, a)
        fq = klimesh_f(vq, a)
        if math.isinf(fq) and not math.isinf(fp):
            diff = -math.inf  # q unreachable at this order
        elif math.isinf(fp) and not math.isinf(fq):
            diff = math.inf
        else:
            diff = fp - fq
        scale = max(1.0, abs(fp) if math.isfinite(fp) else 1.0,
                    abs(fq) if math.isfinite(fq) else 1.0)
        rel = diff / scale
        if rel < -_TRUMP_MARGIN:
            return NOT_TRUMPED
        min_rel = min(min_rel, rel)

    if marginal or min_rel < _TRUMP_MARGIN:
        return INCONCLUSIVE
    return TRUMPED


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------

def smooth_toward_uniform(q, eps: float) -> ProbVec:
    """Replace q by the uniform vector if it is already eps-close in one-norm,
    otherwise mix: ``(1 - eps) q + eps * uniform``.

    The returned vector is full rank for any eps in (0, 1], which is the whole
    point: it is a valid endpoint for the catalytic criterion.
    """
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must lie in (0, 1], got {eps!r}")
    v = _vec(q)
    u = np.full(v.size, 1.0 / v.size)
    if float(np.abs(v - u).sum()) < eps:
        return ProbVec(u)
    return ProbVec((1.0 - eps) * v + eps * u)


# ---------------------------------------------------------------------------
# continuity bounds
# ---------------------------------------------------------------------------

class DomainError(ValueError):
    """A continuity bound was evaluated outside its validity domain."""


REGIME_KINDS = (
    "tsallis_raw",
    "tsallis_low",
    "tsallis_high",
    "renyi_neg",
    "renyi_low",
    "renyi_high",
    "renyi_mid_half1",
    "renyi_mid_12",
    "lem_cont_half",
    "lem_cont_mid",
    "lem_cont_geq2",
    "s_infty",
)

# Which entropy difference each regime controls, for |H(p) - H(p')| with
# delta = ||p - p'||_1: "tsallis" -> Tsallis of the same order, "renyi" ->
# signed Renyi of the same order, "renyi_sup" -> the order-infinity Renyi gap.
BOUNDED_QUANTITY = {
    "tsallis_raw": "tsallis",
    "tsallis_low": "tsallis",
    "tsallis_high": "tsallis",
    "renyi_neg": "renyi",
    "renyi_low": "renyi",
    "renyi_high": "renyi",
    "renyi_mid_half1": "renyi",
    "renyi_mid_12": "renyi",
    "lem_cont_half": "tsallis",
    "lem_cont_mid": "tsallis",
    "lem_cont_geq2": "tsallis",
    "s_infty": "renyi_sup",
}

_E = math.e


@dataclass(frozen=True)
class BoundRegime:
    """One validity regime of the entropy-continuity machinery.

    ``p_min`` is required by the negative-order regime (the least entry among
    the two vectors being compared); ``prefactor`` optionally sharpens the
    low-order regime (1/sum p**a <= 1, default 1 is always sound).
    """

    kind: str
    p_min: float | None = None
    prefactor: float = 1.0

    def __post_init__(self):
        if self.kind not in REGIME_KINDS:
            raise ValueError(f"unknown regime kind {self.kind!r}")
        if self.kind == "renyi_neg":
            if self.p_min is None or not self.p_min > 0.0:
                raise ValueError("renyi_neg regime needs p_min > 0 (least entry of either vector)")
        if not (0.0 < self.prefactor <= 1.0):
            raise ValueError(f"prefactor must lie in (0, 1], got {self.prefactor!r}")

    # -- validity ----------------------------------------------------------

    def domain(self, d: int, alpha, delta: float) -> tuple[bool, str]:
        """Return (ok, reason); reason names the violated precondition."""
        a = _coerce_alpha(alpha)
        k = self.kind
        if not (isinstance(d, (int, np.integer)) and d >= 2):
            return False, f"d must be an integer >= 2, got {d!r}"
        if not (0.0 <= delta <= 2.0):
            return False, f"delta must lie in [0, 2], got {delta!r}"
        if k == "tsallis_raw":
            if not (a > 0.0 and a != 1.0):
                return False, f"requires alpha in (0,1) or (1,inf], got {a!r}"
        elif k == "tsallis_low":
            if not (0.0 < a <= 1.0):
                return False, f"requires alpha in (0, 1], got {a!r}"
            dmax = d * (1.0 / (2.0 * _E * d)) ** (1.0 / a)
            if delta > dmax:
                return False, f"requires delta <= d*(1/(2*e*d))**(1/alpha) = {dmax!r}, got {delta!r}"
        elif k == "tsallis_high":
            if not (a >= 1.0 and math.isfinite(a)):
                return False, f"requires finite alpha >= 1, got {a!r}"
            dmax = 1.0 / (2.0 * _E * math.ceil(a) * d**a)
            if delta > dmax:
                return False, f"requires delta <= 1/(2*e*ceil(alpha)*d**alpha) = {dmax!r}, got {delta!r}"
        elif k == "renyi_neg":
            if not (a <= -1.0):
                return False, f"requires alpha in [-inf, -1], got {a!r}"
        elif k == "renyi_low":
            if not (0.0 < a < 1.0):
                return False, f"requires alpha in (0, 1), got {a!r}"
        elif k == "renyi_high":
            if not (a > 1.0):
                return False, f"requires alpha in (1, inf], got {a!r}"
        elif k == "renyi_mid_half1":
            if not (0.5 <= a < 1.0):
                return False, f"requires alpha in [1/2, 1), got {a!r}"
            dmax = 1.0 / ((4.0 * _E) ** 2 * d)
            if delta > dmax:
                return False, f"requires delta <= 1/((4e)**2 d) = {dmax!r}, got {delta!r}"
        elif k == "renyi_mid_12":
            if not (1.0 <= a <= 2.0):
                return False, f"requires alpha in [1, 2], got {a!r}"
            dmax = d / (8.0 * _E) ** 2
            if delta > dmax:
                return False, f"requires delta <= d/(8e)**2 = {dmax!r}, got {delta!r}"
        elif k == "lem_cont_half":
            if not (0.0 < a <= 0.5):
                return False, f"requires alpha in (0, 1/2], got {a!r}"
        elif k == "lem_cont_mid":
            if not (0.5 <= a <= 2.0):
                return False, f"requires alpha in [1/2, 2], got {a!r}"
            dmax = 1.0 / (32.0 * d * d)
            if delta > dmax:
                return False, f"requires delta <= 1/(32 d**2) = {dmax!r}, got {delta!r}"
        elif k == "lem_cont_geq2":
            if not (a >= 2.0 and math.isfinite(a)):
                return False, f"requires finite alpha >= 2, got {a!r}"
        # s_infty: no constraint beyond d and delta
        return True, ""

    def check(self, d: int, alpha, delta: float) -> None:
        ok, reason = self.domain(d, alpha, delta)
        if not ok:
            raise DomainError(f"{self.kind}: {reason}")


def continuity_bound(regime: BoundRegime, d: int, alpha, delta: float) -> float:
    """Evaluate the uniform-continuity bound of ``regime`` at one-norm
    distance ``delta`` between two d-dimensional probability vectors.

    Raises DomainError outside the regime's validity domain.  All bounds
    return exactly 0.0 at delta = 0.
    """
    regime.check(d, alpha, delta)
    a = _coerce_alpha(alpha)
    k = regime.kind
    if delta == 0.0:
        return 0.0
    if k == "tsallis_raw":
        if math.isinf(a):
            return 2.0 * delta
        c = math.ceil(a)
        return (2.0 * c / abs(a - 1.0)) * d ** (1.0 - a / c) * delta ** (a / c)
    if k == "tsallis_low":
        da = delta**a
        return 4.0 * d ** (1.0 - a) * ((3.0 / (2.0 * a) + 1.0) * da * math.log(d) - da * math.log(delta))
    if k == "tsallis_high":
        return 8.0 * (delta * math.log(d**1.5 / 4.0) - delta * math.log(delta))
    if k == "renyi_neg":
        coeff = 1.0 if math.isinf(a) else abs(a) / (1.0 - a)
        return coeff * math.log(delta / regime.p_min + 1.0)
    if k == "renyi_low":
        return regime.prefactor * d ** (1.0 - a) * delta**a / (1.0 - a)
    if k == "renyi_high":
        coeff = 1.0 if math.isinf(a) else a / (a - 1.0)
        return coeff * math.log(1.0 + delta * d)
    if k == "renyi_mid_half1":
        r = math.sqrt(delta)
        return 8.0 * d * (6.0 * math.log(d) - math.log(2.0)) * r - 4.0 * d * r * math.log(r)
    if k == "renyi_mid_12":
        r = math.sqrt(delta)
        return 2.0 * math.sqrt(d) * (
            delta * math.log(d) + 4.0 * d * r * math.log(d / 64.0) - 8.0 * d * r * math.log(r)
        )
    if k == "lem_cont_half":
        return 6.0 * d * (delta / d) ** a
    if k == "lem_cont_mid":
        r = math.sqrt(delta / d)
        return -32.0 * d * r * math.log(r)
    if k == "lem_cont_geq2":
        return 6.0 * math.sqrt(d * delta)
    # s_infty
    return d * delta


def sum_diff_bound(d: int, alpha: float, delta: float) -> float:
    """Bound on ``sum_k |p_k**a - q_k**a|`` at one-norm distance delta:
    ``2 ceil(a) d**(1 - a/ceil(a)) delta**(a/ceil(a))`` for finite a > 0."""
    a = float(alpha)
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"requires finite alpha > 0, got {alpha!r}")
    if not (isinstance(d, (int, np.integer)) and d >= 2):
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    if not (0.0 <= delta <= 2.0):
        raise ValueError(f"delta must lie in [0, 2], got {delta!r}")
    c = math.ceil(a)
    return 2.0 * c * d ** (1.0 - a / c) * delta ** (a / c)
