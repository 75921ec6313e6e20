"""Independent oracles the test suite checks the library against.

Everything here is deliberately written from scratch against the defining
formulas — exact rational arithmetic for the catalyst search, arbitrary
precision (mpmath) for the bound formulas — and never calls back into the
package, so an agreement between the two is meaningful.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp
import numpy as np


# ---------------------------------------------------------------------------
# exact brute-force catalyst search (rational arithmetic end to end)


def frac_majorizes(p, q) -> bool:
    sp = sorted(p, reverse=True)
    sq = sorted(q, reverse=True)
    cp = cq = Fraction(0)
    for a, b in zip(sp, sq):
        cp += a
        cq += b
        if cp < cq:
            return False
    return True


def _descending_partitions(total, max_parts):
    """All descending tuples of positive integers with the given sum."""

    def rec(remaining, max_val, parts):
        if remaining == 0:
            yield tuple(parts)
            return
        if len(parts) == max_parts:
            return
        for v in range(min(max_val, remaining), 0, -1):
            if remaining - v > v * (max_parts - len(parts) - 1):
                continue
            parts.append(v)
            yield from rec(remaining - v, v, parts)
            parts.pop()

    yield from rec(total, total, [])


def brute_force_catalyst(p, q, max_dim: int = 4, max_denom: int = 40):
    """Smallest-denominator rational catalyst making p x r majorize q x r.

    Inputs are sequences of Fractions.  Returns the catalyst as a tuple of
    Fractions — ``(Fraction(1),)`` when plain majorization already works — or
    None when no catalyst exists within the searched grid.  Absence is not a
    proof of impossibility (catalyst dimension is unbounded in general); the
    impossibility certificates live in ``monotone_violation_order``.
    """
    if frac_majorizes(p, q):
        return (Fraction(1),)
    for denom in range(2, max_denom + 1):
        for parts in _descending_partitions(denom, max_dim):
            if len(parts) == 1:
                continue
            r = [Fraction(k, denom) for k in parts]
            pr = [a * b for a in p for b in r]
            qr = [a * b for a in q for b in r]
            if frac_majorizes(pr, qr):
                return tuple(r)
    return None


def monotone_violation_order(p, q, orders=None):
    """An order parameter whose monotone certifies p cannot reach q, or None.

    Evaluates the additive monotone family (log-sum branches, entropy branch
    at 1, log-product branch at 0) in mpmath at 50 digits and returns the
    first order where the target strictly exceeds the source beyond 1e-20.
    """
    if orders is None:
        orders = [float(a) for a in np.geomspace(1e-3, 50, 120)] + [0.0, 1.0, -1.0, -2.0]
    with mp.workdps(50):
        vp = [mp.mpf(x.numerator) / mp.mpf(x.denominator) for x in p]
        vq = [mp.mpf(x.numerator) / mp.mpf(x.denominator) for x in q]

        def f(v, a):
            pos = [x for x in v if x > 0]
            if a > 1.0 or a < 0.0:
                if len(pos) < len(v) and a < 0.0:
                    return mp.inf
                return mp.log(mp.fsum(x ** a for x in pos))
            if a == 1.0:
                return mp.fsum(x * mp.log(x) for x in pos)
            if a == 0.0:
                if len(pos) < len(v):
                    return mp.inf
                return -mp.fsum(mp.log(x) for x in v)
            return -mp.log(mp.fsum(x ** a for x in pos))

        for a in orders:
            fp, fq = f(vp, a), f(vq, a)
            if fq is mp.inf and fp is not mp.inf:
                continue  # q unreachable at this order: no violation of p -> q
            if fp is mp.inf:
                continue
            if fq > fp + mp.mpf("1e-20"):
                return a
    return None


# ---------------------------------------------------------------------------
# high-precision recomputations of the closed-form bounds


def resolution_oracle(eps_emb: float, d_sys: int, d_cat_total: int,
                      *, main_text_form: bool = False, dps: int = 60) -> float:
    """The resolution formula evaluated in mpmath, no log rearrangement."""
    with mp.workdps(dps):
        eps = mp.mpf(eps_emb)
        ds = mp.mpf(d_sys)
        dt = ds * mp.mpf(d_cat_total)
        neg_log = -mp.log(eps)
        inner = (
            (ds ** mp.mpf("5/3") + 4 * mp.log(dt) * mp.log(ds)) / neg_log
            + dt * eps ** mp.mpf("1/6")
            + 5 * (dt * dt * mp.sqrt(eps / dt) * mp.log(mp.sqrt(dt / eps))) ** mp.mpf("2/3")
        )
        value = 5 * inner if main_text_form else 5 * mp.sqrt(inner)
        return float(value)


def resolution_domain_oracle(eps_emb: float, d_sys: int, d_cat_total: int) -> bool:
    with mp.workdps(60):
        eps = mp.mpf(eps_emb)
        ds = mp.mpf(d_sys)
        dt = ds * mp.mpf(d_cat_total)
        first = 10 * mp.log(dt) / (-mp.log(eps)) <= 1
        second = mp.log(eps) * mp.log(1 - 1 / ds) >= mp.log(dt) ** 2
        return bool(first and second)


def kl_oracle(p, q, dps: int = 50) -> float:
    with mp.workdps(dps):
        terms = [mp.mpf(a) * mp.log(mp.mpf(a) / mp.mpf(b)) for a, b in zip(p, q) if a > 0]
        return float(mp.fsum(terms))


def renyi_oracle(p, alpha: float, dps: int = 50) -> float:
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        pos = [mp.mpf(x) for x in p if x > 0]
        if alpha == 1.0:
            return float(-mp.fsum(x * mp.log(x) for x in pos))
        return float(mp.log(mp.fsum(x ** a for x in pos)) / (1 - a))


def tsallis_oracle(p, alpha: float, dps: int = 50) -> float:
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        pos = [mp.mpf(x) for x in p if x > 0]
        if alpha == 1.0:
            return float(-mp.fsum(x * mp.log(x) for x in pos))
        return float((1 - mp.fsum(x ** a for x in pos)) / (a - 1))


def disturbance_oracle(tilde_eps_v, eps_lr, eps_c, eps_nu, dps: int = 50) -> float:
    with mp.workdps(dps):
        ev, lr = mp.mpf(tilde_eps_v), mp.mpf(eps_lr)
        c, nu = mp.mpf(eps_c), mp.mpf(eps_nu)
        inner = (4 * (mp.pi * ev) ** 2 + 16 * lr + 10 * lr ** 2
                 + 4 * (c + nu + c ** 2 * nu) + 6 * c * nu)
        return float(2 * mp.sqrt(inner))


def embezzle_oracle(d_sys: int, d_cat: int, dps: int = 50) -> float:
    with mp.workdps(dps):
        ds = mp.mpf(d_sys)
        ratio = mp.log(d_cat, 2) / mp.log(d_sys, 2)
        return float(ds / (1 + (ds - 1) * ratio))


# ---------------------------------------------------------------------------
# dense-matrix helpers used as second opinions


def dumb_partial_trace(mat: np.ndarray, dims, keep) -> np.ndarray:
    """Index-loop partial trace: slow, obvious, and independent of reshapes."""
    dims = tuple(int(d) for d in dims)
    keep = tuple(sorted(keep))
    drop = tuple(i for i in range(len(dims)) if i not in keep)
    out_dim = int(np.prod([dims[i] for i in keep])) if keep else 1
    out = np.zeros((out_dim, out_dim), dtype=complex)

    def unravel(flat):
        idx = []
        for d in reversed(dims):
            idx.append(flat % d)
            flat //= d
        return tuple(reversed(idx))

    n = int(np.prod(dims))
    for i in range(n):
        ii = unravel(i)
        for j in range(n):
            jj = unravel(j)
            if any(ii[k] != jj[k] for k in drop):
                continue
            ri = 0
            rj = 0
            for k in keep:
                ri = ri * dims[k] + ii[k]
                rj = rj * dims[k] + jj[k]
            out[ri, rj] += mat[i, j]
    return out


def trace_norm_oracle(mat: np.ndarray) -> float:
    return float(np.abs(np.linalg.svd(mat, compute_uv=False)).sum())
