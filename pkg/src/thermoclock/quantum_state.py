"""Dense finite-dimensional quantum states and the handful of operations the
simulator actually needs: tensor composition with factor bookkeeping, partial
trace, Schatten distances, Uhlmann fidelity, Gibbs states, and exact unitary
evolution through a single Hermitian eigendecomposition.

Trace distance is unhalved throughout: ``trace_distance(rho, sigma)`` ranges
over [0, 2] and equals 2 for orthogonal pure states.  Matrices are validated
at construction (Hermiticity 1e-10, eigenvalues >= -1e-10, unit trace 1e-10,
unitarity 1e-9) and stored read-only together with their tensor-factor
dimensions, so a reduced state always knows what it is a product of.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "DensityMatrix",
    "HermitianOp",
    "UnitaryOp",
    "compose",
    "reduce",
    "trace_distance",
    "trace_norm",
    "op_norm",
    "fidelity",
    "gibbs_state",
    "evolve",
    "commutes",
    "unitary_of",
]

_HERM_TOL = 1e-10
_PSD_TOL = 1e-10
_TRACE_TOL = 1e-10
_UNITARY_TOL = 1e-9


def _as_square(data) -> np.ndarray:
    m = np.array(data, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_factor_dims(dim: int, factor_dims) -> tuple[int, ...]:
    if factor_dims is None:
        return (dim,)
    fd = tuple(int(d) for d in factor_dims)
    if any(d < 1 for d in fd):
        raise ValueError(f"factor dims must be positive, got {fd}")
    if math.prod(fd) != dim:
        raise ValueError(f"factor dims {fd} do not multiply to {dim}")
    return fd


class DensityMatrix:
    """Validated density matrix with tensor-factor dimensions."""

    __slots__ = ("data", "factor_dims")

    def __init__(self, data, factor_dims=None):
        m = _as_square(data)
        if np.abs(m - m.conj().T).max() > _HERM_TOL:
            raise ValueError("matrix is not Hermitian within 1e-10")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -_PSD_TOL:
            raise ValueError(f"matrix has eigenvalue {eigs.min()!r} < -1e-10")
        tr = m.trace()
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace is {tr!r}, not 1 within 1e-10")
        m.flags.writeable = False
        self.data = m
        self.factor_dims = _check_factor_dims(m.shape[0], factor_dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def pure(cls, vec, factor_dims=None) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex).ravel()
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-10:
            raise ValueError(f"state vector norm is {n!r}, not 1 within 1e-10")
        v = v / n
        return cls(np.outer(v, v.conj()), factor_dims)

    @classmethod
    def maximally_mixed(cls, *dims) -> "DensityMatrix":
        n = math.prod(dims)
        return cls(np.eye(n) / n, dims)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues in descending order (clipped at 0)."""
        return np.clip(np.linalg.eigvalsh(self.data)[::-1], 0.0, None)

    def purity(self) -> float:
        return float(np.vdot(self.data, self.data).real)

    def __repr__(self) -> str:  # pragma: no cover
        return f"DensityMatrix(dim={self.dim}, factors={self.factor_dims})"


class HermitianOp:
    """Validated Hermitian operator with tensor-factor dimensions."""

    __slots__ = ("data", "factor_dims")

    def __init__(self, data, factor_dims=None):
        m = _as_square(data)
        if np.abs(m - m.conj().T).max() > _HERM_TOL:
            raise ValueError("matrix is not Hermitian within 1e-10")
        m.flags.writeable = False
        self.data = m
        self.factor_dims = _check_factor_dims(m.shape[0], factor_dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def zero(cls, *dims) -> "HermitianOp":
        n = math.prod(dims)
        return cls(np.zeros((n, n)), dims)

    def __repr__(self) -> str:  # pragma: no cover
        return f"HermitianOp(dim={self.dim}, factors={self.factor_dims})"


class UnitaryOp:
    """Validated unitary (U^dag U = 1 within 1e-9 in spectral norm)."""

    __slots__ = ("data", "factor_dims")

    def __init__(self, data, factor_dims=None):
        m = _as_square(data)
        defect = m.conj().T @ m - np.eye(m.shape[0])
        if np.linalg.norm(defect, 2) > _UNITARY_TOL:
            raise ValueError("matrix is not unitary within 1e-9")
        m.flags.writeable = False
        self.data = m
        self.factor_dims = _check_factor_dims(m.shape[0], factor_dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]


def _mat(x) -> np.ndarray:
    if isinstance(x, (DensityMatrix, HermitianOp, UnitaryOp)):
        return x.data
    return _as_square(x)


# ---------------------------------------------------------------------------
# composition and reduction
# ---------------------------------------------------------------------------

def compose(a, b):
    """Kronecker product of two objects of the same kind; factor dimensions
    concatenate, so the result remembers its tensor structure."""
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.data, b.data), a.factor_dims + b.factor_dims)
    if isinstance(a, HermitianOp) and isinstance(b, HermitianOp):
        return HermitianOp(np.kron(a.data, b.data), a.factor_dims + b.factor_dims)
    raise TypeError(f"compose needs two DensityMatrix or two HermitianOp, got {type(a)}/{type(b)}")


def reduce(rho: DensityMatrix, keep) -> DensityMatrix:
    """Partial trace keeping the factors listed in ``keep`` (indices into
    ``rho.factor_dims``), in their original order."""
    dims = rho.factor_dims
    n = len(dims)
    kept = sorted({int(k) for k in keep})
    if not kept:
        raise ValueError("keep must name at least one factor")
    if kept[0] < 0 or kept[-1] >= n:
        raise ValueError(f"keep indices {kept} out of range for {n} factors")
    drop = [i for i in range(n) if i not in kept]
    t = rho.data.reshape(dims + dims)
    m = n
    for i in sorted(drop, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + m)
        m -= 1
    new_dims = tuple(dims[i] for i in kept)
    size = math.prod(new_dims)
    return DensityMatrix(t.reshape(size, size), new_dims)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def trace_norm(a) -> float:
    """Schatten 1-norm (sum of singular values) of an arbitrary matrix."""
    return float(np.linalg.norm(_mat(a), "nuc"))


def op_norm(a) -> float:
    """Operator (spectral) norm of an arbitrary matrix."""
    return float(np.linalg.norm(_mat(a), 2))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Unhalved trace distance ``||rho - sigma||_1`` in [0, 2]."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    eigs = np.linalg.eigvalsh(rho.data - sigma.data)
    return float(np.abs(eigs).sum())


def _pure_vector(rho: DensityMatrix):
    w, v = np.linalg.eigh(rho.data)
    if w[-1] >= 1.0 - 1e-10:
        return v[:, -1]
    return None


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity F in [0, 1] (F = 1 iff equal states).

    Rank-one shortcut when either argument is pure:
    F = sqrt(<psi| other |psi>).
    """
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    for a, b in ((rho, sigma), (sigma, rho)):
        psi = _pure_vector(a)
        if psi is not None:
            val = float(np.real(np.vdot(psi, b.data @ psi)))
            return math.sqrt(max(0.0, min(1.0, val)))
    w, v = np.linalg.eigh(rho.data)
    w = np.clip(w, 0.0, None)
    sq = (v * np.sqrt(w)) @ v.conj().T
    m = sq @ sigma.data @ sq
    ev = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    return float(min(1.0, np.sqrt(ev).sum()))


# ---------------------------------------------------------------------------
# thermal states and dynamics
# ---------------------------------------------------------------------------

def gibbs_state(h: HermitianOp, beta: float) -> DensityMatrix:
    """Thermal state exp(-beta H) / tr exp(-beta H) at inverse temperature
    beta (finite real; the spectrum is shifted before exponentiating, so
    large beta stays numerically safe)."""
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    w, v = np.linalg.eigh(h.data)
    g = np.exp(-beta * (w - w.min()))
    g /= g.sum()
    return DensityMatrix((v * g) @ v.conj().T, h.factor_dims)


def unitary_of(h: HermitianOp, scale: float) -> UnitaryOp:
    """exp(i * scale * H) through the eigendecomposition of H."""
    w, v = np.linalg.eigh(h.data)
    u = (v * np.exp(1j * scale * w)) @ v.conj().T
    return UnitaryOp(u, h.factor_dims)


def evolve(rho: DensityMatrix, h: HermitianOp, t: float) -> DensityMatrix:
    """Heisenberg-free exact evolution exp(-iHt) rho exp(+iHt)."""
    if rho.dim != h.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim} vs generator {h.dim}")
    w, v = np.linalg.eigh(h.data)
    u = (v * np.exp(-1j * t * w)) @ v.conj().T
    return DensityMatrix(u @ rho.data @ u.conj().T, rho.factor_dims)


def commutes(a, b, tol: float = 1e-9) -> bool:
    """True iff the Frobenius norm of [A, B] is at most ``tol``."""
    ma, mb = _mat(a), _mat(b)
    return bool(np.linalg.norm(ma @ mb - mb @ ma) <= tol)
