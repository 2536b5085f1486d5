"""Dense complex linear algebra substrate.

Matrices are small (dimension capped at 64) dense complex arrays.  The
operator norm is the spectral 2-norm throughout the package, computed by
seeded power iteration on the Gram matrix so that every run is
reproducible.  All values are immutable after construction and every
operation is a pure function of its inputs plus an explicit seed.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConvergenceError, PreconditionError, SingularMatrixError

MAX_DIM = 64

#: Relative pivot threshold below which elimination declares singularity.
PIVOT_RTOL = 1e-14

#: Rescaling window for running matrix powers.
_POWER_RESCALE_LO = 1e-100
_POWER_RESCALE_HI = 1e100


def _as_complex_array(values, shape=None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if shape is not None:
        arr = arr.reshape(shape)
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise PreconditionError("entries must be finite (no NaN/Inf)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class CVector:
    """Immutable complex vector; element of the ambient space."""

    data: np.ndarray

    def __post_init__(self):
        arr = _as_complex_array(self.data)
        if arr.ndim != 1 or arr.size < 1:
            raise PreconditionError("vector must be one-dimensional and non-empty")
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def __repr__(self):
        return f"CVector(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class CMatrix:
    """Immutable dense square complex matrix, dimension 1..64."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise PreconditionError("matrix must be square")
        if not 1 <= arr.shape[0] <= MAX_DIM:
            raise PreconditionError(f"dimension must be in [1, {MAX_DIM}]")
        object.__setattr__(self, "data", _as_complex_array(arr))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "CMatrix":
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> "CMatrix":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def diagonal(cls, entries: Iterable[complex]) -> "CMatrix":
        return cls(np.diag(np.asarray(list(entries), dtype=np.complex128)))

    def __repr__(self):
        return f"CMatrix(dim={self.dim})"


def mat_mul(a: CMatrix, b: CMatrix) -> CMatrix:
    """Matrix product a @ b."""
    if a.dim != b.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return CMatrix(a.data @ b.data)


def _solve_array(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Row-pivoted Gaussian elimination; raises on pivots below threshold."""
    d = a.shape[0]
    m = a.astype(np.complex128, copy=True)
    x = rhs.astype(np.complex128, copy=True)
    amax = float(np.max(np.abs(m))) if m.size else 0.0
    if amax == 0.0:
        raise SingularMatrixError("matrix is identically zero")
    threshold = PIVOT_RTOL * amax
    for col in range(d):
        p = int(np.argmax(np.abs(m[col:, col]))) + col
        if abs(m[p, col]) <= threshold:
            raise SingularMatrixError(
                f"pivot {abs(m[p, col]):.3e} below threshold {threshold:.3e} at column {col}"
            )
        if p != col:
            m[[col, p]] = m[[p, col]]
            x[[col, p]] = x[[p, col]]
        factors = m[col + 1 :, col] / m[col, col]
        m[col + 1 :, col:] -= np.outer(factors, m[col, col:])
        x[col + 1 :] -= np.outer(factors, x[col])
    for col in range(d - 1, -1, -1):
        x[col] = (x[col] - m[col, col + 1 :] @ x[col + 1 :]) / m[col, col]
    return x


def mat_solve(a: CMatrix, rhs: CMatrix) -> CMatrix:
    """Solve a @ X = rhs by row-pivoted elimination."""
    if a.dim != rhs.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {rhs.dim}")
    return CMatrix(_solve_array(a.data, rhs.data))


def solve_vector(a: CMatrix, rhs: CVector) -> CVector:
    if a.dim != rhs.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {rhs.dim}")
    return CVector(_solve_array(a.data, rhs.data.reshape(-1, 1))[:, 0])


@dataclass(frozen=True)
class SpectralNormInfo:
    """Power-iteration outcome.  ``converged`` is False when the Rayleigh
    quotient was still moving after the iteration budget; ``value`` then
    carries the last iterate rather than a certified norm."""

    value: float
    converged: bool
    iterations: int
    rel_change: float


def operator_norm_info(
    a: CMatrix | np.ndarray,
    seed: int = 0,
    start: np.ndarray | None = None,
    tol: float = 1e-12,
    max_iter: int = 1000,
) -> SpectralNormInfo:
    """Largest singular value via power iteration on the Gram matrix.

    The start vector is drawn from ``seed`` unless ``start`` is supplied
    (callers stepping through a matrix power sequence warm-start from the
    previous singular vector).  Stops when the relative Rayleigh-quotient
    change drops below ``tol``; exhaustion of ``max_iter`` is reported,
    not raised.
    """
    arr = a.data if isinstance(a, CMatrix) else np.asarray(a, dtype=np.complex128)
    d = arr.shape[0]
    scale = float(np.linalg.norm(arr))  # Frobenius; avoids under/overflow in the Gram matrix
    if scale == 0.0:
        return SpectralNormInfo(0.0, True, 0, 0.0)
    b = arr / scale
    gram = b.conj().T @ b
    if start is not None:
        v = np.asarray(start, dtype=np.complex128).copy()
        nv = np.linalg.norm(v)
        if nv == 0.0 or v.shape != (d,):
            raise PreconditionError("start vector must be a nonzero vector of matching dimension")
        v /= nv
    else:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
    rayleigh = float(np.real(np.vdot(v, gram @ v)))
    rel_change = np.inf
    for it in range(1, max_iter + 1):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start vector lies in the kernel; norm of the projection is 0
            return SpectralNormInfo(0.0, True, it, 0.0)
        v = w / nw
        new_rayleigh = float(np.real(np.vdot(v, gram @ v)))
        rel_change = abs(new_rayleigh - rayleigh) / max(new_rayleigh, np.finfo(float).tiny)
        rayleigh = new_rayleigh
        if rel_change < tol:
            return SpectralNormInfo(scale * float(np.sqrt(max(rayleigh, 0.0))), True, it, rel_change)
    return SpectralNormInfo(scale * float(np.sqrt(max(rayleigh, 0.0))), False, max_iter, rel_change)


def operator_norm(a: CMatrix | np.ndarray, seed: int = 0, start: np.ndarray | None = None) -> float:
    """Spectral 2-norm.  See :func:`operator_norm_info` for the full report."""
    return operator_norm_info(a, seed=seed, start=start).value


def _top_right_singular_vector(arr: np.ndarray, seed: int, start: np.ndarray | None):
    """One power-iteration pass that also returns the final iterate (for warm starts)."""
    scale = float(np.linalg.norm(arr))
    d = arr.shape[0]
    if scale == 0.0:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return 0.0, v / np.linalg.norm(v)
    b = arr / scale
    gram = b.conj().T @ b
    if start is not None and np.linalg.norm(start) > 0:
        v = start / np.linalg.norm(start)
    else:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
    rayleigh = float(np.real(np.vdot(v, gram @ v)))
    for _ in range(1000):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, v
        v = w / nw
        new_rayleigh = float(np.real(np.vdot(v, gram @ v)))
        if abs(new_rayleigh - rayleigh) < 1e-12 * max(new_rayleigh, np.finfo(float).tiny):
            rayleigh = new_rayleigh
            break
        rayleigh = new_rayleigh
    return scale * float(np.sqrt(max(rayleigh, 0.0))), v


def _batched_spectral_norms(
    mats: np.ndarray, tol: float = 1e-13, max_iter: int = 1000, seed: int = 0,
    chunk: int = 2048,
) -> np.ndarray:
    """Largest singular value of each matrix in a (s, d, d) stack.

    Power iteration on the stacked Gram matrices, all samples advancing
    together; converged samples just keep iterating (the extra work is
    cheaper than masking).  Stacks larger than ``chunk`` are processed in
    slices so the Gram stack never gets too large to hold.
    """
    s, d, _ = mats.shape
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal((s, d)) + 1j * rng.standard_normal((s, d))
    v0 /= np.linalg.norm(v0, axis=1, keepdims=True)
    out = np.empty(s)
    for lo in range(0, s, chunk):
        hi = min(lo + chunk, s)
        block = mats[lo:hi]
        # Frobenius pre-scaling keeps every Gram entry at most 1, so the
        # twice-squared quantities inside the iteration cannot overflow
        # even for inputs near the power-sequence rescaling bounds.
        scale = np.linalg.norm(block.reshape(hi - lo, -1), axis=1)
        b = block / np.where(scale > 0.0, scale, 1.0)[:, None, None]
        gram = np.einsum("sij,sik->sjk", b.conj(), b)
        v = v0[lo:hi]
        est = np.zeros(hi - lo)
        for _ in range(max_iter):
            w = np.einsum("sjk,sk->sj", gram, v)
            new_est = np.abs(np.einsum("sj,sj->s", v.conj(), w))
            wn = np.linalg.norm(w, axis=1)
            nz = wn > 0.0
            v[nz] = w[nz] / wn[nz, None]
            done = np.abs(new_est - est) <= tol * np.maximum(new_est, 1e-300)
            est = new_est
            if done.all():
                break
        out[lo:hi] = scale * np.sqrt(est)
    return out


@dataclass(frozen=True)
class PowerNormEntry:
    """One sample of the matrix power sequence.

    ``log_norm`` is ``ln ||A^n||`` assembled from the rescaled residual
    and the accumulated log scale; it is ``None`` (a tagged sentinel, not
    a raw float) when the power is exactly zero.
    """

    n: int
    scaled_norm: float
    log_scale: float

    @property
    def log_norm(self) -> float | None:
        if self.scaled_norm == 0.0:
            return None
        return float(np.log(self.scaled_norm) + self.log_scale)


def mat_power_seq(a: CMatrix, n_max: int, seed: int = 0) -> list[PowerNormEntry]:
    """ln ||A^n|| for n = 1..n_max with running rescaling.

    Maintains P_n = A^n / exp(s_n) and renormalizes whenever the residual
    leaves [1e-100, 1e100], so growing and nilpotent powers both stay in
    range.  The rescaled stack is built first and its norms are then
    evaluated in a single batched power iteration, which is far cheaper
    than one cold iteration per power.
    """
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    arr = a.data
    p = arr.copy()
    log_scale = 0.0
    stack: list[np.ndarray] = []
    scales: list[float] = []
    zero_from = None
    for n in range(1, n_max + 1):
        if n > 1:
            p = arr @ p
        amax = float(np.max(np.abs(p)))
        if amax == 0.0:
            # nilpotent from here on: every later power is exactly zero
            zero_from = n
            break
        if not _POWER_RESCALE_LO <= amax <= _POWER_RESCALE_HI:
            p = p / amax
            log_scale += float(np.log(amax))
        stack.append(p.copy())
        scales.append(log_scale)
    out: list[PowerNormEntry] = []
    if stack:
        norms = _batched_spectral_norms(np.stack(stack), seed=seed)
        out.extend(
            PowerNormEntry(n, float(norm), s)
            for n, (norm, s) in enumerate(zip(norms, scales), start=1)
        )
    if zero_from is not None:
        out.extend(PowerNormEntry(k, 0.0, log_scale) for k in range(zero_from, n_max + 1))
    return out


def hermitian_defect(u: CMatrix) -> float:
    """|| U^H U - I ||, the distance from having orthonormal columns."""
    return operator_norm(u.data.conj().T @ u.data - np.eye(u.dim))


def require_unitary(u: CMatrix, tol: float = 1e-10) -> None:
    defect = hermitian_defect(u)
    if defect > tol:
        raise PreconditionError(f"matrix is not unitary: ||U^H U - I|| = {defect:.3e} > {tol:.1e}")
