"""Resolvent evaluation, contour-quadrature coefficient recovery, and
unit-circle pole probing.

The resolvent (lambda I - A)^-1 is computed by direct solve and, for
|lambda| beyond the spectral radius, by the truncated series
sum A^n / lambda^(n+1).  Coefficient recovery integrates an analytic
vector-valued function over a circle with the trapezoidal rule, which is
exact for truncated power series of low degree relative to the node
count.  Grid scans flag spectral hits instead of failing: sweeping
across the unit circle necessarily grazes the spectrum.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DivergenceError, PreconditionError, SingularMatrixError
from .linalg import (
    CMatrix,
    CVector,
    _batched_spectral_norms,
    _solve_array,
    _top_right_singular_vector,
    operator_norm,
    require_unitary,
)
from .eigen import spectrum_info

#: Resolvent norms beyond this are reported as singular hits.
SINGULAR_NORM_CUTOFF = 1e14

#: Fixed approach angle for pole probes; off-axis to avoid symmetry
#: artifacts of axis-aligned spectra.
_PROBE_ANGLE = math.pi / 4.0

DEFAULT_QUADRATURE_NODES = 256


def resolvent_direct(a: CMatrix, lam: complex) -> CMatrix:
    """(lambda I - A)^-1 by row-pivoted solve against the identity."""
    shifted = complex(lam) * np.eye(a.dim) - a.data
    try:
        return CMatrix(_solve_array(shifted, np.eye(a.dim)))
    except SingularMatrixError as exc:
        raise SingularMatrixError(f"lambda = {lam!r} is numerically spectral: {exc}") from exc


@dataclass(frozen=True)
class NeumannResult:
    """Truncated resolvent series with its truncation indicator."""

    matrix: CMatrix
    last_term_norm: float
    terms: int


def resolvent_neumann(a: CMatrix, lam: complex, k_max: int) -> NeumannResult:
    """Partial sum of A^n / lambda^(n+1) for n = 0..k_max.

    Valid only for |lambda| above the spectral radius; misuse is detected
    by the term norms failing to decay over the final ten terms and
    raised as a divergence error rather than silently returned.
    """
    if k_max < 1:
        raise PreconditionError("k_max must be >= 1")
    lam = complex(lam)
    if lam == 0:
        raise PreconditionError("lambda must be nonzero")
    term = np.eye(a.dim, dtype=np.complex128) / lam
    acc = term.copy()
    term_norms = [operator_norm(term)]
    v = None
    for _ in range(k_max):
        term = a.data @ term / lam
        norm, v = _top_right_singular_vector(term, 0, v)
        term_norms.append(norm)
        acc += term
        if norm > 1e150:
            raise DivergenceError(
                f"series terms exceed 1e150 at |lambda| = {abs(lam):.6g}; "
                "expansion point is inside the spectral radius"
            )
    tail = term_norms[-10:]
    if len(tail) == 10 and all(b >= a_ for a_, b in zip(tail, tail[1:])) and tail[-1] > 0:
        raise DivergenceError(
            "term norms are non-decreasing over the final 10 terms; "
            "|lambda| does not exceed the spectral radius"
        )
    return NeumannResult(CMatrix(acc), term_norms[-1], k_max + 1)


def _unit_roots_table(nodes: int) -> np.ndarray:
    """e^(2 pi i j / M) for j < M, with the j+M/2 entry the exact negation
    of entry j so that symmetric sums cancel exactly."""
    if nodes % 2 == 0:
        half = np.exp(2j * np.pi * np.arange(nodes // 2) / nodes)
        return np.concatenate([half, -half])
    return np.exp(2j * np.pi * np.arange(nodes) / nodes)


def cauchy_coefficient(
    oracle: Callable[[complex], CVector | np.ndarray],
    k: int,
    radius: float = 1.0,
    nodes: int = DEFAULT_QUADRATURE_NODES,
) -> CVector:
    """k-th series coefficient of an analytic function by circle quadrature.

    Trapezoidal rule on equispaced nodes z_m = radius * e^(2 pi i m / M):
    the mean of z_m^-k f(z_m).  Exact (up to roundoff) on truncated power
    series of degree below M - k.  The caller guarantees analyticity on
    the circle.  Sums are compensated per component, so coefficients that
    cancel exactly (e.g. every k >= 1 of a constant) come out as exact
    zeros even at radii well below 1.
    """
    if nodes < 4:
        raise PreconditionError("nodes must be >= 4")
    if k < 0:
        raise PreconditionError("k must be >= 0")
    if not radius > 0.0:
        raise PreconditionError("radius must be positive")
    table = _unit_roots_table(nodes)
    samples = []
    dim = None
    for m in range(nodes):
        z = complex(radius * table[m])
        raw = oracle(z)
        vec = np.asarray(raw.data if isinstance(raw, CVector) else raw, dtype=np.complex128).reshape(-1)
        if dim is None:
            dim = vec.shape[0]
        elif vec.shape[0] != dim:
            raise PreconditionError("oracle returned vectors of inconsistent dimension")
        samples.append(vec)
    f = np.array(samples)  # (M, d)
    # z_m^-k on the unit circle via index arithmetic in the symmetric table
    w = table[(-np.arange(nodes) * k) % nodes]
    wr, wi = w.real, w.imag
    fr, fi = f.real, f.imag
    re_terms = wr[:, None] * fr - wi[:, None] * fi
    im_terms = wr[:, None] * fi + wi[:, None] * fr
    scale = radius ** (-k) / nodes
    out = np.empty(dim, dtype=np.complex128)
    for j in range(dim):
        out[j] = complex(math.fsum(re_terms[:, j]) * scale, math.fsum(im_terms[:, j]) * scale)
    return CVector(out)


@dataclass(frozen=True)
class ResolventSample:
    lam: complex
    resolvent_norm: float
    singular_flag: bool


def resolvent_norm_scan(a: CMatrix, grid: Sequence[complex]) -> list[ResolventSample]:
    """Resolvent norm per grid point; spectral hits become flags, not errors."""
    out = []
    for lam in grid:
        lam = complex(lam)
        try:
            norm = operator_norm(resolvent_direct(a, lam))
        except SingularMatrixError:
            out.append(ResolventSample(lam, 0.0, True))
            continue
        out.append(ResolventSample(lam, norm, norm > SINGULAR_NORM_CUTOFF))
    return out


@dataclass(frozen=True)
class IsometryBoundReport:
    """Check of ||R(lambda)|| <= 1 / ||lambda| - 1| on a unitary matrix."""

    samples_checked: int
    violations: int
    worst_slack: float  # min over samples of bound - norm; negative means violated
    worst_lambda: complex

    @property
    def ok(self) -> bool:
        return self.violations == 0


def isometry_bound_check(
    u: CMatrix, samples: Sequence[complex], slack: float = 1e-9
) -> IsometryBoundReport:
    """Verify the reciprocal-distance-to-circle bound at every sample point.

    Samples must keep a distance of at least 1e-6 from the unit circle in
    modulus; the matrix must be unitary to 1e-10.
    """
    require_unitary(u)
    lams = [complex(lam) for lam in samples]
    gaps = []
    for lam in lams:
        gap = abs(abs(lam) - 1.0)
        if gap < 1e-6:
            raise PreconditionError(f"sample {lam!r} is within 1e-6 of the unit circle")
        gaps.append(gap)
    if not lams:
        return IsometryBoundReport(0, 0, math.inf, complex(0.0))
    d = u.dim
    eye = np.eye(d, dtype=np.complex128)
    stack = np.stack([_solve_array(lam * eye - u.data, eye) for lam in lams])
    norms = _batched_spectral_norms(stack)
    bounds = 1.0 / np.asarray(gaps)
    slacks = bounds - norms
    violations = int(np.count_nonzero(norms > bounds + slack))
    worst_i = int(np.argmin(slacks))
    return IsometryBoundReport(len(lams), violations, float(slacks[worst_i]), lams[worst_i])


@dataclass(frozen=True)
class PoleProbeReport:
    """Resolvent norms on a shrinking ray toward a unit-circle eigenvalue.

    ``fitted_order`` is the least-squares slope of ln norm against
    -ln radius; a simple pole shows up as an order of one.
    """

    center: complex
    radii: tuple[float, ...]
    norms: tuple[float, ...]
    fitted_order: float


def pole_order_probe(u: CMatrix, theta: complex, radii: Sequence[float]) -> PoleProbeReport:
    """Probe the singularity order of a unitary resolvent at eigenvalue theta."""
    require_unitary(u)
    radii = [float(r) for r in radii]
    if len(radii) < 4:
        raise PreconditionError("need at least 4 radii")
    if any(b >= a_ for a_, b in zip(radii, radii[1:])):
        raise PreconditionError("radii must be strictly decreasing")
    if radii[0] > 0.1 or radii[-1] < 1e-8:
        raise PreconditionError("radii must lie within [1e-8, 0.1]")
    theta = complex(theta)
    eigs = spectrum_info(u).eigenvalues
    dist_to_theta = min(abs(ev - theta) for ev in eigs)
    if dist_to_theta > 1e-6:
        raise PreconditionError(f"theta = {theta!r} is not an eigenvalue (distance {dist_to_theta:.3e})")
    others = [abs(ev - theta) for ev in eigs if abs(ev - theta) > 1e-6]
    min_sep = min(others) if others else math.inf
    if min_sep < 2.0 * max(radii):
        raise PreconditionError(
            f"eigenvalue separation {min_sep:.3e} below twice the largest radius {max(radii):.3e}"
        )
    direction = complex(math.cos(_PROBE_ANGLE), math.sin(_PROBE_ANGLE))
    norms = [operator_norm(resolvent_direct(u, theta + r * direction)) for r in radii]
    x = -np.log(np.asarray(radii))
    y = np.log(np.asarray(norms))
    x = x - x.mean()
    order = float(x @ (y - y.mean()) / (x @ x))
    return PoleProbeReport(theta, tuple(radii), tuple(norms), order)
