"""Shared builders and oracles for the test suite.

Tests are free to lean on numpy.linalg (eig/svd/inv) as an independent
oracle; the library itself never does.
"""

import numpy as np

from seqspectrum.linalg import CMatrix, CVector


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    # normalize the phases of R's diagonal so the factor is unique (Haar)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def unitary_with_phases(rng, phases):
    """Random unitary with the prescribed eigenvalue angles."""
    phases = np.asarray(phases, dtype=float)
    v = random_unitary(rng, len(phases))
    return v @ np.diag(np.exp(1j * phases)) @ v.conj().T


def diagonalizable(rng, eigs, cond=4.0):
    """A = V diag(eigs) V^-1 with cond(V) <= cond, plus V itself."""
    d = len(eigs)
    u = random_unitary(rng, d)
    w = random_unitary(rng, d)
    half = np.sqrt(cond)
    s = np.exp(rng.uniform(-np.log(half), np.log(half), d))
    v = u @ np.diag(s) @ w
    return v @ np.diag(np.asarray(eigs, dtype=complex)) @ np.linalg.inv(v), v


def disk_matrix(rng, d):
    """Matrix with entries drawn uniformly from the closed unit disk."""
    r = np.sqrt(rng.uniform(0.0, 1.0, (d, d)))
    ang = rng.uniform(0.0, 2.0 * np.pi, (d, d))
    return r * np.exp(1j * ang)


def spaced_phases(rng, d, jitter=0.1):
    """d angles with pairwise separation comfortably above 2 * jitter."""
    base = rng.uniform(0.0, 2.0 * np.pi)
    return (base + np.arange(d) * (2.0 * np.pi / d) + rng.uniform(-jitter, jitter, d)) % (
        2.0 * np.pi
    )


def multiset_distance(a, b):
    """Greedy matching distance between two same-length complex multisets."""
    a = list(a)
    b = list(b)
    assert len(a) == len(b)
    worst = 0.0
    for z in a:
        j = min(range(len(b)), key=lambda i: abs(b[i] - z))
        worst = max(worst, abs(b[j] - z))
        b.pop(j)
    return worst


def naive_rotated_mean(values, theta, n_used):
    """Direct-summation oracle for rotated_mean."""
    vals = np.asarray(values, dtype=complex)[:n_used]
    weights = np.asarray(theta, dtype=complex) ** (-np.arange(n_used))
    if vals.ndim == 1:
        return np.sum(weights * vals) / n_used
    return weights @ vals / n_used


def companion_embedding(system):
    """Rewrite x_{n+p} = B x_n + y_n as a one-step system of dimension p*d.

    State z_n = (x_n, ..., x_{n+p-1}).  Used only as a cross-check for the
    direct delay simulator.
    """
    b = np.asarray(system.b.data)
    d = b.shape[0]
    p = system.p
    big = np.zeros((p * d, p * d), dtype=np.complex128)
    for j in range(p - 1):
        big[j * d : (j + 1) * d, (j + 1) * d : (j + 2) * d] = np.eye(d)
    big[(p - 1) * d :, :d] = b
    z0 = np.concatenate([np.asarray(v.data) for v in system.initial])
    return CMatrix(big), CVector(z0)


def lift_forcing_table(system, horizon):
    """Forcing values for the companion embedding: y lands in the last block."""
    d = system.b.dim
    y = system.forcing.materialize(horizon, d)
    lifted = np.zeros((horizon, system.p * d), dtype=np.complex128)
    lifted[:, (system.p - 1) * d :] = y
    return lifted
