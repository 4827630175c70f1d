"""Random channels, states and ensembles for property checks."""

from __future__ import annotations

import numpy as np

from .channel import HadamardChannelSpec
from .entropic import EnsembleEntry, InputEnsemble


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_spec(d_A: int, n_outcomes: int, d_C: int, rng: np.random.Generator) -> HadamardChannelSpec:
    """POVM vectors from the rows of a random isometry C^{d_A} -> C^N."""
    if n_outcomes < d_A:
        raise ValueError("need at least d_A outcomes for a rank-one POVM")
    u = random_unitary(n_outcomes, rng)[:, :d_A]
    phi = u.conj()
    psi = np.array([random_pure_state(d_C, rng) for _ in range(n_outcomes)])
    return HadamardChannelSpec(phi, psi)


def random_small_spec(rng: np.random.Generator, max_d_A: int = 3, max_n: int = 4, max_d_C: int = 3):
    d_A = int(rng.integers(1, max_d_A + 1))
    n = int(rng.integers(d_A, max(d_A, max_n) + 1))
    d_C = int(rng.integers(1, max_d_C + 1))
    return random_spec(d_A, n, d_C, rng)


def random_cc_ensemble(d_A: int, num_w: int, num_z: int, rng: np.random.Generator) -> InputEnsemble:
    p = rng.dirichlet(np.ones(num_w * num_z)).reshape(num_w, num_z)
    entries = [
        EnsembleEntry(w, w * num_z + z, float(p[w, z]), random_pure_state(d_A, rng))
        for w in range(num_w)
        for z in range(num_z)
    ]
    return InputEnsemble("cc", entries)


def random_rq_ensemble(task: str, d_A: int, num_w: int, rng: np.random.Generator) -> InputEnsemble:
    """CQ or EAC ensemble of random pure states on R (x) A with d_R = d_A."""
    p = rng.dirichlet(np.ones(num_w))
    entries = []
    for w in range(num_w):
        # mix of entangled and product inputs to exercise both regimes
        if rng.random() < 0.2:
            v = np.kron(random_pure_state(d_A, rng), random_pure_state(d_A, rng))
        else:
            v = random_pure_state(d_A * d_A, rng)
        entries.append(EnsembleEntry(w, None, float(p[w]), v))
    return InputEnsemble(task, entries)
