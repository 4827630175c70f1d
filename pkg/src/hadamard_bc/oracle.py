"""Brute-force classical frontier for classically embedded channels.

When the POVM is an orthonormal basis and every prepared state is a
computational basis vector (both up to phase), the broadcast channel acts on
diagonal inputs as a classical degraded broadcast channel X -> (Y_B, Y_C).
The oracle enumerates p(w) and p(x|w) on simplex grids, with the superposition
letter Z equal to the input letter X, and scores every combination with
Shannon mutual informations. It shares no code with :mod:`hadamard_bc.entropic`.
"""

from __future__ import annotations

import itertools

import numpy as np

from .channel import HadamardChannelSpec
from .entropic import EnsembleEntry, InputEnsemble
from .errors import NotClassical, SizeLimit
from .region import Frontier, RatePoint, nondominated

EMBED_TOL = 1e-9
MAX_ORACLE_DIM = 3
MAX_COMBINATIONS = 200_000_000


def is_classical_embedded(spec: HadamardChannelSpec, tol: float = EMBED_TOL) -> bool:
    phi = spec.povm_vectors
    if phi.shape[0] != phi.shape[1]:
        return False
    if np.max(np.abs(phi.conj() @ phi.T - np.eye(phi.shape[0]))) > tol:
        return False
    mags = np.abs(spec.output_states)
    return bool(np.all(np.abs(mags.max(axis=1) - 1.0) <= tol))


def classical_channel(spec: HadamardChannelSpec):
    """Column-stochastic maps (T_B, T_C) with T[y, x] = p(y | x)."""
    if not is_classical_embedded(spec):
        raise NotClassical("channel is not classically embedded")
    n = spec.n_outcomes
    t_b = np.eye(n)
    t_c = np.zeros((spec.d_C, n))
    t_c[np.argmax(np.abs(spec.output_states), axis=1), np.arange(n)] = 1.0
    return t_b, t_c


def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """All distributions over ``k`` outcomes with entries in multiples of 1/resolution."""
    pts = [
        np.diff(np.concatenate(([0], bars, [resolution])))
        for bars in itertools.combinations_with_replacement(range(resolution + 1), k - 1)
    ]
    return np.array(pts, dtype=float).reshape(-1, k) / resolution


def _shannon(p, axis=-1):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(p), 0.0)
    return terms.sum(axis=axis)


def default_resolution(d_A: int) -> int:
    return {1: 1, 2: 40, 3: 12}.get(d_A, 4)


def classical_oracle_frontier(spec: HadamardChannelSpec, resolution: int | None = None,
                              num_w: int | None = None) -> Frontier:
    """Nondominated (I(X;Y_B|W), I(W;Y_C)) over the grid.

    ``num_w`` defaults to ``d_A`` (enough auxiliary letters for every
    supporting line of a region over ``d_A`` input letters) and may go up to
    ``d_A + 1``.
    """
    if not is_classical_embedded(spec):
        raise NotClassical("channel is not classically embedded; the classical oracle does not apply")
    d = spec.d_A
    if d > MAX_ORACLE_DIM:
        raise SizeLimit(f"classical oracle supports d_A <= {MAX_ORACLE_DIM}, got {d}")
    resolution = default_resolution(d) if resolution is None else int(resolution)
    num_w = d if num_w is None else int(num_w)
    if not 1 <= num_w <= d + 1 or resolution < 1:
        raise ValueError("need 1 <= num_w <= d_A + 1 and resolution >= 1")
    t_b, t_c = classical_channel(spec)

    q = simplex_grid(d, resolution)  # candidate p(x|w)
    pw_grid = simplex_grid(num_w, resolution)
    if len(pw_grid) * len(q) ** num_w > MAX_COMBINATIONS:
        raise SizeLimit("oracle grid too large; lower the resolution")

    # per-letter-distribution pieces: I(X;Y_B) under q and Charlie's output law
    out_b = q @ t_b.T
    i_b = _shannon(out_b) - q @ _shannon(t_b.T)
    out_c = q @ t_c.T
    h_c = _shannon(out_c)

    idx = np.array(list(itertools.product(range(len(q)), repeat=num_w)))  # (M, num_w)
    ib_sel = i_b[idx]  # (M, num_w)
    hc_sel = h_c[idx]
    oc_sel = out_c[idx]  # (M, num_w, d_C)

    # sweep p(w); within each slice keep only points not beaten by a
    # higher-rate_c point, which is all the exact Pareto pass can use
    rows = []
    for k, pw in enumerate(pw_grid):
        rate_b = ib_sel @ pw
        mix = np.einsum("mwc,w->mc", oc_sel, pw)
        rate_c = _shannon(mix) - hc_sel @ pw
        order = np.lexsort((-rate_b, -rate_c))
        running = np.maximum.accumulate(rate_b[order])
        sel = order[rate_b[order] >= running - 1e-12]
        rows.append(np.stack([rate_b[sel], rate_c[sel], np.full(sel.size, k), sel], axis=1))
    table = np.concatenate(rows)
    cands = [RatePoint(float(b), float(c)) for b, c in table[:, :2]]
    ident = {id(p): k for k, p in enumerate(cands)}
    points = []
    for p in nondominated(cands):
        k = ident[id(p)]
        pw = pw_grid[int(table[k, 2])]
        letters = q[idx[int(table[k, 3])]]
        points.append(RatePoint(p.rate_b, p.rate_c, _ensemble(spec, pw, letters), float("nan")))
    return Frontier("cc", points, [])


def _ensemble(spec, pw, letters) -> InputEnsemble:
    """The cc ensemble realizing a grid point: input |phi^x> for letter x."""
    d = spec.d_A
    entries = []
    for w, (p, law) in enumerate(zip(pw, letters)):
        for x in range(d):
            entries.append(EnsembleEntry(w, w * d + x, float(p * law[x]), spec.povm_vectors[x]))
    return InputEnsemble("cc", entries)
