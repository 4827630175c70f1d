"""Capacity-region frontiers by scalarized Nelder-Mead search.

For a weight ``lam`` in [0, 1] the search maximizes

    lam * primary_rate + (1 - lam) * I(W;C)

over input ensembles. The regions are convex (time sharing), so sweeping
``lam`` traces supporting lines of the region; the best point per weight is
kept and the set is reduced to its nondominated frontier.

Parameter layout (flat real vector):

* ``cc``: ``num_w`` logits for p(w), then ``num_w * num_z`` logits for
  p(z|w) (row per w), then ``num_w * num_z`` states on A, each ``2 * d_A``
  reals as interleaved (re, im) pairs.
* ``cq`` / ``eac``: ``num_w`` logits, then ``num_w`` states on R (x) A with
  ``d_R = d_A``, each ``2 * d_A**2`` reals.

Logits go through a softmax and state vectors are normalized, so every
finite vector decodes to a valid ensemble.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels, entropic
from .channel import HadamardChannelSpec
from .entropic import EnsembleEntry, InputEnsemble
from .errors import InvalidParameters, SizeLimit

TASK_IDS = {"cc": _kernels.CC, "cq": _kernels.CQ, "eac": _kernels.EAC}
MAX_OUTPUT_SIDE = 64
MAX_INPUT_DIM = 4
FRONTIER_TOL = 1e-9


@dataclass(frozen=True)
class OptimizationConfig:
    num_w: Optional[int] = None  # default d_A**2 + 1
    num_z: Optional[int] = None  # default d_A**2 (cc only)
    lambda_grid: int = 33
    restarts: int = 20
    seed: int = 0
    max_iters: int = 5000
    obj_tol: float = 1e-7
    simplex_scale: float = 1.0
    workers: int = 1

    def __post_init__(self):
        problems = []
        if self.num_w is not None and self.num_w < 1:
            problems.append("num_w must be >= 1")
        if self.num_z is not None and self.num_z < 1:
            problems.append("num_z must be >= 1")
        if self.lambda_grid < 2:
            problems.append("lambda_grid must be >= 2")
        if self.restarts < 1:
            problems.append("restarts must be >= 1")
        if self.max_iters < 1:
            problems.append("max_iters must be >= 1")
        if not self.seed >= 0:
            problems.append("seed must be a nonnegative integer")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if problems:
            raise InvalidParameters("; ".join(problems))

    def resolved(self, d_A: int) -> "OptimizationConfig":
        return replace(
            self,
            num_w=self.num_w if self.num_w is not None else d_A * d_A + 1,
            num_z=self.num_z if self.num_z is not None else d_A * d_A,
        )

    @property
    def lambdas(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.lambda_grid)


@dataclass(frozen=True)
class RatePoint:
    rate_b: float
    rate_c: float
    achieving_ensemble: Optional[InputEnsemble] = None
    lam: float = float("nan")


@dataclass
class Frontier:
    """Nondominated points, ascending in ``rate_c``.

    ``best_objectives`` keeps the best scalarized value reached for every
    weight in the grid, before any filtering.
    """

    task: str
    points: list = field(default_factory=list)
    best_objectives: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_array(self) -> np.ndarray:
        return np.array([[p.rate_b, p.rate_c] for p in self.points]).reshape(-1, 2)


def nondominated(points, tol: float = FRONTIER_TOL) -> list:
    """Pareto filter; returns points ascending in rate_c with strictly falling rate_b.

    Points whose coordinates differ by at most ``tol`` count as ties, so
    round-off never leaves a near-duplicate on the frontier.
    """
    pts = sorted(points, key=lambda p: (p.rate_c, -p.rate_b))
    kept = []
    for p in pts:
        while kept and kept[-1].rate_b <= p.rate_b + tol:
            kept.pop()
        if kept and p.rate_c <= kept[-1].rate_c + tol:
            continue  # a kept point with ~equal rate_c already has larger rate_b
        kept.append(p)
    return kept


def check_size(spec: HadamardChannelSpec):
    if spec.d_B * spec.d_C > MAX_OUTPUT_SIDE or spec.d_A > MAX_INPUT_DIM:
        raise SizeLimit(
            f"channel too large for the optimizer (N*d_C={spec.d_B * spec.d_C}, "
            f"d_A={spec.d_A}; limits {MAX_OUTPUT_SIDE} and {MAX_INPUT_DIM})"
        )


def parameter_count(task: str, d_A: int, num_w: int, num_z: int = 1) -> int:
    if task == "cc":
        return num_w + num_w * num_z + num_w * num_z * 2 * d_A
    return num_w + num_w * 2 * d_A * d_A


def _softmax(x):
    e = np.exp(x - np.max(x))
    return e / e.sum()


def _unit(chunk):
    v = chunk[0::2] + 1j * chunk[1::2]
    n = np.linalg.norm(v)
    if n == 0.0:
        raise InvalidParameters("state parameters decode to the zero vector")
    return v / n


def decode_ensemble(task: str, params, d_A: int, num_w: int, num_z: int = 1) -> InputEnsemble:
    """Turn a flat parameter vector into a labelled ensemble (see module doc)."""
    theta = np.asarray(params, dtype=float).ravel()
    want = parameter_count(task, d_A, num_w, num_z)
    if theta.size != want:
        raise InvalidParameters(f"expected {want} parameters for {task}, got {theta.size}")
    if not np.all(np.isfinite(theta)):
        raise InvalidParameters("parameters must be finite")
    pw = _softmax(theta[:num_w])
    entries = []
    if task == "cc":
        off = num_w + num_w * num_z
        for w in range(num_w):
            pz = _softmax(theta[num_w + w * num_z: num_w + (w + 1) * num_z])
            for z in range(num_z):
                k = w * num_z + z
                v = _unit(theta[off + 2 * d_A * k: off + 2 * d_A * (k + 1)])
                entries.append(EnsembleEntry(w, k, float(pw[w] * pz[z]), v))
    elif task in ("cq", "eac"):
        step = 2 * d_A * d_A
        for w in range(num_w):
            v = _unit(theta[num_w + step * w: num_w + step * (w + 1)])
            entries.append(EnsembleEntry(w, None, float(pw[w]), v))
    else:
        raise InvalidParameters(f"unknown task {task!r}")
    return InputEnsemble(task, entries)


def _weighted(lam, r: entropic.RateTriple) -> float:
    return lam * r.primary_rate + (1.0 - lam) * r.charlie_rate_c


def scalarized_objective(spec, task, lam, params, num_w, num_z=1) -> float:
    """``lam * primary_rate + (1 - lam) * I(W;C)`` for the decoded ensemble."""
    ens = decode_ensemble(task, params, spec.d_A, num_w, num_z)
    return _weighted(lam, entropic.rates(spec, ens))


def _channel_arrays(spec):
    return (
        np.ascontiguousarray(spec.measurement),
        np.ascontiguousarray(spec.output_states),
        np.ascontiguousarray(spec.gram.T),
    )


def fast_rates(spec, task, params, num_w, num_z=1) -> tuple[float, float]:
    """Compiled counterpart of (primary_rate, I(W;C)) for a parameter vector."""
    meas, psi, gram_t = _channel_arrays(spec)
    theta = np.ascontiguousarray(params, dtype=float)
    return _kernels.task_rates(TASK_IDS[task], theta, num_w, num_z, meas, psi, gram_t)


def restart_rng(seed: int, lam_index: int, restart_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, lam_index, restart_index]))


def local_search(spec, task, lam, config: OptimizationConfig, rng: np.random.Generator):
    """One randomized Nelder-Mead run.

    The simplex is re-seeded around the incumbent whenever it collapses,
    until a fresh simplex fails to improve by ``obj_tol`` or the iteration
    budget is spent. Returns (params, objective).
    """
    num_w, num_z = config.num_w, config.num_z
    dim = parameter_count(task, spec.d_A, num_w, num_z)
    meas, psi, gram_t = _channel_arrays(spec)
    tid = TASK_IDS[task]
    x = rng.normal(size=dim)
    best_f = math.inf
    budget = config.max_iters
    while budget > 0:
        simplex = np.vstack([x, x + config.simplex_scale * rng.normal(size=(dim, dim))])
        x_new, f_new, used = _kernels.nelder_mead(
            tid, lam, simplex, budget, config.obj_tol, num_w, num_z, meas, psi, gram_t
        )
        budget -= max(int(used), 1)
        improved = best_f - f_new
        if f_new < best_f:
            x, best_f = x_new, f_new
        if improved <= config.obj_tol:
            break
    return x, -best_f


def _search_lambda(spec, task, config, lam_index):
    lam = float(config.lambdas[lam_index])
    best = None
    for r in range(config.restarts):
        x, obj = local_search(spec, task, lam, config, restart_rng(config.seed, lam_index, r))
        if best is None or obj > best[1]:
            best = (x, obj)
    return lam_index, best


def optimize_frontier(spec: HadamardChannelSpec, task: str, config: OptimizationConfig | None = None) -> Frontier:
    """Trace the rate-region frontier of ``task`` for ``spec``.

    Each weight's restarts draw from independent streams keyed by
    (seed, weight index, restart index), so the result does not depend on
    ``config.workers``.
    """
    if task not in TASK_IDS:
        raise InvalidParameters(f"unknown task {task!r}")
    spec.require_valid()
    check_size(spec)
    config = (config or OptimizationConfig()).resolved(spec.d_A)

    indices = range(config.lambda_grid)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_search_lambda, *zip(*[(spec, task, config, i) for i in indices])))
    else:
        results = [_search_lambda(spec, task, config, i) for i in indices]
    results.sort(key=lambda t: t[0])

    candidates, best_objectives = [], []
    for lam_index, (x, obj) in results:
        lam = float(config.lambdas[lam_index])
        ens = decode_ensemble(task, x, spec.d_A, config.num_w, config.num_z)
        r = entropic.rates(spec, ens)
        rate_b = r.primary_rate
        if task == "cq":
            rate_b = max(rate_b, 0.0)  # negative coherent information carries no qubits
        best_objectives.append((lam, obj))
        candidates.append(RatePoint(rate_b, r.charlie_rate_c, ens, lam))
    return Frontier(task, nondominated(candidates), best_objectives)


def upper_boundary(frontier):
    """Concave envelope of the time-shared, downward-closed region.

    Returns ``f(c)`` giving the largest rate_b achievable with rate_c >= c
    (``-inf`` beyond the largest rate_c).
    """
    pts = np.asarray(frontier.as_array() if isinstance(frontier, Frontier) else frontier, dtype=float)
    if pts.size == 0:
        return lambda c: -math.inf
    front = nondominated([RatePoint(float(b), float(c)) for b, c in pts.reshape(-1, 2)])
    hull = []  # (c, b) vertices of the upper hull
    for p in front:
        b, c = p.rate_b, p.rate_c
        while len(hull) >= 2:
            (c1, b1), (c2, b2) = hull[-2], hull[-1]
            if (c2 - c1) * (b - b1) - (b2 - b1) * (c - c1) >= 0:
                hull.pop()
            else:
                break
        hull.append((c, b))
    hc = np.array([h[0] for h in hull])
    hb = np.array([h[1] for h in hull])
    def f(c):
        if c > hc[-1] + 1e-15:
            return -math.inf
        if c <= hc[0]:
            return float(hb[0])
        return float(np.interp(c, hc, hb))

    return f


def coverage_shortfall(candidate, reference, tol: float) -> float:
    """Largest amount by which ``candidate``'s region misses a ``reference`` point.

    Each reference point may be approached within ``tol`` in rate_c; the
    return value is how far short rate_b falls after that slack. A result
    ``<= tol`` means every reference point is matched within ``tol`` per
    coordinate.
    """
    f = upper_boundary(candidate)
    ref = reference.as_array() if isinstance(reference, Frontier) else np.asarray(reference, dtype=float)
    worst = -math.inf
    for b, c in ref.reshape(-1, 2):
        worst = max(worst, b - f(max(c - tol, 0.0)))
    return worst
