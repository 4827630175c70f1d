"""Entropic rate functionals for the three broadcast tasks.

All logarithms are base 2. Classical labels are never materialized as
block-diagonal operators: conditional quantities are label-weighted sums over
small per-label states. Because the channel is an isometry, the output of a
pure input is pure on BC (and on RBC for purified inputs), so
``H(B) = H(C)`` per pure-input label and ``H(RB) = H(C)`` per purified label.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence

import numpy as np

from . import linalg
from .channel import HadamardChannelSpec, _bob_map, _charlie_map, apply_isometry, check_density
from .errors import InvalidEnsemble, InvalidState

TASKS = ("cc", "cq", "eac")

ZERO_EIGENVALUE = 1e-12
NEGATIVE_EIGENVALUE = -1e-9
ENTROPY_TRACE_TOL = 1e-8
PROB_TOL = 1e-10
NORM_TOL = 1e-10


@dataclass(frozen=True)
class EnsembleEntry:
    w: Hashable
    z: Optional[Hashable]
    p: float
    state: np.ndarray


@dataclass(frozen=True)
class InputEnsemble:
    """Labelled pure-state ensemble.

    ``cc`` entries carry ``(w, z)`` and a pure state on A. ``cq``/``eac``
    entries carry ``w`` only and a pure state on R (x) A with ``d_R = d_A``
    (R is the first tensor factor).
    """

    task: str
    entries: Sequence[EnsembleEntry]

    def __post_init__(self):
        task = str(self.task).lower()
        if task not in TASKS:
            raise InvalidEnsemble(f"unknown task {self.task!r}")
        entries = tuple(
            EnsembleEntry(e.w, e.z, float(e.p), np.asarray(e.state, dtype=complex).ravel())
            for e in self.entries
        )
        object.__setattr__(self, "task", task)
        object.__setattr__(self, "entries", entries)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.p for e in self.entries])

    def validate(self, d_A: int) -> "InputEnsemble":
        if not self.entries:
            raise InvalidEnsemble("ensemble has no entries")
        p = self.probabilities
        if np.any(p < 0):
            raise InvalidEnsemble("negative probability in ensemble")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise InvalidEnsemble(f"probabilities sum to {p.sum():.12g}, expected 1")
        want = d_A if self.task == "cc" else d_A * d_A
        seen = set()
        for i, e in enumerate(self.entries):
            if e.state.size != want:
                raise InvalidEnsemble(f"entry {i}: state has length {e.state.size}, expected {want}")
            n = np.linalg.norm(e.state)
            if abs(n - 1.0) > NORM_TOL:
                raise InvalidEnsemble(f"entry {i}: state has norm {n:.12g}, expected 1")
            if self.task == "cc":
                if e.z is None:
                    raise InvalidEnsemble(f"entry {i}: cc entries need a z label")
                label = (e.w, e.z)
            else:
                if e.z is not None:
                    raise InvalidEnsemble(f"entry {i}: {self.task} entries carry w only")
                label = e.w
            if label in seen:
                raise InvalidEnsemble(f"entry {i}: duplicate label {label!r}")
            seen.add(label)
        return self


@dataclass(frozen=True)
class RateTriple:
    """Rates in bits per channel use.

    ``primary_rate`` is I(Z;B|W), I(R>BW) or I(R;B|W) by task;
    ``charlie_rate_c`` is I(W;C). ``charlie_rate_b`` = I(W;B) and
    ``sum_rate`` = I(Z;B) (cc only) are diagnostics.
    """

    primary_rate: float
    charlie_rate_c: float
    charlie_rate_b: float
    sum_rate: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "primary_rate": self.primary_rate,
            "charlie_rate_c": self.charlie_rate_c,
            "charlie_rate_b": self.charlie_rate_b,
            "sum_rate": self.sum_rate,
        }


def _entropy_of_spectrum(ev: np.ndarray) -> float:
    if ev.size and ev[0] < NEGATIVE_EIGENVALUE:
        raise InvalidState(f"negative eigenvalue {ev[0]:.3e} in density matrix")
    ev = ev[ev > ZERO_EIGENVALUE]
    return float(-np.sum(ev * np.log2(ev)))


def von_neumann_entropy(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidState(f"density matrix must be square, got {rho.shape}")
    if not linalg.is_hermitian(rho):
        raise InvalidState("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > ENTROPY_TRACE_TOL:
        raise InvalidState(f"density matrix has trace {tr:.12g}")
    return _entropy_of_spectrum(linalg.hermitian_eigenvalues(rho))


def holevo_information(probabilities, states) -> float:
    p = np.asarray(probabilities, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > PROB_TOL:
        raise InvalidState("probabilities must be nonnegative and sum to 1")
    states = [check_density(s) for s in states]
    if len(states) != p.size:
        raise InvalidState("one state per probability required")
    if len({s.shape for s in states}) > 1:
        raise InvalidState("states must share a dimension")
    avg = sum(pi * s for pi, s in zip(p, states))
    return von_neumann_entropy(avg) - float(sum(pi * von_neumann_entropy(s) for pi, s in zip(p, states) if pi > 0))


def _mixture_entropy(weights, mats) -> float:
    total = sum(weights)
    return von_neumann_entropy(sum(w * m for w, m in zip(weights, mats)) / total)


def pure_output_entropy(spec: HadamardChannelSpec, v) -> float:
    """H(B) = H(C) of the channel output for the pure input ``v`` on A.

    Evaluated on whichever marginal is smaller.
    """
    sigma = linalg.projector(v)
    if spec.d_C <= spec.d_B:
        return von_neumann_entropy(_charlie_map(spec, sigma))
    return von_neumann_entropy(_bob_map(spec, sigma))


def reduced_input(state_RA, d_A: int) -> np.ndarray:
    """Tr_R of a pure vector on R (x) A."""
    m = np.asarray(state_RA, dtype=complex).reshape(-1, d_A)
    return m.T @ m.conj()


def _by_label(entries, key):
    groups = defaultdict(list)
    for e in entries:
        groups[key(e)].append(e)
    return groups


def _w_groups(ensemble):
    # preserve first-seen order so floating-point sums are reproducible
    return _by_label(ensemble.entries, lambda e: e.w)


def _holevo_over_w(spec, groups, mapper) -> tuple[float, float]:
    """I(W;B), I(W;C) from per-w input states ``mapper(entry) -> sigma_A``."""
    pw, rho_b, rho_c = [], [], []
    for es in groups.values():
        pws = sum(e.p for e in es)
        if pws <= 0:
            continue
        sig = sum(e.p * mapper(e) for e in es) / pws
        pw.append(pws)
        rho_b.append(_bob_map(spec, sig))
        rho_c.append(_charlie_map(spec, sig))
    i_wb = _mixture_entropy(pw, rho_b) - sum(p * von_neumann_entropy(r) for p, r in zip(pw, rho_b))
    i_wc = _mixture_entropy(pw, rho_c) - sum(p * von_neumann_entropy(r) for p, r in zip(pw, rho_c))
    return i_wb, i_wc


def cc_rates(spec: HadamardChannelSpec, ensemble: InputEnsemble) -> RateTriple:
    if ensemble.task != "cc":
        raise InvalidEnsemble(f"cc_rates needs a cc ensemble, got {ensemble.task}")
    ensemble.validate(spec.d_A)
    proj = {id(e): linalg.projector(e.state) for e in ensemble.entries}
    h_pure = {id(e): pure_output_entropy(spec, e.state) for e in ensemble.entries}

    groups = _w_groups(ensemble)
    primary = 0.0
    for es in groups.values():
        pws = sum(e.p for e in es)
        if pws <= 0:
            continue
        rho_bw = sum(e.p * _bob_map(spec, proj[id(e)]) for e in es) / pws
        primary += pws * von_neumann_entropy(rho_bw) - sum(e.p * h_pure[id(e)] for e in es)
    i_wb, i_wc = _holevo_over_w(spec, groups, lambda e: proj[id(e)])

    z_groups = _by_label(ensemble.entries, lambda e: e.z)
    pz, rho_bz = [], []
    for es in z_groups.values():
        pzs = sum(e.p for e in es)
        if pzs <= 0:
            continue
        pz.append(pzs)
        rho_bz.append(sum(e.p * _bob_map(spec, proj[id(e)]) for e in es) / pzs)
    i_zb = _mixture_entropy(pz, rho_bz) - sum(p * von_neumann_entropy(r) for p, r in zip(pz, rho_bz))
    return RateTriple(primary, i_wc, i_wb, i_zb)


def joint_label_information(spec: HadamardChannelSpec, ensemble: InputEnsemble) -> float:
    """I(WZ;B) for a cc ensemble: output entropy minus the pure-label entropies."""
    ensemble.validate(spec.d_A)
    rho_b = sum(e.p * _bob_map(spec, linalg.projector(e.state)) for e in ensemble.entries)
    return von_neumann_entropy(rho_b) - sum(e.p * pure_output_entropy(spec, e.state) for e in ensemble.entries)


def _purified_rates(spec, ensemble, with_reference: bool) -> RateTriple:
    ensemble.validate(spec.d_A)
    groups = _w_groups(ensemble)
    primary = 0.0
    for es in groups.values():
        for e in es:
            if e.p <= 0:
                continue
            sig = reduced_input(e.state, spec.d_A)
            h_b = von_neumann_entropy(_bob_map(spec, sig))
            h_rb = von_neumann_entropy(_charlie_map(spec, sig))  # purity of RBC
            term = h_b - h_rb
            if with_reference:
                term += von_neumann_entropy(sig)  # H(R) = H(A) for a pure RA state
            primary += e.p * term
    i_wb, i_wc = _holevo_over_w(spec, groups, lambda e: reduced_input(e.state, spec.d_A))
    return RateTriple(primary, i_wc, i_wb, None)


def cq_rates(spec: HadamardChannelSpec, ensemble: InputEnsemble) -> RateTriple:
    if ensemble.task != "cq":
        raise InvalidEnsemble(f"cq_rates needs a cq ensemble, got {ensemble.task}")
    return _purified_rates(spec, ensemble, with_reference=False)


def eac_rates(spec: HadamardChannelSpec, ensemble: InputEnsemble) -> RateTriple:
    if ensemble.task != "eac":
        raise InvalidEnsemble(f"eac_rates needs an eac ensemble, got {ensemble.task}")
    return _purified_rates(spec, ensemble, with_reference=True)


def rates(spec: HadamardChannelSpec, ensemble: InputEnsemble) -> RateTriple:
    return {"cc": cc_rates, "cq": cq_rates, "eac": eac_rates}[ensemble.task](spec, ensemble)


def explicit_rb_entropy(spec: HadamardChannelSpec, state_RA) -> float:
    """H(RB) from the explicit R (x) B marginal of the purified channel output.

    The long way round: only used to check the purity shortcut.
    """
    d = spec.d_A
    out = apply_isometry(spec, state_RA, d_R=d)
    rho = np.outer(out, out.conj())
    rho_rb = linalg.partial_trace(rho, (d, spec.d_B, spec.d_C), keep=(0, 1))
    return von_neumann_entropy(rho_rb)
