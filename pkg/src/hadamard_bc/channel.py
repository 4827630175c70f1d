"""Hadamard broadcast channels A -> BC.

A channel is fixed by rank-one POVM vectors ``phi[x]`` on the input and the
states ``psi[x]`` that Charlie receives for outcome ``x``. Bob's output basis
is indexed by ``x``, so ``d_B`` equals the number of POVM vectors even when
they are linearly dependent. Its action on an input ``sigma`` is

    sum_{x,y} <phi^x|sigma|phi^y> |x><y|_B (x) |psi^x><psi^y|_C

and the isometric extension is ``W = sum_x |x>_B |psi^x>_C <phi^x|_A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidDims, InvalidState, ValidationError

COMPLETENESS_TOL = 1e-9
NORM_TOL = 1e-10
STATE_TOL = 1e-10
PSD_TOL = 1e-10
DIAGONAL_TOL = 1e-10

DESIGNATORS = ("to_bob", "to_charlie", "degraded")


@dataclass(frozen=True)
class HadamardChannelSpec:
    """Defining data of a Hadamard broadcast channel.

    ``povm_vectors`` has shape ``(N, d_A)`` and ``output_states`` shape
    ``(N, d_C)``; row ``x`` of each belongs to outcome ``x``.
    """

    povm_vectors: np.ndarray
    output_states: np.ndarray

    def __post_init__(self):
        phi = np.array(self.povm_vectors, dtype=complex, ndmin=2)
        psi = np.array(self.output_states, dtype=complex, ndmin=2)
        if phi.ndim != 2 or psi.ndim != 2:
            raise InvalidDims("povm_vectors and output_states must be 2-d")
        if phi.shape[0] < 1:
            raise InvalidDims("need at least one POVM vector")
        if phi.shape[0] != psi.shape[0]:
            raise InvalidDims(
                f"{phi.shape[0]} POVM vectors but {psi.shape[0]} output states"
            )
        phi.setflags(write=False)
        psi.setflags(write=False)
        object.__setattr__(self, "povm_vectors", phi)
        object.__setattr__(self, "output_states", psi)

    @property
    def d_A(self) -> int:
        return self.povm_vectors.shape[1]

    @property
    def d_B(self) -> int:
        return self.povm_vectors.shape[0]

    @property
    def d_C(self) -> int:
        return self.output_states.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self.povm_vectors.shape[0]

    @property
    def measurement(self) -> np.ndarray:
        """Rows ``<phi^x|`` so that ``measurement @ v`` gives the amplitudes ``<phi^x|v>``."""
        return self.povm_vectors.conj()

    @property
    def gram(self) -> np.ndarray:
        """``gram[x, y] = <psi^x|psi^y>``."""
        psi = self.output_states
        return psi.conj() @ psi.T

    def require_valid(self) -> "HadamardChannelSpec":
        report = validate_spec(self)
        if not report.passed:
            raise ValidationError(report.problems)
        return self


@dataclass(frozen=True)
class ValidationReport:
    completeness_residual: float
    state_norms: tuple
    checks: dict
    problems: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = [f"completeness_residual={self.completeness_residual:.3e}"]
        out += [f"state_norm[{i}]={n:.12f}" for i, n in enumerate(self.state_norms)]
        out += [f"{name}={'pass' if ok else 'fail'}" for name, ok in self.checks.items()]
        out += [f"problem: {p}" for p in self.problems]
        out.append(f"result={'pass' if self.passed else 'fail'}")
        return out


def validate_spec(spec: HadamardChannelSpec) -> ValidationReport:
    phi = spec.povm_vectors
    frame = phi.T @ phi.conj()  # sum_x |phi^x><phi^x|
    diff = np.abs(frame - np.eye(spec.d_A))
    residual = float(diff.max())
    norms = tuple(float(n) for n in np.linalg.norm(spec.output_states, axis=1))

    problems = []
    complete = residual <= COMPLETENESS_TOL
    if not complete:
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        problems.append(
            f"POVM completeness residual {residual:.6g} at entry ({i},{j}) exceeds {COMPLETENESS_TOL:g}"
        )
    unit = True
    for i, n in enumerate(norms):
        if abs(n - 1.0) > NORM_TOL:
            unit = False
            problems.append(f"output state {i} has norm {n:.6g}, expected 1")
    checks = {
        "nonempty": spec.n_outcomes >= 1,
        "povm_complete": complete,
        "output_states_unit": unit,
    }
    return ValidationReport(residual, norms, checks, problems)


def isometry(spec: HadamardChannelSpec) -> np.ndarray:
    """Isometric extension as a ``(d_B * d_C, d_A)`` matrix, B the outer factor."""
    n, d_c = spec.n_outcomes, spec.d_C
    w = np.einsum("xb,xc,xa->bca", np.eye(n), spec.output_states, spec.measurement)
    return w.reshape(n * d_c, spec.d_A)


def isometry_residual(spec: HadamardChannelSpec) -> float:
    w = isometry(spec)
    return float(np.max(np.abs(w.conj().T @ w - np.eye(spec.d_A))))


def check_density(rho, dim: int | None = None, *, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``rho`` as an array or raise :class:`InvalidState`."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidState(f"density matrix must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise InvalidState(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    if linalg.hermiticity_residual(rho) > linalg.HERMITIAN_TOL:
        raise InvalidState("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"density matrix has trace {tr.real:.12g}, expected 1")
    lo = linalg.hermitian_eigenvalues(rho)[0]
    if lo < -PSD_TOL:
        raise InvalidState(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


# Linear maps without state checks; Choi construction feeds them |i><j|.

def _amplitudes(spec, sigma):
    m = spec.measurement
    return m @ sigma @ m.conj().T  # <phi^x|sigma|phi^y>


def _broadcast_map(spec, sigma):
    g = _amplitudes(spec, sigma)
    psi = spec.output_states
    n, d_c = spec.n_outcomes, spec.d_C
    out = np.einsum("xy,xc,yd->xcyd", g, psi, psi.conj())
    return out.reshape(n * d_c, n * d_c)


def _bob_map(spec, sigma):
    return _amplitudes(spec, sigma) * spec.gram.T


def _charlie_map(spec, sigma):
    p = np.diagonal(_amplitudes(spec, sigma))
    psi = spec.output_states
    return (psi.T * p) @ psi.conj()


def _measure_map(rho_b):
    return np.diag(np.diagonal(rho_b))


def _prepare_map(states, rho_y):
    p = np.diagonal(rho_y)
    return (states.T * p) @ states.conj()


def apply_broadcast(spec: HadamardChannelSpec, sigma_A) -> np.ndarray:
    sigma = check_density(sigma_A, spec.d_A)
    return _broadcast_map(spec, sigma)


def apply_isometry(spec: HadamardChannelSpec, state_RA, d_R: int | None = None) -> np.ndarray:
    """Send the A factor of a pure vector on R (x) A through the isometry.

    Returns the pure vector on R (x) B (x) C.
    """
    v = np.asarray(state_RA, dtype=complex).ravel()
    if v.size % spec.d_A:
        raise InvalidDims(f"vector length {v.size} is not a multiple of d_A={spec.d_A}")
    d_R = v.size // spec.d_A if d_R is None else d_R
    if d_R * spec.d_A != v.size:
        raise InvalidDims(f"vector length {v.size} != d_R * d_A")
    return (v.reshape(d_R, spec.d_A) @ isometry(spec).T).ravel()


def reduce_to_bob(spec: HadamardChannelSpec, sigma_A) -> np.ndarray:
    sigma = check_density(sigma_A, spec.d_A)
    return _bob_map(spec, sigma)


def reduce_to_charlie(spec: HadamardChannelSpec, sigma_A) -> np.ndarray:
    sigma = check_density(sigma_A, spec.d_A)
    return _charlie_map(spec, sigma)


def apply_measure(spec: HadamardChannelSpec, rho_B) -> np.ndarray:
    rho = np.asarray(rho_B, dtype=complex)
    if rho.shape != (spec.d_B, spec.d_B):
        raise InvalidDims(f"expected a {spec.d_B}x{spec.d_B} state on B, got {rho.shape}")
    return _measure_map(rho)


def apply_prepare(spec: HadamardChannelSpec, rho_Y, states=None) -> np.ndarray:
    """Prepare ``psi^x`` with the weight of ``|x><x|`` in a diagonal ``rho_Y``.

    ``states`` overrides the prepared vectors; used to build deliberately
    mismatched degrading maps.
    """
    rho = np.asarray(rho_Y, dtype=complex)
    if rho.shape != (spec.d_B, spec.d_B):
        raise InvalidDims(f"expected a {spec.d_B}x{spec.d_B} state on Y, got {rho.shape}")
    if np.max(np.abs(rho - np.diag(np.diagonal(rho))), initial=0.0) > DIAGONAL_TOL:
        raise InvalidState("preparation input must be diagonal in the outcome basis")
    states = spec.output_states if states is None else np.asarray(states, dtype=complex)
    return _prepare_map(states, rho)


@dataclass(frozen=True)
class ChoiMatrix:
    matrix: np.ndarray
    in_dim: int
    out_dim: int


def _channel_map(designator, spec, prepare_states=None):
    if designator == "to_bob":
        return lambda s: _bob_map(spec, s)
    if designator == "to_charlie":
        return lambda s: _charlie_map(spec, s)
    if designator == "degraded":
        states = spec.output_states if prepare_states is None else np.asarray(prepare_states, dtype=complex)
        return lambda s: _prepare_map(states, _measure_map(_bob_map(spec, s)))
    raise ValueError(f"unknown channel designator {designator!r}; expected one of {DESIGNATORS}")


def choi_of(designator: str, spec: HadamardChannelSpec, prepare_states=None) -> ChoiMatrix:
    """Normalized Choi state ``(id (x) N)(Phi+)`` with the input copy first."""
    f = _channel_map(designator, spec, prepare_states)
    d = spec.d_A
    blocks = []
    for i in range(d):
        row = []
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            row.append(f(e))
        blocks.append(row)
    m = np.block(blocks) / d
    return ChoiMatrix(m, d, m.shape[0] // d)


def verify_degradability(spec: HadamardChannelSpec, prepare_states=None) -> float:
    """Trace distance between the Choi states of Charlie's channel and of
    prepare o measure o (channel to Bob)."""
    direct = choi_of("to_charlie", spec)
    degraded = choi_of("degraded", spec, prepare_states)
    return linalg.trace_distance(direct.matrix, degraded.matrix)
