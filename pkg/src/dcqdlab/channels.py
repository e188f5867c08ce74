"""Quantum channels: Kraus, process-matrix (chi) and Choi representations.

A channel on n qubits is represented throughout as a plain sequence of
2**n x 2**n complex Kraus operators.  The process matrix chi is the
coefficient matrix of the same map expanded in the Pauli-string basis,

    E(rho) = sum_mn chi[m, n] E_m rho E_n^dag,

with rows/columns ordered like `ops.pauli_strings(n)`.  chi is Hermitian,
positive semidefinite, and has trace <= 1 (= 1 for trace-preserving maps);
its diagonal and off-diagonal entries are referred to as the dynamical
population and coherence of the map.

The Choi matrix used here lives on (input factor) x (output factor):
C = sum_ij |i><j| (x) E(|i><j|), so trace-preservation reads
Tr_out C = identity on the input factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from . import ops
from .exceptions import (
    DimensionMismatchError,
    InvalidChannelError,
    NotCompletelyPositiveError,
)

__all__ = [
    "ChannelSpec",
    "ChiValidation",
    "amplitude_damping",
    "apply_channel",
    "bit_flip",
    "check_kraus",
    "chi_from_kraus",
    "choi_from_kraus",
    "compose",
    "depolarizing",
    "identity_channel",
    "kraus_from_chi",
    "kraus_from_choi",
    "kraus_from_spec",
    "kraus_tensor",
    "phase_damping",
    "phase_flip",
    "random_channel",
    "rotation",
    "validate_chi",
]


def check_kraus(
    kraus: Sequence[np.ndarray],
    trace_preserving: Optional[bool] = None,
    atol: float = 1e-10,
) -> list[np.ndarray]:
    """Validate a Kraus set and return it as a list of complex arrays.

    The set must be non-empty, square, of uniform power-of-two dimension,
    and trace non-increasing: sum K^dag K <= I.  With trace_preserving=True
    equality is required; with False, strict decrease somewhere.
    """
    mats = [np.asarray(k, dtype=complex) for k in kraus]
    if not mats:
        raise InvalidChannelError("empty Kraus set")
    d = mats[0].shape[0] if mats[0].ndim == 2 else 0
    for k in mats:
        if k.ndim != 2 or k.shape != (d, d):
            raise InvalidChannelError(f"Kraus operators must share a square shape, got {k.shape}")
    if d < 2 or d & (d - 1):
        raise InvalidChannelError(f"Kraus dimension {d} is not a power of 2")
    total = sum(k.conj().T @ k for k in mats)
    gap = np.eye(d) - total
    lo = ops.min_eigenvalue(gap)
    if lo < -atol:
        raise InvalidChannelError(
            f"Kraus set increases trace: min eig of (I - sum K^dag K) = {lo:.3e}"
        )
    if trace_preserving is True and float(np.max(np.abs(gap))) > atol:
        raise InvalidChannelError(
            f"Kraus set not trace preserving within {atol}: residual {np.max(np.abs(gap)):.3e}"
        )
    if trace_preserving is False and float(np.max(np.abs(gap))) <= atol:
        raise InvalidChannelError("Kraus set flagged non-trace-preserving but sums to identity")
    return mats


def n_qubits(kraus: Sequence[np.ndarray]) -> int:
    d = np.asarray(kraus[0]).shape[0]
    return int(round(math.log2(d)))


def chi_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Process matrix of a Kraus set.

    Expands each operator as K_i = sum_m c[i, m] E_m with
    c[i, m] = Tr(E_m K_i) / 2**n, then chi[m, n] = sum_i c[i, m] c[i, n]*.
    """
    mats = [np.asarray(k, dtype=complex) for k in kraus]
    n = n_qubits(mats)
    d = 2**n
    basis = ops.pauli_basis(n)
    c = np.array([[np.trace(e @ k) / d for e in basis] for k in mats])
    return c.T @ c.conj()


def kraus_from_chi(chi: np.ndarray, atol: float = 1e-9, keep_tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus set of a process matrix, via eigendecomposition of chi.

    Eigenvalues below `keep_tol` are dropped; eigenvalues below -`atol`
    mean the map is not completely positive and raise.
    """
    chi = np.asarray(chi, dtype=complex)
    dd = chi.shape[0]
    n = int(round(math.log2(dd) / 2))
    if chi.shape != (dd, dd) or 4**n != dd:
        raise DimensionMismatchError(f"chi shape {chi.shape} is not 4**n x 4**n")
    herm = (chi + chi.conj().T) / 2
    vals, vecs = np.linalg.eigh(herm)
    if vals.min() < -atol:
        raise NotCompletelyPositiveError(
            f"chi has eigenvalue {vals.min():.3e} below -{atol}; no Kraus form exists"
        )
    basis = ops.pauli_basis(n)
    out = []
    for lam, vec in zip(vals, vecs.T):
        if lam <= keep_tol:
            continue
        out.append(math.sqrt(lam) * np.tensordot(vec, basis, axes=1))
    if not out:
        # the all-zero map still needs one (zero) operator to stay a valid set
        out.append(np.zeros((2**n, 2**n), dtype=complex))
    return out


def apply_channel(
    kraus: Sequence[np.ndarray], rho: np.ndarray, ancilla_dim: int = 1
) -> np.ndarray:
    """Apply a channel to the leading (most significant) factor of rho.

    With ancilla_dim > 1 the channel acts as E (x) identity on a register
    of dimension (Kraus dim) * ancilla_dim; this is the "channel on the
    primary qubits only" extension used by every protocol here.
    """
    rho = np.asarray(rho, dtype=complex)
    mats = [np.asarray(k, dtype=complex) for k in kraus]
    d = mats[0].shape[0]
    total = d * ancilla_dim
    if rho.shape != (total, total):
        raise DimensionMismatchError(
            f"state dim {rho.shape} does not match channel dim {d} x ancilla {ancilla_dim}"
        )
    if ancilla_dim > 1:
        eye = np.eye(ancilla_dim)
        mats = [np.kron(k, eye) for k in mats]
    out = np.zeros_like(rho)
    for k in mats:
        out += k @ rho @ k.conj().T
    return out


def compose(first: Sequence[np.ndarray], second: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Kraus set of (second after first); count multiplies, no minimization."""
    a = [np.asarray(k, dtype=complex) for k in first]
    b = [np.asarray(k, dtype=complex) for k in second]
    if a[0].shape != b[0].shape:
        raise DimensionMismatchError(
            f"cannot compose channels of dims {a[0].shape} and {b[0].shape}"
        )
    return [k2 @ k1 for k2 in b for k1 in a]


def kraus_tensor(a: Sequence[np.ndarray], b: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Kraus set of the parallel (tensor) product channel a (x) b."""
    return [np.kron(ka, kb) for ka in a for kb in b]


@dataclass
class ChiValidation:
    """Validation report for a process matrix; numbers, not exceptions."""

    hermiticity_deviation: float
    min_eigenvalue: float
    trace: float
    tp_residual: Optional[float]
    hermitian_ok: bool
    psd_ok: bool
    trace_ok: bool
    tp_ok: Optional[bool]

    @property
    def all_ok(self) -> bool:
        checks = [self.hermitian_ok, self.psd_ok, self.trace_ok]
        if self.tp_ok is not None:
            checks.append(self.tp_ok)
        return all(checks)


def validate_chi(
    chi: np.ndarray,
    trace_preserving: bool = False,
    hermitian_atol: float = 1e-10,
    eig_floor: float = -1e-9,
    trace_atol: float = 1e-10,
    tp_atol: float = 1e-10,
) -> ChiValidation:
    """Report how far chi is from a valid (optionally TP) process matrix.

    TP residual is the max deviation of sum_mn chi[m, n] E_n E_m from the
    identity; it is only computed when trace_preserving is requested.
    """
    chi = np.asarray(chi, dtype=complex)
    dev = ops.hermiticity_deviation(chi)
    lo = ops.min_eigenvalue(chi)
    tr = float(np.trace(chi).real)
    tp_residual = None
    tp_ok = None
    if trace_preserving:
        n = int(round(math.log2(chi.shape[0]) / 2))
        basis = ops.pauli_basis(n)
        acc = np.einsum("mn,nab,mbc->ac", chi, basis, basis)
        tp_residual = float(np.max(np.abs(acc - np.eye(2**n))))
        tp_ok = tp_residual <= tp_atol
    return ChiValidation(
        hermiticity_deviation=dev,
        min_eigenvalue=lo,
        trace=tr,
        tp_residual=tp_residual,
        hermitian_ok=dev <= hermitian_atol,
        psd_ok=lo >= eig_floor,
        trace_ok=tr <= 1.0 + trace_atol,
        tp_ok=tp_ok,
    )


# ---------------------------------------------------------------------------
# Choi form and random channels
# ---------------------------------------------------------------------------


def choi_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) E(|i><j|) of a Kraus set."""
    mats = [np.asarray(k, dtype=complex) for k in kraus]
    d = mats[0].shape[0]
    # vec with the input index major: v[i*d + o] = K[o, i]
    vecs = [k.T.reshape(-1) for k in mats]
    return sum(np.outer(v, v.conj()) for v in vecs)


def kraus_from_choi(choi: np.ndarray, atol: float = 1e-9, keep_tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus set of a Choi matrix (input-major convention of this module)."""
    choi = np.asarray(choi, dtype=complex)
    dd = choi.shape[0]
    d = int(round(math.sqrt(dd)))
    if choi.shape != (dd, dd) or d * d != dd:
        raise DimensionMismatchError(f"Choi shape {choi.shape} is not d**2 x d**2")
    vals, vecs = np.linalg.eigh((choi + choi.conj().T) / 2)
    if vals.min() < -atol:
        raise NotCompletelyPositiveError(
            f"Choi matrix has eigenvalue {vals.min():.3e} below -{atol}"
        )
    out = []
    for lam, vec in zip(vals, vecs.T):
        if lam <= keep_tol:
            continue
        out.append(math.sqrt(lam) * vec.reshape(d, d).T)
    if not out:
        out.append(np.zeros((d, d), dtype=complex))
    return out


def random_channel(
    n: int,
    rank: Optional[int] = None,
    trace_preserving: bool = True,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
) -> list[np.ndarray]:
    """Random completely positive map on n qubits, as a Kraus set.

    Draws a Ginibre matrix G and forms the (PSD) Choi candidate G G^dag.
    The trace-preserving variant whitens the input marginal so that
    Tr_out C = I exactly; the non-TP variant rescales so the map is trace
    non-increasing with a random overall survival weight.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    d = 2**n
    r = rank if rank is not None else d * d
    if not 1 <= r <= d * d:
        raise InvalidChannelError(f"Kraus rank must be in 1..{d * d}, got {r}")
    g = rng.normal(size=(d * d, r)) + 1j * rng.normal(size=(d * d, r))
    w = g @ g.conj().T
    marginal = ops.partial_trace(w, keep=[0], dims=(d, d))
    if trace_preserving:
        vals, vecs = np.linalg.eigh(marginal)
        inv_sqrt = vecs @ np.diag(vals**-0.5) @ vecs.conj().T
        whiten = np.kron(inv_sqrt, np.eye(d))
        choi = whiten @ w @ whiten.conj().T
    else:
        top = float(np.linalg.eigvalsh(marginal).max())
        survival = rng.uniform(0.3, 0.95)
        choi = w * (survival / top)
    return kraus_from_choi(choi)


# ---------------------------------------------------------------------------
# Named single-qubit channels
# ---------------------------------------------------------------------------


def identity_channel(n: int = 1) -> list[np.ndarray]:
    return [np.eye(2**n, dtype=complex)]


def bit_flip(p: float) -> list[np.ndarray]:
    """X applied with probability p."""
    _check_probability("p", p)
    return [math.sqrt(1 - p) * ops.IDENTITY_2, math.sqrt(p) * ops.PAULI_X]


def phase_flip(p: float) -> list[np.ndarray]:
    """Z applied with probability p."""
    _check_probability("p", p)
    return [math.sqrt(1 - p) * ops.IDENTITY_2, math.sqrt(p) * ops.PAULI_Z]


def depolarizing(p: float) -> list[np.ndarray]:
    """Each of X, Y, Z applied with probability p/4 (population 1 - 3p/4)."""
    _check_probability("p", p)
    return [
        math.sqrt(1 - 3 * p / 4) * ops.IDENTITY_2,
        math.sqrt(p / 4) * ops.PAULI_X,
        math.sqrt(p / 4) * ops.PAULI_Y,
        math.sqrt(p / 4) * ops.PAULI_Z,
    ]


def amplitude_damping(
    gamma: Optional[float] = None,
    t: Optional[float] = None,
    T1: Optional[float] = None,
) -> list[np.ndarray]:
    """Energy relaxation |1> -> |0>, by decay probability or by (t, T1).

    The duration form uses gamma = 1 - exp(-t/T1), so the |00><11|
    off-diagonal of an entangled pair picks up exp(-t/(2 T1)).
    """
    gamma = _rate_from_args("gamma", gamma, t, T1, "T1")
    return [
        np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex),
    ]


def phase_damping(
    lam: Optional[float] = None,
    t: Optional[float] = None,
    T2: Optional[float] = None,
) -> list[np.ndarray]:
    """Pure dephasing, by rate lam or by (t, T2).

    The duration form uses lam = 1 - exp(-t/T2), which multiplies
    coherences by exp(-t/(2 T2)).
    """
    lam = _rate_from_args("lambda", lam, t, T2, "T2")
    return [
        np.array([[1, 0], [0, math.sqrt(1 - lam)]], dtype=complex),
        np.array([[0, 0], [0, math.sqrt(lam)]], dtype=complex),
    ]


def rotation(axis: str, angle: float) -> list[np.ndarray]:
    """Unitary channel exp(-i angle P/2) for P in {X, Y, Z}."""
    try:
        p = {"x": ops.PAULI_X, "y": ops.PAULI_Y, "z": ops.PAULI_Z}[axis.lower()]
    except KeyError:
        raise InvalidChannelError(f"rotation axis must be x, y or z, got {axis!r}") from None
    u = math.cos(angle / 2) * ops.IDENTITY_2 - 1j * math.sin(angle / 2) * p
    return [u]


def _check_probability(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and 0.0 <= value <= 1.0):
        raise InvalidChannelError(f"{name} must be a probability in [0, 1], got {value!r}")


def _rate_from_args(
    name: str,
    direct: Optional[float],
    t: Optional[float],
    tc: Optional[float],
    tc_name: str,
) -> float:
    if direct is not None:
        if t is not None or tc is not None:
            raise InvalidChannelError(f"give either {name} or (t, {tc_name}), not both")
        _check_probability(name, direct)
        return float(direct)
    if t is None or tc is None:
        raise InvalidChannelError(f"need {name} or both t and {tc_name}")
    if tc <= 0:
        raise InvalidChannelError(f"{tc_name} must be positive, got {tc!r}")
    if t < 0:
        raise InvalidChannelError(f"duration t must be non-negative, got {t!r}")
    return 1.0 - math.exp(-t / tc)


# ---------------------------------------------------------------------------
# Declarative channel specifications (the CLI ingestion boundary)
# ---------------------------------------------------------------------------

CHANNEL_KINDS = (
    "unitary",
    "bit_flip",
    "phase_flip",
    "depolarizing",
    "amplitude_damping",
    "phase_damping",
    "composed",
    "explicit_kraus",
    "identity",
)


@dataclass(eq=False)
class ChannelSpec:
    """Declarative description of a ground-truth channel.

    `params` carries scalar parameters (probabilities, angles, durations and
    time constants in one consistent arbitrary time unit); `operators`
    carries explicit matrices for the unitary and explicit_kraus kinds;
    `stages` carries sub-specs for the composed kind (applied in order).
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    operators: Optional[tuple[np.ndarray, ...]] = None
    stages: Optional[tuple["ChannelSpec", ...]] = None


def kraus_from_spec(spec: ChannelSpec) -> list[np.ndarray]:
    """Build the Kraus set a ChannelSpec describes (single qubit unless the
    spec carries explicit multi-qubit operators)."""
    kind = spec.kind
    params = dict(spec.params)
    if kind == "identity":
        return identity_channel(int(params.pop("n", 1)))
    if kind == "bit_flip":
        return bit_flip(_take(params, "p", kind))
    if kind == "phase_flip":
        return phase_flip(_take(params, "p", kind))
    if kind == "depolarizing":
        return depolarizing(_take(params, "p", kind))
    if kind == "amplitude_damping":
        return amplitude_damping(
            gamma=params.get("gamma"), t=params.get("t"), T1=params.get("T1")
        )
    if kind == "phase_damping":
        return phase_damping(lam=params.get("lambda"), t=params.get("t"), T2=params.get("T2"))
    if kind == "unitary":
        if spec.operators is not None:
            if len(spec.operators) != 1:
                raise InvalidChannelError("unitary spec takes exactly one matrix")
            u = np.asarray(spec.operators[0], dtype=complex)
            d = u.shape[0]
            if u.ndim != 2 or u.shape != (d, d) or np.max(np.abs(u.conj().T @ u - np.eye(d))) > 1e-10:
                raise InvalidChannelError("unitary matrix is not unitary within 1e-10")
            return [u]
        axis = params.pop("axis", None)
        angle = params.pop("angle", None)
        if axis is None or angle is None:
            raise InvalidChannelError("unitary spec needs a matrix or axis and angle")
        return rotation(str(axis), float(angle))
    if kind == "explicit_kraus":
        if not spec.operators:
            raise InvalidChannelError("explicit_kraus spec carries no operators")
        return check_kraus(spec.operators)
    if kind == "composed":
        if not spec.stages:
            raise InvalidChannelError("composed spec carries no stages")
        kraus = kraus_from_spec(spec.stages[0])
        for stage in spec.stages[1:]:
            kraus = compose(kraus, kraus_from_spec(stage))
        return kraus
    raise InvalidChannelError(f"unknown channel kind {kind!r} (known: {', '.join(CHANNEL_KINDS)})")


def as_kraus(channel, n: Optional[int] = None) -> list[np.ndarray]:
    """Normalize a channel argument (spec or Kraus sequence) to a Kraus list.

    When `n` is given, a single-qubit set is extended to n qubits as an
    i.i.d. tensor product; an explicit n-qubit set is passed through.
    """
    if isinstance(channel, ChannelSpec):
        kraus = kraus_from_spec(channel)
    else:
        kraus = [np.asarray(k, dtype=complex) for k in channel]
    if n is not None:
        have = n_qubits(kraus)
        if have == n:
            return kraus
        if have == 1 and n > 1:
            out = kraus
            for _ in range(n - 1):
                out = kraus_tensor(out, kraus)
            return out
        raise DimensionMismatchError(f"channel acts on {have} qubits, expected {n}")
    return kraus


def _take(params: dict, key: str, kind: str) -> float:
    try:
        return float(params.pop(key))
    except KeyError:
        raise InvalidChannelError(f"{kind} spec needs parameter {key!r}") from None
