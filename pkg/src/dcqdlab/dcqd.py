"""Direct characterization of quantum dynamics on n primary qubits.

Each primary qubit is paired with one ancilla qubit.  A configuration
assigns one of four settings to every pair:

======== ============================ =================== ===============
setting  input state (pair)           stabilizer          normalizer
======== ============================ =================== ===============
pop      (|00> + |11>)/sqrt(2)        Z^A Z^B, X^A X^B    (joint BSM)
coh_z    a|00> + b|11>                Z^A Z^B             X^A X^B
coh_x    a|+>|0> + b|->|1>            X^A Z^B             Z^A X^B
coh_y    a|+i>|0> + b|-i>|1>          Y^A Z^B             Z^A X^B
======== ============================ =================== ===============

The measurement in every setting is the Bell-state measurement conjugated
by the preparation rotation V on the primary qubit (V = I, I, H, S H).
Its 4 outcomes per pair are labelled like the Bell basis, i.e. outcome
digit k carries the (stabilizer, normalizer) eigenvalue pair
(+,+), (-,+), (-,-), (+,-) for k = 0..3.

The pop setting returns the full diagonal of chi in one measurement; each
coh setting returns two off-diagonal entries of chi (four real numbers) in
one measurement.  All 4**n configurations together determine every entry,
either through the closed-form route below (n = 1) or through stacked
linear inversion (any n), which is the normative reconstruction path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import channels, inversion, ops
from .exceptions import (
    DimensionMismatchError,
    IllPosedConfigurationError,
    InvalidConfigurationError,
)

POP = "pop"
COH_Z = "coh_z"
COH_X = "coh_x"
COH_Y = "coh_y"
SETTINGS = (POP, COH_Z, COH_X, COH_Y)

PREP_ROTATIONS = {
    POP: ops.IDENTITY_2,
    COH_Z: ops.IDENTITY_2,
    COH_X: ops.HADAMARD,
    COH_Y: ops.PHASE_S @ ops.HADAMARD,
}

# Pauli letters (A, B) of the commuting measurement pair per setting.
STABILIZER_LETTERS = {POP: (3, 3), COH_Z: (3, 3), COH_X: (1, 3), COH_Y: (2, 3)}
NORMALIZER_LETTERS = {POP: (1, 1), COH_Z: (1, 1), COH_X: (3, 1), COH_Y: (3, 1)}

# Eigenvalues (stabilizer, normalizer) carried by outcome digit 0..3.
OUTCOME_EIGENVALUES = ((+1, +1), (-1, +1), (-1, -1), (+1, -1))

# Paper-independent well-conditioned default: both Re and Im of
# alpha * conj(beta) are nonzero and |alpha| != |beta|.
DEFAULT_ALPHA = complex(math.cos(math.pi / 8))
DEFAULT_BETA = complex(math.sin(math.pi / 8)) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))


def _conjugation_permutation(v: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Permutation and signs with V^dag E_m V = sign[m] * E_perm[m].

    Holds for every Clifford rotation used here; fails loudly otherwise.
    """
    perm = []
    signs = []
    for m in range(4):
        t = v.conj().T @ ops.PAULIS[m] @ v
        for k in range(4):
            for s in (1, -1):
                if np.allclose(t, s * ops.PAULIS[k], atol=1e-12):
                    perm.append(k)
                    signs.append(s)
                    break
            else:
                continue
            break
        else:
            raise ValueError("rotation does not permute the Pauli basis")
    return tuple(perm), tuple(signs)


FRAME_PERM = {}
FRAME_SIGN = {}
for _setting in (COH_Z, COH_X, COH_Y):
    FRAME_PERM[_setting], FRAME_SIGN[_setting] = _conjugation_permutation(
        PREP_ROTATIONS[_setting]
    )


@dataclass(frozen=True)
class Configuration:
    """One experimental configuration: a setting per pair plus amplitudes.

    The (alpha, beta) pair is shared by every coh-type pair of the
    configuration; pop pairs always use the maximally entangled state.
    Construction performs only structural checks; the amplitude constraints
    of coherence settings are enforced by `validate_configuration`.
    """

    settings: tuple[str, ...]
    alpha: complex = DEFAULT_ALPHA
    beta: complex = DEFAULT_BETA

    def __post_init__(self):
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if not self.settings:
            raise InvalidConfigurationError("configuration needs at least one pair")
        bad = [s for s in self.settings if s not in SETTINGS]
        if bad:
            raise InvalidConfigurationError(f"unknown settings {bad}; valid: {SETTINGS}")
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise InvalidConfigurationError(f"|alpha|^2 + |beta|^2 = {norm!r} != 1")

    @property
    def n(self) -> int:
        return len(self.settings)

    @property
    def label(self) -> str:
        return ",".join(self.settings)


def validate_configuration(config: Configuration, tol: float = 1e-12) -> None:
    """Enforce the amplitude constraints of coherence settings.

    Coherence reconstruction divides by <Z^A>, <U> and <Z^A U> of the input
    pair, which are proportional to |alpha|^2 - |beta|^2, Re(alpha beta*)
    and Im(alpha beta*); all three must be bounded away from zero.
    """
    if all(s == POP for s in config.settings):
        return
    a, b = config.alpha, config.beta
    if abs(a) < tol or abs(b) < tol:
        raise InvalidConfigurationError(
            "coherence settings need both amplitudes nonzero, got "
            f"alpha={a!r}, beta={b!r}"
        )
    cross = a * b.conjugate()
    checks = [
        (abs(a) ** 2 - abs(b) ** 2, "|alpha| = |beta| makes <Z^A> vanish"),
        (cross.real, "Re(alpha beta*) = 0 makes the normalizer expectation <U> vanish"),
        (cross.imag, "Im(alpha beta*) = 0 makes <Z^A U> vanish"),
    ]
    for value, message in checks:
        if abs(value) < tol:
            raise InvalidConfigurationError(message)


def all_configurations(
    n: int, alpha: complex = DEFAULT_ALPHA, beta: complex = DEFAULT_BETA
) -> list[Configuration]:
    """The 4**n configurations in index order (setting digits, pair 1 first)."""
    if n < 1:
        raise InvalidConfigurationError(f"need at least one pair, got n={n}")
    return [
        Configuration(settings=s, alpha=alpha, beta=beta)
        for s in itertools.product(SETTINGS, repeat=n)
    ]


def _pair_input_state(setting: str, alpha: complex, beta: complex) -> np.ndarray:
    if setting == POP:
        alpha = beta = 1.0 / math.sqrt(2)
    raw = np.array([alpha, 0, 0, beta], dtype=complex)
    v = PREP_ROTATIONS[setting]
    return np.kron(v, ops.IDENTITY_2) @ raw


def _interleaved_to_blocks(n: int) -> list[int]:
    # register order [A1 B1 A2 B2 ...] -> [A1..An B1..Bn]
    return list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))


def build_input_state(config: Configuration, check: bool = True) -> np.ndarray:
    """Full 2n-qubit input state of a configuration (primary block first)."""
    if check:
        validate_configuration(config)
    pair_states = [_pair_input_state(s, config.alpha, config.beta) for s in config.settings]
    psi = ops.tensor(*pair_states) if config.n > 1 else pair_states[0]
    if config.n > 1:
        psi = ops.permute_qubits(psi, _interleaved_to_blocks(config.n))
    return psi


def measurement_basis(config: Configuration) -> list[np.ndarray]:
    """The 4**n joint measurement states, outcome digits in Bell order.

    Per pair these are the Bell states conjugated by the pair's preparation
    rotation; they are simultaneous eigenstates of the pair's stabilizer
    and normalizer with the eigenvalue labels in OUTCOME_EIGENVALUES.
    """
    n = config.n
    pair_bases = []
    for s in config.settings:
        w = np.kron(PREP_ROTATIONS[s], ops.IDENTITY_2)
        pair_bases.append([w @ b for b in ops.bell_basis()])
    perm = _interleaved_to_blocks(n)
    out = []
    for digits in itertools.product(range(4), repeat=n):
        vec = pair_bases[0][digits[0]]
        for i in range(1, n):
            vec = np.kron(vec, pair_bases[i][digits[i]])
        out.append(ops.permute_qubits(vec, perm) if n > 1 else vec)
    return out


def measurement_projectors(config: Configuration) -> list[np.ndarray]:
    """Rank-1 projector matrices onto `measurement_basis`."""
    return [ops.projector(b) for b in measurement_basis(config)]


def outcome_labels(config: Configuration) -> list[str]:
    """Human-readable outcome labels, one Bell label per pair."""
    return [
        ";".join(ops.BELL_LABELS[d] for d in digits)
        for digits in itertools.product(range(4), repeat=config.n)
    ]


@dataclass
class OutcomeDistribution:
    """Exact outcome probabilities of one configuration.

    Sums to 1 for trace-preserving channels and to Tr[E(rho)] otherwise;
    no renormalization is ever applied.
    """

    config: Configuration
    probabilities: np.ndarray


def outcome_probabilities(channel, config: Configuration) -> OutcomeDistribution:
    """Probabilities q_k = Tr[P_k E(rho_c)] with the channel on the primary block."""
    kraus = channels.as_kraus(channel, config.n)
    psi = build_input_state(config, check=False)
    rho = ops.projector(psi)
    rho_out = channels.apply_channel(kraus, rho, ancilla_dim=2**config.n)
    q = np.array([np.vdot(b, rho_out @ b).real for b in measurement_basis(config)])
    return OutcomeDistribution(config=config, probabilities=q)


# ---------------------------------------------------------------------------
# Closed-form reconstruction (single pair)
# ---------------------------------------------------------------------------


def reconstruct_population(dist: OutcomeDistribution) -> np.ndarray:
    """Diagonal of chi from the all-pop configuration: chi_mm = q_m.

    Outcome digit k of a pop pair detects the Pauli error with the same
    index, so the joint outcome index coincides with the Pauli-string index
    of the population it measures.
    """
    if any(s != POP for s in dist.config.settings):
        raise InvalidConfigurationError(
            f"population reconstruction needs an all-pop configuration, got {dist.config.label}"
        )
    return np.asarray(dist.probabilities, dtype=float).copy()


def input_pair_expectations(config: Configuration) -> dict[str, float]:
    """The three scalar factors of the coherence equations.

    Keys: 'stabilizer_bias' = <Z^A> = |alpha|^2 - |beta|^2,
    'normalizer' = <X^A X^B> = 2 Re(alpha beta*),
    'cross_imag' = Im(alpha beta*), i.e. <Z^A X^A X^B> = -2i * cross_imag.
    """
    a, b = config.alpha, config.beta
    cross = a * b.conjugate()
    return {
        "stabilizer_bias": abs(a) ** 2 - abs(b) ** 2,
        "normalizer": 2.0 * cross.real,
        "cross_imag": cross.imag,
    }


def reconstruct_coherence(
    dist: OutcomeDistribution, diagonals: np.ndarray, tol: float = 1e-12
) -> tuple[complex, complex]:
    """Rotated-frame coherences (chi'_03, chi'_12) of one coh configuration.

    Works on a single pair.  The four outcome probabilities give four real
    equations: the stabilizer sums q0+q3 and q1+q2 determine Re(chi'_03)
    and Im(chi'_12) once the diagonals are known, and the normalizer
    differences q0-q3 and q1-q2 determine Im(chi'_03) and Re(chi'_12).
    `diagonals` are the canonical-frame populations (from the pop
    configuration); they are permuted into the rotated frame internally.
    Use `map_frame` to place the returned values into the canonical chi.
    """
    config = dist.config
    if config.n != 1 or config.settings[0] not in (COH_Z, COH_X, COH_Y):
        raise InvalidConfigurationError(
            f"coherence reconstruction needs one coh-type pair, got {config.label}"
        )
    factors = input_pair_expectations(config)
    for key, name in (
        ("stabilizer_bias", "<Z^A>"),
        ("normalizer", "<U> = <X^A X^B>"),
        ("cross_imag", "<Z^A U>"),
    ):
        if abs(factors[key]) < tol:
            raise IllPosedConfigurationError(
                f"configuration {config.label} has vanishing factor {name}; "
                "choose amplitudes with |alpha| != |beta| and complex alpha beta*"
            )
    setting = config.settings[0]
    iperm = np.argsort(FRAME_PERM[setting])
    dp = np.asarray(diagonals, dtype=float)[iperm]
    q = np.asarray(dist.probabilities, dtype=float)
    s_plus, s_minus = q[0] + q[3], q[1] + q[2]
    d_plus, d_minus = q[0] - q[3], q[1] - q[2]
    z_bias = factors["stabilizer_bias"]
    u_exp = factors["normalizer"]
    cross4 = 4.0 * factors["cross_imag"]
    re03 = (s_plus - dp[0] - dp[3]) / (2.0 * z_bias)
    im12 = (s_minus - dp[1] - dp[2]) / (2.0 * z_bias)
    im03 = (d_plus - (dp[0] - dp[3]) * u_exp) / cross4
    re12 = ((dp[1] - dp[2]) * u_exp - d_minus) / cross4
    return complex(re03, im03), complex(re12, im12)


def map_frame(setting: str, coh_stab: complex, coh_norm: complex) -> dict[tuple[int, int], complex]:
    """Canonical-frame chi entries determined by one coh configuration.

    The preparation rotation V permutes Pauli labels with signs,
    V^dag E_m V = sign[m] E_perm[m], so the rotated-frame entries
    (chi'_03, chi'_12) land at canonical positions chi[m, n] =
    sign[m] sign[n] chi'[perm[m], perm[n]].  Returns the two upper-triangle
    entries this configuration pins down (conjugates implied).
    """
    if setting not in (COH_Z, COH_X, COH_Y):
        raise InvalidConfigurationError(f"no frame mapping for setting {setting!r}")
    perm = FRAME_PERM[setting]
    sign = FRAME_SIGN[setting]
    iperm = np.argsort(perm)
    out: dict[tuple[int, int], complex] = {}
    for (a, b), value in (((0, 3), coh_stab), ((1, 2), coh_norm)):
        m, n = int(iperm[a]), int(iperm[b])
        v = sign[m] * sign[n] * value
        if m > n:
            m, n, v = n, m, v.conjugate()
        out[(m, n)] = v
    return out


# ---------------------------------------------------------------------------
# Generic linear inversion
# ---------------------------------------------------------------------------


def amplitude_matrix(config: Configuration) -> np.ndarray:
    """C[k, m] = <outcome_k| (E_m on primaries) |input state>.

    Because the input is pure and every outcome projector is rank 1, the
    design matrix factorizes through C:
    Tr[P_k E_m rho_c E_n^dag] = C[k, m] conj(C[k, n]).
    """
    n = config.n
    d = 2**n
    psi = build_input_state(config, check=False).reshape(d, d)
    basis = ops.pauli_basis(n)
    w = np.einsum("mab,bc->mac", basis, psi).reshape(4**n, d * d)
    b = np.array(measurement_basis(config))
    return b.conj() @ w.T


def design_matrix(config: Configuration) -> np.ndarray:
    """Complex design matrix A[k, m*D + n] = Tr[P_k E_m rho_c E_n^dag]."""
    c = amplitude_matrix(config)
    return np.einsum("km,kn->kmn", c, c.conj()).reshape(c.shape[0], -1)


def real_design_matrix(config: Configuration) -> np.ndarray:
    """Real design matrix over the Hermitian parameter vector of chi."""
    return inversion.real_design_from_amplitudes(amplitude_matrix(config))


def stacked_design(configs: Sequence[Configuration]) -> np.ndarray:
    """Vertically stacked real design matrix of a configuration set."""
    return np.vstack([real_design_matrix(c) for c in configs])


@dataclass
class ReconstructionResult:
    """Reconstructed process matrix plus solver diagnostics.

    `chi` always comes from the stacked linear inversion (the normative
    path).  For a single pair the closed-form route is also evaluated and
    `residual` is the max entrywise distance between the two; with more
    pairs the closed forms are not defined and both fields are None.
    Design diagnostics are None when their computation was skipped.
    """

    chi: np.ndarray
    n_qubits: int
    n_configurations: int
    residual: Optional[float] = None
    chi_closed_form: Optional[np.ndarray] = None
    design_rank: Optional[int] = None
    design_cond: Optional[float] = None


def closed_form_chi(dists: Sequence[OutcomeDistribution]) -> np.ndarray:
    """Single-pair chi assembled from the four per-setting closed forms.

    Expects the distributions of the 4 single-pair configurations in index
    order (pop, coh_z, coh_x, coh_y).
    """
    if len(dists) != 4 or any(d.config.n != 1 for d in dists):
        raise InvalidConfigurationError("closed form needs the 4 single-pair distributions")
    diag = reconstruct_population(dists[0])
    chi = np.zeros((4, 4), dtype=complex)
    np.fill_diagonal(chi, diag)
    for dist in dists[1:]:
        coh_stab, coh_norm = reconstruct_coherence(dist, diag)
        for (m, n), value in map_frame(dist.config.settings[0], coh_stab, coh_norm).items():
            chi[m, n] = value
            chi[n, m] = value.conjugate()
    return chi


def reconstruct_from_probabilities(
    configs: Sequence[Configuration],
    probabilities: Sequence[np.ndarray],
    compute_diagnostics: Optional[bool] = None,
) -> ReconstructionResult:
    """Solve the stacked linear system for chi from per-configuration data.

    `probabilities` may be exact probabilities or empirical frequencies;
    the estimator is the same either way and applies no renormalization or
    positivity repair.  Diagnostics (rank/condition via SVD) default to on
    for n <= 2 and off above, where the cost becomes noticeable; the
    system itself is square and solved exactly in both regimes.
    """
    n = configs[0].n
    dim = 4**n
    if compute_diagnostics is None:
        compute_diagnostics = n <= 2
    a = stacked_design(configs)
    b = np.concatenate([np.asarray(p, dtype=float) for p in probabilities])
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(
            f"{a.shape[0]} design rows vs {b.shape[0]} measured values"
        )
    rank = cond = None
    if compute_diagnostics:
        svals = np.linalg.svd(a, compute_uv=False)
        tol = svals.max() * max(a.shape) * np.finfo(float).eps
        rank = int(np.sum(svals > tol))
        if rank < dim * dim:
            raise IllPosedConfigurationError(
                f"stacked design matrix has rank {rank} < {dim * dim}; "
                "the configuration set does not determine chi"
            )
        cond = float(svals.max() / svals.min())
    x = inversion.solve_hermitian(a, b)
    chi = inversion.unflatten_hermitian(x, dim)
    return ReconstructionResult(
        chi=chi,
        n_qubits=n,
        n_configurations=len(configs),
        design_rank=rank,
        design_cond=cond,
    )


def characterize(
    channel,
    n: int = 1,
    alpha: complex = DEFAULT_ALPHA,
    beta: complex = DEFAULT_BETA,
    compute_diagnostics: Optional[bool] = None,
) -> ReconstructionResult:
    """Full chi reconstruction from exact statistics of all 4**n configurations.

    With exact probabilities the result equals the ground-truth process
    matrix of the channel to solver precision, for trace-preserving and
    trace-decreasing channels alike.
    """
    if not 1 <= n <= 3:
        raise InvalidConfigurationError(f"supported register sizes are n = 1..3, got {n}")
    kraus = channels.as_kraus(channel, n)
    configs = all_configurations(n, alpha, beta)
    for config in configs:
        validate_configuration(config)
    dists = [outcome_probabilities(kraus, config) for config in configs]
    result = reconstruct_from_probabilities(
        configs, [d.probabilities for d in dists], compute_diagnostics
    )
    if n == 1:
        chi_cf = closed_form_chi(dists)
        result.chi_closed_form = chi_cf
        result.residual = float(np.max(np.abs(chi_cf - result.chi)))
    return result
