"""Standard quantum process tomography baseline.

Prepares the 4**n product inputs over {|0>, |1>, |+>, |+i>}, performs full
Pauli state tomography of every output (exact expectation values; finite
shots are deliberately not modelled here), and linearly inverts for chi.
Bookkeeping counts 4**n measurement settings per input, i.e. 16**n
experimental configurations in total, against 4**n for the direct
protocol in `dcqd`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import channels, inversion, ops
from .exceptions import IllConditionedPlanError, InvalidConfigurationError

_KET_0 = np.array([1, 0], dtype=complex)
_KET_1 = np.array([0, 1], dtype=complex)
_KET_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)
_KET_PLUS_I = np.array([1, 1j], dtype=complex) / math.sqrt(2)
INPUT_KETS = (_KET_0, _KET_1, _KET_PLUS, _KET_PLUS_I)
INPUT_LABELS = ("0", "1", "+", "+i")


@dataclass
class SqptPlan:
    """Input states and measurement bookkeeping of an SQPT run."""

    n: int
    states: list[np.ndarray]
    labels: list[str]
    n_inputs: int
    n_settings_per_input: int

    @property
    def n_experiments(self) -> int:
        return self.n_inputs * self.n_settings_per_input


def make_plan(n: int) -> SqptPlan:
    """Build and validate the informationally complete product-input plan."""
    if not 1 <= n <= 2:
        raise InvalidConfigurationError(f"SQPT baseline supports n = 1..2, got {n}")
    states = []
    labels = []
    for combo in itertools.product(range(4), repeat=n):
        ket = INPUT_KETS[combo[0]]
        for i in combo[1:]:
            ket = np.kron(ket, INPUT_KETS[i])
        states.append(ops.projector(ket))
        labels.append("".join(INPUT_LABELS[i] for i in combo))
    gram = np.array(
        [[np.trace(a.conj().T @ b) for b in states] for a in states]
    )
    if np.linalg.matrix_rank(gram) < len(states):
        raise IllConditionedPlanError("input states do not span operator space")
    return SqptPlan(
        n=n,
        states=states,
        labels=labels,
        n_inputs=4**n,
        n_settings_per_input=4**n,
    )


def tomograph_state(rho: np.ndarray) -> np.ndarray:
    """Reconstruct a density operator from its full set of Pauli expectations."""
    rho = np.asarray(rho, dtype=complex)
    n = int(round(math.log2(rho.shape[0])))
    basis = ops.pauli_basis(n)
    coeffs = np.einsum("mab,ba->m", basis, rho) / 2**n
    return np.tensordot(coeffs, basis, axes=1)


@dataclass
class SqptResult:
    """Process matrix estimated by the SQPT baseline plus resource counts."""

    chi: np.ndarray
    n_qubits: int
    n_inputs: int
    n_settings_per_input: int
    n_experiments: int


def sqpt_characterize(channel, n: int = 1) -> SqptResult:
    """Reconstruct chi by preparing product inputs and tomographing outputs.

    Exact expectation values make the state-tomography step lossless, so
    the result matches the ground-truth process matrix to solver precision;
    what this baseline quantifies is the experiment count, not accuracy.
    """
    plan = make_plan(n)
    kraus = channels.as_kraus(channel, n)
    basis = ops.pauli_basis(n)
    functionals = []
    rhs = []
    for rho_in in plan.states:
        rho_out = tomograph_state(channels.apply_channel(kraus, rho_in))
        # row block: E(rho_in)[u, v] = sum_mn chi[m, n] (E_m rho_in E_n)[u, v]
        block = np.einsum("mua,ab,nbv->uvmn", basis, rho_in, basis)
        functionals.append(block.reshape(-1, 4**n, 4**n))
        rhs.append(rho_out.reshape(-1))
    m = np.concatenate(functionals)
    b = np.concatenate(rhs)
    a_real = inversion.real_design_from_functionals(m)
    b_real = inversion.stack_real_rhs(b)
    x = inversion.solve_hermitian(a_real, b_real)
    chi = inversion.unflatten_hermitian(x, 4**n)
    return SqptResult(
        chi=chi,
        n_qubits=n,
        n_inputs=plan.n_inputs,
        n_settings_per_input=plan.n_settings_per_input,
        n_experiments=plan.n_experiments,
    )
