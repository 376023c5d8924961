"""Brute-force reference implementation on the full 2^(N+1) state vector.

Everything here is deliberately independent of the product-form shortcuts in
``engine``: states are materialized, evolution multiplies explicit per-basis
phases, and expectations are direct tensor contractions.  Agreement between
the two paths is the core correctness check of the package.

The interaction is diagonal in the product basis, so evolution never mixes
amplitudes; it only rotates their phases.  The sign convention is fixed once,
by requiring that the up-branch bath state carry per-site factors
alpha_i e^(+i g_i t / 2) and beta_i e^(-i g_i t / 2), and is asserted in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import RelevantObservable, SpinBathModel

# ~512 MB of complex doubles at the default cap; raise site_cap explicitly on
# machines that can take it.
DEFAULT_SITE_CAP = 24


class SiteCapError(RuntimeError):
    """Raised when a dense-state request exceeds the memory guard."""


@dataclass(frozen=True)
class DenseState:
    """Full state vector over the central qubit and all bath sites.

    The central qubit is the most significant bit; site j sits at bit
    ``n_sites - j``.  ``t`` records the time the amplitudes correspond to.
    """

    amplitudes: np.ndarray
    n_sites: int
    t: float

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size != 2 ** (self.n_sites + 1) or amps.size < 4:
            raise ValueError("amplitude count must be 2^(n_sites + 1) with n_sites >= 1")
        if abs(np.vdot(amps, amps).real - 1.0) > 1e-10:
            raise ValueError("dense state must be normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))


def _check_cap(n_sites: int, site_cap: int) -> None:
    if n_sites > site_cap:
        raise SiteCapError(
            f"{n_sites} sites exceeds the dense-state cap of {site_cap}; "
            "pass a larger site_cap to override"
        )


def _site_field(model: SpinBathModel) -> np.ndarray:
    """Sum of g_i * (+1 for up, -1 for down) for every bath configuration.

    Site 1 is the most significant of the N site bits, matching the kron
    layout of build_initial.
    """
    field = np.zeros(1)
    for g in model.couplings:
        field = np.add.outer(field, np.array([g, -g])).ravel()
    return field


def build_initial(model: SpinBathModel, site_cap: int = DEFAULT_SITE_CAP) -> DenseState:
    """Materialize the t = 0 product state over all 2^(N+1) basis vectors."""
    _check_cap(model.n_sites, site_cap)
    amps = np.array([model.a, model.b], dtype=complex)
    for alpha, beta in zip(model.alphas, model.betas):
        amps = np.kron(amps, np.array([alpha, beta], dtype=complex))
    return DenseState(amplitudes=amps, n_sites=model.n_sites, t=0.0)


def evolve(state: DenseState, model: SpinBathModel, t: float) -> DenseState:
    """Advance the state by time ``t`` (relative to the state's own clock).

    Each amplitude picks up e^(i z_s field t / 2) where z = +1 on the up
    system branch and -1 on the down branch, and field is the signed coupling
    sum of the bath configuration.  Diagonal, hence exactly unitary.
    """
    if model.n_sites != state.n_sites:
        raise ValueError(
            f"state has {state.n_sites} sites, model has {model.n_sites}"
        )
    field = _site_field(model)
    phase = np.concatenate([field, -field]) * (0.5 * t)
    amps = state.amplitudes * np.exp(1j * phase)
    return DenseState(amplitudes=amps, n_sites=state.n_sites, t=state.t + t)


def oracle_expectation(state: DenseState, obs: RelevantObservable) -> float:
    """<psi|O|psi> by applying the system 2x2 and then each site 2x2 in turn.

    Cost O(N 2^(N+1)).  The imaginary residue must stay below 1e-10 (anything
    larger means a non-Hermitian part leaked into the observable).
    """
    if obs.n_sites != state.n_sites:
        raise ValueError(
            f"observable has {obs.n_sites} site parts, state has {state.n_sites} sites"
        )
    tensor = state.amplitudes.reshape((2,) * (state.n_sites + 1))
    for axis, mat in enumerate([obs.system_part, *obs.site_parts]):
        tensor = np.moveaxis(np.tensordot(mat, tensor, axes=([1], [axis])), 0, axis)
    value = complex(np.vdot(state.amplitudes, tensor.ravel()))
    if abs(value.imag) > 1e-10:
        raise ValueError(
            f"expectation has imaginary residue {value.imag:.3e}; observable is not Hermitian"
        )
    return value.real


def branch_states(
    model: SpinBathModel, t: float, site_cap: int = DEFAULT_SITE_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """The two 2^N bath states conditioned on the central qubit.

    The up branch carries per-site factors (alpha e^(i g t / 2),
    beta e^(-i g t / 2)); the down branch is the same at -t.
    """
    _check_cap(model.n_sites, site_cap)
    up = np.ones(1, dtype=complex)
    down = np.ones(1, dtype=complex)
    for alpha, beta, g in zip(model.alphas, model.betas, model.couplings):
        up = np.kron(up, np.array([alpha * np.exp(0.5j * g * t), beta * np.exp(-0.5j * g * t)]))
        down = np.kron(down, np.array([alpha * np.exp(-0.5j * g * t), beta * np.exp(0.5j * g * t)]))
    return up, down


def oracle_overlap(model: SpinBathModel, t: float, site_cap: int = DEFAULT_SITE_CAP) -> complex:
    """Inner product of the down-branch and up-branch bath states.

    Built by explicit 2^N construction; the independent check on the O(N)
    product in engine.overlap_r.
    """
    up, down = branch_states(model, t, site_cap=site_cap)
    return complex(np.vdot(down, up))


def oracle_reduced_state(state: DenseState) -> np.ndarray:
    """2x2 central-qubit density matrix by direct partial trace over the bath."""
    block = state.amplitudes.reshape(2, -1)
    return block @ block.conj().T
