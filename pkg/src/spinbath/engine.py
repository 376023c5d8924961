"""Closed-form evaluators for the dephasing model, O(N) per time point.

Because the coupling Hamiltonian is diagonal in the up/down product basis,
every product-form observable has an expectation value that factorizes into
one 2x2 contraction per site.  This module evaluates those per-site factors
and multiplies them, switching to log-magnitude accumulation when the site
count is large enough that a direct product could underflow.

Every public function accepts a scalar time or a 1-D array of times and
returns a matching scalar or array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import RelevantObservable, SpinBathModel, _check_hermitian

# Direct multiplication is exact enough up to this many sites; beyond it the
# product runs in log-magnitude + phase form.  A summed log magnitude below
# UNDERFLOW_LOG (exp would be subnormal) is reported as exactly 0.0.
DIRECT_PRODUCT_MAX_SITES = 64
UNDERFLOW_LOG = -700.0


@dataclass(frozen=True)
class GammaPair:
    """Both product factors of the expectation value at one time.

    ``gamma0`` scales the populations and is real by construction (each of
    its per-site factors is a real 2x2 contraction); ``gamma1`` scales the
    coherence cross term and is complex.
    """

    gamma0: float
    gamma1: complex
    t: float


@dataclass(frozen=True)
class ReducedState:
    """2x2 state of the central qubit after tracing out the bath."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError("reduced state must be 2x2")
        if abs(np.trace(mat) - 1.0) > 1e-12:
            raise ValueError("reduced state must have unit trace")
        if abs(mat[0, 1] - np.conj(mat[1, 0])) > 1e-12:
            raise ValueError("reduced state must be Hermitian")
        # Smaller eigenvalue of a 2x2 Hermitian matrix with unit trace.
        det = (mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]).real
        disc = max(1.0 - 4.0 * det, 0.0)
        if 0.5 * (1.0 - np.sqrt(disc)) < -1e-12:
            raise ValueError("reduced state must be positive semidefinite")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def rho00(self) -> float:
        return float(self.matrix[0, 0].real)

    @property
    def rho01(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def rho10(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def rho11(self) -> float:
        return float(self.matrix[1, 1].real)


def _as_times(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _check_sizes(model: SpinBathModel, obs: RelevantObservable) -> None:
    if obs.n_sites != model.n_sites:
        raise ValueError(
            f"observable has {obs.n_sites} site parts, model has {model.n_sites} sites"
        )


def _site_weights(model: SpinBathModel) -> tuple[np.ndarray, np.ndarray]:
    """Per-site (|alpha|^2, |beta|^2) without the abs round trip.

    Squaring the components directly keeps exactly representable weights
    exact (e.g. alpha = 0.5 + 0.5i), which abs-then-square does not.
    """
    w_up = model.alphas.real**2 + model.alphas.imag**2
    w_down = model.betas.real**2 + model.betas.imag**2
    return w_up, w_down


def _stable_product_real(factors: np.ndarray) -> np.ndarray:
    """Column-wise product of a real (n_sites, n_times) factor matrix."""
    if factors.shape[0] <= DIRECT_PRODUCT_MAX_SITES:
        return np.prod(factors, axis=0)
    has_zero = np.any(factors == 0.0, axis=0)
    safe = np.where(has_zero[None, :], 1.0, np.abs(factors))
    log_mag = np.sum(np.log(safe), axis=0)
    sign = np.where(np.sum(factors < 0.0, axis=0) % 2 == 1, -1.0, 1.0)
    out = np.where(log_mag < UNDERFLOW_LOG, 0.0, sign * np.exp(log_mag))
    return np.where(has_zero, 0.0, out)


def _stable_product_complex(factors: np.ndarray) -> np.ndarray:
    """Column-wise product of a complex (n_sites, n_times) factor matrix."""
    if factors.shape[0] <= DIRECT_PRODUCT_MAX_SITES:
        return np.prod(factors, axis=0)
    has_zero = np.any(factors == 0.0, axis=0)
    safe = np.where(has_zero[None, :], 1.0, np.abs(factors))
    log_mag = np.sum(np.log(safe), axis=0)
    phase = np.sum(np.angle(factors), axis=0)
    out = np.where(
        log_mag < UNDERFLOW_LOG,
        0.0 + 0.0j,
        np.exp(log_mag) * np.exp(1j * phase),
    )
    return np.where(has_zero, 0.0 + 0.0j, out)


def _gamma0_factors(model: SpinBathModel, obs: RelevantObservable, times: np.ndarray) -> np.ndarray:
    """Real per-site factors (n_sites, n_times) of the population product."""
    w_up, w_down = _site_weights(model)
    eps_uu = obs.site_parts[:, 0, 0].real
    eps_dd = obs.site_parts[:, 1, 1].real
    cross = np.conj(model.alphas) * model.betas * obs.site_parts[:, 0, 1]
    rotation = np.exp(-1j * np.outer(model.couplings, times))
    static = (w_up * eps_uu + w_down * eps_dd)[:, None]
    return static + 2.0 * np.real(cross[:, None] * rotation)


def _gamma1_factors(model: SpinBathModel, obs: RelevantObservable, times: np.ndarray) -> np.ndarray:
    """Complex per-site factors (n_sites, n_times) of the coherence product."""
    w_up, w_down = _site_weights(model)
    eps_uu = obs.site_parts[:, 0, 0].real
    eps_dd = obs.site_parts[:, 1, 1].real
    cross = np.conj(model.alphas) * model.betas * obs.site_parts[:, 0, 1]
    rotation = np.exp(1j * np.outer(model.couplings, times))
    return (
        (w_up * eps_uu)[:, None] * rotation
        + (w_down * eps_dd)[:, None] / rotation
        + 2.0 * np.real(cross)[:, None]
    )


def gamma0(model: SpinBathModel, obs: RelevantObservable, t):
    """Population-sector product: for each site,

        |alpha|^2 eps_uu + |beta|^2 eps_dd + 2 Re(conj(alpha) beta eps_ud e^(-i g t)),

    multiplied over all sites.  Real by construction.
    """
    _check_sizes(model, obs)
    times, scalar = _as_times(t)
    out = _stable_product_real(_gamma0_factors(model, obs, times))
    return float(out[0]) if scalar else out


def gamma1(model: SpinBathModel, obs: RelevantObservable, t):
    """Coherence-sector product: for each site,

        |alpha|^2 eps_uu e^(i g t) + |beta|^2 eps_dd e^(-i g t)
            + 2 Re(conj(alpha) beta eps_ud),

    multiplied over all sites.
    """
    _check_sizes(model, obs)
    times, scalar = _as_times(t)
    out = _stable_product_complex(_gamma1_factors(model, obs, times))
    return complex(out[0]) if scalar else out


def gamma_pair(model: SpinBathModel, obs: RelevantObservable, t: float) -> GammaPair:
    """Evaluate both products at a single time."""
    return GammaPair(gamma0=gamma0(model, obs, t), gamma1=gamma1(model, obs, t), t=float(t))


def expectation(model: SpinBathModel, obs: RelevantObservable, t):
    """Exact expectation value of a product observable in the evolved state.

    The two population weights see the bath rotated in opposite senses, so the
    population product enters once at +t and once at -t:

        |a|^2 s00 gamma0(+t) + |b|^2 s11 gamma0(-t)
            + 2 Re(a conj(b) s10 gamma1(t)).

    Matches the brute-force dense evaluation to machine precision.
    """
    _check_sizes(model, obs)
    times, scalar = _as_times(t)
    s00 = obs.system_part[0, 0].real
    s11 = obs.system_part[1, 1].real
    s10 = obs.system_part[1, 0]
    a, b = complex(model.a), complex(model.b)
    w_a = a.real**2 + a.imag**2
    w_b = b.real**2 + b.imag**2
    pop = w_a * s00 * _stable_product_real(_gamma0_factors(model, obs, times))
    pop += w_b * s11 * _stable_product_real(_gamma0_factors(model, obs, -times))
    cross = 2.0 * np.real(
        model.a
        * np.conj(model.b)
        * s10
        * _stable_product_complex(_gamma1_factors(model, obs, times))
    )
    out = pop + cross
    return float(out[0]) if scalar else out


def overlap_r(model: SpinBathModel, t):
    """Overlap of the two bath branches:  prod_i (|alpha_i|^2 e^(i g_i t) + |beta_i|^2 e^(-i g_i t)).

    Its modulus controls how much central-qubit coherence survives at time t.
    Satisfies overlap_r(-t) == conj(overlap_r(t)).
    """
    times, scalar = _as_times(t)
    w_up, w_down = _site_weights(model)
    rotation = np.exp(1j * np.outer(model.couplings, times))
    out = _stable_product_complex(w_up[:, None] * rotation + w_down[:, None] / rotation)
    return complex(out[0]) if scalar else out


def r_squared_bounds(model: SpinBathModel) -> tuple[float, float]:
    """Envelope of |overlap_r|^2 over all times.

    Each squared site factor oscillates between (2|alpha|^2 - 1)^2 and 1, so
    the product is bracketed by (prod_i (2|alpha_i|^2 - 1)^2, 1).
    """
    w_up, _ = _site_weights(model)
    per_site = (2.0 * w_up - 1.0) ** 2
    lower = _stable_product_real(per_site[:, None])
    return float(lower[0]), 1.0


def single_spin_expectation(model: SpinBathModel, j: int, eps, t):
    """Expectation of a probe acting on environment spin ``j`` alone.

    Evaluated directly from the two site-j contractions, one per central-qubit
    branch (no product over the other sites):

        |a|^2 f_j(+t) + |b|^2 f_j(-t),
        f_j(t) = |alpha_j|^2 eps_uu + |beta_j|^2 eps_dd
                   + 2 Re(conj(alpha_j) beta_j eps_ud e^(-i g_j t)).

    Periodic with period 2 pi / g_j: the generic environment spin oscillates
    forever and never settles.
    """
    alpha, beta, g = model.site(j)
    eps = _check_hermitian(eps, "site part")
    times, scalar = _as_times(t)
    w_up = alpha.real**2 + alpha.imag**2
    w_down = beta.real**2 + beta.imag**2
    static = w_up * eps[0, 0].real + w_down * eps[1, 1].real
    cross = np.conj(alpha) * beta * eps[0, 1]
    f_plus = static + 2.0 * np.real(cross * np.exp(-1j * g * times))
    f_minus = static + 2.0 * np.real(cross * np.exp(1j * g * times))
    a, b = complex(model.a), complex(model.b)
    out = (a.real**2 + a.imag**2) * f_plus + (b.real**2 + b.imag**2) * f_minus
    return float(out[0]) if scalar else out


def reduced_system_state(model: SpinBathModel, t: float) -> ReducedState:
    """State of the central qubit at time ``t`` after tracing out the bath.

    Populations are frozen at |a|^2, |b|^2; the coherence is the initial one
    scaled by the bath-branch overlap:  rho01 = a conj(b) overlap_r(t).
    The convention matches the dense partial trace entrywise.
    """
    r = overlap_r(model, float(t))
    a, b = complex(model.a), complex(model.b)
    coherence = a * np.conj(b) * r
    matrix = np.array(
        [
            [a.real**2 + a.imag**2, coherence],
            [np.conj(coherence), b.real**2 + b.imag**2],
        ],
        dtype=complex,
    )
    return ReducedState(matrix=matrix)
