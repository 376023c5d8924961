"""Seeded random model and observable generation with deterministic replay.

The generator family is part of the package contract, not an implementation
detail: every draw goes through a numpy PCG64 generator seeded from a spawned
``SeedSequence`` child, one child per site index.  Because child k of a seed
depends only on (seed, k), the first 20 sites of a 100-site model coincide
exactly with the 20-site model at the same seed, which is what makes
site-count sweeps a controlled comparison.  The per-site draw order (u, then
phase, then coupling) is likewise fixed; see the README for test vectors.
"""

from __future__ import annotations

import numpy as np

from .model import RelevantObservable, SpinBathModel, make_model, make_observable

DEFAULT_AMPLITUDE = 1.0 / np.sqrt(2.0)

# Registered distribution names accepted by sample_model and config files.
COEFF_DISTS = ("uniform",)
G_DISTS = ("uniform",)


def _site_streams(n_sites: int, seed: int) -> list[np.random.Generator]:
    if n_sites < 1:
        raise ValueError("need at least one site")
    children = np.random.SeedSequence(seed).spawn(n_sites)
    return [np.random.default_rng(child) for child in children]


def _check_dist(name: str, registry: tuple[str, ...], kind: str) -> None:
    if name not in registry:
        raise ValueError(
            f"unknown {kind} distribution {name!r}; known: {', '.join(registry)}"
        )


def sample_model(
    n_sites: int,
    seed: int,
    coeff_dist: str = "uniform",
    g_dist: str = "uniform",
    a: complex = DEFAULT_AMPLITUDE,
    b: complex = DEFAULT_AMPLITUDE,
) -> SpinBathModel:
    """Draw a model with random site coefficients and couplings.

    Per site, in order: u ~ Uniform(0, 1) sets |alpha|^2 = u and
    |beta|^2 = 1 - u with alpha real non-negative; a relative phase
    ~ Uniform[0, 2 pi) goes onto beta; the coupling is 1 - Uniform(0, 1),
    i.e. uniform on the half-open interval (0, 1] so it is never zero.
    Deterministic for fixed (n_sites, seed, distributions).
    """
    _check_dist(coeff_dist, COEFF_DISTS, "coefficient")
    _check_dist(g_dist, G_DISTS, "coupling")
    sites = []
    for gen in _site_streams(n_sites, seed):
        u = gen.uniform(0.0, 1.0)
        phi = gen.uniform(0.0, 2.0 * np.pi)
        g = 1.0 - gen.uniform(0.0, 1.0)
        alpha = np.sqrt(u)
        beta = np.sqrt(1.0 - u) * np.exp(1j * phi)
        sites.append((alpha, beta, g))
    return make_model(a, b, sites)


def commensurate_model(
    n_sites: int,
    g_base: float,
    seed: int,
    a: complex = DEFAULT_AMPLITUDE,
    b: complex = DEFAULT_AMPLITUDE,
) -> SpinBathModel:
    """Random site coefficients but exactly commensurate couplings g_j = j g_base.

    Every bath frequency then divides 2 pi / g_base, so the overlap revives
    fully at that period.  The coefficient draws reuse the sample_model
    streams (u and phase come first in the draw order, so they coincide with
    the random-coupling model at the same seed).
    """
    if not (np.isfinite(g_base) and g_base > 0.0):
        raise ValueError("base coupling must be positive and finite")
    sites = []
    for j, gen in enumerate(_site_streams(n_sites, seed), start=1):
        u = gen.uniform(0.0, 1.0)
        phi = gen.uniform(0.0, 2.0 * np.pi)
        alpha = np.sqrt(u)
        beta = np.sqrt(1.0 - u) * np.exp(1j * phi)
        sites.append((alpha, beta, j * g_base))
    return make_model(a, b, sites)


def _hermitian_part(gen: np.random.Generator) -> np.ndarray:
    """One random 2x2 Hermitian matrix with every entry bounded by 1 in modulus."""
    d0, d1 = gen.uniform(-1.0, 1.0, 2)
    magnitude = gen.uniform(0.0, 1.0)
    angle = gen.uniform(0.0, 2.0 * np.pi)
    off = magnitude * np.exp(1j * angle)
    return np.array([[d0, off], [np.conj(off), d1]])


def sample_observable(n_sites: int, seed: int) -> RelevantObservable:
    """Draw a random Hermitian product observable for equivalence sweeps.

    Stream 0 of the spawned family makes the system part, stream j the part
    for site j; deterministic per (n_sites, seed).
    """
    if n_sites < 1:
        raise ValueError("need at least one site")
    children = np.random.SeedSequence(seed).spawn(n_sites + 1)
    gens = [np.random.default_rng(child) for child in children]
    system = _hermitian_part(gens[0])
    parts = [_hermitian_part(g) for g in gens[1:]]
    return make_observable(system, parts)
