"""Decoherence verdicts and long-time statistics built on the fast evaluators.

The central operational definition lives here: a trajectory counts as
decohered once its magnitude stays at or below a threshold for a full hold
window.  Everything is evaluated on the supplied grid only; grid density is
the caller's responsibility.  No interpolation happens behind the caller's
back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import expectation, overlap_r
from .ensemble import sample_model
from .model import RelevantObservable, SpinBathModel, Trajectory

# Reduced Planck constant in eV s; the only dimensionful number in the package.
HBAR_EV_S = 6.582119569e-16

# Marker for "no qualifying window found"; trajectories never certify
# non-decoherence, they only fail to certify decoherence.
NEVER = math.inf

# Relative tolerance for deciding that a coupling is an integer multiple of
# the base frequency.
COMMENSURATE_RTOL = 1e-9


@dataclass(frozen=True)
class DecoherenceVerdict:
    """Outcome of the threshold-and-hold test on one trajectory.

    ``t_d`` is the earliest grid time from which the magnitude stays at or
    below ``threshold`` for a full ``window``; NEVER (= math.inf) if no such
    window exists on the grid.  ``sup_late`` is the largest magnitude over the
    certified window when decohered, and over the final window of the grid
    when not.
    """

    t_d: float
    threshold: float
    window: float
    sup_late: float
    decohered: bool

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie strictly between 0 and 1")
        if self.window <= 0.0:
            raise ValueError("window must be positive")
        if self.decohered and self.sup_late > self.threshold:
            raise ValueError("a decohered verdict requires sup_late <= threshold")
        if not self.decohered and not math.isinf(self.t_d):
            raise ValueError("a non-decohered verdict requires t_d = NEVER")


@dataclass(frozen=True)
class TimescaleReport:
    """hbar/V decoherence-time estimates for two interaction strengths.

    ``t_ds_s`` belongs to the first strength (the strong, self-interaction
    scale), ``t_du_s`` to the second (the weak, environment-coupling scale).
    ``hierarchy_ok`` records that a stronger interaction implies a shorter
    time.
    """

    v1_ev: float
    v2_ev: float
    t_ds_s: float
    t_du_s: float
    hierarchy_ok: bool

    def __post_init__(self):
        if self.t_ds_s != HBAR_EV_S / self.v1_ev or self.t_du_s != HBAR_EV_S / self.v2_ev:
            raise ValueError("times must equal hbar / V exactly")
        if self.hierarchy_ok != ((not self.v1_ev > self.v2_ev) or self.t_ds_s < self.t_du_s):
            raise ValueError("hierarchy flag inconsistent with the estimates")


@dataclass(frozen=True)
class SweepRow:
    """Median verdict statistics for one site count in a scaling sweep."""

    n_sites: int
    t_d: float
    sup_late: float
    decohered: bool


def decoherence_time(traj: Trajectory, threshold: float, window: float) -> DecoherenceVerdict:
    """Earliest grid time from which |value| holds at or below the threshold.

    Scans every grid point t* whose window [t*, t* + window] still fits on the
    grid and returns the first one where all grid samples in that window have
    magnitude <= threshold.  A trajectory that keeps re-exceeding the
    threshold (every quasi-periodic signal does) never qualifies.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly between 0 and 1")
    if window <= 0.0:
        raise ValueError("window must be positive")
    if traj.span < 2.0 * window:
        raise ValueError("trajectory must span at least twice the hold window")
    times = traj.times
    magnitudes = np.abs(traj.values)
    below = magnitudes <= threshold
    # Cumulative count of below-threshold samples; window [i, j) is all below
    # exactly when the count increases by j - i.
    counts = np.concatenate([[0], np.cumsum(below)])
    # Last start index whose window still fits on the grid.
    fit = np.searchsorted(times, times[-1] - window + 1e-12, side="right")
    ends = np.searchsorted(times, times[:fit] + window, side="right")
    starts = np.arange(fit)
    qualified = counts[ends] - counts[starts] == ends - starts
    hits = np.nonzero(qualified)[0]
    if hits.size:
        i = int(hits[0])
        return DecoherenceVerdict(
            t_d=float(times[i]),
            threshold=threshold,
            window=window,
            sup_late=float(magnitudes[i : ends[i]].max()),
            decohered=True,
        )
    tail = np.searchsorted(times, times[-1] - window - 1e-12, side="left")
    return DecoherenceVerdict(
        t_d=NEVER,
        threshold=threshold,
        window=window,
        sup_late=float(magnitudes[tail:].max()),
        decohered=False,
    )


def r_trajectory(
    model: SpinBathModel, t_max: float, points: int, config_digest: str = ""
) -> Trajectory:
    """Sample the bath-branch overlap on a uniform grid starting at 0."""
    if points < 2:
        raise ValueError("need at least two grid points")
    if not (np.isfinite(t_max) and t_max > 0.0):
        raise ValueError("t_max must be positive and finite")
    times = np.linspace(0.0, t_max, points)
    return Trajectory(
        times=times,
        values=overlap_r(model, times),
        label="overlap_r",
        config_digest=config_digest,
    )


def fluctuation_stats(
    model: SpinBathModel,
    t_window: tuple[float, float],
    samples: int = 400,
    seed: int = 0,
) -> tuple[float, float]:
    """Late-time average of |r|^2 against its closed-form prediction.

    Draws uniform random times in the window and averages |r(t)|^2.  The
    prediction is prod_i (|alpha_i|^4 + |beta_i|^4): each site factor of
    |r|^2 oscillates around that value, and the cosines average out for
    incommensurate couplings (commensurate models belong in recurrence_check
    instead).  Returns (measured mean, prediction).
    """
    t0, t1 = float(t_window[0]), float(t_window[1])
    if not t1 > t0:
        raise ValueError("time window is degenerate")
    if samples < 100:
        raise ValueError("need at least 100 time samples")
    gen = np.random.default_rng(seed)
    ts = gen.uniform(t0, t1, samples)
    mean_r2 = float(np.mean(np.abs(overlap_r(model, ts)) ** 2))
    w_up = model.alphas.real**2 + model.alphas.imag**2
    w_down = model.betas.real**2 + model.betas.imag**2
    predicted_r2 = float(np.prod(w_up**2 + w_down**2))
    return mean_r2, predicted_r2


def recurrence_check(model: SpinBathModel, t_rec: float) -> float:
    """|r| at the common period of a commensurate-coupling model.

    Requires every coupling to be an integer multiple of 2 pi / t_rec; then
    every overlap factor returns to 1 simultaneously at t_rec, so the value
    must be 1 up to rounding.  A closed quasi-periodic system has no
    decoherence time; this makes the revival explicit.
    """
    if not (np.isfinite(t_rec) and t_rec > 0.0):
        raise ValueError("recurrence time must be positive and finite")
    g_base = 2.0 * np.pi / t_rec
    ratios = model.couplings / g_base
    nearest = np.rint(ratios)
    if np.any(nearest < 1.0) or np.any(
        np.abs(ratios - nearest) > COMMENSURATE_RTOL * np.maximum(1.0, ratios)
    ):
        raise ValueError(
            "couplings are not integer multiples of 2*pi / t_rec; "
            "recurrence is only exact for commensurate models"
        )
    return abs(overlap_r(model, t_rec))


def weak_limit_residual(model: SpinBathModel, obs: RelevantObservable, t):
    """Distance of the expectation from its infinite-time limit.

    Only defined for observables whose site parts are all identity: for those
    the expectation is |a|^2 s00 + |b|^2 s11 plus a cross term proportional to
    r(t), so the residual is bounded by 2 |a| |b| |s10| |r(t)| and inherits
    the overlap decay.
    """
    if not obs.is_identity_sites():
        raise ValueError("observable site parts must all be identity")
    limit = (
        abs(model.a) ** 2 * obs.system_part[0, 0].real
        + abs(model.b) ** 2 * obs.system_part[1, 1].real
    )
    out = np.abs(np.asarray(expectation(model, obs, t)) - limit)
    return float(out) if np.ndim(t) == 0 else out


def timescale_estimate(v_ev: float) -> float:
    """Decoherence-time estimate hbar / V for an interaction strength in eV."""
    if not (np.isfinite(v_ev) and v_ev > 0.0):
        raise ValueError("interaction strength must be positive and finite")
    return HBAR_EV_S / v_ev


def timescale_report(v1_ev: float, v2_ev: float) -> TimescaleReport:
    """Compare the hbar / V estimates of two interaction strengths."""
    t_ds = timescale_estimate(v1_ev)
    t_du = timescale_estimate(v2_ev)
    return TimescaleReport(
        v1_ev=float(v1_ev),
        v2_ev=float(v2_ev),
        t_ds_s=t_ds,
        t_du_s=t_du,
        hierarchy_ok=(not v1_ev > v2_ev) or t_ds < t_du,
    )


def n_scaling_sweep(
    n_list: list[int],
    seed: int,
    threshold: float = 0.1,
    window: float | None = None,
    n_seeds: int = 5,
    points: int = 2000,
    t_max: float | None = None,
) -> list[SweepRow]:
    """Median decoherence verdicts across site counts, common seeded family.

    For each site count, n_seeds models are drawn at seeds seed, seed+1, ...
    and judged on a uniform grid.  Defaults follow the mean coupling gbar of
    each model: window 20 / gbar, grid span 100 / gbar.  Because per-site
    random streams are keyed by site index, the models at different site
    counts share their common sites, so rows are directly comparable.  Median
    sup_late decreases as the bath grows; a single site never decoheres.
    """
    if not n_list:
        raise ValueError("need at least one site count")
    if n_seeds < 1:
        raise ValueError("need at least one seed")
    rows = []
    for n_sites in n_list:
        t_ds, sups, verdicts = [], [], []
        for k in range(n_seeds):
            model = sample_model(n_sites, seed + k)
            gbar = model.mean_coupling
            w = window if window is not None else 20.0 / gbar
            span = t_max if t_max is not None else 100.0 / gbar
            verdict = decoherence_time(
                r_trajectory(model, span, points), threshold, w
            )
            t_ds.append(verdict.t_d)
            sups.append(verdict.sup_late)
            verdicts.append(verdict.decohered)
        rows.append(
            SweepRow(
                n_sites=n_sites,
                t_d=float(np.median(t_ds)),
                sup_late=float(np.median(sups)),
                decohered=all(verdicts),
            )
        )
    return rows
