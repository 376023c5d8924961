"""Experiment configuration: flat JSON documents with a stable digest.

A config is one flat key-value document; command-line flags override file
fields, which override the defaults below.  The digest is the SHA-256 of the
canonical serialization (sorted keys, compact separators) of every field
except the output path, so the same experiment keeps the same digest wherever
its results land.  Every output file embeds that digest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields
from typing import Any

import numpy as np

from .ensemble import COEFF_DISTS, DEFAULT_AMPLITUDE, G_DISTS, sample_observable
from .model import PAULI_BY_NAME, RelevantObservable, eid_observable, single_site_observable

COMMANDS = (
    "simulate-r",
    "simulate-obs",
    "sweep-n",
    "oracle-check",
    "recurrence",
    "timescale",
    "fluctuation",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """All knobs of one reproducible run, in one flat namespace.

    Fields that default to None are derived from the model's mean coupling
    gbar at run time: t_max becomes 100/gbar, window 20/gbar, and the
    averaging interval (t0, t1) becomes (50/gbar, 550/gbar).
    """

    command: str
    n: int = 20
    n_list: tuple[int, ...] | None = None
    seed: int = 0
    coeff_dist: str = "uniform"
    g_dist: str = "uniform"
    a_re: float = DEFAULT_AMPLITUDE
    a_im: float = 0.0
    b_re: float = DEFAULT_AMPLITUDE
    b_im: float = 0.0
    t_max: float | None = None
    points: int = 2000
    theta: float = 0.1
    window: float | None = None
    obs: str = "eid:1,0,0,-1"
    eps: str | None = None
    g_base: float = 1.0
    v1_ev: float = 1e23
    v2_ev: float = 1.0
    trials: int = 20
    tol: float = 1e-10
    n_seeds: int = 5
    samples: int = 400
    t0: float | None = None
    t1: float | None = None
    site_cap: int = 24
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(
                f"unknown command {self.command!r}; known: {', '.join(COMMANDS)}"
            )
        if self.n_list is not None:
            object.__setattr__(self, "n_list", tuple(int(x) for x in self.n_list))
            if not self.n_list or any(x < 1 for x in self.n_list):
                raise ValueError("n_list must be a non-empty list of positive counts")
        if self.n < 1:
            raise ValueError("site count must be at least 1")
        if self.coeff_dist not in COEFF_DISTS or self.g_dist not in G_DISTS:
            raise ValueError("unresolvable distribution name")
        if self.points < 2:
            raise ValueError("need at least two grid points")
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie strictly between 0 and 1")
        for name in ("t_max", "window", "t0", "t1"):
            value = getattr(self, name)
            if value is not None and not value > 0.0:
                raise ValueError(f"{name} must be positive when given")
        for name in ("g_base", "v1_ev", "v2_ev", "tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.trials < 1 or self.n_seeds < 1 or self.site_cap < 1:
            raise ValueError("trials, n_seeds and site_cap must be positive")
        if self.samples < 100:
            raise ValueError("need at least 100 averaging samples")

    @property
    def a(self) -> complex:
        return complex(self.a_re, self.a_im)

    @property
    def b(self) -> complex:
        return complex(self.b_re, self.b_im)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        if d["n_list"] is not None:
            d["n_list"] = list(d["n_list"])
        return d

    def canonical_json(self) -> str:
        """Serialization that defines identity; the output path is excluded."""
        d = self.to_dict()
        d.pop("out")
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("ascii")).hexdigest()


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Build a config from a flat JSON document; unknown keys are an error."""
    if not isinstance(data, dict):
        raise ValueError("config document must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    if "command" not in data:
        raise ValueError("config needs a command")
    return ExperimentConfig(**data)


def config_from_file(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file is not valid JSON: {exc}") from None
    return config_from_dict(data)


def _parse_floats(text: str, count: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise ValueError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"{what} has a non-numeric entry in {text!r}") from None


def _parse_site_part(text: str) -> np.ndarray:
    """A named 2x2 Hermitian matrix or four numbers e00,e01re,e01im,e11."""
    if text in PAULI_BY_NAME:
        return PAULI_BY_NAME[text]
    e00, e01re, e01im, e11 = _parse_floats(text, 4, "site part")
    off = complex(e01re, e01im)
    return np.array([[e00, off], [np.conj(off), e11]])


def parse_observable_spec(
    spec: str, n_sites: int, eps_default: str | None = None
) -> tuple[RelevantObservable, int | None]:
    """Resolve an observable spec string against a model size.

    Grammar:  ``eid:s00,s01re,s01im,s11`` for an identity-on-every-site
    observable, ``single-site:<j>`` or ``single-site:<j>:<part>`` for a probe
    on bath site j alone (part is a Pauli name or four numbers; an omitted
    part falls back to eps_default, then to sz), and ``random:<seed>`` for a
    seeded random Hermitian product.  Returns the observable and, for the
    single-site case, the site index.
    """
    kind, _, rest = spec.partition(":")
    if kind == "eid":
        s00, s01re, s01im, s11 = _parse_floats(rest, 4, "eid spec")
        return eid_observable(s00, complex(s01re, s01im), s11, n_sites), None
    if kind == "single-site":
        site_text, _, part_text = rest.partition(":")
        try:
            j = int(site_text)
        except ValueError:
            raise ValueError(f"single-site index must be an integer, got {site_text!r}") from None
        part = _parse_site_part(part_text or eps_default or "sz")
        return single_site_observable(j, part, n_sites), j
    if kind == "random":
        try:
            obs_seed = int(rest)
        except ValueError:
            raise ValueError(f"random observable needs an integer seed, got {rest!r}") from None
        return sample_observable(n_sites, obs_seed), None
    raise ValueError(
        f"unknown observable kind {kind!r}; use eid:..., single-site:... or random:..."
    )
