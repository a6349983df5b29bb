"""Declarative description of coupled-mode systems and matrix construction.

Conventions: every frequency, damping rate, and coupling strength is in GHz;
the dc bias field is in kOe. A system is a list of modes, each with an
intrinsic damping ``alpha`` and a feedline-induced damping ``beta``, plus a
list of pairwise couplings ``j + i*gamma`` (coherent + dissipative part).
The shared feedline always contributes an extra ``-i*sqrt(beta_l*beta_m)``
between every pair of modes, declared coupling or not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DuplicateMode, UnknownModeInCoupling


@dataclass(frozen=True)
class Static:
    """A field-independent resonance at ``value`` GHz."""

    value: float

    def __post_init__(self):
        if not (self.value > 0.0 and math.isfinite(self.value)):
            raise ValueError(f"static frequency must be positive, got {self.value}")

    def at(self, h_dc: float) -> float:
        return self.value


@dataclass(frozen=True)
class FieldLinear:
    """A resonance tuned linearly by the bias field: slope*h + intercept."""

    slope: float
    intercept: float

    def __post_init__(self):
        if not math.isfinite(self.slope):
            raise ValueError("slope must be finite")
        if not (self.intercept >= 0.0 and math.isfinite(self.intercept)):
            raise ValueError(f"intercept must be >= 0, got {self.intercept}")

    def at(self, h_dc: float) -> float:
        return self.slope * h_dc + self.intercept


FrequencyLaw = Static | FieldLinear


@dataclass(frozen=True)
class ModeSpec:
    """One mode: name, frequency law, and damping rates (GHz)."""

    name: str
    frequency: FrequencyLaw
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError(f"mode {self.name!r}: damping rates must be >= 0")

    @property
    def damping(self) -> float:
        """Total decay rate alpha + beta."""
        return self.alpha + self.beta


@dataclass(frozen=True)
class CouplingSpec:
    """Unordered pair coupling: complex strength j + i*gamma applied to (a,b) and (b,a)."""

    a: str
    b: str
    j: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"coupling must join two distinct modes, got {self.a!r} twice")


@dataclass(frozen=True)
class Sweep:
    """Inclusive linear range with a fixed point count."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError(f"sweep needs start < stop, got [{self.start}, {self.stop}]")
        if self.points < 2:
            raise ValueError(f"sweep needs >= 2 points, got {self.points}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


DEFAULT_FIELD_SWEEP = Sweep(0.0, 3.0, 301)
DEFAULT_FREQUENCY_SWEEP = Sweep(2.5, 5.0, 401)


@dataclass(frozen=True)
class SystemConfig:
    """Complete immutable description of a coupled-mode system and its sweep grids."""

    modes: tuple[ModeSpec, ...]
    couplings: tuple[CouplingSpec, ...] = ()
    field_sweep: Sweep = DEFAULT_FIELD_SWEEP
    frequency_sweep: Sweep = DEFAULT_FREQUENCY_SWEEP

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "couplings", tuple(self.couplings))
        if len(self.modes) < 1:
            raise ValueError("a system needs at least one mode")
        names = [m.name for m in self.modes]
        for name in names:
            if names.count(name) > 1:
                raise DuplicateMode(f"mode name {name!r} appears more than once")
        known = set(names)
        pairs = set()
        for c in self.couplings:
            for end in (c.a, c.b):
                if end not in known:
                    raise UnknownModeInCoupling(f"coupling references unknown mode {end!r}")
            key = frozenset((c.a, c.b))
            if key in pairs:
                raise ValueError(f"coupling pair ({c.a!r}, {c.b!r}) declared more than once")
            pairs.add(key)

    @property
    def n(self) -> int:
        return len(self.modes)

    def mode_index(self, name: str) -> int:
        for i, m in enumerate(self.modes):
            if m.name == name:
                return i
        raise KeyError(f"no mode named {name!r}")

    def mode(self, name: str) -> ModeSpec:
        return self.modes[self.mode_index(name)]


def mode_frequency(mode: ModeSpec, h_dc: float) -> float:
    """Resonance frequency of one mode at the given bias field (GHz)."""
    return mode.frequency.at(h_dc)


def effective_hamiltonian(config: SystemConfig, h_dc: float) -> np.ndarray:
    """N x N complex symmetric coupling matrix at one bias field.

    Diagonal entry l is ``w_l(h) - i*(alpha_l + beta_l)``; off-diagonal (l,m)
    is ``(j_lm + i*gamma_lm) - i*sqrt(beta_l*beta_m)``. Entries (l,m) and
    (m,l) are assigned from the same value, so the matrix is symmetric
    bitwise.
    """
    n = config.n
    h = np.zeros((n, n), dtype=np.complex128)
    for l, m in enumerate(config.modes):
        h[l, l] = m.frequency.at(h_dc) - 1j * (m.alpha + m.beta)
    for l in range(n):
        for m in range(l + 1, n):
            entry = -1j * math.sqrt(config.modes[l].beta * config.modes[m].beta)
            h[l, m] = entry
            h[m, l] = entry
    for c in config.couplings:
        l = config.mode_index(c.a)
        m = config.mode_index(c.b)
        entry = h[l, m] + (c.j + 1j * c.gamma)
        h[l, m] = entry
        h[m, l] = entry
    return h


def response_matrix(config: SystemConfig, h_dc: float, omega: float) -> np.ndarray:
    """Linear-response matrix M = i*(omega*I - H) at one (field, frequency) point."""
    h = effective_hamiltonian(config, h_dc)
    return 1j * (omega * np.eye(config.n, dtype=np.complex128) - h)


def port_vector(config: SystemConfig) -> np.ndarray:
    """Feedline coupling vector: component l is sqrt(2)*sqrt(beta_l)."""
    beta = np.array([m.beta for m in config.modes], dtype=np.float64)
    return np.sqrt(2.0) * np.sqrt(beta)
