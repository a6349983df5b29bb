"""Shared builders for randomized test systems."""
from __future__ import annotations

import numpy as np

from cavmag import CouplingSpec, FieldLinear, ModeSpec, Static, Sweep, SystemConfig

SEED = 20260814


def random_lossless_config(rng: np.random.Generator, n_max: int = 4) -> SystemConfig:
    """Random system with no intrinsic loss and no dissipative coupling.

    Only external (port) coupling and real coherent couplings, so the
    scattering must be unitary.
    """
    n = int(rng.integers(1, n_max + 1))
    modes = [
        ModeSpec(
            name="m0",
            frequency=FieldLinear(float(rng.uniform(0.3, 1.0)),
                                  float(rng.uniform(2.0, 3.0))),
            alpha=0.0,
            beta=float(rng.uniform(0.0, 0.05)),
        )
    ]
    for k in range(1, n):
        modes.append(
            ModeSpec(
                name=f"m{k}",
                frequency=Static(float(rng.uniform(2.5, 5.5))),
                alpha=0.0,
                beta=float(rng.uniform(0.0, 0.05)),
            )
        )
    couplings = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.uniform() < 0.7:
                couplings.append(
                    CouplingSpec(f"m{a}", f"m{b}",
                                 j=float(rng.uniform(-0.1, 0.1)), gamma=0.0)
                )
    return SystemConfig(modes=tuple(modes), couplings=tuple(couplings))


def random_decaying_config(rng: np.random.Generator, n_max: int = 4) -> SystemConfig:
    """Random lossy system with no dissipative coupling.

    With real coherent couplings and non-negative per-mode damping every
    hybrid mode decays, which keeps time-domain integration bounded.
    """
    n = int(rng.integers(2, n_max + 1))
    modes = []
    for k in range(n):
        modes.append(
            ModeSpec(
                name=f"m{k}",
                frequency=Static(float(rng.uniform(2.5, 5.5))),
                alpha=float(rng.uniform(1e-3, 1e-2)),
                beta=float(rng.uniform(1e-3, 0.05)),
            )
        )
    couplings = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.uniform() < 0.7:
                couplings.append(
                    CouplingSpec(f"m{a}", f"m{b}",
                                 j=float(rng.uniform(-0.1, 0.1)), gamma=0.0)
                )
    return SystemConfig(modes=tuple(modes), couplings=tuple(couplings))


def random_complex_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random complex symmetric matrix with entries of order one."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.T)
