"""Eigenvalue branch tracking and crossing-zone classification.

Complex eigenvalues of the effective Hamiltonian are tracked along the
field sweep by nearest-continuation, then each anticipated mode crossing
is classified from the branch separation inside a window around it:
branches whose real parts coalesce signal attraction, branches that keep
a clear gap signal repulsion.  The same logic applies to the imaginary
parts (linewidths).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._format import fmt9, open_text
from .errors import NoSolution, WindowTooNarrow
from .linalg import eigenvalues
from .model import FieldLinear, ModeSpec, SystemConfig, effective_hamiltonian, mode_frequency

# classification thresholds, calibrated once against the bundled
# three- and four-mode reproduction presets and frozen; see tests
EPS_MERGE = 3.5e-3  # GHz; separation below this counts as merged
G_MIN = 1.5e-2  # GHz; a window-wide gap above this counts as repulsion
W_MIN = 3  # consecutive merged points required for attraction

WINDOW_DAMPING_FACTOR = 25.0  # half-width in units of static-mode damping / slope
MIN_WINDOW_POINTS = 7

_EXHAUSTIVE_TRACK_LIMIT = 6  # N! permutations up to here, greedy beyond


class CrossingClass(Enum):
    ATTRACTION = "Attraction"
    REPULSION = "Repulsion"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class BranchSet:
    """Tracked eigenvalue branches over a field sweep.

    ``branches`` has shape ``(len(field_values), n_modes)``; column k is a
    continuous branch.
    """

    field_values: np.ndarray
    branches: np.ndarray

    def __post_init__(self):
        if self.branches.ndim != 2 or self.branches.shape[0] != self.field_values.size:
            raise ValueError("branches shape does not match the field axis")


@dataclass(frozen=True)
class ZoneSpec:
    """A window around one anticipated crossing.

    ``pair`` names the (field-tuned, static) modes, ``center_field`` the
    bias where their bare frequencies meet, ``window`` the half-width in
    field units.
    """

    pair: tuple[str, str]
    center_field: float
    window: float

    def __post_init__(self):
        if not np.isfinite(self.center_field):
            raise ValueError("center_field must be finite")
        if not self.window > 0.0:
            raise ValueError("window must be positive")


@dataclass(frozen=True)
class ZoneReport:
    """Classification outcome for one zone; unclassified parts stay None."""

    zone: ZoneSpec
    real_class: CrossingClass | None = None
    imag_class: CrossingClass | None = None
    min_gap_real: float | None = None
    min_gap_imag: float | None = None
    merged_interval_real: float | None = None


def _track_order(prev: np.ndarray, new: np.ndarray) -> np.ndarray:
    n = prev.size
    if n <= _EXHAUSTIVE_TRACK_LIMIT:
        best = None
        best_cost = np.inf
        for perm in itertools.permutations(range(n)):
            cost = 0.0
            for i, j in enumerate(perm):
                cost += abs(new[j] - prev[i]) ** 2
            if cost < best_cost:
                best_cost = cost
                best = perm
        return np.array(best, dtype=np.intp)
    # greedy nearest-neighbor: cheapest pairs first
    dist = np.abs(new[np.newaxis, :] - prev[:, np.newaxis])
    order = np.full(n, -1, dtype=np.intp)
    taken = np.zeros(n, dtype=bool)
    for flat in np.argsort(dist, axis=None):
        i, j = divmod(int(flat), n)
        if order[i] < 0 and not taken[j]:
            order[i] = j
            taken[j] = True
    return order


def eigen_sweep(config: SystemConfig) -> BranchSet:
    """Track the complex eigenvalues of the system along the field sweep.

    At each field step branches continue to the permutation of new
    eigenvalues that minimizes the summed squared displacement, so
    crossings do not swap branch identities spuriously.
    """
    fields = config.field_sweep.values()
    n = config.n
    out = np.empty((fields.size, n), dtype=np.complex128)
    for i, h_dc in enumerate(fields):
        vals = eigenvalues(effective_hamiltonian(config, float(h_dc))).values
        if i == 0:
            out[0] = vals
        else:
            out[i] = vals[_track_order(out[i - 1], vals)]
    return BranchSet(field_values=fields, branches=out)


def _split_pair(config: SystemConfig, pair: tuple[str, str]) -> tuple[ModeSpec, ModeSpec]:
    a, b = (config.mode(pair[0]), config.mode(pair[1]))
    tuned = [m for m in (a, b) if isinstance(m.frequency, FieldLinear)]
    if len(tuned) != 1:
        raise ValueError("zone pair needs exactly one field-tuned and one static mode")
    static = a if tuned[0] is b else b
    return tuned[0], static


def identify_zone(config: SystemConfig, pair: tuple[str, str]) -> ZoneSpec:
    """Locate the crossing window for a (field-tuned, static) mode pair.

    The center is the field where the bare frequencies coincide; the
    half-width scales with the static mode's damping and is clamped so
    the window stays inside the sweep.

    Raises
    ------
    NoSolution
        If the bare frequencies never cross inside the sweep range.
    ValueError
        If the pair is not one field-tuned plus one static mode.
    """
    tunable, static = _split_pair(config, pair)
    law = tunable.frequency
    if law.slope == 0.0:
        raise NoSolution(f"mode {tunable.name!r} does not tune with field")
    center = (static.frequency.value - law.intercept) / law.slope
    start, stop = config.field_sweep.start, config.field_sweep.stop
    if not start < center < stop:
        raise NoSolution(
            f"{tunable.name}-{static.name} crossing at h = {center:.6g} kOe "
            f"lies outside the sweep [{start:g}, {stop:g}]"
        )
    window = min(
        WINDOW_DAMPING_FACTOR * static.damping / abs(law.slope),
        center - start,
        stop - center,
    )
    return ZoneSpec(pair=(tunable.name, static.name), center_field=center, window=window)


def window_indices(branchset: BranchSet, zone: ZoneSpec) -> np.ndarray:
    """Indices of field points inside the zone window."""
    h = branchset.field_values
    return np.nonzero(np.abs(h - zone.center_field) <= zone.window + 1e-12)[0]


def select_crossing_pair(config: SystemConfig, branchset: BranchSet, zone: ZoneSpec,
                         idx: np.ndarray) -> tuple[int, int]:
    """Pick the two branches participating in a zone's crossing.

    At both window edges the hybridized branches should still resemble the
    bare modes, so each candidate branch pair is scored by its distance to
    the bare complex frequencies there (either assignment), summed over
    the edges; the cheapest pair wins.
    """
    tunable, static = _split_pair(config, zone.pair)
    lam = branchset.branches
    h = branchset.field_values
    edges = (int(idx[0]), int(idx[-1]))
    targets = []
    for e in edges:
        t_tun = mode_frequency(tunable, float(h[e])) - 1j * tunable.damping
        t_stat = mode_frequency(static, float(h[e])) - 1j * static.damping
        targets.append((t_tun, t_stat))
    best = None
    best_cost = np.inf
    for p, q in itertools.combinations(range(lam.shape[1]), 2):
        cost = 0.0
        for e, (t_tun, t_stat) in zip(edges, targets):
            straight = abs(lam[e, p] - t_tun) + abs(lam[e, q] - t_stat)
            swapped = abs(lam[e, p] - t_stat) + abs(lam[e, q] - t_tun)
            cost += min(straight, swapped)
        if cost < best_cost:
            best_cost = cost
            best = (p, q)
    return best


def _longest_merged_run(merged: np.ndarray) -> tuple[int, int, int]:
    # returns (length, start, end) of the longest True run, end inclusive
    best = (0, -1, -1)
    run_start = None
    for i, flag in enumerate(np.append(merged, False)):
        if flag and run_start is None:
            run_start = i
        elif not flag and run_start is not None:
            length = i - run_start
            if length > best[0]:
                best = (length, run_start, i - 1)
            run_start = None
    return best


def classify_zone(config: SystemConfig, branchset: BranchSet, zone: ZoneSpec,
                  part: str = "real", eps_merge: float = EPS_MERGE,
                  g_min: float = G_MIN, w_min: int = W_MIN) -> ZoneReport:
    """Classify one crossing zone from the branch separation.

    Attraction: the chosen part of the two branches stays within
    ``eps_merge`` for at least ``w_min`` consecutive field points.
    Repulsion: the separation never falls below ``g_min`` anywhere in the
    window.  Anything else is Intermediate.

    Raises
    ------
    WindowTooNarrow
        If fewer than 7 sweep points fall inside the window.
    """
    if part not in ("real", "imag"):
        raise ValueError("part must be 'real' or 'imag'")
    idx = window_indices(branchset, zone)
    if idx.size < MIN_WINDOW_POINTS:
        raise WindowTooNarrow(
            f"{idx.size} field points inside the {zone.pair[0]}-{zone.pair[1]} "
            f"window; need at least {MIN_WINDOW_POINTS}"
        )
    p, q = select_crossing_pair(config, branchset, zone, idx)
    la = branchset.branches[idx, p]
    lb = branchset.branches[idx, q]
    d = np.abs(getattr(la, part) - getattr(lb, part))
    merged = d <= eps_merge
    run_len, run_a, run_b = _longest_merged_run(merged)
    if run_len >= w_min:
        label = CrossingClass.ATTRACTION
    elif float(d.min()) >= g_min:
        label = CrossingClass.REPULSION
    else:
        label = CrossingClass.INTERMEDIATE
    fields = {f"{part}_class": label, f"min_gap_{part}": float(d.min())}
    if part == "real":
        h = branchset.field_values[idx]
        interval = float(h[run_b] - h[run_a]) if run_len > 0 else 0.0
        fields["merged_interval_real"] = interval
    return ZoneReport(zone=zone, **fields)


def classify_both(config: SystemConfig, branchset: BranchSet,
                  zone: ZoneSpec) -> ZoneReport:
    """Classify both the real and imaginary parts of a zone."""
    re = classify_zone(config, branchset, zone, "real")
    im = classify_zone(config, branchset, zone, "imag")
    return ZoneReport(
        zone=zone,
        real_class=re.real_class,
        imag_class=im.imag_class,
        min_gap_real=re.min_gap_real,
        min_gap_imag=im.min_gap_imag,
        merged_interval_real=re.merged_interval_real,
    )


def export_branches_csv(branchset: BranchSet, destination) -> None:
    """Write tracked branches as CSV with header h_koe,branch,re_ghz,im_ghz."""
    with open_text(destination) as fh:
        fh.write("h_koe,branch,re_ghz,im_ghz\n")
        for i, h_dc in enumerate(branchset.field_values):
            for k in range(branchset.branches.shape[1]):
                val = branchset.branches[i, k]
                fh.write(f"{fmt9(h_dc)},{k},{fmt9(val.real)},{fmt9(val.imag)}\n")
