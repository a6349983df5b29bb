"""Search of coupling-parameter space for the attraction-repulsion boundary.

A scalar order parameter (the minimal real-part branch gap inside a
crossing window) distinguishes the two regimes: it sits near zero when the
branches merge and stays large when they repel.  Bisecting it against a
threshold midway between the classifier's merge and gap levels locates the
critical coupling value; scanning two coupling parameters yields a regime
map.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ._format import fmt9, open_text
from .branches import (
    EPS_MERGE,
    G_MIN,
    BranchSet,
    ZoneSpec,
    classify_both,
    eigen_sweep,
    select_crossing_pair,
    window_indices,
)
from .errors import CavmagError, NoBracket
from .linalg import eigenvalues
from .model import CouplingSpec, SystemConfig, effective_hamiltonian

THETA = (EPS_MERGE + G_MIN) / 2.0  # order-parameter threshold between regimes
BISECT_TOL = 1e-4  # bracket width at which bisection stops
_REFINE_XATOL = 1e-7


@dataclass(frozen=True)
class ParamSelector:
    """Addresses one scalar coupling parameter between two named modes."""

    a: str
    b: str
    component: str  # "j" (coherent) or "gamma" (dissipative)

    def __post_init__(self):
        if self.component not in ("j", "gamma"):
            raise ValueError("component must be 'j' or 'gamma'")
        if self.a == self.b:
            raise ValueError("selector endpoints must differ")


@dataclass(frozen=True)
class AxisSpec:
    """One scanned axis of a regime map."""

    selector: ParamSelector
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("points must be >= 1")
        if not self.start <= self.stop:
            raise ValueError("start must not exceed stop")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RegimeMap:
    """Grid of (real, imag) crossing classes over two coupling parameters."""

    axis1: AxisSpec
    axis2: AxisSpec
    labels: tuple  # labels[i][j] = (real_class, imag_class) at (v1_i, v2_j)


def apply_coupling_value(config: SystemConfig, selector: ParamSelector,
                         value: float) -> SystemConfig:
    """Return a copy of ``config`` with one coupling parameter replaced.

    If the selector's mode pair has no coupling entry yet, one is added
    with the other component at zero.
    """
    pair = {selector.a, selector.b}
    couplings = list(config.couplings)
    for i, c in enumerate(couplings):
        if {c.a, c.b} == pair:
            couplings[i] = dataclasses.replace(c, **{selector.component: float(value)})
            break
    else:
        couplings.append(CouplingSpec(selector.a, selector.b,
                                      **{selector.component: float(value)}))
    return dataclasses.replace(config, couplings=tuple(couplings))


def gap_order_parameter(config: SystemConfig, zone: ZoneSpec,
                        branchset: BranchSet | None = None) -> float:
    """Minimal real-part separation of the crossing branches in a zone.

    The discrete window minimum is refined by a bounded continuous search
    between the neighboring grid points, with off-grid eigenvalues matched
    to the discrete branches by complex proximity.  The refinement makes
    the value insensitive to the sweep resolution.
    """
    bs = eigen_sweep(config) if branchset is None else branchset
    idx = window_indices(bs, zone)
    p, q = select_crossing_pair(config, bs, zone, idx)
    d = np.abs(bs.branches[idx, p].real - bs.branches[idx, q].real)
    k = int(np.argmin(d))
    coarse = float(d[k])
    g = int(idx[k])
    fields = bs.field_values
    ref_a = bs.branches[g, p]
    ref_b = bs.branches[g, q]

    def pair_gap(h: float) -> float:
        vals = eigenvalues(effective_hamiltonian(config, float(h))).values
        ia = int(np.argmin(np.abs(vals - ref_a)))
        rest = np.delete(vals, ia)
        ib = int(np.argmin(np.abs(rest - ref_b)))
        return abs(vals[ia].real - rest[ib].real)

    lo = float(fields[max(g - 1, 0)])
    hi = float(fields[min(g + 1, fields.size - 1)])
    if lo < hi:
        res = minimize_scalar(pair_gap, bounds=(lo, hi), method="bounded",
                              options={"xatol": _REFINE_XATOL})
        coarse = min(coarse, float(res.fun))
    return coarse


def find_transition(config: SystemConfig, selector: ParamSelector, lo: float,
                    hi: float, zone: ZoneSpec) -> float:
    """Bisect one coupling parameter for the regime boundary in a zone.

    The boundary is where the gap order parameter crosses the midpoint
    between the classifier's merge and gap thresholds.  Bisection stops
    once the bracket is narrower than 1e-4; the midpoint is returned.

    Raises
    ------
    NoBracket
        If the order parameter sits on the same side of the threshold at
        both bracket ends.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")

    def below(value: float) -> bool:
        cfg = apply_coupling_value(config, selector, value)
        return gap_order_parameter(cfg, zone) < THETA

    lo_below = below(lo)
    if lo_below == below(hi):
        side = "below" if lo_below else "above"
        raise NoBracket(
            f"gap order parameter is {side} threshold {THETA:g} at both "
            f"bracket ends [{lo:g}, {hi:g}]"
        )
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if below(mid) == lo_below:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def regime_map(config: SystemConfig, axis1: AxisSpec, axis2: AxisSpec,
               zone: ZoneSpec) -> RegimeMap:
    """Classify a zone over a grid of two coupling parameters.

    Classification failures are re-raised with the offending grid
    coordinates prepended.
    """
    rows = []
    for v1 in axis1.values():
        cfg1 = apply_coupling_value(config, axis1.selector, float(v1))
        row = []
        for v2 in axis2.values():
            cfg2 = apply_coupling_value(cfg1, axis2.selector, float(v2))
            try:
                report = classify_both(cfg2, eigen_sweep(cfg2), zone)
            except CavmagError as exc:
                raise type(exc)(f"at grid point ({v1:g}, {v2:g}): {exc}") from exc
            row.append((report.real_class, report.imag_class))
        rows.append(tuple(row))
    return RegimeMap(axis1=axis1, axis2=axis2, labels=tuple(rows))


def export_regime_csv(rmap: RegimeMap, destination) -> None:
    """Write a regime map as CSV with header v1,v2,real_class,imag_class."""
    v1s = rmap.axis1.values()
    v2s = rmap.axis2.values()
    with open_text(destination) as fh:
        fh.write("v1,v2,real_class,imag_class\n")
        for i, v1 in enumerate(v1s):
            for j, v2 in enumerate(v2s):
                re_cls, im_cls = rmap.labels[i][j]
                fh.write(f"{fmt9(v1)},{fmt9(v2)},{re_cls.value},{im_cls.value}\n")
