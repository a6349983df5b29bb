"""Transmission spectra from the coupled-mode response matrix.

The frequency-domain path solves the linear response system directly.  A
slow time-domain integrator is kept alongside it as an independent check:
it propagates the driven equations of motion to steady state and
demodulates, so the two routes share no linear algebra.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._format import fmt9, open_binary, open_text
from .errors import NonDecaying, SingularMatrix
from .linalg import lu_solve
from .model import SystemConfig, effective_hamiltonian, port_vector

PGM_ABS_FLOOR = 1e-12  # |1 + S21| is clamped here before taking logs

# time-domain integrator tuning; both bounds are deliberately conservative
TD_STEP_FACTOR = 0.01  # dt * max|H| stays below this
TD_SETTLE_FACTOR = 20.0  # integration spans this many slowest decay times
TD_STATE_LIMIT = 1e16  # squared-norm divergence guard
TD_CHECK_MASK = 0xFFFF  # guard runs every 65536 steps


@dataclass(frozen=True)
class SpectrumGrid:
    """Complex transmission on a field x frequency grid.

    ``s21`` has shape ``(len(field_values), len(freq_values))``; row i holds
    the spectrum at ``field_values[i]``.
    """

    field_values: np.ndarray
    freq_values: np.ndarray
    s21: np.ndarray

    def __post_init__(self):
        if self.s21.shape != (self.field_values.size, self.freq_values.size):
            raise ValueError("s21 shape does not match the sweep axes")


def _s21_point(hmat: np.ndarray, ports: np.ndarray, omega: float, h_dc: float) -> complex:
    # shared by s21_at and sweep_spectrum so the two agree bitwise
    m = 1j * (omega * np.eye(hmat.shape[0], dtype=np.complex128) - hmat)
    try:
        x = lu_solve(m, ports)
    except SingularMatrix:
        raise SingularMatrix(
            f"response matrix is singular at h = {h_dc:.9g} kOe, f = {omega:.9g} GHz"
        ) from None
    return complex(ports @ x)


def s21_at(config: SystemConfig, h_dc: float, omega: float) -> complex:
    """Transmission coefficient at one bias field and drive frequency.

    Returns S21 defined so that the bare feedline gives ``1 + S21 = 1``;
    an isolated critically coupled resonance drives ``1 + S21`` to zero.

    Raises
    ------
    SingularMatrix
        If the response matrix is exactly singular at this point.
    """
    hmat = effective_hamiltonian(config, h_dc)
    return _s21_point(hmat, port_vector(config), float(omega), float(h_dc))


def sweep_spectrum(config: SystemConfig, threads: int = 1) -> SpectrumGrid:
    """Evaluate S21 over the configured field and frequency sweeps.

    Parameters
    ----------
    config : SystemConfig
        System description including both sweep axes.
    threads : int
        Worker threads for the field rows.  Results are identical for any
        thread count; rows are written into preassigned slots.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    fields = config.field_sweep.values()
    freqs = config.frequency_sweep.values()
    ports = port_vector(config)
    out = np.empty((fields.size, freqs.size), dtype=np.complex128)

    def run_row(i: int) -> None:
        h_dc = float(fields[i])
        hmat = effective_hamiltonian(config, h_dc)
        for j, omega in enumerate(freqs):
            out[i, j] = _s21_point(hmat, ports, float(omega), h_dc)

    if threads == 1:
        for i in range(fields.size):
            run_row(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for future in [pool.submit(run_row, i) for i in range(fields.size)]:
                future.result()
    return SpectrumGrid(field_values=fields, freq_values=freqs, s21=out)


@njit(cache=True, nogil=True)
def _rk4_drive_kernel(phi, w, rho, n_steps, demod_from):
    n = w.shape[0]
    x = np.zeros(n, dtype=np.complex128)
    xn = np.zeros(n, dtype=np.complex128)
    acc = np.zeros(n, dtype=np.complex128)
    p = 1.0 + 0.0j
    count = 0
    for step in range(n_steps):
        for i in range(n):
            s = w[i] * p
            for j in range(n):
                s += phi[i, j] * x[j]
            xn[i] = s
        x, xn = xn, x
        p *= rho
        if step >= demod_from:
            inv = 1.0 / p
            for i in range(n):
                acc[i] += x[i] * inv
            count += 1
        if (step & TD_CHECK_MASK) == 0:
            nrm = 0.0
            for i in range(n):
                nrm += x[i].real * x[i].real + x[i].imag * x[i].imag
            if not np.isfinite(nrm) or nrm > TD_STATE_LIMIT:
                return acc, False
    return acc / count, True


def _rk4_tables(hmat: np.ndarray, beta: np.ndarray, omega: float, dt: float):
    # one-step propagator for the linear driven system: x' = phi @ x + w * p,
    # where p tracks the drive phase and advances by rho each step
    n = hmat.shape[0]
    a = (-1j * dt) * hmat
    eye = np.eye(n, dtype=np.complex128)
    phi = eye + a @ (eye + (a / 2) @ (eye + (a / 3) @ (eye + a / 4)))
    c = (-1j * dt) * np.sqrt(beta).astype(np.complex128)
    r = np.exp(-0.5j * omega * dt)
    k1 = c.copy()
    k2 = (a / 2) @ k1 + c * r
    k3 = (a / 2) @ k2 + c * r
    k4 = a @ k3 + c * (r * r)
    w = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    rho = np.exp(-1j * omega * dt)
    return phi, w, rho


def s21_time_domain_oracle(config: SystemConfig, h_dc: float, omega: float) -> complex:
    """Transmission at one point via explicit time integration.

    Integrates the driven mode amplitudes from rest with fixed-step RK4
    until transients have decayed, demodulates the final quarter of the
    run at the drive frequency, and converts the steady amplitudes to S21.
    Orders of magnitude slower than :func:`s21_at`; intended for spot
    checks only.

    Raises
    ------
    NonDecaying
        If a mode has no net damping, or the state grows without bound
        (the coupled system has an amplified hybrid mode).
    """
    for mode in config.modes:
        if mode.damping <= 0.0:
            raise NonDecaying(f"mode {mode.name!r} has no net damping")
    hmat = effective_hamiltonian(config, float(h_dc))
    beta = np.array([m.beta for m in config.modes], dtype=np.float64)
    dt = TD_STEP_FACTOR / float(np.abs(hmat).max())
    duration = TD_SETTLE_FACTOR / min(m.damping for m in config.modes)
    n_steps = int(math.ceil(duration / dt))
    demod_from = (3 * n_steps) // 4
    phi, w, rho = _rk4_tables(hmat, beta, float(omega), dt)
    phasors, ok = _rk4_drive_kernel(phi, w, rho, n_steps, demod_from)
    if not ok:
        raise NonDecaying(
            f"state diverged at h = {h_dc:.9g} kOe; a hybrid mode is amplified"
        )
    return complex(-2j * (np.sqrt(beta) @ phasors))


def export_csv(grid: SpectrumGrid, destination) -> None:
    """Write a spectrum as CSV with header h_koe,f_ghz,re_s21,im_s21,abs_s21.

    Rows are field-major.  Values carry 9 significant digits.
    """
    with open_text(destination) as fh:
        fh.write("h_koe,f_ghz,re_s21,im_s21,abs_s21\n")
        for i, h_dc in enumerate(grid.field_values):
            row = grid.s21[i]
            for j, freq in enumerate(grid.freq_values):
                val = row[j]
                fh.write(
                    f"{fmt9(h_dc)},{fmt9(freq)},{fmt9(val.real)},"
                    f"{fmt9(val.imag)},{fmt9(abs(val))}\n"
                )


def export_pgm(grid: SpectrumGrid, destination, floor_db: float = -40.0,
               ceil_db: float = 0.0) -> None:
    """Render |1 + S21| in dB as a binary PGM (P5) image.

    Width is the frequency axis, height the field axis.  Levels at or
    below ``floor_db`` map to 0 and at or above ``ceil_db`` to 255.
    """
    if not floor_db < ceil_db:
        raise ValueError("floor_db must be below ceil_db")
    mag = np.maximum(np.abs(1.0 + grid.s21), PGM_ABS_FLOOR)
    db = 20.0 * np.log10(mag)
    scaled = (db - floor_db) / (ceil_db - floor_db) * 255.0
    pixels = np.clip(np.rint(scaled), 0.0, 255.0).astype(np.uint8)
    height, width = pixels.shape
    with open_binary(destination) as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
