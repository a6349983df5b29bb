import io

import numpy as np
import pytest

from cavmag import (
    CouplingSpec,
    ModeSpec,
    NonDecaying,
    SingularMatrix,
    SpectrumGrid,
    Static,
    Sweep,
    SystemConfig,
    effective_hamiltonian,
    export_csv,
    export_pgm,
    port_vector,
    s21_at,
    s21_time_domain_oracle,
    sweep_spectrum,
)
from conftest import SEED, random_lossless_config


def _small_config():
    modes = (
        ModeSpec("a", Static(3.4), alpha=2e-3, beta=1.8e-2),
        ModeSpec("b", Static(4.1), alpha=2e-3, beta=1.8e-2),
    )
    return SystemConfig(
        modes=modes,
        couplings=(CouplingSpec("a", "b", j=0.05),),
        field_sweep=Sweep(0.0, 3.0, 7),
        frequency_sweep=Sweep(2.5, 5.0, 11),
    )


def test_sweep_matches_pointwise_bitwise():
    cfg = _small_config()
    grid = sweep_spectrum(cfg)
    for i, h_dc in enumerate(grid.field_values):
        for j, freq in enumerate(grid.freq_values):
            assert grid.s21[i, j] == s21_at(cfg, float(h_dc), float(freq))


def test_threading_is_deterministic():
    cfg = _small_config()
    one = sweep_spectrum(cfg, threads=1)
    four = sweep_spectrum(cfg, threads=4)
    assert np.array_equal(one.s21, four.s21)


def test_threads_validated():
    with pytest.raises(ValueError):
        sweep_spectrum(_small_config(), threads=0)


def test_s21_matches_direct_inversion():
    cfg = _small_config()
    ports = port_vector(cfg)
    for freq in (3.3, 3.9, 4.4):
        m = 1j * (freq * np.eye(cfg.n) - effective_hamiltonian(cfg, 1.0))
        expected = ports @ np.linalg.solve(m, ports)
        assert s21_at(cfg, 1.0, freq) == pytest.approx(expected, rel=1e-10)


def test_lossless_scattering_is_unitary():
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        cfg = random_lossless_config(rng)
        for _ in range(10):
            h_dc = float(rng.uniform(0.0, 3.0))
            freq = float(rng.uniform(2.0, 6.0))
            val = s21_at(cfg, h_dc, freq)
            assert abs(abs(1.0 + val) - 1.0) < 1e-9


def test_singular_point_reports_location():
    cfg = SystemConfig(modes=(ModeSpec("a", Static(3.4), alpha=0.0, beta=0.0),))
    with pytest.raises(SingularMatrix, match="3.4"):
        s21_at(cfg, 1.0, 3.4)


def test_time_domain_oracle_agrees():
    # heavy damping keeps the settle time, and so this test, short
    modes = (
        ModeSpec("a", Static(3.4), alpha=0.02, beta=0.03),
        ModeSpec("b", Static(3.6), alpha=0.02, beta=0.04),
    )
    cfg = SystemConfig(modes=modes, couplings=(CouplingSpec("a", "b", j=0.08),))
    for freq in (3.35, 3.65):
        fd = s21_at(cfg, 0.0, freq)
        td = s21_time_domain_oracle(cfg, 0.0, freq)
        assert abs(td - fd) / abs(fd) < 1e-3


def test_time_domain_rejects_undamped_mode():
    cfg = SystemConfig(modes=(ModeSpec("a", Static(3.4), alpha=0.0, beta=0.0),))
    with pytest.raises(NonDecaying):
        s21_time_domain_oracle(cfg, 0.0, 3.4)


def test_time_domain_detects_amplification():
    # strong dissipative coupling to a lossy partner pumps the low-loss
    # mode above threshold; the integrator must notice and bail out
    modes = (
        ModeSpec("m", Static(3.4), alpha=2e-5, beta=1.8e-4),
        ModeSpec("p", Static(3.4), alpha=2e-3, beta=1.8e-2),
    )
    cfg = SystemConfig(modes=modes, couplings=(CouplingSpec("m", "p", gamma=0.1),))
    with pytest.raises(NonDecaying, match="diverged"):
        s21_time_domain_oracle(cfg, 0.0, 3.4)


def test_spectrum_grid_shape_checked():
    with pytest.raises(ValueError):
        SpectrumGrid(field_values=np.zeros(3), freq_values=np.zeros(4),
                     s21=np.zeros((4, 3), dtype=complex))


def test_export_csv_format():
    grid = SpectrumGrid(
        field_values=np.array([0.0, 1.5]),
        freq_values=np.array([2.5, 3.0]),
        s21=np.array([[-2.0 + 0.0j, 0.5 - 0.25j],
                      [-0.0 - 0.0j, 1.0 + 1.0j]]),
    )
    buf = io.StringIO()
    export_csv(grid, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "h_koe,f_ghz,re_s21,im_s21,abs_s21"
    assert lines[1] == "0.00000000,2.50000000,-2.00000000,0.00000000,2.00000000"
    assert lines[2] == "0.00000000,3.00000000,0.500000000,-0.250000000,0.559016994"
    # negative zero is normalized on output
    assert lines[3] == "1.50000000,2.50000000,0.00000000,0.00000000,0.00000000"
    assert len(lines) == 5
    assert buf.getvalue().endswith("\n")


def test_export_csv_writes_file(tmp_path):
    grid = sweep_spectrum(_small_config())
    out = tmp_path / "spec.csv"
    export_csv(grid, out)
    text = out.read_text()
    assert text.count("\n") == 7 * 11 + 1
    assert "\r" not in text


def test_export_pgm_format():
    # |1+s21| of 1.0 sits at 0 dB, 0.1 at -20 dB, ~0 clamps to the floor
    grid = SpectrumGrid(
        field_values=np.array([0.0]),
        freq_values=np.array([2.5, 3.0, 3.5]),
        s21=np.array([[0.0 + 0.0j, -0.9 + 0.0j, -1.0 + 0.0j]]),
    )
    buf = io.BytesIO()
    export_pgm(grid, buf, floor_db=-40.0, ceil_db=0.0)
    data = buf.getvalue()
    assert data.startswith(b"P5\n3 1\n255\n")
    pixels = data[len(b"P5\n3 1\n255\n"):]
    assert pixels[0] == 255
    assert pixels[1] == round((-20.0 + 40.0) / 40.0 * 255)
    assert pixels[2] == 0


def test_export_pgm_bounds_checked():
    grid = SpectrumGrid(field_values=np.array([0.0]),
                        freq_values=np.array([2.5]),
                        s21=np.zeros((1, 1), dtype=complex))
    with pytest.raises(ValueError):
        export_pgm(grid, io.BytesIO(), floor_db=0.0, ceil_db=0.0)
