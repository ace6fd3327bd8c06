"""Acceptance gate: one block per criterion, each at its stated tolerance.

A per-criterion PASS/FAIL summary is printed at the end of the run.
"""
import math
import time

import mpmath as mp
import numpy as np
import pytest

import oracles
from fibercavity import cavity, design, fiber, scanio, specfun
from fibercavity.cavity import CavitySpec

LAMBDA0 = 0.778
CTX = fiber.WavelengthContext(LAMBDA0)
NU_GHZ = 299792458.0 / (LAMBDA0 * 1e-6) * 1e-9


def report(n, name, value, target):
    print(f"\n[criterion {n}] {name}: got {value}, want {target}")


@pytest.mark.criterion(1)
def test_criterion_1_holey_fiber_row():
    t0 = time.perf_counter()
    geom = fiber.FiberGeometry(0.75, fiber.silica_index(LAMBDA0), 1.0)
    modes = fiber.solve_modes(geom, CTX)
    he11 = modes[0]
    fsr = cavity.free_spectral_range(1.41, 20.5)
    elapsed = time.perf_counter() - t0
    report(1, "beta, n_eff, FSR, seconds", (he11.beta, he11.n_eff, fsr, elapsed), "11.38, 1.41, 5.19, <1")
    assert he11.name == "HE11"
    assert abs(he11.beta - 11.38) <= 0.02
    assert abs(he11.n_eff - 1.41) <= 0.005
    assert abs(fsr - 5.19) <= 0.02
    assert elapsed < 1.0


@pytest.mark.criterion(2)
def test_criterion_2_smf830_row():
    t0 = time.perf_counter()
    n_core = fiber.silica_index(LAMBDA0)
    mode = fiber.effective_index_weak(n_core, CTX)
    fsr = cavity.free_spectral_range(mode.n_eff, 20.5)
    elapsed = time.perf_counter() - t0
    report(2, "beta, FSR, seconds", (mode.beta, fsr, elapsed), "11.74, 5.03, <1")
    assert mode.beta == n_core * CTX.k0
    assert abs(mode.beta - 11.74) <= 0.01
    assert abs(fsr - 5.03) <= 0.02
    assert elapsed < 1.0


@pytest.mark.criterion(3)
def test_criterion_3_mode_volume_minimum():
    t0 = time.perf_counter()
    sweep = design.design_sweep((200.0, 1000.0), 100, CTX, 1.0)
    elapsed = time.perf_counter() - t0
    vols = [p.mode_volume for p in sweep]
    sweep_argmin = sweep[int(np.argmin(vols))].core_diameter
    d_opt, v_opt = design.optimal_diameter(CTX, 1.0, bracket=(200.0, 1000.0))
    report(3, "argmin sweep, golden-section, 100-pt seconds", (sweep_argmin, d_opt, elapsed), "440 +/- 20, <60")
    assert abs(sweep_argmin - 440.0) <= 20.0
    assert abs(d_opt - 440.0) <= 20.0
    assert elapsed < 60.0
    geom = fiber.FiberGeometry.silica_rod(d_opt * 1e-3, LAMBDA0)
    v1 = design.mode_volume(geom, CTX, 1.0)
    for L in (0.5, 2.0, 20.5):
        assert abs(design.mode_volume(geom, CTX, L) / (L * v1) - 1.0) <= 1e-12


@pytest.mark.criterion(4)
def test_criterion_4_power_in_air():
    geom = fiber.FiberGeometry.silica_rod(0.44, LAMBDA0)
    mode = fiber.fundamental_mode(geom, CTX)
    eta = fiber.power_fraction_outside(mode, geom, CTX)
    report(4, "Sz fraction outside core at d=440 nm", eta, "0.49 +/- 0.03")
    assert abs(eta - 0.49) <= 0.03


@pytest.mark.criterion(5)
def test_criterion_5_q_shape():
    t0 = time.perf_counter()
    losses = np.linspace(0.0, 0.5, 101)
    refl = (0.90, 0.95, 0.99)
    rows = cavity.q_vs_loss_sweep(20.0, refl, losses, 1.41, LAMBDA0)
    q = np.array([r.q for r in rows]).reshape(len(refl), losses.size)
    assert np.all(np.diff(q, axis=1) < 0)
    assert np.all(np.diff(q, axis=0) > 0)
    spec = CavitySpec(20.0, 0.9, 0.9, 0.0)
    fig = cavity.cavity_figures(spec, 1.41, LAMBDA0)
    grid = np.linspace(-3 * fig.fwhm, 3 * fig.fwhm, 200_001)
    tr = cavity.airy_transmission(spec, 1.41, LAMBDA0, grid)
    q_num = NU_GHZ / oracles.airy_fwhm_numeric(tr.detuning, tr.transmission)
    elapsed = time.perf_counter() - t0
    report(5, "Q closed form, Q from spectrum, seconds", (fig.q, q_num, elapsed), "~2e6, within 2%, <5")
    assert abs(fig.q / q_num - 1.0) <= 0.02
    assert 1e6 < fig.q < 1e7
    assert elapsed < 5.0


@pytest.mark.criterion(6)
def test_criterion_6_multimode():
    thick = fiber.solve_modes(fiber.FiberGeometry.silica_rod(1.5, LAMBDA0), CTX)
    thin = fiber.solve_modes(fiber.FiberGeometry.silica_rod(0.44, LAMBDA0), CTX)
    report(6, "mode counts at 1.5 um / 0.44 um", (len(thick), len(thin)), ">1 / 1")
    assert len(thick) > 1
    assert [m.name for m in thin] == ["HE11"]


@pytest.mark.criterion(7)
def test_criterion_7a_specfun_oracles():
    xs = np.concatenate([[1e-8, 1e-5, 1e-2], np.linspace(0.1, 50.0, 30)])
    worst_j = worst_k = 0.0
    for l in range(13):
        for x in xs:
            x = float(x)
            ref = oracles.j_series(l, x)
            worst_j = max(worst_j, abs(specfun.bessel_j(l, x).value - ref))
            kref = float(mp.besselk(l, x))
            worst_k = max(worst_k, abs(specfun.bessel_k(l, x).value - kref) / max(1.0, kref))
    # quadrature of the integral representation on a coarser sub-grid
    for l in (0, 1, 3, 6, 12):
        for x in (1e-3, 0.3, 1.0, 2.5, 7.0, 20.0, 49.0):
            kref = oracles.k_integral(l, x)
            worst_k = max(worst_k, abs(specfun.bessel_k(l, x).value - kref) / max(1.0, kref))
    report(7, "specfun worst J abs / K scaled error", (worst_j, worst_k), "<= 1e-12")
    assert worst_j <= 1e-12
    assert worst_k <= 1e-12


@pytest.mark.criterion(7)
def test_criterion_7b_quadrature_schemes():
    worst = 0.0
    for d in (0.3, 0.44, 0.8, 1.5, 3.0):
        geom = fiber.FiberGeometry.silica_rod(d, LAMBDA0)
        mf = fiber.mode_field(fiber.fundamental_mode(geom, CTX), geom, CTX)
        for q in ("sz", "e2", "energy"):
            a, _ = mf.outside_fraction(q, "adaptive")
            f, _ = mf.outside_fraction(q, "fixed")
            worst = max(worst, abs(a - f))
    report(7, "adaptive vs fixed outside fraction", worst, "<= 1e-6")
    assert worst <= 1e-6


@pytest.mark.criterion(7)
@pytest.mark.parametrize("v", [1.87, 4.0, 6.39, 8.0])
def test_criterion_7c_root_count(v):
    n1 = 1.4537
    a = v / (CTX.k0 * math.sqrt(n1 * n1 - 1.0))
    geom = fiber.FiberGeometry(a, n1, 1.0)
    found = {}
    for m in fiber.solve_modes(geom, CTX):
        found[m.l] = found.get(m.l, 0) + 1
    args = (a, CTX.k0, n1, 1.0)
    brute = {0: sum(oracles.brute_force_root_count(0, *args, family=f) for f in ("TE", "TM"))}
    l = 1
    while True:
        brute[l] = oracles.brute_force_root_count(l, *args)
        if brute[l] == 0:
            break
        l += 1
    brute = {k: c for k, c in brute.items() if c}
    report(7, f"roots per order at V={v}", (found, brute), "equal")
    assert found == brute


@pytest.mark.criterion(7)
@pytest.mark.parametrize("finesse", [10, 30, 100])
def test_criterion_7d_scan_round_trip(finesse):
    b = math.pi / finesse
    s = (-b + math.sqrt(b * b + 4)) / 2
    spec = CavitySpec(20.5, s * s, s * s)
    fig = cavity.cavity_figures(spec, 1.41, LAMBDA0)
    grid = np.arange(-0.4 * fig.fsr, 3.6 * fig.fsr, fig.fsr / 1000)
    rec = scanio.record_from_spectrum(cavity.airy_transmission(spec, 1.41, LAMBDA0, grid))
    rep = scanio.analyze(rec, LAMBDA0)
    report(7, f"round trip at F={finesse}: FSR, Q rel. error",
           (rep.fsr_mean / fig.fsr - 1, rep.q / fig.q - 1), "0.2%, 1%")
    assert abs(rep.fsr_mean / fig.fsr - 1) <= 2e-3
    assert abs(rep.q / fig.q - 1) <= 1e-2


@pytest.mark.criterion(8)
@pytest.mark.parametrize("s", [0.5, 2.0])
def test_criterion_8_scale_invariance(s):
    n1 = fiber.silica_index(LAMBDA0)
    base_g, base_c = fiber.FiberGeometry(0.22, n1), CTX
    g, c = fiber.FiberGeometry(0.22 * s, n1), fiber.WavelengthContext(LAMBDA0 * s)
    m0, m1 = fiber.fundamental_mode(base_g, base_c), fiber.fundamental_mode(g, c)
    e0 = fiber.power_fraction_outside(m0, base_g, base_c)
    e1 = fiber.power_fraction_outside(m1, g, c)
    report(8, f"n_eff / air fraction drift at s={s}", (m1.n_eff / m0.n_eff - 1, e1 / e0 - 1), "<= 1e-9")
    assert abs(m1.n_eff / m0.n_eff - 1) <= 1e-9
    assert abs(e1 / e0 - 1) <= 1e-9


@pytest.mark.criterion(8)
def test_criterion_8_airy_symmetry_and_bound():
    rng = np.random.default_rng(7781)
    grid = np.linspace(-30.0, 30.0, 3001)
    for _ in range(300):
        r = rng.uniform(0.01, 0.999)
        loss = rng.uniform(0.0, 0.99)
        spec = CavitySpec(rng.uniform(0.05, 100.0), r, r, loss)
        n = rng.uniform(1.0, 2.0)
        t = cavity.airy_transmission(spec, n, LAMBDA0, grid).transmission
        assert np.all(t <= 1.0 + 1e-12)
        assert np.allclose(t, t[::-1], rtol=1e-9, atol=1e-15)
        r1, r2 = rng.uniform(0.01, 0.999, size=2)
        t2 = cavity.airy_transmission(CavitySpec(spec.length_mm, r1, r2, loss), n, LAMBDA0, grid)
        assert np.all(t2.transmission <= 1.0 + 1e-12)
