"""Core-diameter design sweeps: mode volume and power in air of HE11.

Mode volume is ``L * A_eff`` with ``A_eff`` the transverse integral of the
azimuth-averaged electric energy density eps|E|^2 divided by its maximum.
No standing-wave factor is applied.  The air fraction defaults to the
share of guided power (Sz) outside the core.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import fiber
from .errors import BracketError, DesignPointError, DomainError, FiberCavityError, NumericalAccuracyError

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
DIAMETER_RANGE_NM = (50.0, 3000.0)

METADATA = {
    "mode_volume": "L * integral(eps_r |E|^2 dA) / max(eps_r |E|^2), azimuth-averaged, no standing-wave factor",
    "air_fraction": "share of the chosen density outside the core (default sz: guided power)",
}


def golden_section(f, lo, hi, tol):
    """Minimise a unimodal ``f`` on [lo, hi] until the bracket is narrower than ``tol``.

    Returns ``(x, f(x))`` for the best point evaluated.
    """
    a, b = float(lo), float(hi)
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


@dataclass(frozen=True)
class DesignPoint:
    core_diameter: float  # nm
    mode_volume: float  # μm^3
    air_fraction: float


def _density(mf, weighting):
    if weighting == "energy":
        return mf.energy_density
    if weighting == "intensity":
        return mf.e_intensity
    raise DomainError("weighting", f"must be 'energy' or 'intensity', got {weighting!r}")


def peak_density(mf, density):
    """Maximum of a radial density, searched in the core and just outside it.

    The density jumps at r = a, so each side is scanned coarsely and the
    best sample refined by golden-section search.
    """
    a = mf.geom.core_radius
    decay = a / mf.mode.W

    def refine(grid):
        vals = density(grid)
        i = int(np.argmax(vals))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        _, neg = golden_section(lambda r: -density(np.array([r]))[0], lo, hi, 1e-9 * a)
        return max(-neg, float(vals[i]))

    core = refine(np.linspace(0.0, np.nextafter(a, 0.0), 65))
    clad = refine(np.linspace(a, a + 3.0 * decay, 65))
    return max(core, clad)


def _area(mf, weighting):
    density = _density(mf, weighting)
    total, err = mf._integrate(density)
    if not err <= fiber.QUAD_TOL * abs(total):
        raise NumericalAccuracyError(f"mode-area integral error {err:.3g} too large")
    return total / peak_density(mf, density)


def effective_area(geom, ctx, weighting="energy"):
    """Transverse mode area of HE11 in μm^2."""
    mode = fiber.fundamental_mode(geom, ctx)
    return _area(fiber.mode_field(mode, geom, ctx), weighting)


def mode_volume(geom, ctx, length_mm, weighting="energy"):
    """Cavity mode volume in μm^3 for a fiber section ``length_mm`` long."""
    if not length_mm > 0:
        raise DomainError("length_mm", f"must be positive, got {length_mm}")
    return length_mm * 1e3 * effective_area(geom, ctx, weighting)


def design_point(diameter_nm, ctx, length_mm, air_quantity="sz", weighting="energy"):
    try:
        geom = fiber.FiberGeometry.silica_rod(diameter_nm * 1e-3, ctx.lambda0)
        mode = fiber.fundamental_mode(geom, ctx)
        mf = fiber.mode_field(mode, geom, ctx)
        area = _area(mf, weighting)
        frac, ferr = mf.outside_fraction(air_quantity)
        if not ferr <= fiber.QUAD_TOL:
            raise NumericalAccuracyError(f"air-fraction error {ferr:.3g} too large")
    except FiberCavityError as exc:
        raise DesignPointError(diameter_nm, exc) from exc
    return DesignPoint(float(diameter_nm), length_mm * 1e3 * area, float(frac))


def _check_diameters(lo, hi):
    dmin, dmax = DIAMETER_RANGE_NM
    if not (dmin < lo < hi < dmax):
        raise DomainError("diameter_range", f"need {dmin} < lo < hi < {dmax} nm, got ({lo}, {hi})")


def design_sweep(diameter_range, n_points, ctx, length_mm, air_quantity="sz",
                 weighting="energy", workers=None):
    """Evaluate :class:`DesignPoint` on ``n_points`` evenly spaced diameters (nm).

    ``workers > 1`` spreads the points over processes; output order always
    follows the diameter grid.
    """
    lo, hi = map(float, diameter_range)
    _check_diameters(lo, hi)
    if int(n_points) < 2:
        raise DomainError("n_points", f"need at least 2, got {n_points}")
    diameters = np.linspace(lo, hi, int(n_points)).tolist()
    job = partial(design_point, ctx=ctx, length_mm=length_mm,
                  air_quantity=air_quantity, weighting=weighting)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, diameters))
    return [job(d) for d in diameters]


def optimal_diameter(ctx, length_mm, bracket=(200.0, 1000.0), tol_nm=1.0,
                     weighting="energy", coarse_points=17):
    """Core diameter (nm) minimising the mode volume, and that volume (μm^3)."""
    lo, hi = map(float, bracket)
    _check_diameters(lo, hi)

    def vol(d):
        geom = fiber.FiberGeometry.silica_rod(d * 1e-3, ctx.lambda0)
        try:
            return mode_volume(geom, ctx, length_mm, weighting)
        except FiberCavityError as exc:
            raise DesignPointError(d, exc) from exc

    grid = np.linspace(lo, hi, coarse_points)
    vals = [vol(d) for d in grid]
    i = int(np.argmin(vals))
    if i == 0 or i == len(grid) - 1:
        raise BracketError(
            f"mode volume has no interior minimum in [{lo:g}, {hi:g}] nm "
            f"(smallest at {grid[i]:g} nm)"
        )
    d, v = golden_section(vol, grid[i - 1], grid[i + 1], tol_nm)
    return d, v


def sweep_to_csv(points, metadata=True, air_quantity="sz"):
    lines = []
    if metadata:
        lines.append(f"# mode_volume: {METADATA['mode_volume']}")
        lines.append(f"# air_fraction: {air_quantity}")
    lines.append("diameter_nm,mode_volume_um3,air_fraction")
    for p in points:
        lines.append(f"{p.core_diameter:.6f},{p.mode_volume:.10g},{p.air_fraction:.10g}")
    return "\n".join(lines) + "\n"
