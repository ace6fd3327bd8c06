"""Exact vector modes of a circular step-index waveguide.

The holey fiber is treated as a bare silica rod in air.  Guided modes are
found from the full vector dispersion relation (hybrid HE/EH modes for
``l >= 1``, TE and TM for ``l = 0``) by a uniform scan in effective index
followed by bisection.

Field conventions
-----------------
Fields vary as ``exp(i(omega t - beta z))``.  With ``E_z = A J_l(U r/a)
cos(l phi)`` and ``Z0 H_z = B J_l(U r/a) sin(l phi)`` in the core (``K_l``
outside, matched at ``r = a``) the transverse components follow from
Maxwell's equations.  Magnetic fields are scaled by the vacuum impedance so
that ``omega mu0 = omega eps0 = k0``.  Profiles are averaged over the
azimuth; the φ-averaged longitudinal Poynting vector is normalised to unit
guided power.

Mode labels: for ``l >= 1`` the mode is HE when the amplitude ratio
``B / (n_eff A)`` at the root is positive and EH when it is negative.  This
makes the fundamental, cutoff-free mode HE11.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import specfun
from .errors import ConsistencyError, DomainError, NumericalAccuracyError

C0 = 299792458.0  # m/s

SCAN_POINTS = 2000
SCAN_EPS = 1e-9
MAX_AZIMUTHAL_ORDER = 12
RESIDUAL_TOL = 1e-10
QUAD_TOL = 1e-6

# fused silica, Malitson (1965); wavelength in micrometres
_SELLMEIER_B = (0.6961663, 0.4079426, 0.8974794)
_SELLMEIER_C = (0.0684043, 0.1162414, 9.896161)
SELLMEIER_RANGE = (0.21, 3.71)

_KIND = {None: 0, "TE": 1, "TM": 2}


def silica_index(lambda0):
    """Refractive index of fused silica at vacuum wavelength ``lambda0`` (μm)."""
    lam = float(lambda0)
    lo, hi = SELLMEIER_RANGE
    if not (lo <= lam <= hi):
        raise DomainError("lambda0", f"Sellmeier form valid for [{lo}, {hi}] μm, got {lam}")
    l2 = lam * lam
    n2 = 1.0 + sum(b * l2 / (l2 - c * c) for b, c in zip(_SELLMEIER_B, _SELLMEIER_C))
    return math.sqrt(n2)


@dataclass(frozen=True)
class FiberGeometry:
    core_radius: float  # μm
    n_core: float
    n_clad: float = 1.0

    def __post_init__(self):
        if not (0.01 < self.core_radius < 100.0):
            raise DomainError("core_radius", f"must lie in (0.01, 100) μm, got {self.core_radius}")
        if not self.n_clad >= 1.0:
            raise DomainError("n_clad", f"must be >= 1, got {self.n_clad}")
        if not self.n_core > self.n_clad:
            raise DomainError("n_core", f"must exceed n_clad={self.n_clad}, got {self.n_core}")

    @property
    def core_diameter(self):
        return 2.0 * self.core_radius

    @classmethod
    def silica_rod(cls, core_diameter, lambda0, n_clad=1.0):
        """Silica core of diameter ``core_diameter`` (μm) in a uniform cladding."""
        return cls(0.5 * core_diameter, silica_index(lambda0), n_clad)


@dataclass(frozen=True)
class WavelengthContext:
    lambda0: float  # μm
    c0: float = C0

    def __post_init__(self):
        if not (self.lambda0 > 0.0 and math.isfinite(self.lambda0)):
            raise DomainError("lambda0", f"must be positive, got {self.lambda0}")

    @property
    def k0(self):
        return 2.0 * math.pi / self.lambda0

    @property
    def optical_frequency(self):
        """Optical frequency in Hz."""
        return self.c0 / (self.lambda0 * 1e-6)


@dataclass(frozen=True)
class ModeSolution:
    family: str
    l: int
    m: int
    beta: float  # μm^-1
    n_eff: float
    U: float | None = None
    W: float | None = None
    V: float | None = None
    approximate: bool = False

    @property
    def name(self):
        return f"{self.family}{self.l}{self.m}"


@dataclass(frozen=True)
class FieldSample:
    r: float
    Sz: float
    e_intensity: float


def v_number(geom, ctx):
    return ctx.k0 * geom.core_radius * math.sqrt(geom.n_core**2 - geom.n_clad**2)


def _uw(geom, ctx, n_eff):
    ak = geom.core_radius * ctx.k0
    u = ak * math.sqrt(geom.n_core**2 - n_eff * n_eff)
    w = ak * math.sqrt(n_eff * n_eff - geom.n_clad**2)
    return u, w


def _check_trial(geom, n_eff):
    if not (geom.n_clad < n_eff < geom.n_core):
        raise DomainError(
            "n_eff_trial", f"must lie in ({geom.n_clad}, {geom.n_core}), got {n_eff}"
        )


def _kind(l, family):
    if family not in _KIND:
        raise DomainError("family", f"must be None, 'TE' or 'TM', got {family!r}")
    if family is not None and l != 0:
        raise DomainError("family", "TE/TM factors exist only for l = 0")
    return _KIND[family]


def dispersion_residual(geom, ctx, l, n_eff_trial, family=None):
    """Regularised vector dispersion function at a trial effective index.

    The determinant is multiplied through by its Bessel denominators and
    divided by the sum of magnitudes of its two terms, so the value lies in
    [-1, 1], is finite at both ends of the guidance interval and vanishes
    exactly at the guided eigenvalues.  For ``l = 0`` the result is the
    product of the TE and TM factors unless ``family`` selects one.
    """
    n = float(n_eff_trial)
    _check_trial(geom, n)
    kind = _kind(int(l), family)
    return specfun.kernels.dispersion_point(
        int(l), kind, n, geom.core_radius, ctx.k0, geom.n_core, geom.n_clad
    )


def residual_scan(geom, ctx, l, n_eff_grid, family=None):
    """Vectorised :func:`dispersion_residual` over ``n_eff_grid``."""
    grid = np.ascontiguousarray(n_eff_grid, dtype=float)
    if grid.size and not (grid.min() > geom.n_clad and grid.max() < geom.n_core):
        raise DomainError("n_eff_trial", "grid leaves the open guidance interval")
    out = np.empty_like(grid)
    specfun.kernels.dispersion_fill(
        int(l), _kind(int(l), family), grid, geom.core_radius, ctx.k0,
        geom.n_core, geom.n_clad, out,
    )
    return out


def unregularized_residual(geom, ctx, l, n_eff, family=None):
    """Textbook ratio form of the dispersion relation, scaled to [-1, 1].

    Poles sit at the zeros of J_l(U); used to reject spurious sign changes.
    """
    u, w = _uw(geom, ctx, n_eff)
    jm, j, jp = specfun.kernels.jn_triple(l, u)
    km, k, kp = specfun.kernels.kn_triple(l, w)
    n1s, n2s = geom.n_core**2, geom.n_clad**2
    with np.errstate(all="ignore"):
        jr = 0.5 * (jm - jp) / (u * j)
        kr = -0.5 * (km + kp) / (w * k)
        if l == 0:
            if family == "TM":
                a, b = n1s * jr, n2s * kr
            else:
                a, b = jr, kr
            return (a + b) / (abs(a) + abs(b))
        e = n2s / n1s
        lhs = (jr + kr) * (jr + e * kr)
        rhs = l * l * (1 / u**2 + 1 / w**2) * (1 / u**2 + e / w**2)
        return (lhs - rhs) / (abs(lhs) + abs(rhs))


def _bisect(f, lo, hi, flo):
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid


def _roots(geom, ctx, l, family, grid):
    vals = residual_scan(geom, ctx, l, grid, family)
    kind = _kind(l, family)
    a, k0, n1, n2 = geom.core_radius, ctx.k0, geom.n_core, geom.n_clad
    pt = specfun.kernels.dispersion_point

    def f(n):
        return pt(l, kind, n, a, k0, n1, n2)

    roots = []
    for i in np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]:
        lo, hi = float(grid[i]), float(grid[i + 1])
        if vals[i] == 0.0:
            root = lo
        else:
            root = _bisect(f, lo, hi, float(vals[i]))
        if abs(f(root)) > RESIDUAL_TOL:
            continue
        if abs(unregularized_residual(geom, ctx, l, root, family)) > 1e-6:
            continue
        roots.append(root)
    return sorted(roots, reverse=True)


def _scan_grid(geom, n_points=SCAN_POINTS, eps=SCAN_EPS):
    return np.linspace(geom.n_clad + eps, geom.n_core - eps, n_points)


def _near_cutoff_grid(geom, eps=SCAN_EPS):
    # log-spaced samples just above the cladding index, for tiny V
    span = geom.n_core - geom.n_clad
    return geom.n_clad + np.geomspace(eps, span * 1e-3, 400)


def _amplitude_ratio(geom, ctx, l, n_eff):
    """B / A for a hybrid mode, fixed by continuity of E_phi at r = a."""
    u, w = _uw(geom, ctx, n_eff)
    jm, j, jp = specfun.kernels.jn_triple(l, u)
    km, k, kp = specfun.kernels.kn_triple(l, w)
    jr = 0.5 * (jm - jp) / (u * j)
    kr = -0.5 * (km + kp) / (w * k)
    return -n_eff * l * (1 / u**2 + 1 / w**2) / (jr + kr)


def _make_mode(geom, ctx, family, l, m, n_eff):
    u, w = _uw(geom, ctx, n_eff)
    return ModeSolution(family, l, m, n_eff * ctx.k0, n_eff, u, w, v_number(geom, ctx))


def _modes_for_order(geom, ctx, l, grid):
    modes = []
    if l == 0:
        for fam in ("TE", "TM"):
            for m, n in enumerate(_roots(geom, ctx, 0, fam, grid), start=1):
                modes.append(_make_mode(geom, ctx, fam, 0, m, n))
        return modes
    counts = {"HE": 0, "EH": 0}
    for n in _roots(geom, ctx, l, None, grid):
        fam = "HE" if _amplitude_ratio(geom, ctx, l, n) > 0 else "EH"
        counts[fam] += 1
        modes.append(_make_mode(geom, ctx, fam, l, counts[fam], n))
    return modes


def fundamental_mode(geom, ctx):
    """The HE11 mode only (a single azimuthal scan)."""
    modes = _modes_for_order(geom, ctx, 1, _scan_grid(geom))
    he = [md for md in modes if md.family == "HE"]
    if not he:
        he = [md for md in _modes_for_order(geom, ctx, 1, _near_cutoff_grid(geom))
              if md.family == "HE"]
    if not he:
        raise NumericalAccuracyError("HE11 root not bracketed by the effective-index scan")
    return he[0]


def solve_modes(geom, ctx, l_max=None):
    """All guided modes with azimuthal order ``l <= l_max``, by descending n_eff.

    With ``l_max=None`` the search stops at the first order without a guided
    root (at most order 12).
    """
    if l_max is not None:
        l_max = int(l_max)
        if not 0 <= l_max <= MAX_AZIMUTHAL_ORDER:
            raise DomainError("l_max", f"must lie in [0, {MAX_AZIMUTHAL_ORDER}], got {l_max}")
    grid = _scan_grid(geom)
    modes = []
    top = MAX_AZIMUTHAL_ORDER if l_max is None else l_max
    for l in range(top + 1):
        found = _modes_for_order(geom, ctx, l, grid)
        if l == 1 and not any(md.family == "HE" for md in found):
            found = [fundamental_mode(geom, ctx)] + found
        if not found and l_max is None and l >= 1:
            break
        modes.extend(found)
    modes.sort(key=lambda md: (-md.n_eff, md.l, md.family))
    return modes


def effective_index_weak(n_core, ctx):
    """Weak-guidance shortcut beta ~ n_core k0 (no eigenvalue solve)."""
    return ModeSolution("HE", 1, 1, n_core * ctx.k0, float(n_core), approximate=True)


# -- fields -----------------------------------------------------------------

_GL_CORE = np.polynomial.legendre.leggauss(64)
_GL_CORE_LOW = np.polynomial.legendre.leggauss(40)
_GL_PANEL = np.polynomial.legendre.leggauss(24)


def _gauss(f, lo, hi, rule):
    x, wts = rule
    r = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    return 0.5 * (hi - lo) * np.dot(wts, f(r))


@dataclass
class ModeField:
    """Exact fields of one guided mode, normalised to unit guided power."""

    mode: ModeSolution
    geom: FiberGeometry
    ctx: WavelengthContext
    amp_e: float = field(init=False)
    amp_h: float = field(init=False)
    scale: float = field(init=False, default=1.0)

    def __post_init__(self):
        mode, geom, ctx = self.mode, self.geom, self.ctx
        if mode.approximate or mode.U is None:
            raise ConsistencyError(f"{mode.name} carries no exact eigenvalue; fields undefined")
        v = v_number(geom, ctx)
        if abs(mode.U**2 + mode.W**2 - v * v) > 1e-9 * v * v:
            raise ConsistencyError(
                f"mode {mode.name} has U^2+W^2={mode.U**2 + mode.W**2:.12g}, "
                f"geometry gives V^2={v * v:.12g}"
            )
        u, w = _uw(geom, ctx, mode.n_eff)
        if abs(u - mode.U) > 1e-9 * v or abs(w - mode.W) > 1e-9 * v:
            raise ConsistencyError(f"mode {mode.name} does not belong to this geometry")
        if mode.family == "TE":
            self.amp_e, self.amp_h = 0.0, 1.0
        elif mode.family == "TM":
            self.amp_e, self.amp_h = 1.0, 0.0
        else:
            self.amp_e = 1.0
            self.amp_h = _amplitude_ratio(geom, ctx, mode.l, mode.n_eff)
        self._weight = 1.0 if mode.l == 0 else 0.5
        kt = specfun.kernels.jn_triple(mode.l, mode.U)
        kk = specfun.kernels.kn_triple(mode.l, mode.W)
        self._match = kt[1] / kk[1]
        self._inv_gamma = geom.core_radius / mode.W
        self.r_max = self._cladding_extent()
        self.scale = 1.0
        total, _ = self._integrate(self.sz)
        self.scale = 1.0 / total

    # components -- real amplitudes multiplying the angular factors

    def components(self, r):
        """Radial amplitudes (e_r, e_phi, e_z, h_r, h_phi, h_z) at radii ``r``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        mode, a = self.mode, self.geom.core_radius
        l, beta, k0 = mode.l, mode.beta, self.ctx.k0
        ae, ah = self.amp_e, self.amp_h
        out = np.empty((6, r.size))
        inside = r < a
        if inside.any():
            kap = mode.U / a
            x = kap * r[inside]
            jm, j, jp = specfun.jv_array(l - 1, x), specfun.jv_array(l, x), specfun.jv_array(l + 1, x)
            dz = 0.5 * kap * (jm - jp)       # d/dr J_l(kap r)
            lz = 0.5 * kap * (jm + jp)       # l J_l(kap r) / r
            c = 1.0 / (kap * kap)
            n_s = self.geom.n_core**2
            out[:, inside] = self._assemble(c, beta, k0, n_s, ae, ah, j, dz, lz)
        if (~inside).any():
            gam = mode.W / a
            x = gam * r[~inside]
            km, k, kp = specfun.kv_array(l - 1, x), specfun.kv_array(l, x), specfun.kv_array(l + 1, x)
            s = self._match
            dz = -0.5 * gam * (km + kp) * s  # d/dr of matched K_l(gam r)
            lz = 0.5 * gam * (kp - km) * s   # l K_l(gam r) / r, matched
            c = -1.0 / (gam * gam)
            n_s = self.geom.n_clad**2
            out[:, ~inside] = self._assemble(c, beta, k0, n_s, ae, ah, k * s, dz, lz)
        return out * math.sqrt(self.scale)

    @staticmethod
    def _assemble(c, beta, k0, n_s, ae, ah, zf, dz, lz):
        e_r = c * (beta * ae * dz + k0 * ah * lz)
        e_p = c * (beta * ae * lz + k0 * ah * dz)
        e_z = ae * zf
        h_r = c * (beta * ah * dz + k0 * n_s * ae * lz)
        h_p = c * (beta * ah * lz + k0 * n_s * ae * dz)
        h_z = ah * zf
        return np.vstack([e_r, e_p, e_z, h_r, h_p, h_z])

    def sz(self, r):
        """Azimuth-averaged longitudinal Poynting component."""
        c = self.components(r)
        return 0.5 * self._weight * (c[0] * c[4] + c[1] * c[3])

    def e_intensity(self, r):
        """Azimuth-averaged |E|^2."""
        c = self.components(r)
        return self._weight * (c[0] ** 2 + c[1] ** 2 + c[2] ** 2)

    def energy_density(self, r):
        """Azimuth-averaged electric energy density eps_r |E|^2."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        eps = np.where(r < self.geom.core_radius, self.geom.n_core**2, self.geom.n_clad**2)
        return eps * self.e_intensity(r)

    def boundary_mismatch(self):
        """Largest relative jump of a tangential component across r = a."""
        a = self.geom.core_radius
        r_in = np.nextafter(a, 0.0)
        ci, co = self.components([r_in])[:, 0], self.components([a])[:, 0]
        ref = np.max(np.abs(ci)) + np.max(np.abs(co))
        tangential = [1, 2, 4, 5]
        return float(np.max(np.abs(ci[tangential] - co[tangential])) / ref)

    # quadrature

    def _cladding_extent(self):
        a = self.geom.core_radius
        l, gam = self.mode.l, self.mode.W / a

        def env(r):
            x = np.array([gam * r])
            s = sum(specfun.kv_array(o, x)[0] ** 2 for o in (l - 1, l, l + 1))
            return s * r

        ref = env(a)
        t = 1.0
        while env(a + t / gam) > 1e-12 * ref:
            t *= 2.0
        lo, hi = t / 2.0, t
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            if env(a + mid / gam) > 1e-12 * ref:
                lo = mid
            else:
                hi = mid
        return a + hi / gam

    def _integrate(self, density, method="adaptive"):
        """Return (core, cladding) integrals of 2 pi r density(r) and an error estimate."""
        core, clad, err = self._integrate_parts(density, method)
        return core + clad, err

    def _integrate_parts(self, density, method="adaptive"):
        a, rmax = self.geom.core_radius, self.r_max

        def f(r):
            return 2.0 * math.pi * r * density(r)

        core = _gauss(f, 0.0, a, _GL_CORE)
        core_err = abs(core - _gauss(f, 0.0, a, _GL_CORE_LOW))
        if method == "adaptive":
            clad, clad_err = integrate.quad(
                lambda r: f(np.array([r]))[0], a, rmax,
                epsabs=0.0, epsrel=1e-12, limit=400,
            )
        elif method == "fixed":
            clad, clad_err = self._clad_fixed(f)
        else:
            raise DomainError("method", f"must be 'adaptive' or 'fixed', got {method!r}")
        return core, clad, core_err + clad_err

    def _clad_fixed(self, f, panels=64):
        # composite Gauss-Legendre, panels uniform in the decay coordinate
        a, rmax = self.geom.core_radius, self.r_max
        t_max = (rmax - a) / self._inv_gamma
        edges = a + self._inv_gamma * t_max * (np.arange(panels + 1) / panels) ** 2
        x, wts = _GL_PANEL
        lo, hi = edges[:-1, None], edges[1:, None]
        r = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        vals = f(r.ravel()).reshape(r.shape)
        total = float(np.sum(0.5 * (hi - lo)[:, 0] * (vals @ wts)))
        coarse_edges = edges[::2]
        lo2, hi2 = coarse_edges[:-1, None], coarse_edges[1:, None]
        r2 = 0.5 * (hi2 - lo2) * x + 0.5 * (hi2 + lo2)
        coarse = float(np.sum(0.5 * (hi2 - lo2)[:, 0] * (f(r2.ravel()).reshape(r2.shape) @ wts)))
        return total, abs(total - coarse)

    def outside_fraction(self, quantity="sz", method="adaptive"):
        density = self._density(quantity)
        core, clad, err = self._integrate_parts(density, method)
        total = core + clad
        return clad / total, err / abs(total)

    def _density(self, quantity):
        if quantity == "sz":
            return self.sz
        if quantity == "e2":
            return self.e_intensity
        if quantity == "energy":
            return self.energy_density
        raise DomainError("quantity", f"must be 'sz', 'e2' or 'energy', got {quantity!r}")


def mode_field(mode, geom, ctx):
    return ModeField(mode, geom, ctx)


def field_profile(mode, geom, ctx, r_grid):
    """Sample the normalised Sz and |E|^2 at radii ``r_grid`` (μm)."""
    mf = ModeField(mode, geom, ctx)
    r = np.asarray(r_grid, dtype=float)
    sz, e2 = mf.sz(r), mf.e_intensity(r)
    return [FieldSample(float(ri), float(si), float(ei)) for ri, si, ei in zip(r, sz, e2)]


def power_fraction_outside(mode, geom, ctx, quantity="sz", method="adaptive"):
    """Fraction of the mode guided outside the core.

    ``quantity`` selects the density integrated: ``"sz"`` (guided power,
    the default), ``"e2"`` (|E|^2) or ``"energy"`` (electric energy).
    """
    frac, err = ModeField(mode, geom, ctx).outside_fraction(quantity, method)
    if not err <= QUAD_TOL:
        raise NumericalAccuracyError(
            f"outside-core fraction error estimate {err:.3g} exceeds {QUAD_TOL:g}"
        )
    return frac
