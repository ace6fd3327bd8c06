"""Plane-wave Fabry-Perot model of a fiber cavity with lossy interfaces.

Each fiber-mirror reflection loses a power fraction ``A`` on top of the
mirror transmission ``1 - R``, so the round-trip amplitude factor is
``rho = sqrt(R1 R2) (1 - A)``.  Quality factors use the linewidth
definition Q = nu / FWHM.
"""
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fiber import C0

DEFAULT_REFLECTIVITIES = (0.90, 0.95, 0.99)


@dataclass(frozen=True)
class CavitySpec:
    length_mm: float
    r1: float
    r2: float
    loss: float = 0.0  # power lost per fiber-mirror reflection

    def __post_init__(self):
        if not self.length_mm > 0.0:
            raise DomainError("length_mm", f"must be positive, got {self.length_mm}")
        for name in ("r1", "r2"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(name, f"reflectivity must lie in (0, 1), got {v}")
        if not 0.0 <= self.loss < 1.0:
            raise DomainError("loss", f"must lie in [0, 1), got {self.loss}")

    @property
    def rho(self):
        return math.sqrt(self.r1 * self.r2) * (1.0 - self.loss)


@dataclass(frozen=True)
class CavityFigures:
    fsr: float  # GHz
    fwhm: float  # GHz
    finesse: float
    q: float


@dataclass(frozen=True)
class TransmissionSpectrum:
    detuning: np.ndarray  # GHz
    transmission: np.ndarray
    origin: str = "synthetic"

    def __post_init__(self):
        d = np.asarray(self.detuning, dtype=float)
        t = np.asarray(self.transmission, dtype=float)
        object.__setattr__(self, "detuning", d)
        object.__setattr__(self, "transmission", t)
        if d.ndim != 1 or d.shape != t.shape:
            raise DomainError("samples", "detuning and transmission must be 1-D and equal length")
        if self.origin not in ("synthetic", "measured"):
            raise DomainError("origin", f"must be 'synthetic' or 'measured', got {self.origin!r}")
        if d.size > 1 and not np.all(np.diff(d) > 0):
            raise DomainError("detuning", "must be strictly increasing")
        if self.origin == "synthetic" and t.size and (t.min() < 0.0 or t.max() > 1.0 + 1e-12):
            raise DomainError("transmission", "synthetic transmission must lie in [0, 1]")

    @property
    def samples(self):
        return list(zip(self.detuning.tolist(), self.transmission.tolist()))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["detuning_ghz", "transmission"])
        for d, t in zip(self.detuning, self.transmission):
            w.writerow([_fmt(d), _fmt(t)])
        return buf.getvalue()


def _fmt(x):
    return format(float(x), ".12g")


def free_spectral_range(n_eff, length_mm):
    """FSR = c0 / (2 n_eff L) in GHz."""
    if not length_mm > 0.0:
        raise DomainError("length_mm", f"must be positive, got {length_mm}")
    if not n_eff >= 1.0:
        raise DomainError("n_eff", f"must be >= 1, got {n_eff}")
    return C0 / (2.0 * n_eff * length_mm * 1e-3) * 1e-9


def airy_transmission(spec, n_eff, lambda0, detuning_grid):
    """Sample the Airy transmission of ``spec`` on a detuning grid (GHz).

    ``lambda0`` does not enter the lineshape; it is accepted so the call
    mirrors :func:`cavity_figures`.
    """
    del lambda0
    grid = np.asarray(detuning_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("detuning_grid", "must be a non-empty 1-D sequence")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise DomainError("detuning_grid", "must be strictly increasing")
    fsr = free_spectral_range(n_eff, spec.length_mm)
    rho = spec.rho
    num = (1.0 - spec.r1) * (1.0 - spec.r2) * (1.0 - spec.loss)
    t = num / ((1.0 - rho) ** 2 + 4.0 * rho * np.sin(np.pi * grid / fsr) ** 2)
    return TransmissionSpectrum(grid, t, "synthetic")


def finesse_from_rho(rho):
    if not 0.0 <= rho < 1.0:
        raise DomainError("rho", f"round-trip factor must lie in [0, 1), got {rho}")
    return math.pi * math.sqrt(rho) / (1.0 - rho)


def cavity_figures(spec, n_eff, lambda0):
    """FSR, linewidth, finesse and Q; ``lambda0`` in μm."""
    fsr = free_spectral_range(n_eff, spec.length_mm)
    finesse = finesse_from_rho(spec.rho)
    fwhm = fsr / finesse
    nu_ghz = C0 / (lambda0 * 1e-6) * 1e-9
    return CavityFigures(fsr, fwhm, finesse, nu_ghz / fwhm)


def q_factor(length_mm, r, loss, n_eff, lambda0):
    return cavity_figures(CavitySpec(length_mm, r, r, loss), n_eff, lambda0).q


def loss_for_q(target_q, length_mm, r, n_eff, lambda0):
    """Per-reflection loss at which a symmetric cavity reaches ``target_q``.

    Q falls monotonically from its lossless value towards zero as the loss
    grows, so the answer is found by bisection.
    """
    q0 = q_factor(length_mm, r, 0.0, n_eff, lambda0)
    if not 0.0 < target_q <= q0:
        raise DomainError("target_q", f"must lie in (0, {q0:.6g}] for R={r}")
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if q_factor(length_mm, r, mid, n_eff, lambda0) > target_q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class QSweepRow:
    reflectivity: float
    loss: float
    q: float


def q_vs_loss_sweep(length_mm, reflectivities, loss_grid, n_eff, lambda0):
    """Q for every (R, A) pair; both mirrors share the reflectivity R."""
    rows = []
    for r in reflectivities:
        for a in loss_grid:
            rows.append(QSweepRow(float(r), float(a), q_factor(length_mm, r, a, n_eff, lambda0)))
    return rows


def sweep_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["reflectivity", "loss", "q"])
    for row in rows:
        w.writerow([_fmt(row.reflectivity), _fmt(row.loss), _fmt(row.q)])
    return buf.getvalue()
