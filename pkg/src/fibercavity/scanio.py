"""Reading and reducing transmission scans.

Input is CSV with two numeric columns ``detuning_ghz,transmission``, an
optional column-name row and optional ``# key: value`` comment lines.
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import find_peaks

from .cavity import TransmissionSpectrum
from .errors import DomainError, EmptyInputError, InsufficientPeaksError, ScanParseError
from .fiber import C0

MIN_SAMPLES = 16
DEFAULT_PROMINENCE = 0.1
# spacing ratio above which a trace is flagged as carrying several transverse modes
MULTI_PEAK_RATIO = 1.5


@dataclass(frozen=True)
class ScanRecord:
    spectrum: TransmissionSpectrum
    scan_rate: float | None = None  # GHz/s
    source_label: str = ""
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return self.spectrum.detuning.size


@dataclass(frozen=True)
class Peak:
    center: float  # GHz
    height: float
    fwhm: float  # GHz, nan when a half-height crossing lies off the trace


@dataclass(frozen=True)
class PeakReport:
    peaks: tuple
    fsr_mean: float = math.nan
    fsr_stddev: float = math.nan
    finesse: float = math.nan
    q: float = math.nan
    multi_peak: bool = False

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["center_ghz", "height", "fwhm_ghz"])
        for p in self.peaks:
            w.writerow([_fmt(p.center), _fmt(p.height), _fmt(p.fwhm)])
        buf.write(f"# fsr_mean_ghz={_fmt(self.fsr_mean)}\n")
        buf.write(f"# fsr_stddev_ghz={_fmt(self.fsr_stddev)}\n")
        buf.write(f"# finesse={_fmt(self.finesse)}\n")
        buf.write(f"# q={_fmt(self.q)}\n")
        buf.write(f"# multi_peak={str(self.multi_peak).lower()}\n")
        return buf.getvalue()

    def to_json(self):
        def num(x):
            return None if not math.isfinite(x) else float(x)

        doc = {
            "peaks": [
                {"center_ghz": num(p.center), "height": num(p.height), "fwhm_ghz": num(p.fwhm)}
                for p in self.peaks
            ],
            "fsr_mean_ghz": num(self.fsr_mean),
            "fsr_stddev_ghz": num(self.fsr_stddev),
            "finesse": num(self.finesse),
            "q": num(self.q),
            "multi_peak": self.multi_peak,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fmt(x):
    return "nan" if not math.isfinite(x) else format(float(x), ".12g")


def load_scan(stream, format="csv", source_label=""):
    """Parse a scan from a binary or text stream (or a ``str``/``bytes`` payload)."""
    if format != "csv":
        raise DomainError("format", f"only 'csv' is supported, got {format!r}")
    if isinstance(stream, bytes):
        stream = io.StringIO(stream.decode("utf-8"))
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    meta = {}
    rows = []
    seen_data = False
    for lineno, raw in enumerate(stream, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        cells = [c.strip() for c in line.split(",")]
        if not seen_data and cells[:2] == ["detuning_ghz", "transmission"]:
            seen_data = True
            continue
        if len(cells) != 2:
            raise ScanParseError(lineno, f"expected 2 columns, got {len(cells)}")
        try:
            d, t = float(cells[0]), float(cells[1])
        except ValueError:
            raise ScanParseError(lineno, f"non-numeric value in {line!r}") from None
        if not (math.isfinite(d) and math.isfinite(t)):
            raise ScanParseError(lineno, f"non-finite value in {line!r}")
        rows.append((d, t, lineno))
        seen_data = True
    if not rows:
        raise EmptyInputError("scan contains no samples")
    rows.sort(key=lambda row: row[0])
    for prev, cur in zip(rows, rows[1:]):
        if cur[0] == prev[0]:
            raise ScanParseError(cur[2], f"duplicate detuning {cur[0]!r} (also line {prev[2]})")
    det = np.array([r[0] for r in rows])
    tr = np.array([r[1] for r in rows])
    rate = meta.get("scan_rate_ghz_per_s")
    try:
        rate = float(rate) if rate is not None else None
    except ValueError:
        raise DomainError("scan_rate_ghz_per_s", f"not a number: {rate!r}") from None
    label = source_label or meta.get("source", "")
    return ScanRecord(TransmissionSpectrum(det, tr, "measured"), rate, label, meta)


def record_from_spectrum(spectrum, source_label="synthetic"):
    return ScanRecord(spectrum, None, source_label)


def _half_crossing(x, y, i, half, step):
    j = i
    while 0 <= j + step < y.size:
        if y[j + step] < half:
            x0, x1, y0, y1 = x[j], x[j + step], y[j], y[j + step]
            return x0 + (half - y0) * (x1 - x0) / (y1 - y0)
        j += step
    return math.nan


def detect_peaks(record, min_prominence=DEFAULT_PROMINENCE):
    """Local maxima whose prominence exceeds ``min_prominence`` of the global maximum.

    Centres and heights come from a parabola through the three samples
    around each maximum; widths from linearly interpolated crossings of half
    the peak height.
    """
    if not 0.0 < min_prominence < 1.0:
        raise DomainError("min_prominence", f"must lie in (0, 1), got {min_prominence}")
    n = len(record)
    if n < MIN_SAMPLES:
        raise DomainError("record", f"need at least {MIN_SAMPLES} samples, got {n}")
    x = record.spectrum.detuning
    y = record.spectrum.transmission
    if not x[-1] > x[0]:
        raise DomainError("record", "detuning span must be positive")
    top = float(np.max(y))
    if not top > 0.0:
        return PeakReport(())
    idx, _ = find_peaks(y, prominence=min_prominence * top)
    peaks = []
    for i in idx:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        x0, x1, x2 = x[i - 1], x[i], x[i + 1]
        # vertex of the parabola through three (possibly uneven) samples
        d0, d2 = x0 - x1, x2 - x1
        s0, s2 = (y0 - y1) / d0, (y2 - y1) / d2
        curv = (s2 - s0) / (d2 - d0)
        if curv < 0.0:
            slope = s0 - curv * d0
            off = -0.5 * slope / curv
            center = x1 + off
            height = y1 + 0.5 * slope * off
        else:
            center, height = x1, y1
        half = 0.5 * height
        left = _half_crossing(x, y, i, half, -1)
        right = _half_crossing(x, y, i, half, +1)
        peaks.append(Peak(float(center), float(height), float(right - left)))
    return PeakReport(tuple(peaks), multi_peak=_is_multi_peak(peaks))


def _is_multi_peak(peaks):
    if len(peaks) < 3:
        return False
    gaps = np.diff([p.center for p in peaks])
    return bool(gaps.max() / gaps.min() > MULTI_PEAK_RATIO)


def extract_figures(report, lambda0):
    """Fill FSR statistics, finesse and Q into ``report``; ``lambda0`` in μm."""
    if len(report.peaks) < 2:
        raise InsufficientPeaksError(f"need at least 2 peaks, found {len(report.peaks)}")
    centers = np.array([p.center for p in report.peaks])
    gaps = np.diff(centers)
    fsr = float(gaps.mean())
    std = float(gaps.std(ddof=1)) if gaps.size > 1 else 0.0
    widths = np.array([p.fwhm for p in report.peaks])
    widths = widths[np.isfinite(widths)]
    if widths.size == 0:
        return replace(report, fsr_mean=fsr, fsr_stddev=std)
    fwhm = float(np.median(widths))
    nu_ghz = C0 / (lambda0 * 1e-6) * 1e-9
    return replace(report, fsr_mean=fsr, fsr_stddev=std, finesse=fsr / fwhm, q=nu_ghz / fwhm)


def analyze(record, lambda0, min_prominence=DEFAULT_PROMINENCE):
    report = detect_peaks(record, min_prominence)
    if len(report.peaks) < 2:
        return report
    return extract_figures(report, lambda0)
