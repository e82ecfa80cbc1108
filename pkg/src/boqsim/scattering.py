"""Frequency-domain input-output responses of the pumped oscillator and the
qubit: signal/idler reflection, gain summaries, and the coupled anticrossing
response.

All probe frequencies `omega` are detunings from half the pump frequency
(rotating frame), in MHz, except gamma_qubit which takes absolute frequency.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core import (OscillatorParams, StabilityError, lambda_coalescence,
                   lambda_critical, validate)


@dataclass(frozen=True)
class ComplexSpectrum:
    """Complex reflection spectrum on a strictly increasing frequency grid."""

    freqs: np.ndarray
    values: np.ndarray
    kind: str = "signal"  # signal | idler | qubit | coupled

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if len(freqs) != len(values):
            raise ValueError("freqs and values must have equal length")
        if len(freqs) > 1 and not np.all(np.diff(freqs) > 0):
            raise ValueError("freqs must be strictly increasing")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "values", values)

    def to_csv(self, path: str | Path | None = None) -> str | None:
        """Serialize as CSV with columns freq_mhz, re, im, abs_db, phase_rad."""
        buf = io.StringIO()
        buf.write("freq_mhz,re,im,abs_db,phase_rad\n")
        absval = np.abs(self.values)
        with np.errstate(divide="ignore"):
            abs_db = 20.0 * np.log10(absval)
        phase = np.angle(self.values)
        for f, v, adb, ph in zip(self.freqs, self.values, abs_db, phase):
            buf.write(f"{f:.12g},{v.real:.12g},{v.imag:.12g},"
                      f"{adb:.12g},{ph:.12g}\n")
        text = buf.getvalue()
        if path is None:
            return text
        Path(path).write_text(text)
        return None

    @classmethod
    def from_csv(cls, path: str | Path, kind: str = "signal"
                 ) -> "ComplexSpectrum":
        rows = Path(path).read_text().strip().splitlines()
        header = rows[0].split(",")
        if header[:3] != ["freq_mhz", "re", "im"]:
            raise ValueError("unexpected CSV header for spectrum")
        data = np.array([[float(x) for x in row.split(",")[:3]]
                         for row in rows[1:]])
        return cls(freqs=data[:, 0], values=data[:, 1] + 1j * data[:, 2],
                   kind=kind)


@dataclass(frozen=True)
class PeakInfo:
    """One local maximum of the power reflection gain."""

    freq: float
    gain: float
    bw_3db: float


@dataclass(frozen=True)
class GainSummary:
    """Peak gain, 3 dB bandwidth and regime thresholds."""

    g_max: float
    peak_freq: float
    bw_3db: float
    n_peaks: int
    lambda_co: float | None
    lambda_crit: float
    peaks: tuple[PeakInfo, ...] = ()


def _check_stable(p: OscillatorParams) -> None:
    rep = validate(p)
    if not rep.stable:
        raise StabilityError(
            f"unstable parameters: lam = {p.lam} >= lambda_crit = "
            f"{rep.lambda_crit}")


def gamma_signal(p: OscillatorParams, omega) -> complex | np.ndarray:
    """Complex signal reflection Gamma_a[omega].

    Gamma_a = -1 + (kappa^2/2 - i kappa (omega + delta_a)) /
                   (kappa^2/4 + delta_a^2 - lam^2 - omega^2 - i kappa omega)
    """
    _check_stable(p)
    w = np.asarray(omega, dtype=float)
    k, d, l = p.kappa, p.delta_a, p.lam
    num = k * k / 2.0 - 1j * k * (w + d)
    den = k * k / 4.0 + d * d - l * l - w * w - 1j * k * w
    out = -1.0 + num / den
    return out if np.ndim(out) else complex(out)


def gamma_idler(p: OscillatorParams, omega) -> complex | np.ndarray:
    """Complex idler conversion Gamma_i[omega] = i kappa lam / D[omega].

    Obtained from the 2x2 frequency-domain Langevin system for (a, a^dag);
    satisfies |Gamma_a|^2 - |Gamma_i|^2 = 1 for all omega.
    """
    _check_stable(p)
    w = np.asarray(omega, dtype=float)
    k, d, l = p.kappa, p.delta_a, p.lam
    den = k * k / 4.0 + d * d - l * l - w * w - 1j * k * w
    out = 1j * k * l / den
    return out if np.ndim(out) else complex(out)


def signal_spectrum(p: OscillatorParams, freqs) -> ComplexSpectrum:
    return ComplexSpectrum(freqs=np.asarray(freqs, dtype=float),
                           values=gamma_signal(p, freqs), kind="signal")


def _power_gain(p: OscillatorParams, w: np.ndarray) -> np.ndarray:
    k, d, l = p.kappa, p.delta_a, p.lam
    num = k * k / 2.0 - 1j * k * (w + d)
    den = k * k / 4.0 + d * d - l * l - w * w - 1j * k * w
    return np.abs(-1.0 + num / den) ** 2


class GridTooCoarseError(ValueError):
    """Grid fails to bracket the gain peaks for refinement."""


def _refine_peak(p: OscillatorParams, grid: np.ndarray, idx: int
                 ) -> tuple[float, float]:
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, len(grid) - 1)]
    if lo == hi:
        raise GridTooCoarseError("cannot bracket peak at grid edge")
    res = minimize_scalar(lambda w: -_power_gain(p, np.array([w]))[0],
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x), float(-res.fun)


def _halfwidth_crossing(p: OscillatorParams, half: float, w_from: float,
                        w_dir: float, w_limit: float) -> float | None:
    """March from the peak toward w_dir until gain drops below half."""
    f = lambda w: _power_gain(p, np.array([w]))[0] - half
    step = max(p.kappa / 50.0, 1e-3)
    w = w_from
    while (w - w_limit) * w_dir < 0:
        w_next = w + w_dir * step
        if (w_next - w_limit) * w_dir > 0:
            w_next = w_limit
        if f(w_next) < 0:
            return brentq(f, min(w, w_next), max(w, w_next), xtol=1e-12)
        w = w_next
        step *= 1.5
    return None


def _local_maxima(gains: np.ndarray) -> list[int]:
    return [i for i in range(1, len(gains) - 1)
            if gains[i] >= gains[i - 1] and gains[i] >= gains[i + 1]
            and (gains[i] > gains[i - 1] or gains[i] > gains[i + 1])]


def peak_gain(p: OscillatorParams, grid) -> tuple[float, float]:
    """Refined (freq, gain) of the global power-gain maximum on the grid."""
    _check_stable(p)
    grid = np.asarray(grid, dtype=float)
    gains = _power_gain(p, grid)
    maxima = _local_maxima(gains) or [int(np.argmax(gains))]
    best = max((_refine_peak(p, grid, i) for i in maxima),
               key=lambda fg: fg[1])
    return best


def gain_summary(p: OscillatorParams, grid) -> GainSummary:
    """Locate gain peak(s) on the grid with local refinement and measure the
    3 dB bandwidth (full width at half the peak's power gain) around each.

    Since |Gamma_a|^2 >= 1 everywhere (lossless reflection), a peak with
    gain < 2 never drops to half its maximum; its bw_3db is reported as inf.
    """
    _check_stable(p)
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 5:
        raise GridTooCoarseError("grid must contain at least 5 points")
    gains = _power_gain(p, grid)
    maxima = _local_maxima(gains)
    if not maxima:
        raise GridTooCoarseError("no local gain maximum bracketed by grid")
    span = grid[-1] - grid[0]
    peaks = []
    for i in maxima:
        freq, gain = _refine_peak(p, grid, i)
        if gain / 2.0 <= 1.0:
            peaks.append(PeakInfo(freq=freq, gain=gain, bw_3db=math.inf))
            continue
        right = _halfwidth_crossing(p, gain / 2.0, freq, +1.0,
                                    grid[-1] + 2.0 * span)
        left = _halfwidth_crossing(p, gain / 2.0, freq, -1.0,
                                   grid[0] - 2.0 * span)
        if right is None or left is None:
            raise GridTooCoarseError("3 dB crossing not found near peak")
        peaks.append(PeakInfo(freq=freq, gain=gain, bw_3db=right - left))
    # merge refined duplicates (flat tops resolve to the same point)
    uniq: list[PeakInfo] = []
    for pk in sorted(peaks, key=lambda q: q.freq):
        if uniq and abs(pk.freq - uniq[-1].freq) < 1e-6 * max(1.0, span):
            continue
        uniq.append(pk)
    best = max(uniq, key=lambda q: q.gain)
    return GainSummary(
        g_max=best.gain, peak_freq=best.freq, bw_3db=best.bw_3db,
        n_peaks=len(uniq),
        lambda_co=lambda_coalescence(p.kappa, p.delta_a),
        lambda_crit=lambda_critical(p.kappa, p.delta_a),
        peaks=tuple(uniq))


def fit_bandwidth(p: OscillatorParams) -> tuple[float, bool]:
    """Per-peak amplification bandwidth as a Lorentzian fit would report it.

    The amplification |Gamma_a|^2 - 1 = kappa^2 lam^2 / ((C - omega^2)^2 +
    kappa^2 omega^2) with C = kappa^2/4 + delta_a^2 - lam^2 is an exact
    Lorentzian in omega^2.  Linearizing around the peak gives the FWHM a
    local Lorentzian fit in omega measures:

    split peaks (C > kappa^2/2, at +-sqrt(C - kappa^2/2)):
        FWHM = kappa * sqrt(1 + kappa^2 / (4 (C - kappa^2/2)))  (per peak)
    merged peak (C <= kappa^2/2, at 0):
        FWHM = 2 C / sqrt(kappa^2 - 2 C)

    Returns (fwhm, split).  The split-peak value tends to kappa deep in the
    detuned regime (gain-independent bandwidth) and diverges at coalescence.
    """
    _check_stable(p)
    k, d, l = p.kappa, p.delta_a, p.lam
    c = k * k / 4.0 + d * d - l * l
    u_pk = c - k * k / 2.0
    if u_pk > 0.0:
        return k * math.sqrt(1.0 + k * k / (4.0 * u_pk)), True
    return 2.0 * c / math.sqrt(k * k - 2.0 * c), False


def gmax_resonant(p: OscillatorParams) -> float:
    """Closed-form maximum power gain for |delta_a| < kappa/2 (at omega = 0).

    G = 1 + kappa^2 lam^2 / (kappa^2/4 + delta_a^2 - lam^2)^2.
    """
    k, d, l = p.kappa, p.delta_a, p.lam
    return 1.0 + k * k * l * l / (k * k / 4.0 + d * d - l * l) ** 2


def lambda_for_gain(kappa: float, g_target: float) -> float:
    """Invert gmax_resonant at delta_a = 0 for the pump amplitude."""
    if g_target < 1.0:
        raise ValueError("target gain must be >= 1")
    sq = math.sqrt(g_target)
    return kappa / 2.0 * math.sqrt((sq - 1.0) / (sq + 1.0))


def gamma_qubit(omega_abs, nu_q: float, gamma_1: float, gamma_t: float
                ) -> complex | np.ndarray:
    """Qubit reflection Gamma_q = -1 + gamma_1/(gamma_t/2 - i(omega - nu_q))."""
    if not (gamma_t >= gamma_1 > 0):
        raise ValueError("require gamma_t >= gamma_1 > 0")
    w = np.asarray(omega_abs, dtype=float)
    out = -1.0 + gamma_1 / (gamma_t / 2.0 - 1j * (w - nu_q))
    return out if np.ndim(out) else complex(out)


def qubit_spectrum(freqs, nu_q: float, gamma_1: float, gamma_t: float
                   ) -> ComplexSpectrum:
    return ComplexSpectrum(freqs=np.asarray(freqs, dtype=float),
                           values=gamma_qubit(freqs, nu_q, gamma_1, gamma_t),
                           kind="qubit")


def gamma_coupled(omega, nu_a: float, kappa: float, nu_q: float,
                  gamma_t: float, g: float) -> complex | np.ndarray:
    """Pump-off reflection of the oscillator hybridized with the qubit.

    Gamma = -1 + kappa / (kappa/2 - i(omega - nu_a)
                          + g^2/(gamma_t/2 - i(omega - nu_q))).
    """
    w = np.asarray(omega, dtype=float)
    out = -1.0 + kappa / (kappa / 2.0 - 1j * (w - nu_a)
                          + g * g / (gamma_t / 2.0 - 1j * (w - nu_q)))
    return out if np.ndim(out) else complex(out)
