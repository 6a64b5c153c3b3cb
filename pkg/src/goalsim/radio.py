"""Uplink radio model.

Covers path loss, channel sampling, the BER margin approximation, the
Shannon-with-margin rate/delay, inversion of that rate for a target delay,
and device transmit energy.

The achievable rate is B * log2(1 + phi(BER) * h * p / (N0 * B)), where the
margin phi maps the target bit error rate onto an SNR penalty. Two margin
branches exist: phi = -1.5 / ln(5 BER) at spectral efficiency >= 4 bit/s/Hz
and phi = -1.5 / ln(0.5 BER) below. Forward evaluation first tries the
high-SE branch and drops to the low-SE branch when the resulting SE falls
below 4; inversion picks the branch from the required SE. In the narrow SNR
band where both branches are self-consistent the two directions can
disagree; results there are flagged ``branch_ambiguous`` and the realized
delay errs on the early side (never past the target).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .types import INFINITE, ChannelDraw, RadioConfig

#: Spectral efficiency (bit/s/Hz) separating the two BER-margin branches.
SE_BRANCH_THRESHOLD = 4.0


class Branch(Enum):
    HIGH_SE = "high_se"
    LOW_SE = "low_se"


@dataclass(frozen=True)
class BerMargin:
    phi: float
    branch: Branch


@dataclass(frozen=True)
class UplinkResult:
    """Realized uplink transmission figures for one (h, p) pair."""

    rate: float      # bit/s; 0 when h*p == 0
    delay: float     # s; INFINITE when rate == 0
    energy: float    # J, p_used * delay; INFINITE when delay is
    p_used: float    # W
    clamped: bool    # set by callers that clamped an inverted power
    branch: Branch
    branch_ambiguous: bool  # both margin branches self-consistent at this SNR


def _phi_high(ber: float) -> float:
    return -1.5 / math.log(5.0 * ber)


def _phi_low(ber: float) -> float:
    return -1.5 / math.log(0.5 * ber)


def _require_ber(ber: float) -> None:
    if not 0.0 < ber <= 0.1:
        raise ValueError(f"ber must be in (0, 0.1], got {ber}")


def ber_margin(ber: float, spectral_efficiency_hint: float) -> BerMargin:
    """BER margin phi for the branch selected by the SE hint."""
    _require_ber(ber)
    if spectral_efficiency_hint >= SE_BRANCH_THRESHOLD:
        return BerMargin(_phi_high(ber), Branch.HIGH_SE)
    return BerMargin(_phi_low(ber), Branch.LOW_SE)


def pathloss_db(distance: float, carrier_freq: float, *,
                min_distance: float = 0.0,
                a: float = 32.4, b: float = 21.0, c: float = 20.0) -> float:
    """Distance/frequency path loss a + b*log10(d_m) + c*log10(f_GHz), in dB."""
    if distance < min_distance:
        raise ValueError(f"distance {distance} m below minimum {min_distance} m")
    if distance <= 0 or carrier_freq <= 0:
        raise ValueError("distance and carrier_freq must be positive")
    return a + b * math.log10(distance) + c * math.log10(carrier_freq / 1e9)


def draw_channels(rng: np.random.Generator, radio: RadioConfig, n: int):
    """Vectorized channel sampling; returns (distance, pathloss_db, fading, h).

    Distances are uniform over the disk of radius cell_radius (radius law
    sqrt(U) * R with U in (0, 1]), clamped to min_distance; the fading power
    gain is Exp(1), the squared magnitude of unit-variance complex Rayleigh
    fading, or exactly 1 when fading is disabled.
    """
    u = 1.0 - rng.uniform(size=n)
    if radio.fixed_distance is not None:
        distance = np.full(n, float(radio.fixed_distance))
    else:
        distance = np.maximum(np.sqrt(u) * radio.cell_radius, radio.min_distance)
    if radio.fading == "rayleigh":
        fading = rng.exponential(1.0, size=n)
    else:
        fading = np.ones(n)
    pl = (radio.pathloss_a
          + radio.pathloss_b * np.log10(distance)
          + radio.pathloss_c * np.log10(radio.carrier_freq / 1e9))
    h = 10.0 ** (-pl / 10.0) * fading
    return distance, pl, fading, h


def sample_channel(rng: np.random.Generator, radio: RadioConfig) -> ChannelDraw:
    """Draw one channel realization from the caller-owned rng stream."""
    distance, pl, fading, h = draw_channels(rng, radio, 1)
    return ChannelDraw(distance=float(distance[0]), pathloss_db=float(pl[0]),
                       fading_power_gain=float(fading[0]), h=float(h[0]))


def uplink_delay(radio: RadioConfig, h: float, p: float) -> UplinkResult:
    """Uplink rate, delay, and energy at channel gain h and transmit power p.

    The high-SE margin is evaluated first; if the resulting SE is below the
    branch threshold the low-SE margin is evaluated instead and kept.
    """
    if p < 0 or p > radio.p_max:
        raise ValueError(f"p must be in [0, p_max={radio.p_max}], got {p}")
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    received = h * p
    if received == 0.0:
        return UplinkResult(rate=0.0, delay=INFINITE, energy=INFINITE,
                            p_used=p, clamped=False, branch=Branch.LOW_SE,
                            branch_ambiguous=False)
    snr = received / (radio.noise_psd * radio.bandwidth)
    ber = radio.ber_target
    _require_ber(ber)
    se_high = math.log2(1.0 + _phi_high(ber) * snr)
    if se_high >= SE_BRANCH_THRESHOLD:
        branch = Branch.HIGH_SE
        se = se_high
        ambiguous = math.log2(1.0 + _phi_low(ber) * snr) < SE_BRANCH_THRESHOLD
    else:
        branch = Branch.LOW_SE
        se = math.log2(1.0 + _phi_low(ber) * snr)
        ambiguous = False
    rate = radio.bandwidth * se
    if rate == 0.0:
        return UplinkResult(rate=0.0, delay=INFINITE, energy=INFINITE,
                            p_used=p, clamped=False, branch=branch,
                            branch_ambiguous=ambiguous)
    delay = radio.n_bits / rate
    return UplinkResult(rate=rate, delay=delay, energy=p * delay, p_used=p,
                        clamped=False, branch=branch, branch_ambiguous=ambiguous)


def invert_power(radio: RadioConfig, h: float,
                 target_delay: float) -> tuple[float, bool]:
    """Transmit power that meets ``target_delay`` exactly, or (p_max, True).

    The margin branch is picked from the required spectral efficiency
    n_bits / (B * target_delay). Whenever the returned power is not clamped,
    feeding it back through uplink_delay reproduces the target delay, except
    in the ambiguous branch band where the realized delay is shorter.
    """
    if target_delay < 0:
        raise ValueError(f"target_delay must be >= 0, got {target_delay}")
    if target_delay == 0 or h == 0:
        return radio.p_max, True
    ber = radio.ber_target
    _require_ber(ber)
    se_req = radio.n_bits / (radio.bandwidth * target_delay)
    phi = _phi_high(ber) if se_req >= SE_BRANCH_THRESHOLD else _phi_low(ber)
    noise = radio.noise_psd * radio.bandwidth
    # Clamp check in SE space first, so 2**se_req cannot overflow.
    se_max = math.log2(1.0 + phi * h * radio.p_max / noise)
    if se_req > se_max:
        return radio.p_max, True
    p = (2.0 ** se_req - 1.0) * noise / (phi * h)
    if p > radio.p_max:
        return radio.p_max, True
    return p, False
