"""Antenna patterns, noise/SINR arithmetic, reception rule, airtime and Tx energy.

The MAC here is an idealized slotless half-duplex broadcast medium with
SINR-threshold capture: no carrier sense, no ACKs. A frame is delivered
iff the receiver was not transmitting during it and its SINR (other
overlapping frames as interference) meets the threshold, boundary closed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

EIRP_CAP_DBM = 43.0  # regulatory UE cap

THERMAL_NOISE_DBM_PER_HZ = -174.0


@dataclass(frozen=True)
class Omni:
    gain_dbi: float = 0.0


@dataclass(frozen=True)
class Directional:
    mainlobe_dbi: float = 17.0
    beamwidth_deg: float = 30.0
    sidelobe_dbi: float = -10.0

    def __post_init__(self):
        if not (0.0 < self.beamwidth_deg < 360.0):
            raise ValueError("beamwidth must be in (0, 360) degrees")
        if self.mainlobe_dbi < self.sidelobe_dbi:
            raise ValueError("mainlobe gain below sidelobe gain")


AntennaPattern = Omni | Directional


def antenna_gain_dbi(pattern: AntennaPattern, off_boresight_deg: float) -> float:
    """Gain at an angle off boresight; the mainlobe edge is inclusive."""
    if isinstance(pattern, Omni):
        return pattern.gain_dbi
    angle = abs(off_boresight_deg) % 360.0
    if angle > 180.0:
        angle = 360.0 - angle
    if angle <= pattern.beamwidth_deg / 2.0:
        return pattern.mainlobe_dbi
    return pattern.sidelobe_dbi


def sweep_sectors(pattern: AntennaPattern) -> int:
    """Number of beam positions needed to cover 360 degrees (1 for omni)."""
    if isinstance(pattern, Omni):
        return 1
    return math.ceil(360.0 / pattern.beamwidth_deg)


@dataclass(frozen=True)
class RadioConfig:
    freq_hz: float = 2.4e9
    tx_power_dbm: float = 20.0
    bitrate_bps: float = 2e6
    bandwidth_hz: float = 22e6
    noise_figure_db: float = 7.0
    snr_threshold_db: float = 10.0
    pattern: AntennaPattern = field(default_factory=Omni)
    mac_retries: int = 0

    def __post_init__(self):
        if self.tx_power_dbm > EIRP_CAP_DBM:
            raise ValueError(
                f"tx power {self.tx_power_dbm} dBm exceeds the {EIRP_CAP_DBM} dBm EIRP cap"
            )
        if self.bitrate_bps <= 0 or self.bandwidth_hz <= 0:
            raise ValueError("bitrate and bandwidth must be positive")

    @property
    def noise_floor_dbm(self) -> float:
        return noise_floor_dbm(self.bandwidth_hz, self.noise_figure_db)


def noise_floor_dbm(bandwidth_hz: float, nf_db: float) -> float:
    """Thermal noise floor: -174 dBm/Hz + 10 log10(B) + NF."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + nf_db


def _mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def sinr_db(rx_dbm: float, interferers_dbm: list[float], noise_dbm: float) -> float:
    """Signal over (interference + noise), all in dB domain."""
    denom_mw = _mw(noise_dbm) + sum(_mw(p) for p in interferers_dbm)
    return rx_dbm - 10.0 * math.log10(denom_mw)


@dataclass(frozen=True)
class TransmissionAttempt:
    tx_node: int
    rx_node: int
    frame_bytes: int
    start: float
    rx_power_dbm: float
    concurrent_dbm: tuple[float, ...] = ()

    def __post_init__(self):
        if self.frame_bytes <= 0:
            raise ValueError("frame size must be positive")


LOST_BELOW_THRESHOLD = "below_threshold"
LOST_HALF_DUPLEX = "half_duplex"
LOST_COLLISION = "collision_policy"


@dataclass(frozen=True)
class ReceptionResult:
    delivered: bool
    reason: str | None = None
    sinr_db: float = math.nan


def try_receive(
    attempt: TransmissionAttempt,
    cfg: RadioConfig,
    noise_dbm: float,
    rx_busy: bool = False,
) -> ReceptionResult:
    """Threshold reception: delivered iff SINR >= threshold (closed boundary).

    rx_busy marks a receiver that transmitted during the frame (half-duplex
    loss regardless of power). A frame that fails only because of
    concurrent transmissions is reported as a collision, distinct from a
    plain below-threshold loss.
    """
    if rx_busy:
        return ReceptionResult(False, LOST_HALF_DUPLEX)
    got = sinr_db(attempt.rx_power_dbm, list(attempt.concurrent_dbm), noise_dbm)
    if got >= cfg.snr_threshold_db:
        return ReceptionResult(True, None, got)
    if attempt.concurrent_dbm and attempt.rx_power_dbm - noise_dbm >= cfg.snr_threshold_db:
        return ReceptionResult(False, LOST_COLLISION, got)
    return ReceptionResult(False, LOST_BELOW_THRESHOLD, got)


def airtime_s(frame_bytes: int, bitrate_bps: float) -> float:
    if frame_bytes <= 0:
        raise ValueError("frame size must be positive")
    if bitrate_bps <= 0:
        raise ValueError("bitrate must be positive")
    return 8.0 * frame_bytes / bitrate_bps


def tx_energy_mj(tx_power_dbm: float, airtime: float) -> float:
    """Transmit energy in millijoules: mW * s."""
    if airtime < 0:
        raise ValueError("airtime must be non-negative")
    return _mw(tx_power_dbm) * airtime
