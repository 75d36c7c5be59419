"""Path-loss models and the link-budget step from Tx power to Rx power.

All models return loss in dB and take frequency in Hz and distance in
meters. Log terms are base 10 throughout. Distances below D_MIN_M (1 m,
the close-in reference distance; free-space models are invalid in the
near field anyway) raise instead of clamping, so scenario bugs surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SPEED_OF_LIGHT = 3e8  # m/s

# 20*log10(4*pi/c): the free-space constant usually quoted rounded as -147.56 dB.
_FRIIS_CONST_DB = 20.0 * math.log10(4.0 * math.pi / SPEED_OF_LIGHT)

D_MIN_M = 1.0

MMWAVE_MIN_HZ = 28e9  # conventional lower edge of the mmWave band here


def is_mmwave(freq_hz: float) -> bool:
    return freq_hz >= MMWAVE_MIN_HZ


def _check_distance(d_m: float) -> None:
    if d_m < D_MIN_M:
        raise ValueError(f"distance {d_m} m is below the {D_MIN_M} m model minimum")


def friis_db(freq_hz: float, d_m: float) -> float:
    """Free-space loss: 20 log10(f) + 20 log10(d) + 20 log10(4 pi / c)."""
    if freq_hz <= 0:
        raise ValueError("frequency must be positive")
    _check_distance(d_m)
    return 20.0 * math.log10(freq_hz) + 20.0 * math.log10(d_m) + _FRIIS_CONST_DB


def friis_directional_db(freq_hz: float, d_m: float, gt_dbi: float, gr_dbi: float) -> float:
    """Free-space loss net of fixed Tx/Rx antenna gains."""
    return friis_db(freq_hz, d_m) - gt_dbi - gr_dbi


def fspl_1m_db(freq_hz: float) -> float:
    """Free-space loss at the 1 m reference distance: 20 log10(4 pi f / c)."""
    if freq_hz <= 0:
        raise ValueError("frequency must be positive")
    return 20.0 * math.log10(4.0 * math.pi * freq_hz / SPEED_OF_LIGHT)


def ci_db(freq_hz: float, d_m: float, ple_n: float, shadow_db: float = 0.0) -> float:
    """Close-in model: FSPL(f, 1 m) + 10 n log10(d) + shadow term.

    The shadow value is drawn by the caller (Normal(0, sigma) held per link
    and waypoint leg, or 0 for deterministic mode). With n = 2 and no shadow
    this is identical to friis_db.
    """
    _check_distance(d_m)
    if ple_n <= 0:
        raise ValueError("path-loss exponent must be positive")
    return fspl_1m_db(freq_hz) + 10.0 * ple_n * math.log10(d_m) + shadow_db


def rma_los_db(freq_hz: float, d_m: float, h_m: float) -> float:
    """Rural-macro line-of-sight loss (carrier in GHz inside the formula).

    20 log10(40 pi d fc / 3) + min(0.03 h^1.72, 10) log10(d)
    - min(0.044 h^1.72, 14.77) + 0.002 log10(h) d
    """
    _check_distance(d_m)
    if h_m <= 0:
        raise ValueError("height must be positive")
    fc_ghz = freq_hz / 1e9
    if fc_ghz <= 0:
        raise ValueError("frequency must be positive")
    h172 = h_m ** 1.72
    return (
        20.0 * math.log10(40.0 * math.pi * d_m * fc_ghz / 3.0)
        + min(0.03 * h172, 10.0) * math.log10(d_m)
        - min(0.044 * h172, 14.77)
        + 0.002 * math.log10(h_m) * d_m
    )


# Urban-macro LoS coefficients are not defined by this package; they are
# transcribed from 3GPP TR 38.900 (Table 7.4.1-1, UMa LoS, pre-breakpoint
# branch: 28.0 + 22 log10(d3D) + 20 log10(fc)) into the default config.
UMA_DEFAULT_COEFFS = {"a": 28.0, "b": 22.0, "e": 20.0}


def uma_los_db(freq_hz: float, d_m: float, coeffs: dict[str, float]) -> float:
    """Urban-macro LoS loss: a + b log10(d) + e log10(fc_GHz) from a coefficient table."""
    _check_distance(d_m)
    try:
        a, b, e = coeffs["a"], coeffs["b"], coeffs["e"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"uma coefficient table missing key: {exc}") from exc
    return a + b * math.log10(d_m) + e * math.log10(freq_hz / 1e9)


def rx_power_dbm(tx_dbm: float, pl_db: float, extra_gain_dbi: float = 0.0) -> float:
    """Standard link budget: received power = Tx power - loss + gains."""
    return tx_dbm - pl_db + extra_gain_dbi


@dataclass(frozen=True)
class ChannelModel:
    """Selected path-loss model with its parameters.

    kind: friis | friis_dir | rma | ci | uma. Antenna-pattern gains are
    applied by the radio layer on top of the loss returned here; the
    friis_dir variant exists for the fixed-gain closed form and the
    path-loss table.
    """

    kind: str = "friis"
    gt_dbi: float = 0.0
    gr_dbi: float = 0.0
    h_m: float = 5.0
    ple_n: float = 2.0
    sigma_db: float = 0.0
    uma_coeffs: dict[str, float] = field(default_factory=lambda: dict(UMA_DEFAULT_COEFFS))

    def loss_db(self, freq_hz: float, d_m: float, shadow_db: float = 0.0) -> float:
        if self.kind == "friis":
            return friis_db(freq_hz, d_m)
        if self.kind == "friis_dir":
            return friis_directional_db(freq_hz, d_m, self.gt_dbi, self.gr_dbi)
        if self.kind == "rma":
            return rma_los_db(freq_hz, d_m, self.h_m)
        if self.kind == "ci":
            return ci_db(freq_hz, d_m, self.ple_n, shadow_db)
        if self.kind == "uma":
            return uma_los_db(freq_hz, d_m, self.uma_coeffs)
        raise ValueError(f"unknown channel model kind: {self.kind!r}")


CHANNEL_MODEL_KINDS = ("friis", "friis_dir", "rma", "ci", "uma")
