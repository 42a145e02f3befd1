"""Free-space link budget: path loss, SNR, Shannon rate, exchange time.

All internal math is in linear units; dBm/dBi conversions live only at the
configuration boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LinkUnavailableError
from .orbital import EARTH

BOLTZMANN_J_PER_K = 1.380649e-23


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError("only positive quantities have a dB value")
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError("power must be strictly positive")
    return 10.0 * math.log10(watts * 1000.0)


@dataclass(frozen=True)
class LinkBudget:
    """Linear-unit RF parameters of the satellite-station link."""

    power_w: float
    gain_sat: float
    gain_gs: float
    bandwidth_hz: float
    noise_temp_k: float
    carrier_hz: float

    def __post_init__(self):
        for name in (
            "power_w", "gain_sat", "gain_gs",
            "bandwidth_hz", "noise_temp_k", "carrier_hz",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def noise_power_w(self) -> float:
        return BOLTZMANN_J_PER_K * self.noise_temp_k * self.bandwidth_hz

    @classmethod
    def from_db_units(
        cls,
        power_dbm: float,
        gain_sat_dbi: float,
        gain_gs_dbi: float,
        bandwidth_hz: float,
        noise_temp_k: float,
        carrier_hz: float,
    ) -> "LinkBudget":
        return cls(
            power_w=dbm_to_watts(power_dbm),
            gain_sat=db_to_linear(gain_sat_dbi),
            gain_gs=db_to_linear(gain_gs_dbi),
            bandwidth_hz=bandwidth_hz,
            noise_temp_k=noise_temp_k,
            carrier_hz=carrier_hz,
        )


def path_loss(distance_m: float, carrier_hz: float, c: float = EARTH.c) -> float:
    """Free-space path loss as a linear factor: (4 pi f d / c)^2."""
    if distance_m <= 0:
        raise ValueError("distance must be strictly positive")
    return (4.0 * math.pi * carrier_hz * distance_m / c) ** 2


def snr(budget: LinkBudget, distance_m: float, visible: bool = True) -> float:
    """Linear SNR of the link; zero whenever the satellite is out of view."""
    if not visible:
        return 0.0
    loss = path_loss(distance_m, budget.carrier_hz)
    return budget.power_w * budget.gain_sat * budget.gain_gs / (
        budget.noise_power_w * loss
    )


def data_rate(budget: LinkBudget, snr_linear: float) -> float:
    """Shannon rate B*log2(1 + SNR) in bits/second."""
    if snr_linear < 0:
        raise ValueError("SNR must be non-negative")
    return budget.bandwidth_hz * math.log2(1.0 + snr_linear)


def comm_time(
    model_bits: float, rate_bps: float, distance_m: float, c: float = EARTH.c
) -> float:
    """Transmission plus propagation time for one model exchange."""
    if rate_bps <= 0:
        raise LinkUnavailableError(
            "cannot exchange model parameters over a zero-rate link"
        )
    return model_bits / rate_bps + distance_m / c


def pass_comm_time(budget: LinkBudget, model_bits: float, max_distance_m: float) -> float:
    """Exchange time for one pass, using the pass's longest distance."""
    rate = data_rate(budget, snr(budget, max_distance_m, visible=True))
    return comm_time(model_bits, rate, max_distance_m)
