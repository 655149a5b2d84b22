"""
Impairments between transmitter and receivers.

``y[n] = h * x[n - tau] * exp(j 2 pi cfo n / fs) + w[n]``

ON OOK blocks are unit-modulus and the OFDM chain is unitary, so a noise
variance of ``10^(-snr_db/10)`` per time sample gives ``snr_db`` per ON OOK
symbol inside the 132-subcarrier band. Measured over the whole ``fft_size``
band, a fully ON OFDM symbol sits ``10 log10(fft_size / 132)`` dB lower.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from lpwus.waveform.iq_signal import IqSignal

logger = logging.getLogger("lpwus")


class Fading(enum.Enum):
    NONE = "none"
    RAYLEIGH_BLOCK = "rayleigh"


@dataclass(frozen=True)
class ChannelProfile:
    snr_db: float = math.inf
    cfo_hz: float = 0.0
    timing_offset_samples: int = 0
    fading: Fading = Fading.NONE
    seed: Optional[int] = None

    @property
    def noise_variance(self) -> float:
        if math.isinf(self.snr_db) and self.snr_db > 0:
            return 0.0
        return 10.0 ** (-self.snr_db / 10.0)


def complex_noise(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """Circular complex Gaussian samples of total variance ``variance``."""
    return math.sqrt(variance / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def delay(x: np.ndarray, tau: int) -> np.ndarray:
    """Shift by ``tau`` samples, zero filled; negative values advance."""
    y = np.zeros_like(x)
    if tau == 0:
        y[:] = x
    elif tau > 0:
        y[tau:] = x[: x.size - tau]
    else:
        y[: x.size + tau] = x[-tau:]
    return y


def apply(
    sig: IqSignal,
    prof: ChannelProfile,
    rng: Optional[np.random.Generator] = None,
    noise_only: bool = False,
) -> IqSignal:
    """
    Pass a signal through the channel.

    Parameters
    ----------
    sig : IqSignal
        Transmitted signal; its annotations are kept so that a receiver with
        perfect timing knowledge still finds the nominal symbols.
    prof : ChannelProfile
        Channel parameters.
    rng : numpy Generator, optional
        Source of fading and noise; ``default_rng(prof.seed)`` when absent.
    noise_only : bool
        Replace the signal by zeros, for false-alarm runs. Noise of unit
        variance is used when ``snr_db`` is infinite.

    Returns
    -------
    IqSignal
        The received signal.
    """
    rng = rng if rng is not None else np.random.default_rng(prof.seed)
    x = np.zeros(sig.samples.size, dtype=complex) if noise_only else np.asarray(sig.samples, dtype=complex)

    h = 1.0 + 0.0j
    if prof.fading is Fading.RAYLEIGH_BLOCK:
        h = complex(complex_noise(rng, 1, 1.0)[0])
    y = h * delay(x, prof.timing_offset_samples)
    if prof.cfo_hz:
        n = np.arange(y.size)
        y = y * np.exp(2j * np.pi * prof.cfo_hz * n / sig.sample_rate_hz)

    variance = prof.noise_variance
    if noise_only and variance == 0.0:
        variance = 1.0
    if variance > 0.0:
        y = y + complex_noise(rng, y.size, variance)
    return sig.with_samples(y)
