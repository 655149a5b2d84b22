"""
DFT mapping of OOK blocks onto the OFDM grid, and back.

An OFDM symbol carrying LP-WUS or LP-SS is built from ``M`` OOK blocks of
``M_ZC`` samples each, 132 samples in total. They are spread with a 132-point
DFT onto the 132 WUS subcarriers, centred on DC, and synthesised with an
``fft_size``-point IDFT plus cyclic prefix. All transforms are unitary
(``norm="ortho"``) so energy is preserved from OOK blocks to time samples.
"""

import numpy as np

from lpwus.config.lpwus_config import N_SC_WUS


def wus_bins(fft_size: int) -> np.ndarray:
    """FFT bin of each WUS subcarrier ``k``, subcarrier 66 on DC."""
    if fft_size < N_SC_WUS:
        raise ValueError(f"fft_size={fft_size} cannot hold {N_SC_WUS} subcarriers")
    return (np.arange(N_SC_WUS) - N_SC_WUS // 2) % fft_size


def ook_to_subcarriers(s: np.ndarray) -> np.ndarray:
    if s.size != N_SC_WUS:
        raise ValueError(f"an OFDM symbol carries {N_SC_WUS} OOK samples, got {s.size}")
    return np.fft.fft(s, norm="ortho")


def synthesize_symbol(s: np.ndarray, fft_size: int, cp: int) -> np.ndarray:
    """CP-OFDM time samples (``cp + fft_size``) of one OOK-loaded symbol."""
    grid = np.zeros(fft_size, dtype=complex)
    grid[wus_bins(fft_size)] = ook_to_subcarriers(np.asarray(s, dtype=complex))
    x = np.fft.ifft(grid, norm="ortho")
    return np.concatenate([x[fft_size - cp:], x])


def band_select(useful: np.ndarray) -> np.ndarray:
    """The 132 WUS subcarriers of one useful (CP-free) symbol."""
    Y = np.fft.fft(useful, norm="ortho")
    return Y[wus_bins(useful.size)]


def extract_ook_blocks(useful: np.ndarray, M: int) -> np.ndarray:
    """Band-select, inverse 132-DFT, split into ``M`` blocks of ``132/M`` samples."""
    s = np.fft.ifft(band_select(useful), norm="ortho")
    return s.reshape(M, N_SC_WUS // M)
