"""
LP-SS coarse synchronization and the LP measurement metrics.

Both work on OOK symbol energies, so they apply to energy-detection and
coherent receivers alike and are insensitive to frequency offset.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from lpwus.config.lpwus_config import SYMBOLS_PER_SLOT
from lpwus.receiver.energy_detector import block_energies, ook_blocks
from lpwus.receiver.reports import MeasurementReport

logger = logging.getLogger("lpwus")

RSSI_NORMALIZATIONS = ("per_symbol", "on_count")


def correlate_pattern(energies, pattern) -> np.ndarray:
    """
    Pearson correlation of ``pattern`` with every window of ``energies``.

    Returns
    -------
    numpy array
        One value in [-1, 1] per lag ``0 .. len(energies) - len(pattern)``;
        windows of constant energy score 0.
    """
    e = np.asarray(energies, dtype=float)
    p = np.asarray(pattern, dtype=float)
    n = p.size
    if e.size < n:
        return np.zeros(0)
    windows = np.lib.stride_tricks.sliding_window_view(e, n)
    pc = p - p.mean()
    wc = windows - windows.mean(axis=1, keepdims=True)
    num = wc @ pc
    den = np.linalg.norm(wc, axis=1) * np.linalg.norm(pc)
    out = np.zeros(num.shape)
    np.divide(num, den, out=out, where=den > 1e-12 * max(1.0, float(np.max(np.abs(e)))))
    return np.clip(out, -1.0, 1.0)


def _occasion(y, beam: int) -> Tuple[int, int]:
    positions = y.positions(beam)
    if not positions:
        raise ValueError(f"signal carries no LP-SS occasion for beam {beam}")
    return positions[0]


def slot_energies(y, slot: int, M: int) -> np.ndarray:
    """Energies of the ``14 * M`` OOK symbols of a slot."""
    positions = [(slot, symbol) for symbol in range(SYMBOLS_PER_SLOT)]
    return block_energies(ook_blocks(y, positions, M))


def lpss_sync(y, pat, cfg, beam: int = 0, max_offset: Optional[int] = None) -> Tuple[int, float]:
    """
    Estimate the timing of an LP-SS occasion.

    The pattern is slid over the OOK energies of the occasion's slot, at most
    ``max_offset`` OOK symbols (one pattern length by default) either side of
    the nominal start.

    Returns
    -------
    tuple
        Offset in OOK symbols relative to the nominal start (the earliest one
        on ties) and the peak correlation.
    """
    max_offset = pat.B_lpss if max_offset is None else max_offset
    slot, start_symbol = _occasion(y, beam)
    M = cfg.M_lpss
    corr = correlate_pattern(slot_energies(y, slot, M), pat.bits)
    nominal = start_symbol * M
    lags = np.arange(max(0, nominal - max_offset), min(corr.size - 1, nominal + max_offset) + 1)
    best = lags[int(np.argmax(corr[lags]))]
    logger.debug(f"LP-SS beam {beam}: offset {best - nominal}, peak {corr[best]:.3f}")
    return int(best - nominal), float(corr[best])


def lp_measure(
    y,
    pat,
    cfg,
    beam: int = 0,
    offset: int = 0,
    rssi_normalization: str = "per_symbol",
) -> MeasurementReport:
    """
    LP-RSSI, LP-RSRP and LP-RSRQ over one LP-SS occasion.

    Powers are per sample. ``"per_symbol"`` averages the total power over all
    ``B_lpss`` OOK symbols; ``"on_count"`` divides it by the number of ON
    symbols instead, which bounds LP-RSRQ by 1.
    """
    if rssi_normalization not in RSSI_NORMALIZATIONS:
        raise ValueError(f"rssi_normalization must be one of {RSSI_NORMALIZATIONS}")
    slot, start_symbol = _occasion(y, beam)
    M = cfg.M_lpss
    first = start_symbol * M + offset
    e = slot_energies(y, slot, M)
    if first < 0 or first + pat.B_lpss > e.size:
        raise ValueError(f"offset {offset} moves the occasion out of slot {slot}")
    p = e[first : first + pat.B_lpss] / cfg.M_ZC
    on = pat.on_mask()
    total = float(p.sum())
    rssi = total / (pat.B_lpss if rssi_normalization == "per_symbol" else int(on.sum()))
    rsrp = float(p[on].mean())
    return MeasurementReport.from_powers(rssi, rsrp)
