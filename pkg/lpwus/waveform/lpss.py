"""
Low-power synchronization signal (LP-SS).

An LP-SS is a balanced binary sequence of ``B_lpss`` OOK symbols sent on
``L_lpss`` consecutive OFDM symbols of one slot, ``M_lpss`` OOK symbols per
OFDM symbol. ON symbols carry the root Zadoff-Chu sequence without cyclic
shift, or samples from a caller-supplied source when the ON-sequence is left
unspecified. One occasion is sent per beam every ``period_ms``.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from lpwus.config.lpwus_config import N_SC_WUS, SYMBOLS_PER_SLOT
from lpwus.errors import UnsupportedConfigurationError
from lpwus.waveform.iq_signal import IqSignal
from lpwus.waveform.numerology import Numerology
from lpwus.waveform.ofdm import synthesize_symbol
from lpwus.waveform.zadoff_chu import on_sequence

logger = logging.getLogger("lpwus")

# (B_lpss, M_lpss, L_lpss) -> the four cell sequences
LPSS_TABLE = {
    (6, 1, 6): ("101010", "010101", "100101", "101001"),
    (12, 2, 6): ("100110011001", "011010011001", "011001101001", "011001011001"),
    (16, 4, 4): ("0110100110101010", "0110101010011010", "1010011010101001", "1010100110100110"),
}

OnSource = Callable[[int, int], np.ndarray]


@dataclass(frozen=True)
class LpSsPattern:
    bits: Tuple[int, ...]
    triple: Tuple[int, int, int]
    seq_index: int

    @property
    def B_lpss(self) -> int:
        return len(self.bits)

    @property
    def M_lpss(self) -> int:
        return self.triple[1]

    def on_mask(self) -> np.ndarray:
        return np.array(self.bits, dtype=bool)

    def bipolar(self) -> np.ndarray:
        return 2.0 * np.array(self.bits, dtype=float) - 1.0


@dataclass(frozen=True)
class LpSsOccasion:
    period_index: int
    beam: int
    slot: int
    start_symbol: int


def lpss_pattern(cfg) -> LpSsPattern:
    try:
        row = LPSS_TABLE[cfg.triple][cfg.seq_index]
    except KeyError:
        raise UnsupportedConfigurationError(f"no LP-SS sequence tabulated for (B,M,L)={cfg.triple}") from None
    except IndexError:
        raise UnsupportedConfigurationError(f"LP-SS sequence index {cfg.seq_index} not in 0..3") from None
    return LpSsPattern(bits=tuple(int(c) for c in row), triple=cfg.triple, seq_index=cfg.seq_index)


def lpss_occasions(cfg, numerology: Numerology, n_periods: int = 1, first_period: int = 0) -> List[LpSsOccasion]:
    """Timeline of LP-SS occasions, one per beam and period.

    Beam ``b`` uses start symbol ``start_symbols[b % n]`` in slot
    ``offset_slot + b // n`` of its period, ``n`` being the number of start
    symbols.
    """
    slots_per_ms = numerology.scs_khz // 15
    n = len(cfg.start_symbols)
    occasions = []
    for p in range(first_period, first_period + n_periods):
        offset_slot = (cfg.offset_ms + p * cfg.period_ms) * slots_per_ms
        for b in range(cfg.n_beams):
            occasions.append(LpSsOccasion(p, b, offset_slot + b // n, cfg.start_symbols[b % n]))
    return occasions


def random_on_source(seed: int = 0) -> OnSource:
    """Unit-modulus pseudo-random ON blocks standing in for an unspecified sequence."""
    rng = np.random.default_rng(seed)

    def source(M_ZC: int, k: int) -> np.ndarray:
        return np.exp(2j * np.pi * rng.random(M_ZC))

    return source


def _default_source(cfg) -> OnSource:
    if cfg.root is None:
        return random_on_source()
    samples = on_sequence(cfg.root, 0, cfg.M_ZC).samples
    return lambda M_ZC, k: samples


def modulate_lpss(
    pat: LpSsPattern,
    cfg,
    numerology: Numerology,
    period_index: int = 0,
    beams: Optional[Iterable[int]] = None,
    ook_offset: int = 0,
    on_source: Optional[OnSource] = None,
) -> IqSignal:
    """
    CP-OFDM signal of the LP-SS occasions of one period.

    Parameters
    ----------
    pat : LpSsPattern
        The cell's LP-SS sequence.
    cfg : LpSsConfig
        Placement and ON-sequence root.
    numerology : Numerology
        OFDM timing shared with the LP-WUS carrier.
    period_index : int
        Which period of the timeline to generate.
    beams : iterable of int, optional
        Beams to transmit, all configured beams by default.
    ook_offset : int
        Shift of the pattern, in OOK symbols, from its nominal start. The
        shifted pattern must stay within the slot.
    on_source : callable, optional
        ``on_source(M_ZC, k)`` returns the samples of the ``k``-th ON block.

    Returns
    -------
    IqSignal
        Whole slots; the nominal symbols of each occasion are annotated with
        their beam.
    """
    if pat.triple != cfg.triple:
        raise ValueError(f"pattern {pat.triple} does not match config {cfg.triple}")
    M = cfg.M_lpss
    source = on_source or _default_source(cfg)
    wanted = set(range(cfg.n_beams) if beams is None else beams)
    occasions = [o for o in lpss_occasions(cfg, numerology, 1, period_index) if o.beam in wanted]
    if not occasions:
        raise ValueError("no LP-SS occasion selected")

    sig = IqSignal.blank(
        numerology,
        min(o.slot for o in occasions),
        max(o.slot for o in occasions),
        metadata={"kind": "lp-ss", "period_index": period_index, "seq_index": pat.seq_index},
    )
    samples = sig.samples.copy()
    spans = []
    k = 0
    for occ in occasions:
        first = occ.start_symbol * M + ook_offset
        if first < 0 or first + pat.B_lpss > SYMBOLS_PER_SLOT * M:
            raise ValueError(f"LP-SS shifted by {ook_offset} OOK symbols leaves slot {occ.slot}")
        grid = np.zeros(SYMBOLS_PER_SLOT * M, dtype=np.uint8)
        grid[first : first + pat.B_lpss] = pat.bits
        blocks = np.zeros((SYMBOLS_PER_SLOT * M, cfg.M_ZC), dtype=complex)
        for i in np.flatnonzero(grid):
            blocks[i] = source(cfg.M_ZC, k)
            k += 1
        touched = range(first // M, (first + pat.B_lpss - 1) // M + 1)
        for symbol in touched:
            span = sig.span(occ.slot, symbol, occ.beam)
            s_l = blocks[symbol * M : (symbol + 1) * M].reshape(N_SC_WUS)
            x = synthesize_symbol(s_l, numerology.fft_size, span.cp)
            samples[span.start : span.start + x.size] = x
        spans.extend(
            sig.span(occ.slot, s, occ.beam) for s in range(occ.start_symbol, occ.start_symbol + cfg.L_lpss)
        )
    samples.setflags(write=False)
    logger.debug(f"Modulated LP-SS #{pat.seq_index} for beams {sorted(wanted)} in period {period_index}")
    return IqSignal(samples, numerology, sig.first_slot, tuple(spans), sig.metadata)
