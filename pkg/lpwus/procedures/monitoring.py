"""
Monitoring occasions (MOs) of an LP-WUS occasion.

Starting ``first_mo_offset_symbols`` after the LO start, every MO owns a
nominal window of ``L_MO`` symbols that the slot and symbol bitmaps mark as
available. The WUS of an MO occupies the first ``L`` usable symbols of its
window; symbols reserved for other signals (SS/PBCH) are not usable. An MO
whose window holds fewer than ``L`` usable symbols is skipped by the UE.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

from lpwus.config.lpwus_config import SYMBOLS_PER_SLOT

logger = logging.getLogger("lpwus")

Position = Tuple[int, int]


@dataclass(frozen=True)
class MoEntry:
    mo_index: int
    beam_index: int
    symbol_positions: Tuple[Position, ...]
    window: Tuple[Position, ...]
    dropped: bool

    @property
    def span(self) -> int:
        """Physical OFDM symbols from the first to the last WUS symbol."""
        if not self.symbol_positions:
            return 0
        (s0, l0), (s1, l1) = self.symbol_positions[0], self.symbol_positions[-1]
        return (s1 * SYMBOLS_PER_SLOT + l1) - (s0 * SYMBOLS_PER_SLOT + l0) + 1


@dataclass(frozen=True)
class MoSchedule:
    lo_start: Position
    entries: Tuple[MoEntry, ...]

    def entry(self, mo_index: int) -> MoEntry:
        if not 0 <= mo_index < len(self.entries):
            raise IndexError(f"MO {mo_index} outside 0..{len(self.entries) - 1}")
        return self.entries[mo_index]

    def active(self) -> Tuple[MoEntry, ...]:
        return tuple(e for e in self.entries if not e.dropped)

    def first_active(self) -> MoEntry:
        for e in self.entries:
            if not e.dropped:
                return e
        raise LookupError("every MO of the schedule is dropped")

    def __iter__(self) -> Iterator[MoEntry]:
        return iter(self.entries)


def _available_symbols(cfg, start: int) -> Iterator[int]:
    a = start
    while True:
        slot, symbol = divmod(a, SYMBOLS_PER_SLOT)
        if cfg.is_available(slot, symbol):
            yield a
        a += 1


def resolve_mos(cfg, lo_start: Position = (0, 0)) -> MoSchedule:
    """
    Place the ``N_LO_MO * n_beams`` MOs of an LO.

    Parameters
    ----------
    cfg : LpWusConfig
        Validated configuration.
    lo_start : tuple of int
        Absolute (slot, symbol) at which the LO starts. ``reserved_symbols``
        are counted in slots from this slot.

    Returns
    -------
    MoSchedule
        One entry per MO, in time order, beams assigned round-robin.
    """
    if not (any(cfg.slot_bitmap) and any(cfg.symbol_bitmap)):
        raise ValueError("bitmaps leave no symbol available")
    lo_slot, lo_symbol = lo_start
    reserved = {((lo_slot + s) * SYMBOLS_PER_SLOT + l) for s, l in cfg.reserved_symbols}
    stream = _available_symbols(cfg, lo_slot * SYMBOLS_PER_SLOT + lo_symbol + cfg.first_mo_offset_symbols)

    entries = []
    for mo_index in range(cfg.n_mos):
        window = [next(stream) for _ in range(cfg.L_MO)]
        usable = [a for a in window if a not in reserved]
        dropped = len(usable) < cfg.L
        chosen = usable if dropped else usable[: cfg.L]
        entry = MoEntry(
            mo_index=mo_index,
            beam_index=mo_index % cfg.n_beams,
            symbol_positions=tuple(divmod(a, SYMBOLS_PER_SLOT) for a in chosen),
            window=tuple(divmod(a, SYMBOLS_PER_SLOT) for a in window),
            dropped=dropped,
        )
        if dropped:
            logger.warning(f"MO {mo_index} skipped: {len(usable)} usable symbols in window, L={cfg.L}")
        else:
            logger.debug(f"MO {mo_index} (beam {entry.beam_index}) spans {entry.span} symbols")
        entries.append(entry)
    return MoSchedule(lo_start=tuple(lo_start), entries=tuple(entries))
