import math
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict

from lpwus.waveform.zadoff_chu import largest_prime_below

SCHEMA_VERSION = 1

# Active WUS bandwidth in subcarriers, shared by every M.
N_SC_WUS = 132
SYMBOLS_PER_SLOT = 14
SLOT_BITMAP_PERIOD = 10
MAX_CODEPOINTS = 32

N_SEQ_MAX = {1: 16, 2: 8, 4: 4}
N_SG_MAX_PO = {1: 31, 2: 15, 4: 7}


class LpWusConfig(BaseModel):
    """Parameters of one LP-WUS deployment.

    Field names follow the symbols used for LP-WUS in the idle-mode
    procedures (``N_PO_LO`` is the number of POs per LO and so on). Values
    are checked by :func:`lpwus.config.validate_config.validate`, not at
    construction, so that out-of-domain values can be reported as data.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    M: int = 2
    L: int = 14
    L_MO: int = 14
    N_LO_MO: int = 1
    N_PO_LO: int = 1
    N_SG_PO: int = 7
    B: Optional[int] = None
    N_seq: int = 1
    N_root: int = 1
    roots: Tuple[int, ...] = (1,)
    first_mo_offset_symbols: int = 0
    slot_bitmap: Tuple[int, ...] = (1,) * SLOT_BITMAP_PERIOD
    symbol_bitmap: Tuple[int, ...] = (1,) * SYMBOLS_PER_SLOT
    scs_khz: int = 30
    T_drx_ms: int = 1280
    N_pf: int = 32
    N_s: int = 1
    T_po_lo_ms: Tuple[int, ...] = (80,)
    n_beams: int = 1
    fft_size: int = 256
    detection_threshold: float = 0.2
    reserved_symbols: Tuple[Tuple[int, int], ...] = ()

    @property
    def M_ZC(self) -> int:
        return N_SC_WUS // self.M

    @property
    def N_ZC(self) -> int:
        return largest_prime_below(self.M_ZC)

    @property
    def G(self) -> int:
        return self.L * self.M

    @property
    def E(self) -> int:
        return self.G // 2

    @property
    def n_codepoints(self) -> int:
        return self.N_PO_LO * (self.N_SG_PO + 1)

    @property
    def derived_B(self) -> int:
        return max(1, math.ceil(math.log2(self.n_codepoints)))

    @property
    def payload_bits(self) -> int:
        return self.B if self.B is not None else self.derived_B

    @property
    def delta(self) -> int:
        """Bits carried by the sequence index of one ON-symbol."""
        return int(math.log2(self.N_seq)) if self.N_seq >= 1 else 0

    @property
    def n_mos(self) -> int:
        return self.N_LO_MO * self.n_beams

    @property
    def T_frames(self) -> int:
        return self.T_drx_ms // 10

    @property
    def slots_per_ms(self) -> int:
        return self.scs_khz // 15

    def is_available(self, slot: int, symbol: int) -> bool:
        return bool(
            self.slot_bitmap[slot % SLOT_BITMAP_PERIOD] and self.symbol_bitmap[symbol]
        )


class LpSsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    M_lpss: int = 2
    L_lpss: int = 6
    seq_index: int = 0
    period_ms: int = 320
    offset_ms: int = 0
    start_symbols: Tuple[int, ...] = (2,)
    root: Optional[int] = 1
    n_beams: int = 1

    @property
    def B_lpss(self) -> int:
        return self.M_lpss * self.L_lpss

    @property
    def triple(self) -> Tuple[int, int, int]:
        return (self.B_lpss, self.M_lpss, self.L_lpss)

    @property
    def M_ZC(self) -> int:
        return N_SC_WUS // self.M_lpss

    @property
    def N_ZC(self) -> int:
        return largest_prime_below(self.M_ZC)


class ConfigDocument(BaseModel):
    """On-disk layout: ``{"schema_version": 1, "lp_wus": {...}, "lp_ss": {...}}``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: int = SCHEMA_VERSION
    lp_wus: LpWusConfig = LpWusConfig()
    lp_ss: LpSsConfig = LpSsConfig()
