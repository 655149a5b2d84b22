from dataclasses import dataclass

from lpwus.config.lpwus_config import SYMBOLS_PER_SLOT


@dataclass(frozen=True)
class Numerology:
    """OFDM timing at ``fft_size`` samples per useful symbol.

    Cyclic prefixes keep the NR normal-CP proportions: 144/2048 of the FFT
    size, 16/2048 longer per 15 kHz of spacing on the first symbol of every
    half subframe, so that a half subframe lasts exactly 0.5 ms.
    """

    scs_khz: int = 30
    fft_size: int = 256

    @classmethod
    def from_config(cls, cfg) -> "Numerology":
        return cls(scs_khz=cfg.scs_khz, fft_size=cfg.fft_size)

    @property
    def sample_rate_hz(self) -> float:
        return float(self.fft_size * self.scs_khz * 1000)

    @property
    def cp_normal(self) -> int:
        return 144 * self.fft_size // 2048

    @property
    def cp_long(self) -> int:
        return self.cp_normal + 16 * (self.scs_khz // 15) * self.fft_size // 2048

    @property
    def symbols_per_half_subframe(self) -> int:
        return 7 * (self.scs_khz // 15)

    def cp_length(self, slot: int, symbol: int) -> int:
        a = slot * SYMBOLS_PER_SLOT + symbol
        return self.cp_long if a % self.symbols_per_half_subframe == 0 else self.cp_normal

    def symbol_start(self, slot: int, symbol: int) -> int:
        """Sample index of the CP start of an absolute (slot, symbol), counted from slot 0."""
        a = slot * SYMBOLS_PER_SLOT + symbol
        H = self.symbols_per_half_subframe
        long_before = -(-a // H)
        return a * (self.fft_size + self.cp_normal) + long_before * (self.cp_long - self.cp_normal)

    def slot_samples(self, slot: int) -> int:
        return self.symbol_start(slot + 1, 0) - self.symbol_start(slot, 0)
