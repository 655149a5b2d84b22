from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


def int_to_bits(value: int, width: int) -> Tuple[int, ...]:
    """``value`` as ``width`` bits, MSB first."""
    if not 0 <= value < 2**width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return tuple((value >> (width - 1 - k)) & 1 for k in range(width))


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def bits_table(width: int) -> np.ndarray:
    """Every ``width``-bit word, one per row, row ``v`` holding ``int_to_bits(v)``."""
    v = np.arange(2**width)[:, None]
    shifts = np.arange(width - 1, -1, -1)[None, :]
    return ((v >> shifts) & 1).astype(np.uint8)


@dataclass(frozen=True)
class Payload:
    bits: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= len(self.bits) <= 5:
            raise ValueError(f"Payload size B={len(self.bits)} not in 1..5")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"Payload bits must be 0/1, got {self.bits}")

    @classmethod
    def from_codepoint(cls, codepoint: int, B: int) -> "Payload":
        return cls(int_to_bits(codepoint, B))

    @property
    def B(self) -> int:
        return len(self.bits)

    @property
    def codepoint(self) -> int:
        return bits_to_int(self.bits)
