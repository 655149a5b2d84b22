import dataclasses
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from lpwus.errors import ScheduleError
from lpwus.waveform.numerology import Numerology

logger = logging.getLogger("lpwus")

IQ_SCHEMA_VERSION = 1
IQ_DTYPE = "<f4"


@dataclasses.dataclass(frozen=True)
class SymbolSpan:
    """Sample span of one annotated OFDM symbol; ``start`` is the CP start."""

    slot: int
    symbol: int
    start: int
    cp: int
    beam: int = 0

    @property
    def position(self) -> Tuple[int, int]:
        return (self.slot, self.symbol)


@dataclasses.dataclass(frozen=True)
class IqSignal:
    """Complex baseband samples covering whole slots from ``first_slot``."""

    samples: np.ndarray
    numerology: Numerology
    first_slot: int
    annotations: Tuple[SymbolSpan, ...] = ()
    metadata: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @classmethod
    def blank(cls, numerology: Numerology, first_slot: int, last_slot: int, **kwargs) -> "IqSignal":
        n = numerology.symbol_start(last_slot + 1, 0) - numerology.symbol_start(first_slot, 0)
        return cls(np.zeros(n, dtype=complex), numerology, first_slot, **kwargs)

    @property
    def sample_rate_hz(self) -> float:
        return self.numerology.sample_rate_hz

    @property
    def fft_size(self) -> int:
        return self.numerology.fft_size

    def offset(self, slot: int, symbol: int) -> int:
        return self.numerology.symbol_start(slot, symbol) - self.numerology.symbol_start(self.first_slot, 0)

    def span(self, slot: int, symbol: int, beam: int = 0) -> SymbolSpan:
        return SymbolSpan(slot, symbol, self.offset(slot, symbol), self.numerology.cp_length(slot, symbol), beam)

    def useful(self, slot: int, symbol: int) -> np.ndarray:
        """CP-free samples of an OFDM symbol."""
        start = self.offset(slot, symbol) + self.numerology.cp_length(slot, symbol)
        stop = start + self.fft_size
        if start < 0 or stop > self.samples.size:
            raise ScheduleError(f"symbol ({slot}, {symbol}) is outside the signal")
        return self.samples[start:stop]

    def positions(self, beam: Optional[int] = None) -> List[Tuple[int, int]]:
        return [a.position for a in self.annotations if beam is None or a.beam == beam]

    def with_samples(self, samples: np.ndarray) -> "IqSignal":
        if samples.size != self.samples.size:
            raise ValueError("replacement samples must keep the signal length")
        return dataclasses.replace(self, samples=samples)


class IqMetadata(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int = IQ_SCHEMA_VERSION
    sample_rate_hz: float
    scs_khz: int
    fft_size: int
    cp_normal: int
    cp_long: int
    first_slot: int
    n_samples: int
    annotations: List[Tuple[int, int, int, int, int]]
    metadata: Dict[str, Any] = {}


def metadata_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_iq(sig: IqSignal, path) -> Path:
    """Write little-endian float32 interleaved I/Q plus a JSON sidecar."""
    path = Path(path)
    iq = np.empty(2 * sig.samples.size, dtype=IQ_DTYPE)
    iq[0::2] = sig.samples.real
    iq[1::2] = sig.samples.imag
    iq.tofile(path)
    meta = IqMetadata(
        sample_rate_hz=sig.sample_rate_hz,
        scs_khz=sig.numerology.scs_khz,
        fft_size=sig.fft_size,
        cp_normal=sig.numerology.cp_normal,
        cp_long=sig.numerology.cp_long,
        first_slot=sig.first_slot,
        n_samples=sig.samples.size,
        annotations=[(a.slot, a.symbol, a.start, a.cp, a.beam) for a in sig.annotations],
        metadata=sig.metadata,
    )
    with open(metadata_path(path), "w") as f:
        json.dump(meta.model_dump(mode="json"), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Wrote {sig.samples.size} samples to {path}")
    return path


def read_iq(path) -> IqSignal:
    path = Path(path)
    with open(metadata_path(path), "r") as f:
        meta = IqMetadata.model_validate(json.load(f))
    if meta.schema_version != IQ_SCHEMA_VERSION:
        raise ValueError(f"unsupported IQ metadata schema_version {meta.schema_version}")
    raw = np.fromfile(path, dtype=IQ_DTYPE)
    if raw.size != 2 * meta.n_samples:
        raise ValueError(f"{path} holds {raw.size // 2} samples, metadata says {meta.n_samples}")
    samples = raw[0::2].astype(np.float64) + 1j * raw[1::2].astype(np.float64)
    numerology = Numerology(scs_khz=meta.scs_khz, fft_size=meta.fft_size)
    if (numerology.cp_normal, numerology.cp_long) != (meta.cp_normal, meta.cp_long):
        raise ValueError("CP profile in metadata does not match the numerology")
    annotations = tuple(SymbolSpan(*a) for a in meta.annotations)
    logger.debug(f"Read {samples.size} samples from {path}")
    return IqSignal(samples, numerology, meta.first_slot, annotations, dict(meta.metadata))
