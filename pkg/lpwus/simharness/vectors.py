import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional

from lpwus.codec.frame import encode_frame
from lpwus.codec.payload import int_to_bits
from lpwus.procedures.monitoring import resolve_mos
from lpwus.simharness.csv_output import write_frame_csv
from lpwus.waveform.iq_signal import metadata_path, write_iq
from lpwus.waveform.wus_modulator import modulate_frame

logger = logging.getLogger("lpwus")

INDEX_FILE = "vectors.csv"


@dataclass(frozen=True)
class VectorFiles:
    codepoint: int
    frame_csv: Path
    iq_file: Path
    metadata_file: Path


class VectorEmitter:
    """Golden vectors: per codepoint the OOK frame CSV, the IQ file and its metadata.

    Vectors use the first MO of the LO that is not dropped. Output is
    byte-identical across runs.
    """

    def __init__(self, cfg, out_dir, lo_start=(0, 0)):
        self.cfg = cfg
        self.out_dir = Path(out_dir)
        self.schedule = resolve_mos(cfg, lo_start)
        self.mo = self.schedule.first_active()

    def emit_one(self, codepoint: int) -> VectorFiles:
        frame = encode_frame(int_to_bits(codepoint, self.cfg.payload_bits), self.cfg)
        stem = f"cp{codepoint:02d}"
        frame_csv = self.out_dir / f"{stem}_frame.csv"
        with open(frame_csv, "w", newline="") as f:
            write_frame_csv(frame, f)
        iq_file = write_iq(modulate_frame(frame, self.cfg, self.schedule, self.mo.mo_index), self.out_dir / f"{stem}.iq")
        return VectorFiles(codepoint, frame_csv, iq_file, metadata_path(iq_file))

    def emit(self, codepoints: Optional[Iterable[int]] = None) -> List[VectorFiles]:
        codepoints = list(range(self.cfg.n_codepoints) if codepoints is None else codepoints)
        for c in codepoints:
            if not 0 <= c < self.cfg.n_codepoints:
                raise ValueError(f"codepoint {c} is not configured")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        written = [self.emit_one(c) for c in codepoints]
        with open(self.out_dir / INDEX_FILE, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["codepoint", "bits", "mo_index", "frame_csv", "iq_file"])
            for v in written:
                bits = "".join(str(b) for b in int_to_bits(v.codepoint, self.cfg.payload_bits))
                writer.writerow([v.codepoint, bits, self.mo.mo_index, v.frame_csv.name, v.iq_file.name])
        logger.info(f"Wrote {len(written)} vector sets to {self.out_dir}")
        return written


def emit_vectors(cfg, codepoints, out_dir) -> List[VectorFiles]:
    return VectorEmitter(cfg, out_dir).emit(codepoints)
