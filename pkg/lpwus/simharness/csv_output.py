import csv
import math

SWEEP_COLUMNS = (
    "axis",
    "value",
    "scenario",
    "receiver",
    "n_trials",
    "errors",
    "rate",
    "ci_low",
    "ci_high",
    "mdr",
    "far",
    "sync_rmse",
    "complete",
)

FRAME_COLUMNS = ("ook_index", "ofdm_symbol", "g", "seq_index")


def fmt(value) -> str:
    """Cell text: 9 significant digits for floats, empty for NaN/None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.9g}"
    return str(value)


def write_sweep_csv(rows, f):
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([fmt(getattr(row, c)) for c in SWEEP_COLUMNS])


def write_frame_csv(frame, f):
    """One row per OOK symbol; ``seq_index`` is empty on OFF symbols."""
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(FRAME_COLUMNS)
    k = 0
    for i, g in enumerate(frame.g):
        seq = ""
        if g:
            seq = int(frame.seq_indices[k])
            k += 1
        writer.writerow([i, i // frame.M, int(g), seq])


def frame_hex(frame) -> str:
    """``g`` packed MSB first into hex, zero padded to whole bytes."""
    value = 0
    for g in frame.g:
        value = (value << 1) | int(g)
    n_bits = -(-frame.G // 8) * 8
    value <<= n_bits - frame.G
    return f"{value:0{n_bits // 4}x}"
