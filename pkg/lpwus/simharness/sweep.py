"""
Monte-Carlo sweeps of the end-to-end chain.

Every trial draws its randomness from
``default_rng([master_seed, point_index, trial_index])``, so a sweep is a
pure function of its spec whatever the worker count or execution order.
Trials are run in chunks; with more than one worker the chunks go to a
process pool and their counts are summed as they complete.
"""

import dataclasses
import enum
import logging
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from lpwus.channel.channel_profile import ChannelProfile, apply
from lpwus.codec.frame import encode_frame
from lpwus.codec.payload import int_to_bits
from lpwus.config.lpwus_config import SYMBOLS_PER_SLOT, LpSsConfig, LpWusConfig
from lpwus.procedures.codepoints import codepoint_to_targets
from lpwus.procedures.monitoring import resolve_mos
from lpwus.receiver.coherent_detector import cd_decode
from lpwus.receiver.energy_detector import ed_decode, ed_demodulate
from lpwus.receiver.lpss_receiver import lpss_sync
from lpwus.receiver.reports import ReceiverKind
from lpwus.simharness.csv_output import write_sweep_csv
from lpwus.simharness.stats import rmse, wilson_interval
from lpwus.waveform.lpss import lpss_pattern, modulate_lpss
from lpwus.waveform.numerology import Numerology
from lpwus.waveform.wus_modulator import modulate_frame

logger = logging.getLogger("lpwus")

CHUNK_TRIALS = 250


class Scenario(enum.Enum):
    WUS_PRESENT = "wus"
    NOISE_ONLY = "noise"
    LPSS_SYNC = "lpss_sync"


class Axis(enum.Enum):
    SNR = "snr_db"
    CFO = "cfo_hz"
    TIMING = "timing"


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    cfg: LpWusConfig
    axis: Axis
    values: Tuple[float, ...]
    n_trials: int
    lpss: LpSsConfig = LpSsConfig()
    receivers: Tuple[ReceiverKind, ...] = (ReceiverKind.ED,)
    master_seed: int = 0
    scenario: Scenario = Scenario.WUS_PRESENT
    channel: ChannelProfile = ChannelProfile()
    payload: Optional[int] = None
    ed_method: str = "ml"
    config_path: Optional[str] = None

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError(f"n_trials={self.n_trials} must be >= 1")
        if not self.values:
            raise ValueError("the sweep axis needs at least one value")
        if not self.receivers:
            raise ValueError("at least one receiver is required")
        if (
            ReceiverKind.CD in self.receivers
            and self.scenario is not Scenario.LPSS_SYNC
            and self.cfg.N_seq < 2
        ):
            raise ValueError("the coherent detector needs N_seq >= 2")
        if self.payload is not None and not 0 <= self.payload < self.cfg.n_codepoints:
            raise ValueError(f"payload codepoint {self.payload} is not configured")

    def profile(self, value: float) -> ChannelProfile:
        if self.axis is Axis.SNR:
            return dataclasses.replace(self.channel, snr_db=float(value))
        if self.axis is Axis.CFO:
            return dataclasses.replace(self.channel, cfo_hz=float(value))
        return dataclasses.replace(self.channel, timing_offset_samples=int(value))

    def row_receivers(self) -> Tuple[ReceiverKind, ...]:
        if self.scenario is Scenario.LPSS_SYNC:
            return (ReceiverKind.ED,)
        return self.receivers


@dataclasses.dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    scenario: str
    receiver: str
    n_trials: int
    errors: int
    rate: float
    ci_low: float
    ci_high: float
    mdr: float
    far: float
    sync_rmse: float
    complete: bool
    elapsed: float = 0.0


@dataclasses.dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: Tuple[SweepRow, ...]

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.rows)

    def to_csv(self, f):
        write_sweep_csv(self.rows, f)


@dataclasses.dataclass
class Tally:
    """Counts of one sweep point, summed over chunks in any order."""

    n: int = 0
    errors: List[int] = dataclasses.field(default_factory=list)
    sync_errors: Counter = dataclasses.field(default_factory=Counter)

    def add(self, other: "Tally"):
        if not self.errors:
            self.errors = [0] * len(other.errors)
        self.n += other.n
        self.errors = [a + b for a, b in zip(self.errors, other.errors)]
        self.sync_errors.update(other.sync_errors)


def trial_rng(master_seed: int, point_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, point_index, trial_index])


@lru_cache(maxsize=64)
def clean_wus(cfg: LpWusConfig, codepoint: int):
    schedule = resolve_mos(cfg)
    mo = schedule.first_active()
    frame = encode_frame(int_to_bits(codepoint, cfg.payload_bits), cfg)
    return modulate_frame(frame, cfg, schedule, mo.mo_index)


def sync_offsets(lpss: LpSsConfig) -> List[int]:
    """OOK-symbol offsets within one pattern length that keep every occasion in its slot."""
    M, B = lpss.M_lpss, lpss.B_lpss
    lo = max(-B, -min(lpss.start_symbols) * M)
    hi = min(B, SYMBOLS_PER_SLOT * M - B - max(lpss.start_symbols) * M)
    return list(range(lo, hi + 1))


@lru_cache(maxsize=64)
def clean_lpss(lpss: LpSsConfig, numerology: Numerology, ook_offset: int):
    return modulate_lpss(lpss_pattern(lpss), lpss, numerology, beams=[0], ook_offset=ook_offset)


def trial_codepoint(spec: SweepSpec, trial_index: int) -> int:
    if spec.payload is not None:
        return spec.payload
    return trial_index % spec.cfg.n_codepoints


def _detect(spec: SweepSpec, y, kind: ReceiverKind):
    if kind is ReceiverKind.ED:
        return ed_decode(ed_demodulate(y, spec.cfg), spec.cfg, method=spec.ed_method)
    return cd_decode(y, spec.cfg)


def run_trials(spec: SweepSpec, point_index: int, trial_indices: Sequence[int]) -> Tally:
    """Run the given trials of one sweep point and count their errors."""
    prof = spec.profile(spec.values[point_index])
    kinds = spec.row_receivers()
    tally = Tally(errors=[0] * len(kinds))
    for t in trial_indices:
        rng = trial_rng(spec.master_seed, point_index, t)
        tally.n += 1
        if spec.scenario is Scenario.LPSS_SYNC:
            offsets = sync_offsets(spec.lpss)
            k = offsets[t % len(offsets)]
            numerology = Numerology.from_config(spec.cfg)
            y = apply(clean_lpss(spec.lpss, numerology, k), prof, rng)
            k_hat, _ = lpss_sync(y, lpss_pattern(spec.lpss), spec.lpss)
            tally.errors[0] += int(k_hat != k)
            tally.sync_errors[k_hat - k] += 1
            continue
        if spec.scenario is Scenario.NOISE_ONLY:
            y = apply(clean_wus(spec.cfg, 0), prof, rng, noise_only=True)
            for i, kind in enumerate(kinds):
                tally.errors[i] += int(_detect(spec, y, kind).detected)
            continue
        c = trial_codepoint(spec, t)
        y = apply(clean_wus(spec.cfg, c), prof, rng)
        wanted = codepoint_to_targets(c, spec.cfg)
        for i, kind in enumerate(kinds):
            report = _detect(spec, y, kind)
            tally.errors[i] += int(not report.detected or report.targets_hat != wanted)
    return tally


def chunks(n: int, size: int = CHUNK_TRIALS):
    for start in range(0, n, size):
        yield range(start, min(n, start + size))


def default_workers() -> int:
    return int(os.environ.get("LPWUS_WORKERS", "1"))


class SweepRunner:
    def __init__(self, spec: SweepSpec, workers: Optional[int] = None):
        self.spec = spec
        self.workers = workers if workers is not None else default_workers()
        if self.workers < 1:
            raise ValueError(f"workers={self.workers} must be >= 1")

    def _point(self, point_index: int, pool) -> Tuple[Tally, bool]:
        tally = Tally()
        try:
            if pool is None:
                for trials in chunks(self.spec.n_trials):
                    tally.add(run_trials(self.spec, point_index, trials))
            else:
                futures = [
                    pool.submit(run_trials, self.spec, point_index, trials)
                    for trials in chunks(self.spec.n_trials)
                ]
                try:
                    for fut in as_completed(futures):
                        tally.add(fut.result())
                finally:
                    for fut in futures:
                        fut.cancel()
        except KeyboardInterrupt:
            logger.warning(f"Sweep interrupted at point {point_index} after {tally.n} trials")
            return tally, False
        return tally, True

    def _rows(self, value: float, tally: Tally, complete: bool, elapsed: float) -> List[SweepRow]:
        spec = self.spec
        rows = []
        errors = tally.errors or [0] * len(spec.row_receivers())
        for kind, k in zip(spec.row_receivers(), errors):
            rate = k / tally.n if tally.n else math.nan
            lo, hi = wilson_interval(k, tally.n)
            rows.append(
                SweepRow(
                    axis=spec.axis.value,
                    value=float(value),
                    scenario=spec.scenario.value,
                    receiver=kind.value,
                    n_trials=tally.n,
                    errors=k,
                    rate=rate,
                    ci_low=lo,
                    ci_high=hi,
                    mdr=rate if spec.scenario is Scenario.WUS_PRESENT else math.nan,
                    far=rate if spec.scenario is Scenario.NOISE_ONLY else math.nan,
                    sync_rmse=(
                        rmse(tally.sync_errors.elements())
                        if spec.scenario is Scenario.LPSS_SYNC
                        else math.nan
                    ),
                    complete=complete,
                    elapsed=elapsed,
                )
            )
        return rows

    def run(self) -> SweepResult:
        spec = self.spec
        logger.info(
            f"Sweep {spec.scenario.value} over {spec.axis.value}={list(spec.values)}, "
            f"{spec.n_trials} trials per point, {self.workers} worker(s)"
        )
        rows = []
        pool = ProcessPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        try:
            for point_index, value in enumerate(spec.values):
                start = time.perf_counter()
                tally, complete = self._point(point_index, pool)
                rows.extend(self._rows(value, tally, complete, time.perf_counter() - start))
                logger.info(f"{spec.axis.value}={value}: {tally.n} trials, errors {tally.errors}")
                if not complete:
                    break
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)
        return SweepResult(spec, tuple(rows))


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> SweepResult:
    return SweepRunner(spec, workers).run()
