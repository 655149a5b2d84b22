import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from lpwus.channel.channel_profile import ChannelProfile, apply
from lpwus.codec.frame import ml_pattern_decode
from lpwus.errors import CalibrationError
from lpwus.receiver.energy_detector import ed_demodulate
from lpwus.simharness.sweep import chunks, clean_wus, default_workers, trial_rng

logger = logging.getLogger("lpwus")


def noise_scores_for(cfg, seed: int, trial_indices: Sequence[int]) -> np.ndarray:
    """Detection statistic of noise-only trials."""
    template = clean_wus(cfg, 0)
    prof = ChannelProfile(snr_db=0.0)
    scores = np.empty(len(trial_indices))
    for i, t in enumerate(trial_indices):
        y = apply(template, prof, trial_rng(seed, 0, t), noise_only=True)
        scores[i] = ml_pattern_decode(ed_demodulate(y, cfg), cfg)[1]
    return scores


def noise_scores(cfg, n_trials: int, seed: int, workers: int = 1) -> np.ndarray:
    parts = list(chunks(n_trials))
    if workers <= 1:
        results = [noise_scores_for(cfg, seed, trials) for trials in parts]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(noise_scores_for, [cfg] * len(parts), [seed] * len(parts), parts))
    return np.concatenate(results)


def calibrate_threshold(
    cfg,
    target_far: float,
    n_trials: int,
    seed: int,
    workers: Optional[int] = None,
) -> float:
    """
    Detection threshold reaching ``target_far`` on noise alone.

    The threshold is the empirical ``1 - target_far`` quantile of the
    noise-only detection statistic. At least ``10 / target_far`` trials are
    required so that the quantile rests on about ten exceedances.
    """
    if not 0.0 < target_far < 1.0:
        raise ValueError(f"target FAR {target_far} must lie in (0, 1)")
    needed = int(np.ceil(10.0 / target_far))
    if n_trials < needed:
        raise CalibrationError(
            f"{n_trials} trials cannot resolve a FAR of {target_far}; at least {needed} are needed"
        )
    workers = workers if workers is not None else default_workers()
    scores = noise_scores(cfg, n_trials, seed, workers)
    threshold = float(np.quantile(scores, 1.0 - target_far))
    if threshold <= 0.0:
        raise CalibrationError(f"calibrated threshold {threshold:.3g} is not positive")
    logger.info(f"Calibrated threshold {threshold:.6f} for FAR {target_far} over {n_trials} trials")
    return threshold
