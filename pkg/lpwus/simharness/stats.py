import math
from typing import Tuple

from scipy.stats import norm


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval of a binomial rate ``k / n``."""
    if n <= 0:
        return (0.0, 1.0)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
    p = k / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # rounding may leave a bound a few ulp inside p at k = 0 or k = n
    return (max(0.0, min(p, centre - half)), min(1.0, max(p, centre + half)))


def rmse(errors) -> float:
    errors = list(errors)
    if not errors:
        return math.nan
    return math.sqrt(sum(e * e for e in errors) / len(errors))
