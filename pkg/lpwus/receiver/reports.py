import enum
from dataclasses import dataclass, field
from typing import FrozenSet, Optional


class ReceiverKind(enum.Enum):
    ED = "ED"
    CD = "CD"


@dataclass(frozen=True)
class DetectionReport:
    detected: bool
    codepoint_hat: Optional[int]
    metric: float
    receiver_kind: ReceiverKind
    targets_hat: FrozenSet = field(default_factory=frozenset)
    sync: Optional[int] = None

    def __post_init__(self):
        if self.detected != (self.codepoint_hat is not None):
            raise ValueError("codepoint_hat must be present exactly when detected")

    @classmethod
    def missed(cls, metric: float, kind: ReceiverKind, sync: Optional[int] = None) -> "DetectionReport":
        return cls(False, None, metric, kind, frozenset(), sync)

    def as_lines(self):
        targets = ";".join(f"{t.i_PO}:{t.i_SG}" for t in sorted(self.targets_hat, key=str))
        yield f"receiver={self.receiver_kind.value}"
        yield f"detected={int(self.detected)}"
        yield f"codepoint={'' if self.codepoint_hat is None else self.codepoint_hat}"
        yield f"targets={targets}"
        yield f"metric={self.metric:.9g}"
        yield f"sync={'' if self.sync is None else self.sync}"


@dataclass(frozen=True)
class MeasurementReport:
    lp_rssi: float
    lp_rsrp: float
    lp_rsrq: float

    @classmethod
    def from_powers(cls, rssi: float, rsrp: float) -> "MeasurementReport":
        return cls(rssi, rsrp, rsrp / rssi if rssi > 0 else 0.0)

    def as_lines(self):
        yield f"lp_rssi={self.lp_rssi:.9g}"
        yield f"lp_rsrp={self.lp_rsrp:.9g}"
        yield f"lp_rsrq={self.lp_rsrq:.9g}"
