"""
Idle-mode paging arithmetic used to find a UE's LP-WUS occasion.

A UE derives its paging frame and paging occasion from its 16-bit identity,
the PO index ``i_PO`` within the LP-WUS occasion (LO) that serves it, the
reference paging frame of that LO and finally the LO start, which precedes
the reference PF by the signalled offset ``T_PO_LO``.
"""

import enum
import logging
from dataclasses import dataclass
from typing import List

logger = logging.getLogger("lpwus")

SFN_MODULUS = 1024
HYPERFRAME_MS = SFN_MODULUS * 10


class SgMethod(enum.Enum):
    CN_ASSIGNED = "cn_assigned"
    UE_ID_BASED = "ue_id_based"


@dataclass(frozen=True)
class PagingIdentity:
    ue_id: int
    i_s: int = 0
    sg_index: int = 0
    sg_method: SgMethod = SgMethod.CN_ASSIGNED

    def __post_init__(self):
        if not 0 <= self.ue_id < 2**16:
            raise ValueError(f"UE_ID={self.ue_id} is not a 16-bit identity")
        if self.i_s < 0 or self.sg_index < 0:
            raise ValueError("i_s and sg_index must be >= 0")

    def check(self, cfg):
        if self.i_s >= cfg.N_s:
            raise ValueError(f"i_s={self.i_s} >= N_s={cfg.N_s}")
        if self.sg_index >= cfg.N_SG_PO:
            raise ValueError(f"sg_index={self.sg_index} >= N_SG_PO={cfg.N_SG_PO}")
        return self

    @classmethod
    def from_ue_id(cls, ue_id: int, cfg, sg_index: int = None) -> "PagingIdentity":
        """Identity with ``i_s`` derived; the subgroup is UE_ID based unless ``sg_index`` is given."""
        i_s = po_in_pf(ue_id, cfg)
        if sg_index is None:
            return cls(ue_id, i_s, ue_id_subgroup(ue_id, cfg), SgMethod.UE_ID_BASED).check(cfg)
        return cls(ue_id, i_s, sg_index, SgMethod.CN_ASSIGNED).check(cfg)


@dataclass(frozen=True)
class LoTiming:
    sfn_rpf: int
    t_po_lo_ms: int
    lo_start_ms: int

    def lo_start_slot(self, cfg) -> int:
        return self.lo_start_ms * cfg.slots_per_ms


def paging_frame(ue_id: int, cfg) -> int:
    """Residue ``SFN mod T`` of the UE's paging frames."""
    return (cfg.T_frames // cfg.N_pf) * (ue_id % cfg.N_pf)


def paging_frames(ue_id: int, cfg) -> List[int]:
    first = paging_frame(ue_id, cfg)
    return list(range(first, SFN_MODULUS, cfg.T_frames))


def po_in_pf(ue_id: int, cfg) -> int:
    return (ue_id // cfg.N_pf) % cfg.N_s


def ue_id_subgroup(ue_id: int, cfg) -> int:
    return (ue_id // (cfg.N_pf * cfg.N_s)) % cfg.N_SG_PO


def po_index(identity: PagingIdentity, cfg) -> int:
    return ((identity.ue_id % cfg.N_pf) * cfg.N_s + identity.i_s) % cfg.N_PO_LO


def reference_pf(sfn_pf: int, i_PO: int, cfg) -> int:
    """SFN of the reference PF, frame arithmetic modulo 1024."""
    return (sfn_pf - (i_PO // cfg.N_s) * (cfg.T_frames // cfg.N_pf)) % SFN_MODULUS


def lo_timing(sfn_pf: int, i_PO: int, i_s: int, cfg) -> LoTiming:
    sfn_rpf = reference_pf(sfn_pf, i_PO, cfg)
    offsets = cfg.T_po_lo_ms
    if len(offsets) > 1:
        if i_s >= len(offsets):
            raise ValueError(f"no LO-to-PO offset configured for i_s={i_s}")
        t_po_lo = offsets[i_s]
    else:
        t_po_lo = offsets[0]
    lo_start = (10 * sfn_rpf - t_po_lo) % HYPERFRAME_MS
    logger.debug(f"PF {sfn_pf} i_PO={i_PO}: RPF {sfn_rpf}, LO starts at {lo_start} ms")
    return LoTiming(sfn_rpf=sfn_rpf, t_po_lo_ms=t_po_lo, lo_start_ms=lo_start)
