"""
Codepoint layout of the LP-WUS payload.

Every PO of an LO owns ``N_SG_PO + 1`` consecutive codepoints: one per
subgroup followed by one waking all of its subgroups, so that PO ``i_PO``
starts at ``i_PO * (N_SG_PO + 1)``. The same layout holds for a single
subgroup per PO, where a bare ``i_PO`` would collide with the all-subgroups
codepoint of the previous PO.
"""

from dataclasses import dataclass
from typing import FrozenSet, List, NamedTuple, Tuple, Union

from lpwus.procedures.paging import po_index

ALL = "ALL"


class Target(NamedTuple):
    i_PO: int
    i_SG: Union[int, str]


@dataclass(frozen=True)
class CodepointRow:
    i_PO: int
    subgroup_codepoints: Tuple[int, ...]
    all_codepoint: int


def subgroup_codepoint(i_PO: int, i_SG: int, N_SG_PO: int) -> int:
    if not 0 <= i_SG < N_SG_PO:
        raise ValueError(f"i_SG={i_SG} outside 0..{N_SG_PO - 1}")
    return i_PO * (N_SG_PO + 1) + i_SG


def allgroups_codepoint(i_PO: int, N_SG_PO: int) -> int:
    return (i_PO + 1) * (N_SG_PO + 1) - 1


def codepoint_to_targets(c: int, cfg, expand: bool = False) -> FrozenSet[Target]:
    """Who is woken by codepoint ``c``.

    The all-subgroups codepoint of a PO maps to ``(i_PO, ALL)``, or to every
    ``(i_PO, i_SG)`` of that PO when ``expand`` is set.
    """
    if not 0 <= c < cfg.n_codepoints:
        raise ValueError(f"codepoint {c} outside 0..{cfg.n_codepoints - 1}")
    i_PO, k = divmod(c, cfg.N_SG_PO + 1)
    if k < cfg.N_SG_PO:
        return frozenset({Target(i_PO, k)})
    if expand:
        return frozenset(Target(i_PO, i_SG) for i_SG in range(cfg.N_SG_PO))
    return frozenset({Target(i_PO, ALL)})


def monitored_codepoints(identity, cfg) -> FrozenSet[int]:
    """The subgroup and all-subgroups codepoints a UE reacts to."""
    i_PO = po_index(identity, cfg)
    return frozenset(
        {
            subgroup_codepoint(i_PO, identity.sg_index, cfg.N_SG_PO),
            allgroups_codepoint(i_PO, cfg.N_SG_PO),
        }
    )


def codepoint_table(cfg) -> List[CodepointRow]:
    return [
        CodepointRow(
            i_PO=i_PO,
            subgroup_codepoints=tuple(subgroup_codepoint(i_PO, s, cfg.N_SG_PO) for s in range(cfg.N_SG_PO)),
            all_codepoint=allgroups_codepoint(i_PO, cfg.N_SG_PO),
        )
        for i_PO in range(cfg.N_PO_LO)
    ]
