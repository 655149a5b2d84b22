import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from lpwus.codec.reed_muller import rate_matched_generator
from lpwus.config.lpwus_config import (
    MAX_CODEPOINTS,
    N_SEQ_MAX,
    N_SG_MAX_PO,
    SLOT_BITMAP_PERIOD,
    SYMBOLS_PER_SLOT,
    LpSsConfig,
    LpWusConfig,
)

logger = logging.getLogger("lpwus")

LPSS_TRIPLES = {(6, 1, 6), (12, 2, 6), (16, 4, 4)}


@dataclass(frozen=True)
class Violation:
    rule: str
    fields: Tuple[str, ...]
    message: str

    def __str__(self):
        return f"{self.message} [{', '.join(self.fields)}]"


@dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self):
        return {v.rule for v in self.violations}

    def __bool__(self):
        return self.ok


def _bits(values) -> bool:
    return all(v in (0, 1) for v in values)


def gf2_rank(matrix: np.ndarray) -> int:
    m = (np.asarray(matrix) % 2).astype(np.uint8).copy()
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _check_wus(cfg: LpWusConfig):
    v = []

    def add(rule, fields, message):
        v.append(Violation(rule, tuple(fields), message))

    m_ok = cfg.M in N_SEQ_MAX
    if not m_ok:
        add("M_domain", ["M"], f"M={cfg.M} not in {{1,2,4}}")
    if cfg.L < 1 or cfg.L * cfg.M < 2 or (cfg.L * cfg.M) % 2:
        add("L_range", ["L", "M"], f"G=L*M={cfg.L * cfg.M} must be an even number >= 2")
    if cfg.L_MO < 1:
        add("L_MO_range", ["L_MO"], f"L_MO={cfg.L_MO} must be >= 1")
    if cfg.N_LO_MO not in (1, 2, 3, 4):
        add("N_LO_MO_domain", ["N_LO_MO"], f"N_LO_MO={cfg.N_LO_MO} not in {{1,2,3,4}}")

    po_ok = cfg.N_PO_LO in N_SG_MAX_PO
    if not po_ok:
        add("N_PO_LO_domain", ["N_PO_LO"], f"N_PO_LO={cfg.N_PO_LO} not in {{1,2,4}}")
    if cfg.N_SG_PO < 1:
        add("N_SG_PO_range", ["N_SG_PO"], f"N_SG_PO={cfg.N_SG_PO} must be >= 1")
    elif po_ok and cfg.N_SG_PO > N_SG_MAX_PO[cfg.N_PO_LO]:
        add(
            "N_SG_PO_range",
            ["N_SG_PO", "N_PO_LO"],
            f"N_SG_PO={cfg.N_SG_PO} exceeds N_SG_max_PO={N_SG_MAX_PO[cfg.N_PO_LO]}",
        )
    budget_ok = cfg.N_PO_LO >= 1 and cfg.N_SG_PO >= 1
    if budget_ok and cfg.n_codepoints > MAX_CODEPOINTS:
        budget_ok = False
        add(
            "codepoint_budget",
            ["N_PO_LO", "N_SG_PO"],
            f"codepoint budget {cfg.N_PO_LO}·{cfg.N_SG_PO + 1} > {MAX_CODEPOINTS}",
        )
    b_ok = budget_ok
    if cfg.B is not None:
        if not 1 <= cfg.B <= 5:
            b_ok = False
            add("B_range", ["B"], f"B={cfg.B} not in 1..5")
        elif budget_ok and cfg.B < cfg.derived_B:
            b_ok = False
            add("B_range", ["B"], f"B={cfg.B} smaller than derived B={cfg.derived_B}")

    seq_ok = cfg.N_seq in (1, 2, 4, 8, 16)
    if not seq_ok:
        add("N_seq_domain", ["N_seq"], f"N_seq={cfg.N_seq} not in {{1,2,4,8,16}}")
    elif m_ok and cfg.N_seq > N_SEQ_MAX[cfg.M]:
        seq_ok = False
        add("N_seq_max", ["N_seq", "M"], f"N_seq exceeds N_seq_max={N_SEQ_MAX[cfg.M]}")
    root_ok = cfg.N_root in (1, 2)
    if not root_ok:
        add("N_root_domain", ["N_root"], f"N_root={cfg.N_root} not in {{1,2}}")
    elif seq_ok and cfg.N_root > cfg.N_seq:
        root_ok = False
        add("N_root_range", ["N_root", "N_seq"], f"N_root={cfg.N_root} exceeds N_seq={cfg.N_seq}")
    if root_ok and len(cfg.roots) != cfg.N_root:
        add("roots", ["roots", "N_root"], f"{len(cfg.roots)} roots configured, N_root={cfg.N_root}")
    if len(set(cfg.roots)) != len(cfg.roots):
        add("roots", ["roots"], "roots must be pairwise distinct")
    if m_ok:
        bad = [q for q in cfg.roots if not 1 <= q < cfg.N_ZC]
        if bad:
            add("roots", ["roots"], f"roots {bad} outside 1..{cfg.N_ZC - 1}")

    if cfg.first_mo_offset_symbols < 0:
        add("first_mo_offset", ["first_mo_offset_symbols"], "offset must be >= 0")
    slot_ok = len(cfg.slot_bitmap) == SLOT_BITMAP_PERIOD and _bits(cfg.slot_bitmap)
    symbol_ok = len(cfg.symbol_bitmap) == SYMBOLS_PER_SLOT and _bits(cfg.symbol_bitmap)
    if not slot_ok:
        add("slot_bitmap", ["slot_bitmap"], f"slot_bitmap must hold {SLOT_BITMAP_PERIOD} bits")
    if not symbol_ok:
        add("symbol_bitmap", ["symbol_bitmap"], f"symbol_bitmap must hold {SYMBOLS_PER_SLOT} bits")
    if slot_ok and symbol_ok and not (any(cfg.slot_bitmap) and any(cfg.symbol_bitmap)):
        add("availability", ["slot_bitmap", "symbol_bitmap"], "bitmaps leave no symbol available")
    for pair in cfg.reserved_symbols:
        if len(pair) != 2 or pair[0] < 0 or not 0 <= pair[1] < SYMBOLS_PER_SLOT:
            add("reserved_symbols", ["reserved_symbols"], f"invalid reserved position {pair}")
            break

    if cfg.scs_khz not in (15, 30):
        add("scs_khz", ["scs_khz"], f"scs_khz={cfg.scs_khz} not in {{15,30}}")
    if cfg.fft_size < 256 or cfg.fft_size % 128:
        add("fft_size", ["fft_size"], f"fft_size={cfg.fft_size} must be a multiple of 128, >= 256")
    if cfg.T_drx_ms not in (320, 640, 1280, 2560):
        add("T_drx_ms", ["T_drx_ms"], f"T_drx_ms={cfg.T_drx_ms} not in {{320,640,1280,2560}}")
    elif cfg.N_pf not in {cfg.T_frames // k for k in (1, 2, 4, 8, 16)}:
        add("N_pf", ["N_pf", "T_drx_ms"], f"N_pf={cfg.N_pf} not in {{T, T/2, ..., T/16}}")
    if cfg.N_s not in (1, 2, 4):
        add("N_s", ["N_s"], f"N_s={cfg.N_s} not in {{1,2,4}}")
    else:
        expected = cfg.N_s if cfg.N_s > cfg.N_PO_LO else 1
        if len(cfg.T_po_lo_ms) != expected:
            add(
                "T_po_lo_ms",
                ["T_po_lo_ms", "N_s", "N_PO_LO"],
                f"{len(cfg.T_po_lo_ms)} LO-to-PO offsets configured, expected {expected}",
            )
    if any(t < 0 for t in cfg.T_po_lo_ms):
        add("T_po_lo_ms", ["T_po_lo_ms"], "offsets must be >= 0")
    if cfg.n_beams not in (1, 2, 4):
        add("n_beams", ["n_beams"], f"n_beams={cfg.n_beams} not in {{1,2,4}}")
    if not 0.0 < cfg.detection_threshold <= 1.0:
        add("detection_threshold", ["detection_threshold"], "threshold must be in (0, 1]")

    frame_ok = m_ok and cfg.L >= 1 and cfg.G % 2 == 0
    if frame_ok and b_ok:
        B = cfg.payload_bits
        if gf2_rank(rate_matched_generator(B, cfg.E)) < B:
            add(
                "payload_resolvable",
                ["L", "M", "B"],
                f"E={cfg.E} rate-matched bits cannot distinguish 2^{B} payloads",
            )
        if seq_ok and cfg.N_seq >= 2:
            needed = B + (-B % cfg.delta)
            if cfg.E * cfg.delta < needed:
                add(
                    "sequence_coverage",
                    ["L", "M", "N_seq"],
                    f"E*delta={cfg.E * cfg.delta} < {needed} sequence-coded bits",
                )
    return v


def _check_lpss(lpss: LpSsConfig, cfg: LpWusConfig):
    v = []

    def add(rule, fields, message):
        v.append(Violation(rule, tuple("lp_ss." + f for f in fields), message))

    m_ok = lpss.M_lpss in (1, 2, 4)
    if not m_ok:
        add("M_lpss_domain", ["M_lpss"], f"M_lpss={lpss.M_lpss} not in {{1,2,4}}")
    elif lpss.M_lpss < cfg.M:
        add("M_lpss_vs_M", ["M_lpss"], f"M_lpss={lpss.M_lpss} smaller than LP-WUS M={cfg.M}")
    if lpss.L_lpss not in (4, 6, 8):
        add("L_lpss_domain", ["L_lpss"], f"L_lpss={lpss.L_lpss} not in {{4,6,8}}")
    elif m_ok and lpss.triple not in LPSS_TRIPLES:
        add("lpss_table", ["M_lpss", "L_lpss"], f"(B,M,L)={lpss.triple} has no tabulated LP-SS")
    if lpss.seq_index not in (0, 1, 2, 3):
        add("seq_index", ["seq_index"], f"seq_index={lpss.seq_index} not in 0..3")
    if lpss.period_ms not in (160, 320):
        add("period_ms", ["period_ms"], f"period_ms={lpss.period_ms} not in {{160,320}}")
    elif not 0 <= lpss.offset_ms < lpss.period_ms:
        add("offset_ms", ["offset_ms"], f"offset_ms={lpss.offset_ms} outside 0..period")
    if len(lpss.start_symbols) not in (1, 2):
        add("start_symbols", ["start_symbols"], "one or two start symbols expected")
    elif any(s < 0 or s + lpss.L_lpss > SYMBOLS_PER_SLOT for s in lpss.start_symbols):
        add("start_symbols", ["start_symbols", "L_lpss"], "occasion would cross the slot boundary")
    elif len(lpss.start_symbols) == 2 and abs(lpss.start_symbols[0] - lpss.start_symbols[1]) < lpss.L_lpss:
        add("start_symbols", ["start_symbols"], "the two occasions of a slot overlap")
    if lpss.root is None:
        if lpss.M_lpss != 1:
            add("root", ["root", "M_lpss"], "root may be absent only when M_lpss=1")
    elif m_ok and not 1 <= lpss.root < lpss.N_ZC:
        add("root", ["root"], f"root {lpss.root} outside 1..{lpss.N_ZC - 1}")
    if not 1 <= lpss.n_beams <= 8:
        add("n_beams", ["n_beams"], f"n_beams={lpss.n_beams} not in 1..8")
    return v


def validate(cfg: LpWusConfig, lpss: Optional[LpSsConfig] = None) -> ValidationResult:
    """Check every parameter constraint; violations are returned, never raised."""
    violations = _check_wus(cfg)
    if lpss is not None:
        violations += _check_lpss(lpss, cfg)
    for v in violations:
        logger.debug(f"validation: {v}")
    return ValidationResult(tuple(violations))
