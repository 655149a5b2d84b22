from pathlib import Path

import pytest

from lpwus.config.lpwus_config import LpSsConfig, LpWusConfig
from lpwus.config.read_config import load_config
from lpwus.config.validate_config import validate

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def wus_config(B: int, M: int, L: int, **kwargs) -> LpWusConfig:
    """Single-PO configuration carrying exactly 2^B codepoints."""
    return LpWusConfig(M=M, L=L, L_MO=max(L, 14), N_PO_LO=1, N_SG_PO=2**B - 1, **kwargs)


def resolvable_grid():
    """(B, M, L) combinations whose frames distinguish every payload."""
    grid = []
    for B in range(1, 6):
        for M in (1, 2, 4):
            for L in (4, 6, 14):
                if validate(wus_config(B, M, L)).ok:
                    grid.append((B, M, L))
    return grid


@pytest.fixture()
def default_cfg() -> LpWusConfig:
    return LpWusConfig()


@pytest.fixture()
def lpss_cfg() -> LpSsConfig:
    return LpSsConfig()


@pytest.fixture()
def mo_skip_cfg() -> LpWusConfig:
    cfg, _ = load_config(CONFIGS / "mo_skip_example.json")
    return cfg


@pytest.fixture()
def seq4_cfg() -> LpWusConfig:
    """B=5, L=4, M=4 with four ON-sequences of one root."""
    return wus_config(5, M=4, L=4, N_seq=4)


@pytest.fixture()
def desk_cfg() -> LpWusConfig:
    cfg, _ = load_config(CONFIGS / "desk_default.yaml")
    return cfg
