import json
import logging
from pathlib import Path

from lpwus.config.lpwus_config import ConfigDocument, LpSsConfig, LpWusConfig

logger = logging.getLogger("lpwus")


class WriteConfig:
    """Write a configuration document as canonical JSON (sorted keys, 2-space indent)."""

    def __init__(self, config_file):
        self.config_file = Path(config_file)

    def document(self, cfg: LpWusConfig, lpss: LpSsConfig) -> dict:
        return ConfigDocument(lp_wus=cfg, lp_ss=lpss).model_dump(mode="json")

    def write(self, cfg: LpWusConfig, lpss: LpSsConfig = LpSsConfig()) -> Path:
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, "w") as f:
            json.dump(self.document(cfg, lpss), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Configuration written to {self.config_file}")
        return self.config_file


def save_config(path, cfg: LpWusConfig, lpss: LpSsConfig = LpSsConfig()) -> Path:
    return WriteConfig(path).write(cfg, lpss)
