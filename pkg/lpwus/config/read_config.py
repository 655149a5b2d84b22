import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

import yaml
from pydantic import ValidationError

from lpwus.config.lpwus_config import SCHEMA_VERSION, ConfigDocument, LpSsConfig, LpWusConfig
from lpwus.config.validate_config import validate
from lpwus.errors import ConfigError

logger = logging.getLogger("lpwus")


class ReadConfig:
    """Load a configuration document (JSON, or any YAML superset of it).

    Without an explicit path the file named by ``LPWUS_CONFIG`` is read.
    """

    def __init__(self, config_file=None):
        if config_file is None:
            for v in ["LPWUS_CONFIG"]:
                if v not in os.environ:
                    logger.error(f" {v} is missing")
                    sys.exit(1)
            config_file = os.environ.get("LPWUS_CONFIG")

        self.config_file = Path(config_file)
        self.text = None
        self.data = None
        self._read_local_file()

    def _read_local_file(self):
        logger.info(f"Reading configuration from {self.config_file}")
        try:
            self.text = self.config_file.read_text()
        except OSError as e:
            raise ConfigError(f"cannot read {self.config_file}: {e.strerror}") from e
        try:
            self.data = yaml.safe_load(self.text)
        except yaml.MarkedYAMLError as e:
            line = e.problem_mark.line + 1 if e.problem_mark else None
            raise ConfigError(f"parse error: {e.problem}", line=line) from e
        except yaml.YAMLError as e:
            raise ConfigError(f"parse error: {e}") from e
        if not isinstance(self.data, dict):
            raise ConfigError("configuration document must be a mapping", line=1)

    def line_of(self, path: Sequence) -> Optional[int]:
        """1-based line of the deepest node of ``path`` found in the source text."""
        try:
            node = yaml.compose(self.text, Loader=yaml.SafeLoader)
        except yaml.YAMLError:
            return None
        line = None
        for key in path:
            if isinstance(node, yaml.MappingNode):
                match = next(((k, v) for k, v in node.value if k.value == str(key)), None)
                if match is None:
                    break
                line = match[0].start_mark.line + 1
                node = match[1]
            elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
                node = node.value[key]
                line = node.start_mark.line + 1
            else:
                break
        return line

    def document(self) -> ConfigDocument:
        version = self.data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {version}, expected {SCHEMA_VERSION}",
                field="schema_version",
                line=self.line_of(["schema_version"]),
            )
        try:
            return ConfigDocument.model_validate(self.data)
        except ValidationError as e:
            err = e.errors()[0]
            loc = err["loc"]
            raise ConfigError(
                f"schema error: {err['msg']} ({e.error_count()} error(s))",
                field=".".join(str(p) for p in loc),
                line=self.line_of(loc),
            ) from e

    def read(self) -> Tuple[LpWusConfig, LpSsConfig]:
        doc = self.document()
        result = validate(doc.lp_wus, doc.lp_ss)
        if not result.ok:
            first = result.violations[0].fields[0]
            path = first if first.startswith("lp_ss.") else f"lp_wus.{first}"
            message = "; ".join(str(v) for v in result.violations)
            raise ConfigError(
                f"invalid configuration: {message}",
                field=path,
                line=self.line_of(path.split(".")),
            )
        logger.debug(f"Configuration {self.config_file} is valid")
        return doc.lp_wus, doc.lp_ss


def load_config(path) -> Tuple[LpWusConfig, LpSsConfig]:
    return ReadConfig(path).read()
