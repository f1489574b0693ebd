"""Config file reading, overrides and persistence."""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from wlandelay.core.exceptions import ConfigError
from wlandelay.schemas.dcf import DcfParams
from wlandelay.schemas.experiment import ConfigFile
from wlandelay.schemas.polling import PollingConfig

logger = logging.getLogger(__name__)

SECTIONS = ("dcf", "polling", "simulation")


def _parse_scalar(raw: str) -> Any:
    """JSON literal if it parses, the bare string otherwise."""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _parse_text(text: str, path: Path) -> dict[str, Any]:
    """``key = value`` / ``key: value`` lines with ``#`` comments."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, raw = line.split(sep, 1)
                break
        else:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        values[key] = _parse_scalar(raw.strip())
    return values


def _sectioned(raw: dict[str, Any]) -> dict[str, Any]:
    """Nest ``section.key`` entries; bare keys outside SECTIONS belong to ``dcf``."""
    nested: dict[str, Any] = {}
    for key, value in raw.items():
        section, dot, field = key.partition(".")
        if dot:
            nested.setdefault(section, {})[field] = value
        elif key in SECTIONS:
            nested[key] = value
        else:
            nested.setdefault("dcf", {})[key] = value
    return nested


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Raw sectioned mapping from a JSON or key/value text file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e

    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    else:
        raw = _parse_text(text, path)
    return _sectioned(raw)


def _validate(raw: dict[str, Any], source: str) -> ConfigFile:
    try:
        return ConfigFile.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{source}: {e}") from e


def load_config_file(path: str | Path) -> ConfigFile:
    """Parse and validate a config file."""
    config = _validate(read_config_file(path), str(path))
    logger.info(f"Loaded config from {path} (hash {config_hash(config)})")
    return config


def load_dcf_params(path: str | Path) -> DcfParams:
    """DCF parameters of a config file."""
    return load_config_file(path).dcf


def load_polling_config(path: str | Path) -> PollingConfig:
    """Polling system of a config file; the ``polling`` section is required."""
    config = load_config_file(path)
    if config.polling is None:
        raise ConfigError(f"{path}: no 'polling' section")
    return config.polling


def apply_overrides(config: ConfigFile, overrides: list[str] | tuple[str, ...]) -> ConfigFile:
    """Apply ``key=value`` overrides; ``section.key`` addresses a section, bare keys go to dcf."""
    if not overrides:
        return config
    raw = config.model_dump(mode="json")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        section, _, field = key.rpartition(".")
        section = section or "dcf"
        if section not in SECTIONS or not field:
            raise ConfigError(f"override {item!r}: unknown section or empty key")
        if raw.get(section) is None:
            raw[section] = {}
        raw[section][field] = _parse_scalar(value)
        logger.debug(f"Override {section}.{field} = {value}")
    return _validate(raw, "overrides")


def canonical_json(config: ConfigFile) -> str:
    """Key-sorted compact JSON used for hashing and saving."""
    return json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_hash(config: ConfigFile) -> str:
    """Short SHA-256 digest identifying a resolved configuration."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()[:16]


def save_config(config: ConfigFile, path: str | Path) -> Path:
    """Write the resolved configuration as JSON so the run can be replayed."""
    path = Path(path)
    try:
        path.write_text(
            json.dumps(config.model_dump(mode="json"), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
    except OSError as e:
        raise ConfigError(f"cannot write config file {path}: {e}") from e
    logger.info(f"Saved config to {path}")
    return path
