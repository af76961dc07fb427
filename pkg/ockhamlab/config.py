"""
Configuration settings for ockhamlab
Size caps, caching and logging, overridable from the environment or a .env file.
"""
import os
import logging
from dataclasses import dataclass, replace
from typing import Dict, Optional

from dotenv import load_dotenv

from .errors import MalformedInputError

load_dotenv()

# Logging
LOG_LEVEL = os.getenv("OCKHAMLAB_LOG_LEVEL", "WARNING").upper()
logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.WARNING))
logger = logging.getLogger(__name__)

# Caps override, e.g. "64,4096,20,4096" or "power=8192,algebra=16"
CAPS_ENV = os.getenv("OCKHAMLAB_CAPS", "")

# Search kernel settings
KERNEL_ENABLE_CACHING = os.getenv("OCKHAMLAB_CACHING", "true").lower() == "true"
KERNEL_CACHE_SIZE = int(os.getenv("OCKHAMLAB_CACHE_SIZE", "10000"))

CAP_NAMES = ("structure", "power", "algebra", "relation")


@dataclass(frozen=True)
class LabConfig:
    """Size caps and kernel settings"""
    structure_cap: int = 64      # carrier of any structure or space
    power_cap: int = 4096        # carrier of finite powers
    algebra_cap: int = 20        # brute-force filter of 2^|A| subsets
    relation_cap: int = 4096     # |A|^k for relation work
    enable_caching: bool = True
    cache_size: int = 10000
    num_parallel_workers: Optional[int] = None

    def with_caps(self, **caps: int) -> "LabConfig":
        return replace(self, **{f"{name}_cap": value for name, value in caps.items()})


def parse_caps(text: str) -> Dict[str, int]:
    """
    Parse a caps override.

    Accepts positional values in the order structure,power,algebra,relation
    or name=value items. Empty items are skipped.
    """
    caps: Dict[str, int] = {}
    items = [item.strip() for item in text.split(",")]
    for position, item in enumerate(items):
        if not item:
            continue
        if "=" in item:
            name, _, value = item.partition("=")
            name = name.strip().lower()
        else:
            if position >= len(CAP_NAMES):
                raise MalformedInputError(f"Too many positional caps in {text!r}")
            name, value = CAP_NAMES[position], item
        if name not in CAP_NAMES:
            raise MalformedInputError(f"Unknown cap {name!r}; expected one of {', '.join(CAP_NAMES)}")
        try:
            number = int(value)
        except ValueError:
            raise MalformedInputError(f"Cap {name} must be an integer, got {value!r}") from None
        if number < 1:
            raise MalformedInputError(f"Cap {name} must be positive, got {number}")
        caps[name] = number
    return caps


def load_config(caps_text: Optional[str] = None) -> LabConfig:
    """Build a config from defaults, .env and OCKHAMLAB_CAPS"""
    text = CAPS_ENV if caps_text is None else caps_text
    config = LabConfig(enable_caching=KERNEL_ENABLE_CACHING, cache_size=KERNEL_CACHE_SIZE)
    caps = parse_caps(text) if text else {}
    if caps:
        logger.info(f"Cap overrides: {caps}")
        config = config.with_caps(**caps)
    return config


# Global config instance (singleton pattern)
_config_instance: Optional[LabConfig] = None


def get_config() -> LabConfig:
    """Get or create global config"""
    global _config_instance
    if _config_instance is None:
        _config_instance = load_config()
    return _config_instance


def set_config(config: LabConfig) -> None:
    """Install a config (CLI flags, tests)"""
    global _config_instance
    _config_instance = config


def reset_config():
    """Reset global config (for testing)"""
    global _config_instance
    _config_instance = None
