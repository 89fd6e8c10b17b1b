"""Functions to read dot-env and TOML configuration for the command line."""

import logging
import os
import pathlib
import sys
from typing import Any, Dict, Iterable, Optional, Union

from dotenv import load_dotenv

from .errors import ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "DOTENV_NAME",
    "load_config_dotenv",
    "default_config_path",
    "log_level",
    "load_toml_config",
    "merge_options",
]

DOTENV_NAME = "cv-htdt.env"


def load_config_dotenv() -> None:
    """Load HTDT_* environment variables from a dot-env file, if it exists.

    If no such file can be found, do not raise, allowing these environment vars to be populated in some other way.
    """
    dotenv_dir = os.environ.get("HTDT_DOTENV_DIR", os.environ.get("PWD", os.getcwd()))
    dotenv_path = pathlib.Path(dotenv_dir) / DOTENV_NAME
    if os.path.exists(dotenv_path):
        load_dotenv(dotenv_path=dotenv_path, override=False)


def default_config_path() -> Optional[str]:
    """Return $HTDT_CONFIG, the TOML file used when --config is not given."""
    return os.environ.get("HTDT_CONFIG") or None


def log_level() -> int:
    """Return the logging level named by $HTDT_LOG_LEVEL (default WARNING)."""
    name = os.environ.get("HTDT_LOG_LEVEL", "WARNING").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValidationError(f"unknown log level HTDT_LOG_LEVEL={name}")
    return level


def load_toml_config(
    path: Union[pathlib.Path, str], section: str, allowed: Optional[Iterable[str]] = None
) -> Dict[str, Any]:
    """Return the table named `section` of a TOML file, keys normalized to python identifiers.

    path -- the TOML file.
    section -- the subcommand whose table is read (e.g. "fig5" or "check-theorem").
    allowed -- if given, the keys accepted; any other key raises ValidationError.
    """
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid TOML: {exc}") from exc
    table = data.get(section, data.get(section.replace("-", "_"), {}))
    if not isinstance(table, dict):
        raise ValidationError(f"config section [{section}] must be a table")
    options = {str(k).replace("-", "_"): v for k, v in table.items()}
    if allowed is not None:
        unknown = sorted(set(options) - set(allowed))
        if unknown:
            raise ValidationError(f"unknown keys {unknown} in config section [{section}]")
    return options


def merge_options(
    defaults: Dict[str, Any], file_options: Dict[str, Any], flag_options: Dict[str, Any]
) -> Dict[str, Any]:
    """Return defaults overridden by file values, overridden by flags that were given (not None)."""
    merged = dict(defaults)
    merged.update(file_options)
    merged.update({k: v for k, v in flag_options.items() if v is not None})
    return merged
