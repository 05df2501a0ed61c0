"""
Configuration Loader

TOML files (dataset manifests, training files) are parsed once per process
and validated into pydantic models. Validation failures surface as
ConfigurationError naming the file and the offending key.
"""

from __future__ import annotations

import copy
import threading
import tomllib
from pathlib import Path
from typing import Any, ClassVar, Dict, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from traffic_graph.exceptions import ConfigurationError

__all__ = ["ConfigLoader", "read_toml"]

T = TypeVar("T", bound=BaseModel)

# (size, mtime_ns) of the file when it was parsed
_Stamp = Tuple[int, int]


class ConfigLoader:
    """
    Thread-safe TOML reader with a per-process cache

    Entries are keyed by absolute path and invalidated when the file's size or
    modification time changes, so an edited file is picked up without an
    explicit reload.

    Usage::

        manifest = ConfigLoader.from_file(DatasetManifest, "manifest.toml")
        values = ConfigLoader.read("train.toml")
    """

    _cache: ClassVar[Dict[Path, Tuple[_Stamp, Dict[str, Any]]]] = {}
    _lock: ClassVar[threading.Lock] = threading.Lock()

    @classmethod
    def read(cls, file_path: Union[str, Path]) -> Dict[str, Any]:
        """
        Parse a TOML file into a dictionary the caller may modify

        Raises:
            FileNotFoundError: File does not exist
            ConfigurationError: Not a regular file, TOML syntax error or empty document
        """
        path = Path(file_path).resolve()
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        if not path.is_file():
            raise ConfigurationError(f"Path is not a file: {path}")

        stat = path.stat()
        stamp = (stat.st_size, stat.st_mtime_ns)
        with cls._lock:
            cached = cls._cache.get(path)
            if cached is None or cached[0] != stamp:
                try:
                    with open(path, "rb") as f:
                        document = tomllib.load(f)
                except tomllib.TOMLDecodeError as e:
                    raise ConfigurationError(f"TOML parse error ({path}): {e}") from e
                if not document:
                    raise ConfigurationError(f"Config file is empty: {path}")
                cached = (stamp, document)
                cls._cache[path] = cached
            return copy.deepcopy(cached[1])

    @classmethod
    def from_file(cls, config_type: Type[T], file_path: Union[str, Path]) -> T:
        """
        Read and validate a TOML file

        Relative paths inside the document may be resolved by validators
        through the ``base_dir`` validation context (the file's directory).

        Raises:
            FileNotFoundError: File does not exist
            ConfigurationError: Parse or validation failure
        """
        document = cls.read(file_path)
        try:
            return config_type.model_validate(document, context={"base_dir": Path(file_path).parent})
        except ValidationError as e:
            first = e.errors()[0]
            key = ".".join(str(part) for part in first.get("loc", ())) or None
            where = f" at {key}" if key else ""
            raise ConfigurationError(f"Invalid {config_type.__name__} in {file_path}{where}: {first.get('msg')}", key) from e

    @classmethod
    def clear_cache(cls) -> None:
        with cls._lock:
            cls._cache.clear()


def read_toml(file_path: Union[str, Path]) -> Dict[str, Any]:
    """Shortcut for :meth:`ConfigLoader.read`"""
    return ConfigLoader.read(file_path)
