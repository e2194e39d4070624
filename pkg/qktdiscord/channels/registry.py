"""
Source registry module for managing dephasing sources.
"""

from typing import Any, Callable, Dict, List, Type

from qktdiscord.channels.base import DephasingSource
from qktdiscord.core.errors import ConfigError
from qktdiscord.utils.logging import get_logger

logger = get_logger("channels.registry")


class SourceRegistry:
    """
    Registry of dephasing source kinds.

    Maintains the mapping from kind name to source class and instantiates
    sources from configuration dictionaries.
    """

    def __init__(self):
        self.sources: Dict[str, Type[DephasingSource]] = {}

    def register(self, kind: str, source_class: Type[DephasingSource]) -> None:
        """
        Register a new source class.

        Args:
            kind: The unique kind name
            source_class: The class to register

        Raises:
            TypeError: If the class does not inherit from DephasingSource
            ValueError: If the kind is already registered
        """
        if not issubclass(source_class, DephasingSource):
            raise TypeError("Source class must inherit from DephasingSource")

        if kind in self.sources:
            raise ValueError(f"A source named '{kind}' is already registered")

        source_class.kind = kind
        self.sources[kind] = source_class
        logger.debug(f"Registered dephasing source: {kind}")

    def get_source(self, kind: str, config: Dict[str, Any]) -> DephasingSource:
        """
        Instantiate and validate a source.

        Args:
            kind: Registered kind name
            config: Configuration passed to the source

        Returns:
            DephasingSource: A validated source instance

        Raises:
            ConfigError: If the kind is unknown or the configuration is invalid
        """
        if kind not in self.sources:
            raise ConfigError(
                f"unknown source '{kind}', expected one of {', '.join(sorted(self.sources))}",
                key="source",
            )

        source = self.sources[kind](config)
        try:
            valid = source.validate_config()
        except ValueError as e:
            raise ConfigError(str(e), key="source") from e
        if not valid:
            missing = [key for key in source.get_required_config() if key not in config]
            detail = f"missing {', '.join(missing)}" if missing else "invalid values"
            raise ConfigError(f"invalid configuration for source '{kind}': {detail}", key="source")
        return source

    def get_all_sources(self) -> Dict[str, Dict[str, Any]]:
        """
        Get information about all registered sources.

        Returns:
            Dict: Source information keyed by kind
        """
        return {
            kind: {
                "description": source_class.get_description(),
                "required_config": source_class.get_required_config(),
                "optional_config": source_class.get_optional_config(),
            }
            for kind, source_class in self.sources.items()
        }

    def get_source_kinds(self) -> List[str]:
        return list(self.sources.keys())


# Global registry instance
registry = SourceRegistry()


def register_source(kind: str) -> Callable:
    """
    Decorator for registering a source class with the global registry.

    Example usage:
        @register_source("markovian")
        class MarkovianSource(DephasingSource):
            ...

    Args:
        kind: The name to register the source under

    Returns:
        The decorated class
    """

    def decorator(cls):
        registry.register(kind, cls)
        return cls

    return decorator


def create_source(kind: str, config: Dict[str, Any]) -> DephasingSource:
    """Instantiate a registered source from its configuration."""
    return registry.get_source(kind, config)
