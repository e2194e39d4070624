"""
Base class for dephasing-amplitude sources.

A source supplies the fidelity amplitude f(n) that dephases qubit A's partner.
Every source satisfies f(0) = 1 and |f(n)| <= 1 and is immutable once built.
"""

import abc
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from qktdiscord.core.kicked_top import FidelitySeries


class DephasingSource(abc.ABC):
    """
    Abstract base class for all dephasing sources.

    Subclasses are registered with :func:`qktdiscord.channels.registry.register_source`
    and created from a configuration dictionary.
    """

    kind: str = ""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize a new source.

        Args:
            config: Configuration dictionary for the source
        """
        self._config = dict(config)

    @property
    def config(self) -> Dict[str, Any]:
        return dict(self._config)

    @abc.abstractmethod
    def validate_config(self) -> bool:
        """
        Validate that the source configuration is complete and valid.

        Returns:
            bool: True if configuration is valid, False otherwise
        """
        raise NotImplementedError("Subclasses must implement validate_config()")

    @abc.abstractmethod
    def amplitude(self, n: int) -> complex:
        """
        Fidelity amplitude after n kicks.

        Raises:
            ValueError: If n is negative or beyond what the source can supply
        """
        raise NotImplementedError("Subclasses must implement amplitude()")

    @classmethod
    @abc.abstractmethod
    def get_required_config(cls) -> List[str]:
        """
        Get a list of required configuration keys for this source.

        Returns:
            List[str]: List of required configuration keys
        """
        raise NotImplementedError("Subclasses must implement get_required_config()")

    @classmethod
    def get_optional_config(cls) -> List[str]:
        return []

    @classmethod
    def get_description(cls) -> str:
        """Human-readable description (the class docstring)."""
        return (cls.__doc__ or "No description available").strip()

    def f(self, n: int) -> complex:
        """Alias of :meth:`amplitude`."""
        return self.amplitude(n)

    def amplitudes(self, n_max: int) -> np.ndarray:
        """
        Amplitudes f(0..n_max). Subclasses override this with a vectorized form.
        """
        if n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {n_max}")
        return np.array([self.amplitude(n) for n in range(n_max + 1)], dtype=complex)

    def series(self, n_max: int) -> FidelitySeries:
        """The amplitudes as a :class:`FidelitySeries`."""
        return FidelitySeries(f=self.amplitudes(n_max), epsilon=self.epsilon)

    @property
    def epsilon(self) -> Optional[float]:
        """Coupling that produced the amplitudes, if the source has one."""
        return None

    def get_config_value(
        self,
        key: str,
        default: Any = None,
        validator: Optional[Callable[[Any], bool]] = None,
    ) -> Any:
        """
        Get a configuration value with optional validation.

        Args:
            key: Configuration key to retrieve
            default: Default value if the key is not present
            validator: Optional function to validate the value

        Returns:
            The configuration value or default

        Raises:
            ValueError: If the validator returns False
        """
        value = self._config.get(key, default)
        if validator and value is not None and not validator(value):
            raise ValueError(f"Invalid value for config key {key}: {value}")
        return value

    def basic_config_validation(self) -> bool:
        """
        Perform basic validation of required configuration keys.

        Returns:
            bool: True if all required keys are present, False otherwise
        """
        return all(key in self._config for key in self.get_required_config())

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(kind={self.kind!r})"
