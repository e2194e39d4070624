"""
qktdiscord - quantum discord of a qubit pair dephased by a quantum kicked top.

Importing the package registers the built-in dephasing sources with the
source registry.
"""

__version__ = "0.1.0"

# Import channels to register the sources
from qktdiscord.channels import MarkovianSource, QKTSource  # noqa: E402

__all__ = [
    "__version__",
    "MarkovianSource",
    "QKTSource",
]
