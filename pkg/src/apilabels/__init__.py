"""Issue mining, API-domain taxonomy, and multi-label issue classification."""

__version__ = "0.1.0"
