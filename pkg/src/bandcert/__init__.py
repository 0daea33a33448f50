"""Certified band gaps and passbands for high-contrast periodic media."""

__version__ = "0.1.0"
