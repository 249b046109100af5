"""Shared exception base for validation and solver failures."""


class UqcrError(Exception):
    """Base class for every error this package raises on purpose."""
