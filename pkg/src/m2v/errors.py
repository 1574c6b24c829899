"""Shared exception base for the m2v toolchain."""


class M2VError(Exception):
    """Base class for all toolchain errors."""
