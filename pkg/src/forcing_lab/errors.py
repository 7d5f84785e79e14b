"""Shared exception base so the CLI can map library failures to exit codes."""


class ForcingLabError(Exception):
    """Base class for all structured errors raised by this package."""
