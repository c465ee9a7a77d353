"""Shared exception types."""


class ResourceCapError(ValueError):
    """A configured resource cap (dense matrix size, walk budget,
    enumeration length) would be exceeded."""
