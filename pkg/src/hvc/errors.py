class FormatError(ValueError):
    """Raised when a file on disk does not match its declared format."""
