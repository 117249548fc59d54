class ParseError(Exception):
    """Raised when an input file or stream violates its documented format."""
