"""Exception types shared across the package."""


class MaskCodecError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(MaskCodecError, ValueError):
    """An argument violates an operation's contract (shape, range, finiteness)."""


class ParseError(MaskCodecError, ValueError):
    """A document or file could not be parsed.

    ``offset`` is the byte offset of the first offending position when the
    underlying parser can report one, else None.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class IntegrityError(MaskCodecError, ValueError):
    """A cross-reference inside an annotation set does not resolve."""
