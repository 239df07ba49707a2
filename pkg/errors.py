class RittError(Exception):
    """Root of every error raised by the toolkit."""


class DomainError(RittError):
    """A mathematical precondition failed.

    Args:
        code: short machine-readable reason, e.g. "DECOMPOSABLE_INPUT".
        message: human readable detail.
    """

    def __init__(self, code, message=""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class ParseError(RittError):
    """Text grammar failure with the 0-based offending position."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(self._render())

    def _render(self):
        if not self.text:
            return f"{self.reason} (at position {self.position})"
        caret = " " * self.position + "^"
        return f"{self.reason} (at position {self.position})\n  {self.text}\n  {caret}"


class InternalError(RittError):
    """A condition that must not happen: singular solver, failed replay."""
