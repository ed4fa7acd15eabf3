class ToolkitError(Exception):
    """Base class for errors raised by this package."""


class InputFormatError(ToolkitError, ValueError):
    """Malformed or undecodable input file."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class LengthMismatchError(InputFormatError):
    """Two files that should be line-parallel have different line counts."""

    def __init__(self, source_count, target_count, source_path=None, target_path=None):
        self.source_count = source_count
        self.target_count = target_count
        self.source_path = source_path
        self.target_path = target_path
        super().__init__(f"length mismatch {source_count} vs {target_count}")


class UnseenTokenError(ToolkitError, KeyError):
    """A token is missing from a trained model and flooring is disabled."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unseen token"
