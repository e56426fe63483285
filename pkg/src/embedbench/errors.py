"""Exception types shared across the suite."""

from __future__ import annotations


class ParseError(ValueError):
    """Source text that does not lex/parse under its language grammar."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, source_id: str = "") -> None:
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", col {column}" if column is not None else "")
        prefix = f"{source_id}: " if source_id else ""
        super().__init__(f"{prefix}{message}{loc}")
        self.line = line
        self.column = column
        self.source_id = source_id


class IngestionError(RuntimeError):
    """Dataset root missing, malformed, or empty."""
