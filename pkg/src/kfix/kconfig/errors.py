"""Diagnostics for model loading and linking."""

from __future__ import annotations


class KconfigError(Exception):
    """Problem in a model file, reported as file:line:col: message."""

    def __init__(self, message: str, filename: str | None = None, line: int = 0, col: int = 0):
        self.message = message
        self.filename = filename
        self.line = line
        self.col = col
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.filename and self.line:
            return f"{self.filename}:{self.line}:{self.col}: {self.message}"
        if self.filename:
            return f"{self.filename}: {self.message}"
        return self.message


class LexError(KconfigError):
    pass


class ParseError(KconfigError):
    pass


class LinkError(KconfigError):
    pass
