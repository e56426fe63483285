"""Language-agnostic code lexing and identifier subtoken splitting."""

from __future__ import annotations

import re

# One pattern for both C and Java token streams: string/char literals,
# numbers (hex/bin/octal/float with suffixes), identifiers, multi-char
# operators longest-first, then single punctuation.
_TOKEN_RE = re.compile(
    r"""
    "(?:\\.|[^"\\])*"              |  # string literal
    '(?:\\.|[^'\\])*'              |  # char literal
    0[xX][0-9a-fA-F]+[uUlL]*       |
    0[bB][01]+[uUlL]*              |
    \d+\.\d*(?:[eE][+-]?\d+)?[fFdDlL]? |
    \.\d+(?:[eE][+-]?\d+)?[fFdDlL]?    |
    \d+(?:[eE][+-]?\d+)?[uUlLfFdD]*    |
    [A-Za-z_$][A-Za-z_0-9$]*       |
    >>>=|<<=|>>=|>>>|\.\.\.|->|::|\+\+|--|<<|>>|<=|>=|==|!=|&&|\|\||\+=|-=|\*=|/=|%=|&=|\^=|\|=|
    [{}()\[\];,.<>+\-*/%&|^!~?:=@#]
    """,
    re.VERBOSE,
)

_LINE_COMMENT_RE = re.compile(r"//[^\n]*")
_BLOCK_COMMENT_RE = re.compile(r"/\*.*?\*/", re.DOTALL)


def strip_comments(text: str) -> str:
    """Remove // and /* */ comments, preserving line numbers of /* */ spans."""
    def _keep_newlines(m: re.Match) -> str:
        return "\n" * m.group(0).count("\n")

    text = _BLOCK_COMMENT_RE.sub(_keep_newlines, text)
    return _LINE_COMMENT_RE.sub("", text)


def lex_code(text: str) -> list[str]:
    """Split source text into a flat token stream (comments dropped)."""
    return _TOKEN_RE.findall(strip_comments(text))


def tokenize_camel(text: str) -> list[str]:
    """Split one token into lowercase subtokens.

    Boundaries: underscores, case changes (aB | ABc), and letter<->digit
    transitions. Runs of non-alphanumeric characters stay intact, so
    operator tokens pass through unchanged and each emitted subtoken
    re-tokenizes to itself.
    """
    if not text:
        return []
    out: list[str] = []
    buf: list[str] = []
    prev_kind = ""  # upper / lower / digit / other

    def flush() -> None:
        if buf:
            out.append("".join(buf).lower())
            buf.clear()

    for i, ch in enumerate(text):
        if ch == "_":
            flush()
            prev_kind = ""
            continue
        if ch.isdigit():
            kind = "digit"
        elif ch.isalpha():
            kind = "upper" if ch.isupper() else "lower"
        else:
            kind = "other"

        boundary = False
        if prev_kind and kind != prev_kind:
            # lower->upper, letter<->digit, other<->alnum all split;
            # upper->lower splits before the last upper ("HTTPServer").
            if prev_kind == "upper" and kind == "lower":
                if len(buf) > 1:
                    last = buf.pop()
                    flush()
                    buf.append(last)
            else:
                boundary = True
        if boundary:
            flush()
        buf.append(ch)
        prev_kind = kind
    flush()
    return out


def subtokenize_stream(tokens: list[str]) -> list[str]:
    """Camel-split every token of a lexed stream, preserving order."""
    out: list[str] = []
    for tok in tokens:
        out.extend(tokenize_camel(tok))
    return out
