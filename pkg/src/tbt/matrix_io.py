"""Reading and writing matrices over K and tropical matrices.

Text format: one matrix per block, blocks separated by blank lines, one row
per line.  Entries are separated by whitespace, or by commas when a row
contains a comma (so entries such as ``z^-3 + z^-3`` may contain spaces).
``#`` starts a comment.  Files ending in ``.json`` hold either a single
matrix (list of rows of strings), a list of matrices, or
``{"matrices": [...]}``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import DimensionMismatch, ParseError
from .scalar_field import INF, KMatrix, parse_scalar


def _split_row(line: str, lineno=None):
    """(entry text, 1-based column) pairs of one row."""
    if "," in line:
        out, start = [], 0
        for part in line.split(","):
            stripped = part.strip()
            offset = len(part) - len(part.lstrip())
            out.append((stripped, start + offset + 1))
            start += len(part) + 1
        if any(not t for t, _ in out):
            col = next(c for t, c in out if not t)
            raise ParseError("empty entry", lineno, col)
        return out
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _blocks(text: str):
    """Blocks of (line number, row text) with comments removed."""
    blocks, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            if current:
                blocks.append(current)
                current = []
            continue
        current.append((lineno, line))
    if current:
        blocks.append(current)
    return blocks


def _parse_block(block, entry):
    rows = []
    for lineno, line in block:
        cells = _split_row(line, lineno)
        row = [entry(t, lineno, col) for t, col in cells]
        if rows and len(row) != len(rows[0]):
            raise DimensionMismatch(
                f"line {lineno}: row has {len(row)} entries, expected {len(rows[0])}"
            )
        rows.append(row)
    return rows


def parse_matrices(text: str, rational: bool = False) -> list:
    """All K-matrices in a text document."""

    def entry(t, line, col):
        return parse_scalar(t, rational=rational, line=line, column=col)

    mats = [KMatrix(_parse_block(b, entry)) for b in _blocks(text)]
    if not mats:
        raise ParseError("no matrix found", 1, 1)
    return mats


def _tropical_entry(t, line=None, col=None):
    if isinstance(t, (int,)) and not isinstance(t, bool):
        return t
    s = str(t).strip().lower()
    if s in ("inf", "infinity", "oo"):
        return INF
    if re.fullmatch(r"[-+]?\d+", s):
        return int(s)
    raise ParseError(f"{t!r} is neither an integer nor 'inf'", line, col)


def parse_tropical_matrices(text: str) -> list:
    """Integer matrices (entries int or ``inf``) as tuples of rows."""
    mats = [tuple(tuple(r) for r in _parse_block(b, _tropical_entry)) for b in _blocks(text)]
    if not mats:
        raise ParseError("no matrix found", 1, 1)
    return mats


def _json_matrices(data):
    if isinstance(data, dict):
        data = data.get("matrices", data.get("matrix"))
        if data is None:
            raise ParseError("JSON object needs a 'matrices' or 'matrix' key")
    if not isinstance(data, list) or not data:
        raise ParseError("expected a non-empty list")
    # a single matrix is a list of rows whose entries are not lists
    if all(isinstance(r, list) for r in data) and not any(
        isinstance(x, list) for r in data for x in r
    ):
        return [data]
    return data


def _check_rect(rows):
    if any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("ragged matrix rows")
    return rows


def parse_json_matrices(text: str, rational: bool = False) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    out = []
    for m in _json_matrices(data):
        rows = _check_rect(m)
        out.append(KMatrix([[parse_scalar(str(x), rational=rational) for x in r] for r in rows]))
    return out


def parse_json_tropical(text: str) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return [tuple(tuple(_tropical_entry(x) for x in r) for r in _check_rect(m)) for m in _json_matrices(data)]


def load_matrices(path, rational: bool = False) -> list:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return parse_json_matrices(text, rational)
    return parse_matrices(text, rational)


def load_tropical(path) -> list:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return parse_json_tropical(text)
    return parse_tropical_matrices(text)


def format_matrices(mats) -> str:
    return "\n\n".join(M.to_text() for M in mats) + "\n"


def parse_point(text: str) -> tuple:
    """A tropical point given as comma- or space-separated integers / ``inf``."""
    parts = [p for p in re.split(r"[,\s]+", text.strip().strip("()[]")) if p]
    if not parts:
        raise ParseError("empty point")
    return tuple(_tropical_entry(p, 1, None) for p in parts)
