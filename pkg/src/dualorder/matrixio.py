"""Matrix file format: a JSON object ``{"std": rows, "dual": rows}``.

``dual`` is optional (a real matrix). Entries are integers or strings
``"p/q"`` in lowest terms with ``q > 0``; floats are rejected.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .dual import DualMatrix
from .errors import MatrixParseError
from .kernel import Matrix

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _locate(text: str, key: str, path: tuple[int, ...]) -> int | None:
    """Character offset of ``doc[key][path[0]][path[1]]...`` in ``text``."""
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if m is None:
        return None
    decoder = json.JSONDecoder()
    pos = _skip_ws(text, m.end())
    for idx in path:
        if pos >= len(text) or text[pos] != "[":
            return pos
        pos = _skip_ws(text, pos + 1)
        for _ in range(idx):
            _, pos = decoder.raw_decode(text, pos)
            pos = _skip_ws(text, pos)
            if pos >= len(text) or text[pos] != ",":
                return pos
            pos = _skip_ws(text, pos + 1)
    return pos


def parse_entry(value: object) -> Fraction:
    """Integer or "p/q" string; raises ValueError otherwise."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"entry {value!r} is not exact; use an integer or a \"p/q\" string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if not m:
            raise ValueError(f"entry {value!r} is not of the form p/q")
        p, q = int(m.group(1)), int(m.group(2) or 1)
        if q == 0:
            raise ValueError(f"entry {value!r} has zero denominator")
        x = Fraction(p, q)
        if x.numerator != p or x.denominator != q:
            raise ValueError(f"entry {value!r} is not in lowest terms (write {format_entry(x)})")
        return x
    raise ValueError(f"entry {value!r} must be an integer or a \"p/q\" string")


def format_entry(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_rows(text: str, doc: dict, key: str) -> Matrix:
    rows = doc[key]

    def fail(msg: str, *path: int) -> MatrixParseError:
        pos = _locate(text, key, path)
        if pos is None:
            return MatrixParseError(f"{key}: {msg}")
        return MatrixParseError(f"{key}: {msg}", *_line_col(text, pos))

    if not isinstance(rows, list) or not rows:
        raise fail("must be a non-empty list of rows")
    width = None
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise fail(f"row {i + 1} must be a non-empty list", i)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise fail(f"row {i + 1} has {len(row)} entries, expected {width}", i)
        parsed = []
        for j, v in enumerate(row):
            try:
                parsed.append(parse_entry(v))
            except ValueError as exc:
                raise fail(f"row {i + 1}, entry {j + 1}: {exc}", i, j) from None
        out.append(parsed)
    return Matrix.from_rows(out)


def parse_matrix_text(text: str) -> Matrix | DualMatrix:
    """Parse a matrix document; returns a Matrix for real files, DualMatrix otherwise."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "std" not in doc:
        raise MatrixParseError('document must be an object with a "std" key', 1, 1)
    extra = set(doc) - {"std", "dual"}
    if extra:
        raise MatrixParseError(f"unexpected keys: {', '.join(sorted(extra))}", 1, 1)
    std = _parse_rows(text, doc, "std")
    if "dual" not in doc:
        return std
    dual = _parse_rows(text, doc, "dual")
    if dual.shape != std.shape:
        pos = _locate(text, "dual", ())
        line, col = _line_col(text, pos) if pos is not None else (None, None)
        raise MatrixParseError(f"dual part is {dual.shape[0]}x{dual.shape[1]}, std part is {std.shape[0]}x{std.shape[1]}", line, col)
    return DualMatrix(std, dual)


def read_matrix(path: str | Path) -> Matrix | DualMatrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixParseError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise MatrixParseError(f"{path} is not UTF-8") from None
    return parse_matrix_text(text)


def _rows_json(m: Matrix, indent: str) -> str:
    rows = [json.dumps([format_entry(x) for x in row]) for row in m.tolist()]
    return "[\n" + ",\n".join(f"{indent}  {r}" for r in rows) + f"\n{indent}]"


def to_document(x: Matrix | DualMatrix) -> dict:
    if isinstance(x, DualMatrix):
        return {"std": [[format_entry(v) for v in r] for r in x.std.tolist()],
                "dual": [[format_entry(v) for v in r] for r in x.dual.tolist()]}
    return {"std": [[format_entry(v) for v in r] for r in x.tolist()]}


def format_matrix(x: Matrix | DualMatrix) -> str:
    """Serialize with one row per line; ``parse_matrix_text`` inverts this exactly."""
    if isinstance(x, DualMatrix):
        return '{\n  "std": ' + _rows_json(x.std, "  ") + ',\n  "dual": ' + _rows_json(x.dual, "  ") + "\n}\n"
    return '{\n  "std": ' + _rows_json(x, "  ") + "\n}\n"


def write_matrix(path: str | Path, x: Matrix | DualMatrix) -> None:
    Path(path).write_text(format_matrix(x), encoding="utf-8")
