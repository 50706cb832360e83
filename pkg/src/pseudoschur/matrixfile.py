"""Reading and writing matrix files.

Two layouts are accepted:

* JSON: ``{"rows": r, "cols": c, "row_split": m, "col_split": n, "data": [[...], ...]}``
  with splits optional. Entries are numbers or rational strings such as ``"-2/15"``.
* Plain text: whitespace-delimited rows, ``#`` comments, and an optional header
  line ``# split m n`` giving the block splits.
"""

import json
from pathlib import Path

from .blocks import BlockMatrix
from .matrix import FLOAT, RATIONAL, Matrix


class MatrixFileError(ValueError):
    """Malformed matrix file; the message names the offending line or field."""


def _entry_checked(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise MatrixFileError(f"{where}: entry {x!r} is not a number or rational string")
    return x


def _from_json(obj, source):
    if not isinstance(obj, dict):
        raise MatrixFileError(f"{source}: top level must be an object")
    if "data" not in obj:
        raise MatrixFileError(f"{source}: missing field 'data'")
    data = obj["data"]
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise MatrixFileError(f"{source}: field 'data' must be a non-empty list of rows")
    rows = obj.get("rows", len(data))
    cols = obj.get("cols", len(data[0]))
    for key, val in (("rows", rows), ("cols", cols)):
        if isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise MatrixFileError(f"{source}: field '{key}' must be a positive integer")
    if len(data) != rows:
        raise MatrixFileError(f"{source}: field 'data' has {len(data)} rows, 'rows' says {rows}")
    for i, r in enumerate(data):
        if len(r) != cols:
            raise MatrixFileError(f"{source}: data[{i}] has {len(r)} entries, 'cols' says {cols}")
        for j, x in enumerate(r):
            _entry_checked(x, f"{source}: data[{i}][{j}]")
    splits = []
    for key in ("row_split", "col_split"):
        val = obj.get(key)
        if val is not None and (isinstance(val, bool) or not isinstance(val, int)):
            raise MatrixFileError(f"{source}: field '{key}' must be an integer")
        splits.append(val)
    return data, splits[0], splits[1]


def _from_text(text, source):
    data = []
    row_split = col_split = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            words = stripped[1:].split()
            if words and words[0] == "split":
                try:
                    row_split, col_split = (int(w) for w in words[1:3])
                except ValueError:
                    raise MatrixFileError(f"{source}:{lineno}: bad split header {stripped!r}") from None
                if len(words) != 3:
                    raise MatrixFileError(f"{source}:{lineno}: split header needs two integers")
            continue
        data.append(stripped.split())
        if len(data[-1]) != len(data[0]):
            raise MatrixFileError(
                f"{source}:{lineno}: row has {len(data[-1])} entries, expected {len(data[0])}"
            )
    if not data:
        raise MatrixFileError(f"{source}: no matrix rows")
    return data, row_split, col_split


def parse_matrix_text(text, mode=FLOAT, source="<input>"):
    """Parse file contents; returns ``(Matrix, row_split, col_split)``."""
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFileError(f"{source}:{exc.lineno}: invalid JSON ({exc.msg})") from None
        data, rs, cs = _from_json(obj, source)
    else:
        data, rs, cs = _from_text(text, source)
    try:
        m = Matrix(data, mode)
    except (ValueError, TypeError) as exc:
        raise MatrixFileError(f"{source}: {exc}") from None
    for name, val, total in (("row_split", rs, m.rows), ("col_split", cs, m.cols)):
        if val is not None and not 0 < val < total:
            raise MatrixFileError(f"{source}: {name}={val} outside 1..{total - 1}")
    return m, rs, cs


def read_matrix(path, mode=FLOAT):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFileError(f"{path}: {exc.strerror}") from None
    return parse_matrix_text(text, mode, str(path))


def read_block_matrix(path, mode=FLOAT):
    m, rs, cs = read_matrix(path, mode)
    if rs is None or cs is None:
        raise MatrixFileError(f"{path}: block operations need 'row_split' and 'col_split'")
    return BlockMatrix(m, rs, cs)


def entry_out(x, mode):
    """JSON value for one entry: rational strings never decay to decimals."""
    if mode == RATIONAL:
        return str(x)
    return float(x)


def matrix_to_obj(m, row_split=None, col_split=None):
    obj = {"rows": m.rows, "cols": m.cols}
    if row_split is not None:
        obj["row_split"] = row_split
        obj["col_split"] = col_split
    obj["data"] = [[entry_out(x, m.mode) for x in row] for row in m.tolist()]
    return obj


def write_matrix(path, m, row_split=None, col_split=None):
    if isinstance(m, BlockMatrix):
        m, row_split, col_split = m.whole, m.row_split, m.col_split
    Path(path).write_text(json.dumps(matrix_to_obj(m, row_split, col_split), indent=2) + "\n")
