"""Matrix Market reading and writing for dense square matrices."""

from __future__ import annotations

import numpy as np

FORMATS = ("coordinate", "array")
FIELDS = ("real", "integer", "complex")
SYMMETRIES = ("general", "symmetric", "hermitian", "skew-symmetric")


class MatrixMarketError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _number(tokens: list[str], field: str, lineno: int) -> complex:
    try:
        if field == "integer":
            (tok,) = tokens
            return complex(int(tok))
        if field == "real":
            (tok,) = tokens
            return complex(float(tok))
        re, im = tokens
        return complex(float(re), float(im))
    except ValueError:
        need = 2 if field == "complex" else 1
        raise MatrixMarketError(lineno, f"expected {need} {field} value(s), got {' '.join(tokens)!r}") from None


def parse_matrix_market(text: str) -> np.ndarray:
    """Dense complex matrix from Matrix Market text.

    Symmetric, Hermitian and skew-symmetric storage is expanded, duplicate
    coordinate entries are summed, and pattern matrices are rejected.
    """
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError(1, "empty input")
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise MatrixMarketError(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'")
    obj, fmt, field, sym = (t.lower() for t in header[1:])
    if obj != "matrix":
        raise MatrixMarketError(1, f"unsupported object {obj!r}")
    if fmt not in FORMATS:
        raise MatrixMarketError(1, f"unsupported format {fmt!r}")
    if field == "pattern":
        raise MatrixMarketError(1, "pattern matrices carry no values and are not supported")
    if field not in FIELDS:
        raise MatrixMarketError(1, f"unsupported field {field!r}")
    if sym not in SYMMETRIES:
        raise MatrixMarketError(1, f"unsupported symmetry {sym!r}")

    body = [(no, ln.split()) for no, ln in enumerate(lines[1:], start=2)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError(len(lines), "missing size line")
    size_no, size = body[0]
    want = 3 if fmt == "coordinate" else 2
    try:
        dims = [int(t) for t in size]
    except ValueError:
        raise MatrixMarketError(size_no, f"malformed size line {' '.join(size)!r}") from None
    if len(dims) != want:
        raise MatrixMarketError(size_no, f"size line needs {want} integers")
    rows, cols = dims[0], dims[1]
    if rows != cols:
        raise MatrixMarketError(size_no, f"matrix must be square, got {rows} x {cols}")
    if rows < 1:
        raise MatrixMarketError(size_no, "matrix order must be at least 1")
    n = rows
    a = np.zeros((n, n), dtype=complex)
    entries = body[1:]
    width = 2 if field == "complex" else 1

    def place(i: int, j: int, v: complex, lineno: int) -> None:
        if sym == "skew-symmetric" and i == j:
            raise MatrixMarketError(lineno, "skew-symmetric storage cannot hold diagonal entries")
        a[i, j] += v
        if i != j:
            if sym == "symmetric":
                a[j, i] += v
            elif sym == "hermitian":
                a[j, i] += np.conj(v)
            elif sym == "skew-symmetric":
                a[j, i] -= v

    if fmt == "coordinate":
        nnz = dims[2]
        if nnz < 0:
            raise MatrixMarketError(size_no, "negative entry count")
        if len(entries) != nnz:
            at = entries[nnz][0] if len(entries) > nnz else (entries[-1][0] if entries else size_no)
            raise MatrixMarketError(at, f"expected {nnz} entries, found {len(entries)}")
        for lineno, tok in entries:
            if len(tok) != 2 + width:
                raise MatrixMarketError(lineno, f"expected 'i j' plus {width} value(s)")
            try:
                i, j = int(tok[0]), int(tok[1])
            except ValueError:
                raise MatrixMarketError(lineno, "indices must be integers") from None
            if not (1 <= i <= n and 1 <= j <= n):
                raise MatrixMarketError(lineno, f"index ({i}, {j}) outside 1..{n}")
            place(i - 1, j - 1, _number(tok[2:], field, lineno), lineno)
    else:
        if sym == "general":
            slots = [(i, j) for j in range(n) for i in range(n)]
        elif sym == "skew-symmetric":
            slots = [(i, j) for j in range(n) for i in range(j + 1, n)]
        else:
            slots = [(i, j) for j in range(n) for i in range(j, n)]
        if len(entries) != len(slots):
            at = entries[len(slots)][0] if len(entries) > len(slots) else (entries[-1][0] if entries else size_no)
            raise MatrixMarketError(at, f"expected {len(slots)} values, found {len(entries)}")
        for (lineno, tok), (i, j) in zip(entries, slots):
            if len(tok) != width:
                raise MatrixMarketError(lineno, f"expected {width} value(s) per line")
            place(i, j, _number(tok, field, lineno), lineno)
    if not np.all(np.isfinite(a)):
        raise MatrixMarketError(size_no, "matrix entries must be finite")
    return a


def read_matrix_market(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_market(fh.read())


def serialize_matrix_market(a) -> str:
    """Array/complex/general text with 17 significant digits, so values read back exactly."""
    m = np.asarray(a, dtype=complex)
    n = m.shape[0]
    out = ["%%MatrixMarket matrix array complex general", f"{n} {n}"]
    for j in range(n):
        for i in range(n):
            v = m[i, j]
            out.append(f"{v.real:.17g} {v.imag:.17g}")
    return "\n".join(out) + "\n"
