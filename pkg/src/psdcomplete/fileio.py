"""Text format for partial Hermitian matrices and flat key-value reports.

A partial matrix file looks like::

    # comment
    phm 3
    1 1 1 0
    1 2 0.5 0
    2 2 1 0
    2 3 0.5 0
    3 3 1 0

After the ``phm <n>`` header each line is ``i j re im`` for one specified
upper-triangle entry (1-based, ``i <= j``). The lower triangle follows by
conjugate symmetry. Every diagonal entry must be present with ``im = 0``.
"""
from __future__ import annotations

import math
import os
from typing import Iterable

import numpy as np

from .completion import PartialHermitianMatrix

__all__ = ["ParseError", "parse_partial", "read_partial", "format_partial", "write_partial",
           "format_float", "format_report"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<string>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


def format_float(x: float) -> str:
    # 17 significant digits round-trip binary64; + 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def parse_partial(text: str, source: str = "<string>") -> PartialHermitianMatrix:
    n = None
    header_line = None
    values: dict[tuple[int, int], complex] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "phm":
                raise ParseError("expected header 'phm <n>'", lineno, source)
            try:
                n = int(tokens[1])
            except ValueError:
                raise ParseError(f"bad dimension {tokens[1]!r}", lineno, source) from None
            if n < 1:
                raise ParseError("dimension must be at least 1", lineno, source)
            header_line = lineno
            continue
        if len(tokens) != 4:
            raise ParseError(f"expected 'i j re im', got {len(tokens)} fields", lineno, source)
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError("indices must be integers", lineno, source) from None
        try:
            re, im = float(tokens[2]), float(tokens[3])
        except ValueError:
            raise ParseError("entry values must be decimal numbers", lineno, source) from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError("entry values must be finite", lineno, source)
        if not 1 <= i <= j <= n:
            raise ParseError(f"indices ({i}, {j}) must satisfy 1 <= i <= j <= {n}", lineno, source)
        if (i, j) in values:
            raise ParseError(f"duplicate entry ({i}, {j})", lineno, source)
        if i == j and im != 0:
            raise ParseError(f"diagonal entry ({i}, {i}) must be real", lineno, source)
        values[(i, j)] = complex(re, im)
    if n is None:
        raise ParseError("missing 'phm <n>' header", None, source)
    missing = [i for i in range(1, n + 1) if (i, i) not in values]
    if missing:
        raise ParseError(f"diagonal entries {missing} are missing", header_line, source)
    return PartialHermitianMatrix.from_upper(n, {(i - 1, j - 1): v for (i, j), v in values.items()})


def read_partial(path: str | os.PathLike) -> PartialHermitianMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_partial(fh.read(), source=os.fspath(path))


def format_partial(P, comments: Iterable[str] = ()) -> str:
    """Serialize a ``PartialHermitianMatrix`` or a full Hermitian array."""
    if not isinstance(P, PartialHermitianMatrix):
        P = PartialHermitianMatrix.full(P)
    lines = [f"# {c}" for c in comments]
    lines.append(f"phm {P.n}")
    for i in range(P.n):
        for j in range(i, P.n):
            if P.specified[i, j]:
                v = P.entries[i, j]
                im = 0.0 if i == j else v.imag
                lines.append(f"{i + 1} {j + 1} {format_float(v.real)} {format_float(im)}")
    return "\n".join(lines) + "\n"


def write_partial(path: str | os.PathLike, P, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_partial(P, comments))


def _format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def format_report(text_lines: Iterable[str], fields: dict) -> str:
    """Human-readable lines followed by a ``[report]`` section of ``key = value`` lines."""
    out = list(text_lines)
    out.append("[report]")
    out.extend(f"{k} = {_format_value(v)}" for k, v in fields.items())
    return "\n".join(out) + "\n"
