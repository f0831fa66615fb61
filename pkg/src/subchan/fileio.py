"""Text formats for channels and encoding coefficients.

Channel files
-------------
Line 1:                 ``dim N``
then, per Kraus operator, a header ``kraus i`` (i = 0, 1, ...) followed by
N lines of N whitespace-separated complex entries in ``re+imj`` form, e.g.

    dim 2
    kraus 0
    1+0j 0+0j
    0+0j 0.8660254037844386+0j
    kraus 1
    0+0j 0.5+0j
    0+0j 0+0j

Entries accept anything Python's ``complex()`` does (``1``, ``0.5``,
``-2e-3+1e-4j``); no whitespace inside a number. Blank lines and lines
starting with ``#`` are ignored.

Encoding coefficient files
--------------------------
Two non-comment lines, one per basis vector, each a whitespace-separated
row of complex coefficients in the same grammar (zero-padded to the working
truncation by the loader's caller).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .channels import KrausChannel


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _parse_complex_row(line: str, expected: int | None, context: str) -> np.ndarray:
    tokens = line.split()
    if expected is not None and len(tokens) != expected:
        raise ValueError(f"{context}: expected {expected} entries, got {len(tokens)}")
    try:
        return np.array([complex(tok) for tok in tokens])
    except ValueError as exc:
        raise ValueError(f"{context}: bad complex literal ({exc})") from None


def parse_channel_text(text: str) -> KrausChannel:
    lines = _content_lines(text)
    if not lines or not lines[0].startswith("dim"):
        raise ValueError("channel file must start with a 'dim N' line")
    parts = lines[0].split()
    if len(parts) != 2:
        raise ValueError(f"malformed dim line: {lines[0]!r}")
    dim = int(parts[1])
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")

    ops = []
    pos = 1
    while pos < len(lines):
        header = lines[pos].split()
        if header[0] != "kraus" or len(header) != 2:
            raise ValueError(f"expected 'kraus i' header, got {lines[pos]!r}")
        index = int(header[1])
        if index != len(ops):
            raise ValueError(f"kraus headers out of order: expected {len(ops)}, got {index}")
        pos += 1
        if len(lines) - pos < dim:
            raise ValueError(f"kraus {index}: expected {dim} rows, file ended early")
        rows = [
            _parse_complex_row(lines[pos + r], dim, f"kraus {index} row {r}")
            for r in range(dim)
        ]
        ops.append(np.stack(rows))
        pos += dim
    if not ops:
        raise ValueError("channel file contains no Kraus operators")
    return KrausChannel(np.stack(ops), family="custom")


def load_channel(path: str | Path) -> KrausChannel:
    return parse_channel_text(Path(path).read_text())


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def channel_to_text(ch: KrausChannel) -> str:
    lines = [f"dim {ch.dim}"]
    for i, op in enumerate(ch.kraus_ops):
        lines.append(f"kraus {i}")
        for row in op:
            lines.append(" ".join(format_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def save_channel(ch: KrausChannel, path: str | Path) -> None:
    Path(path).write_text(channel_to_text(ch))


def parse_coefficient_rows(text: str) -> tuple[np.ndarray, np.ndarray]:
    """The two coefficient rows of an encoding file (lengths may differ)."""
    lines = _content_lines(text)
    if len(lines) != 2:
        raise ValueError(f"encoding file must hold exactly 2 rows, got {len(lines)}")
    c = _parse_complex_row(lines[0], None, "row 0")
    d = _parse_complex_row(lines[1], None, "row 1")
    return c, d


def load_coefficient_rows(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    return parse_coefficient_rows(Path(path).read_text())
