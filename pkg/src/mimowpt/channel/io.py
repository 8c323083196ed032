"""Plain-text channel files.

Format::

    # distance=10.0 rician_k=1.0 seed=42     (optional metadata comment)
    <n_e> <n_t>
    re,im re,im ...                            (n_e rows of n_t pairs)

Numbers are written with ``repr`` so that a save/load round trip is
bit-exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import numpy.typing as npt

from mimowpt.channel.rician import ChannelMatrix, ChannelMeta
from mimowpt.exceptions.errors import ChannelFormatError

ComplexArray = npt.NDArray[np.complex128]


def format_complex(z: complex) -> str:
    """Render a complex number as ``re,im``."""
    return f"{float(z.real)!r},{float(z.imag)!r}"


def parse_complex(token: str, row: int, column: int | None = None) -> complex:
    """Parse a ``re,im`` token.

    Raises:
        ChannelFormatError: With the offending row/column.
    """
    parts = token.split(",")
    if len(parts) != 2:
        raise ChannelFormatError(f"Expected 're,im' pair, got '{token}'", row=row, column=column)
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise ChannelFormatError(
            f"Invalid number in '{token}'", row=row, column=column
        ) from e


def format_vector(values: ComplexArray) -> str:
    """Render a complex vector as whitespace-separated ``re,im`` pairs."""
    return " ".join(format_complex(complex(z)) for z in values)


def parse_vector(text: str, row: int, expected: int | None = None) -> ComplexArray:
    """Parse a whitespace-separated line of ``re,im`` pairs."""
    tokens = text.split()
    if expected is not None and len(tokens) != expected:
        raise ChannelFormatError(
            f"Row {row} has {len(tokens)} entries, expected {expected}",
            row=row,
            expected=expected,
            actual=len(tokens),
        )
    return np.array(
        [parse_complex(tok, row=row, column=col + 1) for col, tok in enumerate(tokens)],
        dtype=np.complex128,
    )


def _format_meta(meta: ChannelMeta) -> str | None:
    items = [
        f"{name}={value!r}"
        for name, value in (
            ("distance", meta.distance),
            ("rician_k", meta.rician_k),
            ("seed", meta.seed),
        )
        if value is not None
    ]
    return "# " + " ".join(items) if items else None


def _parse_meta(line: str) -> ChannelMeta:
    values: dict[str, str] = {}
    for item in line.lstrip("#").split():
        key, sep, value = item.partition("=")
        if sep:
            values[key] = value
    try:
        return ChannelMeta(
            distance=float(values["distance"]) if "distance" in values else None,
            rician_k=float(values["rician_k"]) if "rician_k" in values else None,
            seed=int(values["seed"]) if "seed" in values else None,
        )
    except ValueError:
        return ChannelMeta()


def dumps_channel(channel: ChannelMatrix) -> str:
    """Serialize a channel to the text format."""
    lines: list[str] = []
    meta_line = _format_meta(channel.meta)
    if meta_line:
        lines.append(meta_line)
    lines.append(f"{channel.n_e} {channel.n_t}")
    lines.extend(format_vector(row) for row in channel.g)
    return "\n".join(lines) + "\n"


def loads_channel(text: str) -> ChannelMatrix:
    """Parse a channel from the text format.

    Row numbers in errors count data rows from 1 (the header is row 0).
    """
    meta = ChannelMeta()
    body: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not body:
                meta = _parse_meta(line)
            continue
        body.append(line)

    if not body:
        raise ChannelFormatError("Missing 'ne nt' header", row=0)

    header = body[0].split()
    if len(header) != 2:
        raise ChannelFormatError("Header must be 'ne nt'", row=0)
    try:
        n_e, n_t = int(header[0]), int(header[1])
    except ValueError as e:
        raise ChannelFormatError("Header counts must be integers", row=0) from e
    if n_e < 1 or n_t < 1:
        raise ChannelFormatError("Header counts must be positive", row=0)

    rows = body[1:]
    if len(rows) != n_e:
        raise ChannelFormatError(
            f"Expected {n_e} rows, found {len(rows)}",
            row=min(len(rows), n_e) + 1,
            expected=n_e,
            actual=len(rows),
        )

    gain = np.vstack([parse_vector(line, row=i + 1, expected=n_t) for i, line in enumerate(rows)])
    return ChannelMatrix(gain, meta=meta)


def save_channel(channel: ChannelMatrix, path: str | Path) -> None:
    """Write a channel file (single writer)."""
    Path(path).write_text(dumps_channel(channel), encoding="utf-8")


def load_channel(path: str | Path) -> ChannelMatrix:
    """Read a channel file."""
    return loads_channel(Path(path).read_text(encoding="utf-8"))
